//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of state construction, propagation, and the numerical
/// routines built on top of them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A scalar argument was outside its admissible domain.
    #[error("invalid parameter {name}: {value} ({reason})")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    /// A covariance matrix was too close to singular for the requested
    /// operation (e.g. evaluating a Wigner density).
    #[error("degenerate covariance matrix: |det V| = {det:.3e} below tolerance")]
    DegenerateCovariance { det: f64 },

    /// The two devices of a four-port pair must share one regime; mixing an
    /// absorber with an amplifier is not modeled.
    #[error("mixed device regimes: both devices must be absorbing or both amplifying")]
    MixedRegime,

    /// A covariance matrix did not have the two-mode block structure
    /// (X = x·I, Y = y·I, Z trace-free symmetric) the channel update needs.
    #[error("covariance matrix lacks the required block structure (deviation {deviation:.3e})")]
    UnsupportedCovariance { deviation: f64 },

    /// An internal consistency check failed; this indicates a bug rather
    /// than a caller error.
    #[error("internal invariant violated: {0}")]
    InternalInvariant(&'static str),

    /// The separability boundary has no finite solution for the requested
    /// parameters (e.g. a lossless device never separates the state).
    #[error("no finite threshold: {0}")]
    NoFiniteThreshold(&'static str),

    /// A series summation failed to converge within its iteration cap.
    #[error("series did not converge within {iterations} terms (|last term| = {last_term:.3e})")]
    SeriesFailure { iterations: usize, last_term: f64 },

    /// A Fock-space cutoff was too small to hold the requested state.
    #[error("truncation overflow: input support {required} exceeds cutoff {available}")]
    TruncationOverflow { required: usize, available: usize },

    /// The discarded tail of a truncated state was too large for the
    /// requested operation to be meaningful.
    #[error("truncation tail {tail_bound:.3e} too large (limit {limit:.3e})")]
    TailTooLarge { tail_bound: f64, limit: f64 },

    /// Pure-state extraction produced an inconsistent mixing weight.
    #[error("decomposition failure: extracted weight 1 - lambda = {value:.6e} outside [0, 1]")]
    DecompositionFailure { value: f64 },

    /// The requested quantity diverges for these parameters.
    #[error("diverging result: {0}")]
    Diverging(&'static str),

    /// A root-finding problem had no root in the search interval.
    #[error("no solution: {0}")]
    NoSolution(&'static str),

    /// A bracketing interval did not enclose a sign change.
    #[error("bracket failure: f({lo:.6e}) and f({hi:.6e}) have the same sign")]
    BracketFailure { lo: f64, hi: f64 },

    /// A serialized state document was malformed.
    #[error("malformed state document: {0}")]
    MalformedDocument(String),
}

impl Error {
    /// Convenience constructor for domain errors.
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
