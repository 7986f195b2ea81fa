//! Two-mode squeezed vacuum light in absorbing and amplifying four-port
//! devices.
//!
//! The crate models the transmission of a two-mode squeezed vacuum state
//! through a pair of optical four-ports (fibers, attenuators, amplifiers)
//! and answers three questions about the transmitted light:
//!
//! * **Is it still entangled?** Second-moment propagation plus the
//!   partial-transposition criterion for Gaussian states give an exact
//!   separability verdict ([`separability::simon_criterion`]) and
//!   closed-form boundaries in temperature, length, and gain
//!   ([`separability::nth_threshold`], [`separability::max_length`],
//!   [`separability::gain_boundary`]).
//! * **What does the state look like?** The exact output density matrix in
//!   the Fock basis for zero-temperature attenuators
//!   ([`fock::output_density`]), including the analytically tractable
//!   single-photon truncation ([`fock::truncated_output`]).
//! * **How much entanglement survives?** Decomposition-based estimates and
//!   convexity bounds ([`entanglement::estimate_upper_bound`],
//!   [`entanglement::truncated_upper_bound`]) and the length at which the
//!   estimate halves ([`entanglement::degradation_length`]).
//!
//! An independent numerical oracle ([`oracle`]) re-derives outputs through
//! beam-splitter dilations and re-extracts covariances from density
//! matrices, so every analytic path has a second computation route to be
//! checked against.
//!
//! Conventions: vacuum quadrature variance 1/2 (hbar = 1), entanglement in
//! nats, quadrature ordering (q1, p1, q2, p2).

pub mod channel;
mod dd;
pub mod entanglement;
pub mod error;
pub mod fock;
pub mod gaussian;
mod herm;
pub mod oracle;
pub mod separability;
pub mod solve;

pub use channel::{DeviceParams, FiberGeometry, Regime};
pub use entanglement::{
    degradation_length, estimate_upper_bound, extract_pure_state, pure_entropy, tmsv_entanglement,
    truncated_state_entanglement, truncated_upper_bound, BoundKind, EntanglementReport,
    PureTwoModeState,
};
pub use error::{Error, Result};
pub use fock::{output_density, truncated_output, FockDensityMatrix};
pub use gaussian::{
    symplectic_form, tmsv_covariance, tmsv_fock_amplitudes, wigner_value, CovarianceMatrix,
    QuadraturePoint, SqueezeSpec, TmsvAmplitudes,
};
pub use oracle::{
    covariance_from_fock, dilation_output, partial_transpose, ppt_log_negativity,
    ppt_min_eigenvalue, DilationConfig,
};
pub use separability::{
    gain_boundary, max_length, nth_threshold, simon_criterion, SeparabilityVerdict,
};
