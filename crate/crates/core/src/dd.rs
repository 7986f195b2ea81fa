//! Minimal double-double (compensated) arithmetic.
//!
//! The separability margin subtracts products of covariance entries that can
//! be ~1e6 while the result is expected to vanish; plain f64 evaluation then
//! carries ~1e-10 of cancellation noise, right at the accuracy we need to
//! certify. Carrying the intermediate products as unevaluated (hi, lo) pairs
//! keeps the combination accurate to well below 1e-12 without pulling in a
//! big-float dependency.

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

/// Error-free sum of two doubles (Knuth two-sum).
#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    Dd { hi: s, lo: err }
}

/// Error-free product of two doubles via fused multiply-add.
#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    let err = a.mul_add(b, -p);
    Dd { hi: p, lo: err }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact product of two plain doubles.
    #[inline]
    pub fn prod(a: f64, b: f64) -> Dd {
        two_prod(a, b)
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        let r = two_sum(s.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        let r = two_sum(p.hi, lo);
        Dd { hi: r.hi, lo: r.lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> Dd {
        self.mul(Dd::from_f64(x))
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.hi + self.lo
    }
}
