//! Arithmetic on `[0, ∞]`.
//!
//! All norms and entropies take values here. The conventions are the usual
//! ones for this half-line with one deliberate exception: `0 · ∞ = ∞`.
//! That choice makes the identity `h(λ^m) = m·h(λ)` hold for `m = 0` even
//! on spaces of infinite norm, so it is baked into [`ExtReal::mul`] rather
//! than left to `f64` semantics (where `0.0 * f64::INFINITY` is NaN).

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{EntError, Result};

/// An element of `[0, ∞]`: a finite non-negative real or the symbol `∞`.
#[derive(Clone, Copy, Debug)]
pub enum ExtReal {
    Finite(f64),
    Infinity,
}

impl ExtReal {
    pub const ZERO: ExtReal = ExtReal::Finite(0.0);

    /// Wraps a finite value, rejecting NaN and negatives. `f64::INFINITY`
    /// is accepted and normalized to `Infinity`.
    pub fn new(v: f64) -> Result<ExtReal> {
        if v.is_nan() {
            return Err(EntError::invalid("NaN is not an extended real"));
        }
        if v < 0.0 {
            return Err(EntError::invalid(format!("negative value {v} not in [0, ∞]")));
        }
        if v.is_infinite() {
            Ok(ExtReal::Infinity)
        } else {
            Ok(ExtReal::Finite(v))
        }
    }

    /// Natural logarithm of a cardinality, with `log 0 = 0`.
    pub fn log_count_u64(n: u64) -> ExtReal {
        if n <= 1 {
            ExtReal::ZERO
        } else {
            ExtReal::Finite((n as f64).ln())
        }
    }

    /// Natural logarithm of an arbitrary-precision count, with `log 0 = 0`.
    ///
    /// Counts beyond `f64` range are handled through their bit length, so
    /// the result stays accurate to ~1e-15 relative error at any size.
    pub fn log_count(n: &BigUint) -> ExtReal {
        if n.bits() <= 1 {
            return ExtReal::ZERO; // 0 or 1
        }
        if let Some(v) = n.to_f64() {
            if v.is_finite() {
                return ExtReal::Finite(v.ln());
            }
        }
        // Take the top 64 bits and account for the shift.
        let bits = n.bits();
        let shift = bits - 64;
        let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
        ExtReal::Finite(top.ln() + (shift as f64) * std::f64::consts::LN_2)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    /// Finite value, if any.
    pub fn finite(&self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(*v),
            ExtReal::Infinity => None,
        }
    }

    #[allow(clippy::should_implement_trait)] // the trait impls delegate here
    pub fn add(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a + b),
            _ => ExtReal::Infinity,
        }
    }

    /// Product with the convention `0 · ∞ = ∞`.
    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: ExtReal) -> ExtReal {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => ExtReal::Finite(a * b),
            _ => ExtReal::Infinity,
        }
    }

    /// Division by a positive integer (`∞ / n = ∞`).
    pub fn div_u32(self, n: u32) -> ExtReal {
        assert!(n > 0, "division by zero");
        match self {
            ExtReal::Finite(v) => ExtReal::Finite(v / n as f64),
            ExtReal::Infinity => ExtReal::Infinity,
        }
    }

    /// Scaling by a natural number, honoring `0 · ∞ = ∞`.
    pub fn scale(self, n: u32) -> ExtReal {
        self.mul(ExtReal::Finite(n as f64))
    }

    pub fn min(self, other: ExtReal) -> ExtReal {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: ExtReal) -> ExtReal {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Equality up to an absolute tolerance on finite values; `∞` only
    /// equals `∞`.
    pub fn approx_eq(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => (a - b).abs() <= tol,
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            _ => false,
        }
    }

    /// `self ≤ other` up to tolerance on finite values.
    pub fn le_approx(self, other: ExtReal, tol: f64) -> bool {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a <= b + tol,
            (_, ExtReal::Infinity) => true,
            (ExtReal::Infinity, ExtReal::Finite(_)) => false,
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for ExtReal {}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            // Finite values are non-NaN by construction.
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.partial_cmp(b).unwrap(),
            (ExtReal::Finite(_), ExtReal::Infinity) => Ordering::Less,
            (ExtReal::Infinity, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinity, ExtReal::Infinity) => Ordering::Equal,
        }
    }
}

impl std::ops::Add for ExtReal {
    type Output = ExtReal;
    fn add(self, rhs: ExtReal) -> ExtReal {
        ExtReal::add(self, rhs)
    }
}

impl std::ops::Mul for ExtReal {
    type Output = ExtReal;
    fn mul(self, rhs: ExtReal) -> ExtReal {
        ExtReal::mul(self, rhs)
    }
}

impl std::iter::Sum for ExtReal {
    fn sum<I: Iterator<Item = ExtReal>>(iter: I) -> ExtReal {
        iter.fold(ExtReal::ZERO, ExtReal::add)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}
