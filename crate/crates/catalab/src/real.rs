//! Real scalar abstraction.
//!
//! All core math is generic over the real scalar type through [`Real`],
//! which bundles the `num-traits` bounds the numerical kernels need.
//! `f64` is the working precision used by the CLI and the default type
//! parameter everywhere; `f32` is supported for callers that accept the
//! correspondingly looser tolerances.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps, NumCast, ToPrimitive};

/// Floating-point scalar usable as the real field of the toolkit.
pub trait Real:
    Float
    + FloatConst
    + NumAssignOps
    + FromPrimitive
    + ToPrimitive
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy cast from any numeric type; panics only for values that do not
    /// fit (never the case for the literal constants used in this crate).
    fn cast<U: NumCast>(x: U) -> Self {
        NumCast::from(x).expect("numeric constant representable in Real type")
    }

    /// `self` as `f64`, for reporting and serialization.
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Default numeric tolerances, stated for `f64` working precision.
///
/// Every operation that compares against a threshold either takes the
/// threshold explicitly or reads it from here, so the contract is in one
/// place. `f32` instantiations should construct their own, looser values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T: Real> {
    /// State validity: Hermiticity deviation, trace deviation, PSD floor.
    pub validity: T,
    /// Rank / support threshold on eigenvalues and probabilities.
    pub rank: T,
    /// Channel checks: Choi PSD floor, trace-preservation residual.
    pub channel: T,
    /// Equality tolerance on energy differences when grouping modes.
    pub mode: T,
    /// Nonnegativity slack for probabilities.
    pub nonneg: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Tolerances {
            validity: T::cast(1e-10),
            rank: T::cast(1e-9),
            channel: T::cast(1e-9),
            mode: T::cast(1e-9),
            nonneg: T::cast(1e-12),
        }
    }
}

/// Soft cap on composite Hilbert-space dimension, overridable through the
/// `CATALAB_DIM_CAP` environment variable. Catalyst constructions grow as
/// `dim^n`, so the cap keeps desk-scale runs from exploding by accident.
pub fn dim_cap() -> usize {
    use std::sync::OnceLock;
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var("CATALAB_DIM_CAP")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(4096)
    })
}

/// Errors if `dim` exceeds the soft cap.
pub fn check_dim_cap(dim: usize) -> crate::Result<()> {
    let cap = dim_cap();
    if dim > cap {
        Err(crate::Error::DimCapExceeded { dim, cap })
    } else {
        Ok(())
    }
}
