//! Two-level coherence amplifier recursion.

use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::DensityMatrix;

/// One amplification round: `a' = (25a − a³)/24`. Strictly increasing on
/// `(0,1)` with fixed points at 0 and 1.
pub fn amplifier_step<T: Real>(a: T) -> Result<T> {
    if !(a >= T::zero() && a <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "amplifier input must lie in [0,1], got {a}"
        )));
    }
    Ok((T::cast(25.0) * a - a.powi(3)) / T::cast(24.0))
}

/// The qubit state `[[1/2, a/2], [a/2, 1/2]]` whose off-diagonal coherence
/// the amplifier grows. Eigenvalues `(1 ± a)/2`, so it is a valid state for
/// every `a ∈ [0,1]`.
pub fn coherence_state<T: Real>(a: T) -> Result<DensityMatrix<T>> {
    let half = T::cast(0.5);
    let mut m = crate::cmat::CMat::<T>::zeros((2, 2));
    m[(0, 0)] = crate::cmat::creal(half);
    m[(1, 1)] = crate::cmat::creal(half);
    m[(0, 1)] = crate::cmat::creal(a * half);
    m[(1, 0)] = crate::cmat::creal(a * half);
    DensityMatrix::new(m)
}

#[derive(Debug, Clone)]
pub struct AmplifierRun<T: Real = f64> {
    /// Number of amplification rounds applied (0 if already at target).
    pub steps: usize,
    /// Coherence values, starting at `a0`, one entry per visited point.
    pub trajectory: Vec<T>,
    /// Whether the target was reached within the step budget.
    pub reached: bool,
}

/// Iterate the amplifier from `a0` until the coherence reaches `target` or
/// the step budget runs out. Every visited point is materialized as a state
/// and validated. `a0 ≥ target` needs zero steps by convention.
pub fn amplifier_iterate<T: Real>(a0: T, target: T, max_steps: usize) -> Result<AmplifierRun<T>> {
    if !(a0 > T::zero() && a0 <= T::one()) {
        return Err(Error::InvalidInput(format!(
            "starting coherence must lie in (0,1], got {a0}"
        )));
    }
    if !(target > T::zero() && target < T::one()) {
        return Err(Error::InvalidInput(format!(
            "target coherence must lie in (0,1), got {target}"
        )));
    }
    let mut a = a0;
    let mut trajectory = vec![a];
    coherence_state(a)?;
    let mut steps = 0;
    while a < target && steps < max_steps {
        a = amplifier_step(a)?;
        coherence_state(a)?;
        trajectory.push(a);
        steps += 1;
    }
    Ok(AmplifierRun {
        steps,
        trajectory,
        reached: a >= target,
    })
}
