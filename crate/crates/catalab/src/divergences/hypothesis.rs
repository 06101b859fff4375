//! Exact classical hypothesis testing and smoothed-rate brackets.
//!
//! `D_H(p‖q; η) = −ln β*` where `β*` minimizes the type-II error
//! `Σ q_i t_i` over tests `0 ≤ t ≤ 1` with `Σ p_i t_i ≥ 1−η`. The optimum
//! is the Neyman–Pearson test: fill indices by descending likelihood ratio
//! with at most one fractional coordinate, so the LP is solved exactly by a
//! sort. On product distributions the sort runs over type classes, keeping
//! the cost polynomial in the block length.

use crate::divergences::types::{class_count, enumerate_type_classes};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::ProbDist;

/// Smoothed-rate bracket at block length `n`: `lower ≤ upper`, both
/// converging to `S₁(p‖q)` as `n` grows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint<T: Real = f64> {
    pub n: usize,
    pub lower: T,
    pub upper: T,
}

impl<T: Real> RatePoint<T> {
    pub fn gap(&self) -> T {
        self.upper - self.lower
    }
}

/// Items must arrive sorted by likelihood ratio, descending. Returns the
/// minimal q-mass of a test capturing p-mass ≥ `target`.
fn np_beta<T: Real>(sorted: &[(T, T)], target: T) -> T {
    let mut p_acc = T::zero();
    let mut q_acc = T::zero();
    for &(p_mass, q_mass) in sorted {
        if p_acc >= target {
            break;
        }
        if p_mass <= T::zero() {
            continue;
        }
        let need = target - p_acc;
        if p_mass <= need {
            p_acc += p_mass;
            q_acc += q_mass;
        } else {
            q_acc += q_mass * (need / p_mass);
            p_acc = target;
        }
    }
    q_acc
}

fn sort_by_ratio_desc<T: Real>(items: &mut [(T, T, T)]) {
    // (ratio_key, p_mass, q_mass); ties broken arbitrarily — equal ratios
    // give the same optimum regardless of order.
    items.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
}

/// Hypothesis-testing divergence `−ln β*` at type-I error tolerance `η`.
pub fn hypothesis_testing_divergence<T: Real>(
    p: &ProbDist<T>,
    q: &ProbDist<T>,
    eta: T,
) -> Result<T> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    if !(eta > T::zero() && eta < T::one()) {
        return Err(Error::InvalidInput(format!(
            "eta must lie strictly inside (0,1), got {eta}"
        )));
    }
    let mut items: Vec<(T, T, T)> = p
        .as_slice()
        .iter()
        .zip(q.as_slice().iter())
        .filter(|(&pi, &qi)| pi > T::zero() || qi > T::zero())
        .map(|(&pi, &qi)| {
            let key = if pi <= T::zero() {
                T::neg_infinity()
            } else if qi <= T::zero() {
                T::infinity()
            } else {
                pi.ln() - qi.ln()
            };
            (key, pi, qi)
        })
        .collect();
    sort_by_ratio_desc(&mut items);
    let pairs: Vec<(T, T)> = items.iter().map(|&(_, pm, qm)| (pm, qm)).collect();
    let beta = np_beta(&pairs, T::one() - eta);
    if beta <= T::zero() {
        return Ok(T::infinity());
    }
    Ok(-beta.ln())
}

/// `(1/n) D_H(p^⊗n ‖ q^⊗n; η)` via type classes.
fn block_rate<T: Real>(p: &[T], q: &[T], n: usize, eta: T) -> T {
    let classes = enumerate_type_classes(p, q, n);
    let mut items: Vec<(T, T, T)> = classes
        .iter()
        .map(|c| (c.ln_ratio(), c.p_mass(), c.q_mass()))
        .collect();
    sort_by_ratio_desc(&mut items);
    let pairs: Vec<(T, T)> = items.iter().map(|&(_, pm, qm)| (pm, qm)).collect();
    let beta = np_beta(&pairs, T::one() - eta);
    if beta <= T::zero() {
        T::infinity()
    } else {
        -beta.ln() / T::cast(n as f64)
    }
}

/// Bracketing rates for the smoothed Rényi 0/∞ divergences of the block
/// `(p^⊗n, q^⊗n)`: `lower` evaluates `D_H` at `η = eps` (the strict-accuracy
/// side matching smoothed `S₀`) and `upper` at `η = 1−eps` (the loose side
/// matching smoothed `S_∞`). Both converge to `S₁(p‖q)`, `lower` from below
/// and `upper` from above.
///
/// Stops early once the type-class count would exceed `10^7`.
pub fn smoothed_renyi_rate<T: Real>(
    p: &ProbDist<T>,
    q: &ProbDist<T>,
    eps: T,
    n_max: usize,
) -> Result<Vec<RatePoint<T>>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    if !(eps > T::zero() && eps < T::cast(0.5)) {
        return Err(Error::InvalidInput(format!(
            "eps must lie strictly inside (0, 1/2), got {eps}"
        )));
    }
    let tol = T::cast(1e-12);
    let nested = p
        .as_slice()
        .iter()
        .zip(q.as_slice().iter())
        .all(|(&pi, &qi)| pi <= tol || qi > tol);
    if !nested {
        return Err(Error::Precondition(
            "support of p must be contained in support of q".into(),
        ));
    }

    let mut out = Vec::new();
    for n in 1..=n_max {
        if class_count(n, p.dim()) > 1e7 {
            break;
        }
        let lower = block_rate(p.as_slice(), q.as_slice(), n, eps);
        let upper = block_rate(p.as_slice(), q.as_slice(), n, T::one() - eps);
        out.push(RatePoint { n, lower, upper });
    }
    Ok(out)
}
