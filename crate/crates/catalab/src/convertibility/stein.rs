//! Block-size search for asymptotic pair conversion, and the explicit
//! smoothed block protocol used by the catalyst pipeline.
//!
//! The asymptotic route: once the smoothed Rényi-0 rate of the source block
//! dominates the smoothed Rényi-∞ rate of the target block, a two-branch
//! conversion channel exists on that block. `stein_block_size` locates the
//! smallest such block length with hypothesis-testing surrogates;
//! `classical_block_protocol` then constructs the channel from explicit
//! ε-ball optimizers (support cut for the source, likelihood-ratio clip for
//! the target).

use crate::channels::Channel;
use crate::convertibility::quantum::faist_renner_channel_with_report;
use crate::convertibility::{ClassicalPair, QuantumPair};
use crate::divergences::{renyi_divergence, smoothed_renyi_rate};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{DensityMatrix, ProbDist};

/// Source-lower vs. target-upper rates at one block length.
#[derive(Debug, Clone, Copy)]
pub struct BlockBracket<T: Real = f64> {
    pub n: usize,
    /// `(1/n) D_H(p^⊗n‖q^⊗n; ε)` — smoothed S₀ surrogate of the source.
    pub source_lower: T,
    /// `(1/n) D_H(p'^⊗n‖q'^⊗n; 1−ε)` — smoothed S_∞ surrogate of the target.
    pub target_upper: T,
}

#[derive(Debug, Clone)]
pub struct SteinSearch<T: Real = f64> {
    /// Smallest block length at which the source rate dominates, if any
    /// within the explored range.
    pub block_size: Option<usize>,
    pub table: Vec<BlockBracket<T>>,
}

/// Find the smallest `n ≤ n_max` with
/// `source_lower(p,q,n) ≥ target_upper(p',q',n)`. Requires the relative
/// entropies to be ordered (`S₁(p‖q) ≥ S₁(p'‖q')`), otherwise no block
/// length can work and the precondition is rejected.
pub fn stein_block_size<T: Real>(
    pair: &ClassicalPair<T>,
    eps: T,
    n_max: usize,
) -> Result<SteinSearch<T>> {
    let s1_source = renyi_divergence(&pair.p, &pair.q, T::one())?.value;
    let s1_target = renyi_divergence(&pair.p_prime, &pair.q_prime, T::one())?.value;
    if s1_source < s1_target - T::cast(1e-9) {
        return Err(Error::Precondition(format!(
            "relative entropies are reversed (source {s1_source}, target {s1_target}); \
             no block length can satisfy the conversion condition"
        )));
    }

    let equal_dims = pair.p.dim() == pair.p_prime.dim();
    if equal_dims {
        let same = |a: &ProbDist<T>, b: &ProbDist<T>| {
            a.as_slice()
                .iter()
                .zip(b.as_slice())
                .all(|(x, y)| (*x - *y).abs() <= T::cast(1e-12))
        };
        if same(&pair.p, &pair.p_prime) && same(&pair.q, &pair.q_prime) {
            return Ok(SteinSearch {
                block_size: Some(1),
                table: vec![],
            });
        }
    }

    let source = smoothed_renyi_rate(&pair.p, &pair.q, eps, n_max)?;
    let target = smoothed_renyi_rate(&pair.p_prime, &pair.q_prime, eps, n_max)?;
    let mut table = Vec::new();
    let mut found = None;
    for (s, t) in source.iter().zip(target.iter()) {
        debug_assert_eq!(s.n, t.n);
        let bracket = BlockBracket {
            n: s.n,
            source_lower: s.lower,
            target_upper: t.upper,
        };
        table.push(bracket);
        if found.is_none() && bracket.source_lower >= bracket.target_upper {
            found = Some(s.n);
        }
    }
    Ok(SteinSearch {
        block_size: found,
        table,
    })
}

/// The explicit block protocol: a channel on the `n`-fold product mapping
/// `q^⊗n ↦ q'^⊗n` exactly and `p^⊗n` to within `2ε` (full 1-norm) of
/// `p'^⊗n`.
#[derive(Debug)]
pub struct BlockProtocol<T: Real = f64> {
    pub n: usize,
    pub channel: Channel<T>,
    /// Support-cut source optimizer κ (diagonal, restricted & renormalized).
    pub smoothed_source: DensityMatrix<T>,
    /// Ratio-clipped target optimizer κ'.
    pub smoothed_target: DensityMatrix<T>,
    /// `S₀(κ‖q^⊗n) = −ln q^⊗n(supp κ)`.
    pub s0_source: T,
    /// `S_∞(κ'‖q'^⊗n) = ln λ*`.
    pub s_inf_target: T,
}

/// Keep the highest-likelihood-ratio outcomes until their p-mass reaches
/// `1 − cut`, renormalize. `‖κ − p‖₁ = 2·(mass cut) ≤ 2·cut`.
fn support_cut<T: Real>(p: &[T], q: &[T], cut: T) -> (Vec<T>, Vec<bool>) {
    let mut order: Vec<usize> = (0..p.len()).collect();
    order.sort_by(|&a, &b| {
        let ra = ratio_key(p[a], q[a]);
        let rb = ratio_key(p[b], q[b]);
        rb.partial_cmp(&ra).unwrap_or(std::cmp::Ordering::Equal)
    });
    let target = T::one() - cut;
    let mut kept = vec![false; p.len()];
    let mut acc = T::zero();
    for &i in &order {
        if acc >= target {
            break;
        }
        if p[i] <= T::zero() {
            continue;
        }
        kept[i] = true;
        acc += p[i];
    }
    let mut kappa = vec![T::zero(); p.len()];
    for i in 0..p.len() {
        if kept[i] {
            kappa[i] = p[i] / acc;
        }
    }
    (kappa, kept)
}

fn ratio_key<T: Real>(p: T, q: T) -> T {
    if p <= T::zero() {
        T::neg_infinity()
    } else if q <= T::zero() {
        T::infinity()
    } else {
        p.ln() - q.ln()
    }
}

/// Clip the likelihood ratio at the smallest λ whose overflow mass
/// `R(λ) = Σ max(p_i − λ q_i, 0)` is at most `budget`, then redistribute the
/// clipped mass into the remaining headroom. `‖κ' − p‖₁ = 2R ≤ 2·budget` and
/// `max κ'_i/q_i ≤ λ`.
fn ratio_clip<T: Real>(p: &[T], q: &[T], budget: T) -> Result<(Vec<T>, T)> {
    let overflow = |lam: T| -> T {
        p.iter()
            .zip(q.iter())
            .map(|(&pi, &qi)| (pi - lam * qi).max(T::zero()))
            .sum()
    };
    if p.iter().zip(q.iter()).any(|(&pi, &qi)| pi > T::zero() && qi <= T::zero()) {
        return Err(Error::Precondition(
            "target support must be contained in its reference support".into(),
        ));
    }
    // R(λ) is piecewise linear, decreasing; between consecutive sorted
    // ratios it is linear, so the exact λ* solves on one segment.
    let mut ratios: Vec<T> = p
        .iter()
        .zip(q.iter())
        .filter(|(_, &qi)| qi > T::zero())
        .map(|(&pi, &qi)| pi / qi)
        .collect();
    ratios.push(T::one());
    ratios.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    let lam_star = if overflow(T::one()) <= budget {
        T::one()
    } else {
        // R(λ) decreases in λ, R(r_max) = 0 ≤ budget < R(1). Walk the sorted
        // ratios downward to the first segment (lo, hi] where R crosses the
        // budget, then solve the linear equation Σ_{r_i > lo}(p_i − λq_i) =
        // budget there.
        let mut lam = ratios[0];
        for window in ratios.windows(2) {
            let (hi, lo) = (window[0], window[1]);
            if overflow(lo) > budget {
                let mut sum_p = T::zero();
                let mut sum_q = T::zero();
                for (&pi, &qi) in p.iter().zip(q.iter()) {
                    if qi > T::zero() && pi / qi > lo {
                        sum_p += pi;
                        sum_q += qi;
                    }
                }
                lam = if sum_q > T::zero() {
                    ((sum_p - budget) / sum_q).max(lo).min(hi)
                } else {
                    hi
                };
                break;
            }
            lam = lo;
        }
        lam
    }
    .max(T::one());

    let clipped: Vec<T> = p
        .iter()
        .zip(q.iter())
        .map(|(&pi, &qi)| pi.min(lam_star * qi))
        .collect();
    let removed = T::one() - clipped.iter().cloned().sum::<T>();
    let headroom: Vec<T> = clipped
        .iter()
        .zip(q.iter())
        .map(|(&ci, &qi)| (lam_star * qi - ci).max(T::zero()))
        .collect();
    let total_headroom: T = headroom.iter().cloned().sum();
    let mut kappa = clipped;
    if removed > T::zero() && total_headroom > T::zero() {
        for (ci, hi) in kappa.iter_mut().zip(headroom.iter()) {
            *ci += removed * *hi / total_headroom;
        }
    }
    Ok((kappa, lam_star))
}

struct SmoothedBlock<T: Real> {
    kappa: Vec<T>,
    kappa_prime: Vec<T>,
    s0: T,
    s_inf: T,
}

fn smoothed_block<T: Real>(pair: &ClassicalPair<T>, n: usize, eps: T) -> Result<SmoothedBlock<T>> {
    if n == 0 {
        return Err(Error::InvalidInput("block length must be positive".into()));
    }
    if !(eps > T::zero() && eps < T::cast(0.5)) {
        return Err(Error::InvalidInput(format!(
            "eps must lie strictly inside (0, 1/2), got {eps}"
        )));
    }
    let pn = pair.p.tensor_power(n)?;
    let qn = pair.q.tensor_power(n)?;
    let ppn = pair.p_prime.tensor_power(n)?;
    let qpn = pair.q_prime.tensor_power(n)?;

    // Each optimizer spends half the ε ball: ‖κ − p^⊗n‖₁ ≤ ε and
    // ‖κ' − p'^⊗n‖₁ ≤ ε in the full 1-norm.
    let half = eps / T::cast(2.0);
    let (kappa, kept) = support_cut(pn.as_slice(), qn.as_slice(), half);
    let q_mass_kept: T = qn
        .as_slice()
        .iter()
        .zip(kept.iter())
        .filter(|(_, &k)| k)
        .map(|(&qi, _)| qi)
        .sum();
    let s0 = -q_mass_kept.ln();
    let (kappa_prime, lam_star) = ratio_clip(ppn.as_slice(), qpn.as_slice(), half)?;
    Ok(SmoothedBlock {
        kappa,
        kappa_prime,
        s0,
        s_inf: lam_star.ln(),
    })
}

/// Feasibility margin `S₀(κ_ε ‖ q^⊗n) − S_∞(κ'_ε ‖ q'^⊗n)` of the smoothed
/// condition at block length `n`: nonnegative means the block protocol
/// exists. Monotone nondecreasing in `ε`.
pub fn block_condition_margin<T: Real>(pair: &ClassicalPair<T>, n: usize, eps: T) -> Result<T> {
    let block = smoothed_block(pair, n, eps)?;
    Ok(block.s0 - block.s_inf)
}

/// Smallest smoothing budget that makes the block-`n` protocol feasible,
/// located by bisection (feasibility is monotone in `ε`). `None` when even
/// `ε` close to 1/2 does not suffice.
pub fn minimal_feasible_eps<T: Real>(pair: &ClassicalPair<T>, n: usize) -> Result<Option<T>> {
    let mut hi = T::cast(0.499);
    if block_condition_margin(pair, n, hi)? < T::zero() {
        return Ok(None);
    }
    let mut lo = T::cast(1e-9);
    if block_condition_margin(pair, n, lo)? >= T::zero() {
        return Ok(Some(lo));
    }
    for _ in 0..60 {
        let mid = (lo + hi) / T::cast(2.0);
        if block_condition_margin(pair, n, mid)? >= T::zero() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Build the conversion channel on the `n`-fold block from the smoothed
/// optimizers. Fails with the margin deficit when the smoothed condition
/// `S₀ ≥ S_∞` does not yet hold at this block length.
pub fn classical_block_protocol<T: Real>(
    pair: &ClassicalPair<T>,
    n: usize,
    eps: T,
) -> Result<BlockProtocol<T>> {
    let SmoothedBlock {
        kappa,
        kappa_prime,
        s0,
        s_inf,
    } = smoothed_block(pair, n, eps)?;
    let qn = pair.q.tensor_power(n)?;
    let qpn = pair.q_prime.tensor_power(n)?;

    if s_inf > s0 {
        return Err(Error::InfeasibleChannel {
            min_eig: (s0 - s_inf).to_f64_lossy(),
        });
    }

    let smoothed_source = DensityMatrix::from_diagonal(&kappa)?;
    let smoothed_target = DensityMatrix::from_diagonal(&kappa_prime)?;
    let block_pair = QuantumPair::new(
        smoothed_source.clone(),
        DensityMatrix::from_diagonal(qn.as_slice())?,
        smoothed_target.clone(),
        DensityMatrix::from_diagonal(qpn.as_slice())?,
    )?;
    let (channel, _report) = faist_renner_channel_with_report(&block_pair)?;
    Ok(BlockProtocol {
        n,
        channel,
        smoothed_source,
        smoothed_target,
        s0_source: s0,
        s_inf_target: s_inf,
    })
}
