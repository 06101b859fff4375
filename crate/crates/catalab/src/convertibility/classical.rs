//! Classical convertibility criteria: the f_α family for exact catalytic
//! conversion under doubly-stochastic maps, the Rényi second-laws family for
//! pair conversion with an uncorrelated catalyst, and the single-potential
//! criteria for correlated catalysts.

use crate::convertibility::{
    Certificate, ClassicalPair, Decision, DecisionConfig, Verdict,
};
use crate::divergences::{f_alpha, renyi_divergence, AlphaGrid};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{GibbsSpec, ProbDist};

/// Margin of one grid criterion at one order.
struct GridMargin<T> {
    alpha: T,
    lhs: T,
    rhs: T,
    margin: T,
}

fn assemble_grid_verdict<T: Real>(
    margins: Vec<GridMargin<T>>,
    cfg: &DecisionConfig<T>,
) -> Verdict<T> {
    // Violations first: prefer citing α = 1 (the entropy/free-energy order),
    // then the worst finite violation, then the limit orders.
    let violated: Vec<&GridMargin<T>> = margins
        .iter()
        .filter(|m| m.margin < -cfg.slack)
        .collect();
    if !violated.is_empty() {
        let cited = violated
            .iter()
            .find(|m| m.alpha == T::one())
            .copied()
            .or_else(|| {
                violated
                    .iter()
                    .filter(|m| m.alpha.is_finite())
                    .min_by(|a, b| a.margin.partial_cmp(&b.margin).unwrap())
                    .copied()
            })
            .unwrap_or(violated[0]);
        return Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: cited.alpha,
                lhs: cited.lhs,
                rhs: cited.rhs,
            },
        );
    }
    let min = margins
        .iter()
        .min_by(|a, b| a.margin.partial_cmp(&b.margin).unwrap());
    match min {
        Some(m) if m.margin > cfg.slack => Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: m.margin,
                alpha_at_min: m.alpha,
            },
        ),
        Some(m) => Verdict::new(
            Decision::Inconclusive,
            Certificate::Margin {
                min_margin: m.margin,
                alpha_at_min: m.alpha,
            },
        )
        .with_note("minimum grid margin within slack of the criterion boundary"),
        None => Verdict::new(
            Decision::Inconclusive,
            Certificate::Margin {
                min_margin: T::zero(),
                alpha_at_min: T::zero(),
            },
        )
        .with_note("empty criterion grid"),
    }
}

/// Asymptotic margin of the f_α criterion as α → +∞: the comparison is
/// dominated by `α(ln p_max − ln p'_max)`, with the multiplicity of the
/// maximum as tie-breaker.
fn f_margin_pos_inf<T: Real>(p: &ProbDist<T>, p_prime: &ProbDist<T>, cfg: &DecisionConfig<T>) -> GridMargin<T> {
    let pmax = p.as_slice().iter().cloned().fold(T::zero(), T::max);
    let qmax = p_prime.as_slice().iter().cloned().fold(T::zero(), T::max);
    let slope = pmax.ln() - qmax.ln();
    let margin = if slope.abs() > cfg.slack {
        slope
    } else {
        let count = |d: &ProbDist<T>, m: T| {
            d.as_slice()
                .iter()
                .filter(|&&x| (x - m).abs() <= cfg.rank_tol)
                .count() as f64
        };
        T::cast(count(p, pmax)).ln() - T::cast(count(p_prime, qmax)).ln()
    };
    GridMargin {
        alpha: T::infinity(),
        lhs: pmax.ln(),
        rhs: qmax.ln(),
        margin,
    }
}

/// As α → −∞ the comparison is dominated by `α(ln p_min − ln p'_min)`, i.e.
/// the criterion needs `p_min ≤ p'_min`.
fn f_margin_neg_inf<T: Real>(p: &ProbDist<T>, p_prime: &ProbDist<T>, cfg: &DecisionConfig<T>) -> GridMargin<T> {
    let pmin = p.as_slice().iter().cloned().fold(T::infinity(), T::min);
    let qmin = p_prime
        .as_slice()
        .iter()
        .cloned()
        .fold(T::infinity(), T::min);
    let slope = qmin.ln() - pmin.ln();
    let margin = if slope.abs() > cfg.slack {
        slope
    } else {
        let count = |d: &ProbDist<T>, m: T| {
            d.as_slice()
                .iter()
                .filter(|&&x| (x - m).abs() <= cfg.rank_tol)
                .count() as f64
        };
        T::cast(count(p_prime, qmin)).ln() - T::cast(count(p, pmin)).ln()
    };
    GridMargin {
        alpha: T::neg_infinity(),
        lhs: pmin.ln(),
        rhs: qmin.ln(),
        margin,
    }
}

/// Exact conversion under doubly-stochastic maps with an uncorrelated
/// catalyst: decided by `f_α(p) > f_α(p')` across the grid, with the ±∞
/// limits handled through their asymptotic margins. Full-rank inputs only;
/// a target that is a permutation of the source converts trivially and is
/// answered directly.
pub fn check_klimesh_turgut<T: Real>(
    p: &ProbDist<T>,
    p_prime: &ProbDist<T>,
    grid: &AlphaGrid<T>,
    cfg: &DecisionConfig<T>,
) -> Result<Verdict<T>> {
    if p.dim() != p_prime.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            p.dim(),
            p_prime.dim()
        )));
    }
    if !p.is_full_rank(cfg.rank_tol) || !p_prime.is_full_rank(cfg.rank_tol) {
        return Err(Error::Precondition(
            "catalytic-majorization criterion requires full-rank distributions".into(),
        ));
    }
    if p.is_permutation_of(p_prime, cfg.equality_tol) {
        return Ok(Verdict::new(Decision::Convertible, Certificate::Permutation)
            .with_note("target is a permutation of the source"));
    }

    let mut margins = Vec::new();
    for alpha in grid.alphas() {
        if alpha == T::infinity() {
            margins.push(f_margin_pos_inf(p, p_prime, cfg));
        } else if alpha == T::neg_infinity() {
            margins.push(f_margin_neg_inf(p, p_prime, cfg));
        } else {
            let lhs = f_alpha(p, alpha);
            let rhs = f_alpha(p_prime, alpha);
            margins.push(GridMargin {
                alpha,
                lhs,
                rhs,
                margin: lhs - rhs,
            });
        }
    }
    Ok(assemble_grid_verdict(margins, cfg))
}

/// Pair conversion with vanishing error and an uncorrelated catalyst:
/// decided by `S_α(p‖q) ≥ S_α(p'‖q')` across the grid. All four inputs must
/// be full rank. At α = 0 the divergence of a full-rank pair is identically
/// zero on both sides, so that order is structurally satisfied with zero
/// margin and is exempt from the positive-slack requirement.
pub fn check_brandao<T: Real>(
    pair: &ClassicalPair<T>,
    grid: &AlphaGrid<T>,
    cfg: &DecisionConfig<T>,
) -> Result<Verdict<T>> {
    let ClassicalPair {
        p,
        q,
        p_prime,
        q_prime,
    } = pair;
    if p.dim() == p_prime.dim() {
        let same = |a: &ProbDist<T>, b: &ProbDist<T>| {
            a.as_slice()
                .iter()
                .zip(b.as_slice())
                .all(|(x, y)| (*x - *y).abs() <= cfg.equality_tol)
        };
        if same(p, p_prime) && same(q, q_prime) {
            return Ok(Verdict::new(Decision::Convertible, Certificate::Identity));
        }
    }
    for (name, d) in [("p", p), ("q", q), ("p'", p_prime), ("q'", q_prime)] {
        if !d.is_full_rank(cfg.rank_tol) {
            return Err(Error::Precondition(format!(
                "second-laws criterion requires full-rank distributions ({name} is rank-deficient)"
            )));
        }
    }

    let mut margins = Vec::new();
    for alpha in grid.alphas() {
        if alpha == T::zero() {
            // S₀ ≡ 0 for full-rank pairs; satisfied with equality by
            // construction, never decisive.
            continue;
        }
        let lhs = renyi_divergence(p, q, alpha)?.value;
        let rhs = renyi_divergence(p_prime, q_prime, alpha)?.value;
        margins.push(GridMargin {
            alpha,
            lhs,
            rhs,
            margin: lhs - rhs,
        });
    }
    Ok(assemble_grid_verdict(margins, cfg))
}

/// Conversion through a Gibbs-preserving map with a correlated catalyst: a
/// single free-energy inequality `F(p) ≥ F(p')`. Decided through the
/// equivalent relative-entropy margin `S₁(p‖γ) − S₁(p'‖γ)`, which remains
/// meaningful at β = 0 where the 1/β prefactor of F itself does not.
pub fn check_muller_correlated<T: Real>(
    p: &ProbDist<T>,
    p_prime: &ProbDist<T>,
    spec: &GibbsSpec<T>,
    cfg: &DecisionConfig<T>,
) -> Result<Verdict<T>> {
    if p.dim() != spec.dim() || p_prime.dim() != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {}/{} vs Gibbs spec dim {}",
            p.dim(),
            p_prime.dim(),
            spec.dim()
        )));
    }
    let gamma = spec.gibbs_dist()?;
    let same = p
        .as_slice()
        .iter()
        .zip(p_prime.as_slice())
        .all(|(x, y)| (*x - *y).abs() <= cfg.equality_tol);
    if same {
        return Ok(Verdict::new(Decision::Convertible, Certificate::Identity));
    }
    let target_is_gibbs = p_prime
        .as_slice()
        .iter()
        .zip(gamma.as_slice())
        .all(|(x, y)| (*x - *y).abs() <= cfg.equality_tol);
    if target_is_gibbs {
        return Ok(Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: renyi_divergence(p, &gamma, T::one())?.value,
                alpha_at_min: T::one(),
            },
        )
        .with_note("target is the thermal state, which minimizes the free energy"));
    }

    let lhs = renyi_divergence(p, &gamma, T::one())?.value;
    let rhs = renyi_divergence(p_prime, &gamma, T::one())?.value;
    let margin = lhs - rhs;
    let (lhs_rep, rhs_rep) = if spec.beta > T::zero() {
        let ln_z = spec.ln_partition()?;
        (
            (lhs - ln_z) / spec.beta,
            (rhs - ln_z) / spec.beta,
        )
    } else {
        (lhs, rhs)
    };
    Ok(if margin >= cfg.band {
        Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: margin,
                alpha_at_min: T::one(),
            },
        )
    } else if margin <= -cfg.band {
        Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs: lhs_rep,
                rhs: rhs_rep,
            },
        )
    } else {
        Verdict::new(
            Decision::Inconclusive,
            Certificate::Margin {
                min_margin: margin,
                alpha_at_min: T::one(),
            },
        )
        .with_note("free energies agree within the equality band")
    })
}

/// Exact conversion under doubly-stochastic maps with a correlated
/// catalyst: `H₀(p) ≤ H₀(p')` and strictly `S₁(p) < S₁(p')` (Shannon
/// entropies). Full-rank inputs; permutations convert trivially.
pub fn check_muller_exact<T: Real>(
    p: &ProbDist<T>,
    p_prime: &ProbDist<T>,
    cfg: &DecisionConfig<T>,
) -> Result<Verdict<T>> {
    if !p.is_full_rank(cfg.rank_tol) || !p_prime.is_full_rank(cfg.rank_tol) {
        return Err(Error::Precondition(
            "exact correlated-catalytic criterion requires full-rank distributions".into(),
        ));
    }
    if p.dim() == p_prime.dim() && p.is_permutation_of(p_prime, cfg.equality_tol) {
        return Ok(Verdict::new(Decision::Convertible, Certificate::Permutation)
            .with_note("target is a permutation of the source"));
    }
    let support_p = p.support_size(cfg.rank_tol);
    let support_p_prime = p_prime.support_size(cfg.rank_tol);
    if support_p > support_p_prime {
        return Ok(Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::zero(),
                lhs: T::cast(support_p as f64).ln(),
                rhs: T::cast(support_p_prime as f64).ln(),
            },
        )
        .with_note("max entropy must not decrease"));
    }
    let shannon = |d: &ProbDist<T>| -> T { -f_alpha(d, T::one()) };
    let hp = shannon(p);
    let hp_prime = shannon(p_prime);
    let margin = hp_prime - hp;
    Ok(if margin > cfg.band {
        Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: margin,
                alpha_at_min: T::one(),
            },
        )
    } else if margin < -cfg.band {
        Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs: hp,
                rhs: hp_prime,
            },
        )
        .with_note("Shannon entropy must strictly increase")
    } else {
        Verdict::new(
            Decision::Inconclusive,
            Certificate::Margin {
                min_margin: margin,
                alpha_at_min: T::one(),
            },
        )
        .with_note("entropies agree within the equality band; the criterion is strict")
    })
}

/// Outcome of embedding a rational-reference problem into a uniform one.
#[derive(Debug, Clone)]
pub struct Trivialization<T: Real = f64> {
    /// `p` spread uniformly over the micro-states of each outcome.
    pub expanded: ProbDist<T>,
    /// Micro-state index → original outcome.
    pub owner: Vec<usize>,
    /// Micro-states per original outcome (`n_i`).
    pub counts: Vec<usize>,
}

impl<T: Real> Trivialization<T> {
    /// Regroup an expanded distribution back onto the original outcomes.
    pub fn regroup(&self, expanded: &ProbDist<T>) -> Result<ProbDist<T>> {
        if expanded.dim() != self.owner.len() {
            return Err(Error::DimensionMismatch(format!(
                "expanded dim {} vs trivialization size {}",
                expanded.dim(),
                self.owner.len()
            )));
        }
        let mut grouped = vec![T::zero(); self.counts.len()];
        for (micro, &o) in self.owner.iter().enumerate() {
            grouped[o] += expanded.as_slice()[micro];
        }
        ProbDist::new(grouped)
    }
}

/// Split each outcome `i` into `n_i = q_i·N` micro-states, spreading `p_i`
/// uniformly across them. The reference distribution becomes uniform over
/// `N`, reducing Gibbs-preserving questions to doubly-stochastic ones.
/// Rejects `q` whose entries are not exactly `n_i/N` within `1e-12`.
pub fn trivialize<T: Real>(
    p: &ProbDist<T>,
    q: &ProbDist<T>,
    big_n: usize,
) -> Result<Trivialization<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    if big_n == 0 {
        return Err(Error::InvalidInput("denominator N must be positive".into()));
    }
    crate::real::check_dim_cap(big_n)?;
    let n_t = T::cast(big_n as f64);
    let mut counts = Vec::with_capacity(q.dim());
    for (i, &qi) in q.as_slice().iter().enumerate() {
        let scaled = qi * n_t;
        let rounded = scaled.round();
        if (scaled - rounded).abs() > T::cast(1e-12) * n_t.max(T::one()) {
            return Err(Error::InvalidInput(format!(
                "q[{i}] = {qi} is not a multiple of 1/{big_n}"
            )));
        }
        counts.push(rounded.to_f64_lossy() as usize);
    }
    if counts.iter().sum::<usize>() != big_n {
        return Err(Error::InvalidInput(format!(
            "micro-state counts sum to {} (expected {big_n})",
            counts.iter().sum::<usize>()
        )));
    }
    let mut expanded = Vec::with_capacity(big_n);
    let mut owner = Vec::with_capacity(big_n);
    for (i, &ni) in counts.iter().enumerate() {
        let pi = p.as_slice()[i];
        if ni == 0 {
            if pi > T::cast(1e-12) {
                return Err(Error::Precondition(format!(
                    "p[{i}] = {pi} has no micro-states to occupy (q[{i}] = 0)"
                )));
            }
            continue;
        }
        let share = pi / T::cast(ni as f64);
        for _ in 0..ni {
            expanded.push(share);
            owner.push(i);
        }
    }
    Ok(Trivialization {
        expanded: ProbDist::new(expanded)?,
        owner,
        counts,
    })
}
