//! Quantum pair-conversion criteria and the explicit two-branch conversion
//! channel realizing the sufficient condition `S₀(ρ‖σ) ≥ S_∞(ρ'‖σ')`.

use crate::channels::Channel;
use crate::cmat::{identity, kron, max_abs_diff, CMat};
use crate::convertibility::{Certificate, Decision, DecisionConfig, QuantumPair, Verdict};
use crate::divergences::{quantum_relative_entropy, quantum_renyi_0, quantum_renyi_inf};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{support_projector, trace_distance};

fn states_equal<T: Real>(
    a: &crate::statekit::DensityMatrix<T>,
    b: &crate::statekit::DensityMatrix<T>,
    tol: T,
) -> bool {
    a.dim() == b.dim() && max_abs_diff(a.matrix(), b.matrix()) <= tol
}

/// Pair conversion with vanishing error and a correlated catalyst: decided
/// by the single inequality `S₁(ρ‖σ) ≥ S₁(ρ'‖σ')`. When σ and σ' are Gibbs
/// states this is exactly the free-energy second law. A source pair with
/// `supp(ρ) ⊄ supp(σ)` has infinite relative entropy and converts to
/// anything; that case is reported with a note.
pub fn check_quantum_pair<T: Real>(pair: &QuantumPair<T>, cfg: &DecisionConfig<T>) -> Result<Verdict<T>> {
    if pair.dim_in() == pair.dim_out()
        && states_equal(&pair.rho, &pair.rho_prime, cfg.equality_tol)
        && states_equal(&pair.sigma, &pair.sigma_prime, cfg.equality_tol)
    {
        return Ok(Verdict::new(Decision::Convertible, Certificate::Identity));
    }
    let lhs = quantum_relative_entropy(&pair.rho, &pair.sigma)?;
    let rhs = quantum_relative_entropy(&pair.rho_prime, &pair.sigma_prime)?;
    if lhs == T::infinity() {
        return Ok(Verdict::new(
            Decision::Convertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs,
                rhs,
            },
        )
        .with_note(
            "supp(ρ) is not contained in supp(σ): S₁(ρ‖σ) = +∞ dominates any target",
        ));
    }
    if rhs == T::infinity() {
        return Ok(Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs,
                rhs,
            },
        )
        .with_note("target pair has infinite relative entropy, source is finite"));
    }
    let margin = lhs - rhs;
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
                lhs,
                rhs,
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
        .with_note("relative entropies agree within the equality band")
    })
}

/// Exact pair conversion with a correlated catalyst, for full-rank targets:
/// sufficient when strictly `S₁(ρ‖σ) > S₁(ρ'‖σ')`. The criterion is
/// one-directional, so near-equality is Inconclusive rather than
/// NotConvertible; a genuinely reversed ordering is NotConvertible by the
/// non-strict necessary condition.
pub fn check_exact_full_rank<T: Real>(
    pair: &QuantumPair<T>,
    cfg: &DecisionConfig<T>,
) -> Result<Verdict<T>> {
    if !pair.rho_prime.is_full_rank(cfg.rank_tol)? {
        return Err(Error::Precondition(
            "exact conversion requires a full-rank target: rank-deficient targets (e.g. pure \
             states) cannot carry the residual correlation with a catalyst"
                .into(),
        ));
    }
    let lhs = quantum_relative_entropy(&pair.rho, &pair.sigma)?;
    let rhs = quantum_relative_entropy(&pair.rho_prime, &pair.sigma_prime)?;
    if lhs == T::infinity() && rhs.is_finite() {
        return Ok(Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: T::infinity(),
                alpha_at_min: T::one(),
            },
        )
        .with_note("S₁(ρ‖σ) = +∞ strictly dominates the finite target"));
    }
    if lhs == T::infinity() && rhs == T::infinity() {
        return Ok(Verdict::new(
            Decision::Inconclusive,
            Certificate::Margin {
                min_margin: T::zero(),
                alpha_at_min: T::one(),
            },
        )
        .with_note("both relative entropies are infinite; the strict criterion cannot resolve"));
    }
    if rhs == T::infinity() {
        return Ok(Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs,
                rhs,
            },
        ));
    }
    let margin = lhs - rhs;
    Ok(if margin > cfg.band {
        Verdict::new(
            Decision::Convertible,
            Certificate::Margin {
                min_margin: margin,
                alpha_at_min: T::one(),
            },
        )
        .with_note("conversion is exact (strict inequality with a full-rank target)")
    } else if margin < -cfg.band {
        Verdict::new(
            Decision::NotConvertible,
            Certificate::ViolatingAlpha {
                alpha: T::one(),
                lhs,
                rhs,
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
        .with_note("criterion is one-directional and the margin sits at the boundary")
    })
}

/// Diagnostics of the constructed two-branch channel.
#[derive(Debug, Clone, Copy)]
pub struct FrReport<T: Real = f64> {
    /// `S₀(ρ‖σ) = −ln Tr[P_ρ σ]`.
    pub s0_source: T,
    /// `S_∞(ρ'‖σ')`.
    pub s_inf_target: T,
    /// Smallest eigenvalue of the failure-branch state τ.
    pub tau_min_eigenvalue: T,
    /// `max |Λ(ρ) − ρ'|` entrywise.
    pub map_rho_error: T,
    /// `max |Λ(σ) − σ'|` entrywise.
    pub map_sigma_error: T,
}

/// Explicit channel mapping `ρ ↦ ρ'` and `σ ↦ σ'` exactly: measure
/// `{P_ρ, 1−P_ρ}`, prepare `ρ'` on success and
/// `τ = (σ' − e^{−S₀} ρ')/(1 − e^{−S₀})` on failure. τ is a valid state
/// exactly when `S₀(ρ‖σ) ≥ S_∞(ρ'‖σ')` — comparing the *source* Rényi-0
/// divergence against the *target* Rényi-∞ divergence — so positivity of τ
/// doubles as the feasibility check. Infeasibility is reported with the
/// offending eigenvalue.
pub fn faist_renner_channel_with_report<T: Real>(
    pair: &QuantumPair<T>,
) -> Result<(Channel<T>, FrReport<T>)> {
    let cfg = DecisionConfig::<T>::default();
    let d_in = pair.dim_in();
    let d_out = pair.dim_out();
    let p = support_projector(&pair.rho, cfg.rank_tol)?;
    let overlap = crate::cmat::trace(&p.dot(pair.sigma.matrix())).re;
    let w = overlap.max(T::zero()).min(T::one());
    let channel_tol = crate::real::Tolerances::<T>::default().channel;

    if w >= T::one() - cfg.rank_tol {
        // supp(σ) ⊆ supp(ρ): S₀ = 0 and the failure branch never fires. The
        // constant map works exactly when the targets coincide.
        if trace_distance(&pair.rho_prime, &pair.sigma_prime)? <= channel_tol {
            let ch = Channel::constant(&pair.rho_prime);
            let report = fr_verify(&ch, pair, T::zero(), T::zero())?;
            return Ok((ch, report));
        }
        return Err(Error::Precondition(
            "S₀(ρ‖σ) = 0 (σ lives inside the support of ρ): a two-branch measure-and-prepare \
             map cannot separate the pair unless ρ' = σ'"
                .into(),
        ));
    }

    let s0 = if w > T::zero() { -w.ln() } else { T::infinity() };
    // τ = (σ' − w ρ')/(1−w); PSD ⇔ S_∞(ρ'‖σ') ≤ S₀(ρ‖σ).
    let one_minus_w = T::one() - w;
    let mut tau = CMat::<T>::zeros((d_out, d_out));
    for i in 0..d_out {
        for j in 0..d_out {
            tau[(i, j)] = (pair.sigma_prime.matrix()[(i, j)]
                - pair.rho_prime.matrix()[(i, j)] * crate::cmat::creal(w))
                / crate::cmat::creal(one_minus_w);
        }
    }
    let tau_evs = crate::eigen::eigvalsh(&tau)?;
    let tau_min = tau_evs.first().copied().unwrap_or(T::zero());
    if tau_min < -channel_tol {
        return Err(Error::InfeasibleChannel {
            min_eig: tau_min.to_f64_lossy(),
        });
    }

    // Choi = Pᵀ ⊗ ρ' + (1−P)ᵀ ⊗ τ: PSD by construction (orthogonal input
    // projectors, PSD outputs), trace-preserving since the branches sum to 1.
    let mut pt = CMat::<T>::zeros((d_in, d_in));
    let mut qt = CMat::<T>::zeros((d_in, d_in));
    for i in 0..d_in {
        for j in 0..d_in {
            pt[(i, j)] = p[(j, i)];
            qt[(i, j)] = identity::<T>(d_in)[(j, i)] - p[(j, i)];
        }
    }
    let choi = kron(&pt, pair.rho_prime.matrix()) + kron(&qt, &tau);
    let ch = Channel::from_choi_unverified(d_in, d_out, choi)?;
    let report = fr_verify(&ch, pair, s0, tau_min)?;
    Ok((ch, report))
}

fn fr_verify<T: Real>(
    ch: &Channel<T>,
    pair: &QuantumPair<T>,
    s0: T,
    tau_min: T,
) -> Result<FrReport<T>> {
    let out_rho = ch.apply_matrix(pair.rho.matrix())?;
    let out_sigma = ch.apply_matrix(pair.sigma.matrix())?;
    let map_rho_error = max_abs_diff(&out_rho, pair.rho_prime.matrix());
    let map_sigma_error = max_abs_diff(&out_sigma, pair.sigma_prime.matrix());
    let tol = T::cast(1e-8);
    if map_rho_error > tol || map_sigma_error > tol {
        return Err(Error::Numerical(format!(
            "constructed channel misses its mapping constraints: |Λ(ρ)−ρ'| = {map_rho_error:e}, \
             |Λ(σ)−σ'| = {map_sigma_error:e}"
        )));
    }
    let s_inf_target = quantum_renyi_inf(&pair.rho_prime, &pair.sigma_prime)?;
    Ok(FrReport {
        s0_source: s0,
        s_inf_target,
        tau_min_eigenvalue: tau_min,
        map_rho_error,
        map_sigma_error,
    })
}

/// [`faist_renner_channel_with_report`] without the diagnostics.
pub fn faist_renner_channel<T: Real>(pair: &QuantumPair<T>) -> Result<Channel<T>> {
    Ok(faist_renner_channel_with_report(pair)?.0)
}

/// Convenience: does the sufficient condition `S₀(ρ‖σ) ≥ S_∞(ρ'‖σ') + slack`
/// hold for this pair?
pub fn fr_condition_holds<T: Real>(pair: &QuantumPair<T>, slack: T) -> Result<bool> {
    let s0 = quantum_renyi_0(&pair.rho, &pair.sigma)?;
    let s_inf = quantum_renyi_inf(&pair.rho_prime, &pair.sigma_prime)?;
    if s0 == T::infinity() {
        return Ok(true);
    }
    if s_inf == T::infinity() {
        return Ok(false);
    }
    Ok(s0 >= s_inf + slack)
}
