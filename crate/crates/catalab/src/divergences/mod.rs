//! Entropies and divergences the convertibility criteria are stated in.
//!
//! All logarithms are natural (values in nats). Divergences that diverge —
//! support mismatches, negative-order divergences of rank-deficient
//! distributions — return in-band `+∞` rather than erroring, so criterion
//! comparisons stay total.

mod hypothesis;
pub mod types;

pub use hypothesis::{hypothesis_testing_divergence, smoothed_renyi_rate, RatePoint};

use crate::cmat::CMat;
use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};
use crate::statekit::{DensityMatrix, GibbsSpec, ProbDist};

/// Finite grid of Rényi orders standing in for "for all α ∈ ℝ" criteria.
///
/// Criterion functions are smooth in α, so a fixed grid plus the ±∞ limits
/// catches sign changes at desk scale; verdicts near the grid's resolution
/// are reported as Inconclusive rather than forced to a side.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid<T: Real = f64> {
    explicit: Vec<T>,
    pub include_zero: bool,
    pub include_one: bool,
    pub include_pos_inf: bool,
    pub include_neg_inf: bool,
}

impl<T: Real> Default for AlphaGrid<T> {
    fn default() -> Self {
        let explicit = [
            -10.0, -5.0, -2.0, -1.0, -0.5, 0.25, 0.5, 0.75, 1.5, 2.0, 3.0, 5.0, 10.0,
        ]
        .iter()
        .map(|&a| T::cast(a))
        .collect();
        AlphaGrid {
            explicit,
            include_zero: true,
            include_one: true,
            include_pos_inf: true,
            include_neg_inf: true,
        }
    }
}

impl<T: Real> AlphaGrid<T> {
    /// Grid from explicit finite orders; sorted and deduplicated. Limit
    /// flags start false.
    pub fn from_alphas(mut alphas: Vec<T>) -> Result<Self> {
        if alphas.iter().any(|a| !a.is_finite()) {
            return Err(Error::InvalidInput(
                "explicit grid entries must be finite; use the limit flags for 0/1/±∞".into(),
            ));
        }
        alphas.sort_by(|a, b| a.partial_cmp(b).unwrap());
        alphas.dedup();
        Ok(AlphaGrid {
            explicit: alphas,
            include_zero: false,
            include_one: false,
            include_pos_inf: false,
            include_neg_inf: false,
        })
    }

    pub fn single(alpha: T) -> Self {
        if alpha == T::infinity() {
            AlphaGrid {
                explicit: vec![],
                include_zero: false,
                include_one: false,
                include_pos_inf: true,
                include_neg_inf: false,
            }
        } else if alpha == T::neg_infinity() {
            AlphaGrid {
                explicit: vec![],
                include_zero: false,
                include_one: false,
                include_pos_inf: false,
                include_neg_inf: true,
            }
        } else {
            AlphaGrid {
                explicit: vec![alpha],
                include_zero: false,
                include_one: false,
                include_pos_inf: false,
                include_neg_inf: false,
            }
        }
    }

    /// All orders in ascending order, limits included as `±∞` in-band.
    pub fn alphas(&self) -> Vec<T> {
        let mut v = self.explicit.clone();
        if self.include_zero {
            v.push(T::zero());
        }
        if self.include_one {
            v.push(T::one());
        }
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v.dedup();
        if self.include_neg_inf {
            v.insert(0, T::neg_infinity());
        }
        if self.include_pos_inf {
            v.push(T::infinity());
        }
        v
    }

    /// Finite, nonnegative part of the grid (used by monotonicity checks).
    pub fn nonnegative_finite(&self) -> Vec<T> {
        self.alphas()
            .into_iter()
            .filter(|a| a.is_finite() && *a >= T::zero())
            .collect()
    }
}

/// One evaluated divergence: order, value, and whether the value is finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceReport<T: Real = f64> {
    pub alpha: T,
    pub value: T,
    pub finite: bool,
}

fn rank_tol<T: Real>() -> T {
    Tolerances::<T>::default().rank
}

/// The additive criterion family for catalytic majorization:
/// `f_α(p) = s_α ln Σ p_i^α` away from `α ∈ {0,1}`, with `s_α = +1` for
/// `α > 1` or `α < 0` and `s_α = −1` for `0 < α < 1`; `Σ p ln p` at `α = 1`;
/// `−Σ ln p_i` (Burg entropy) at `α = 0`. Distributions with zero entries
/// give in-band `+∞` for `α ≤ 0`.
pub fn f_alpha<T: Real>(p: &ProbDist<T>, alpha: T) -> T {
    let tol = rank_tol::<T>();
    let has_zero = p.as_slice().iter().any(|&x| x <= tol);
    if alpha == T::infinity() {
        // ln Σ p^α → α ln p_max → −∞ for non-degenerate p; 0 for a point mass.
        let pmax = p.as_slice().iter().cloned().fold(T::zero(), T::max);
        return if pmax >= T::one() - tol {
            T::zero()
        } else {
            T::neg_infinity()
        };
    }
    if alpha == T::neg_infinity() {
        let pmin = p.as_slice().iter().cloned().fold(T::infinity(), T::min);
        return if pmin >= T::one() - tol {
            T::zero()
        } else {
            T::infinity()
        };
    }
    if alpha == T::one() {
        return p
            .as_slice()
            .iter()
            .filter(|&&x| x > T::zero())
            .map(|&x| x * x.ln())
            .sum();
    }
    if alpha == T::zero() {
        if has_zero {
            return T::infinity();
        }
        return -p.as_slice().iter().map(|&x| x.ln()).sum::<T>();
    }
    if alpha < T::zero() && has_zero {
        return T::infinity();
    }
    let sum: T = p
        .as_slice()
        .iter()
        .filter(|&&x| x > T::zero())
        .map(|&x| x.powf(alpha))
        .sum();
    let s = if alpha > T::one() || alpha < T::zero() {
        T::one()
    } else {
        -T::one()
    };
    s * sum.ln()
}

/// Classical Rényi α-divergence
/// `S_α(p‖q) = sgn(α)/(α−1) · ln Σ p_i^α q_i^{1−α}`, with the orders
/// `α ∈ {0, 1, ±∞}` evaluated as their analytic limits. `+∞` is returned
/// in-band whenever the relevant support condition fails.
pub fn renyi_divergence<T: Real>(
    p: &ProbDist<T>,
    q: &ProbDist<T>,
    alpha: T,
) -> Result<DivergenceReport<T>> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            p.dim(),
            q.dim()
        )));
    }
    let tol = rank_tol::<T>();
    let ps = p.as_slice();
    let qs = q.as_slice();

    let value = if alpha == T::infinity() {
        max_ratio(ps, qs, tol)
    } else if alpha == T::neg_infinity() {
        max_ratio(qs, ps, tol)
    } else if alpha == T::one() {
        let mut acc = T::zero();
        for (&pi, &qi) in ps.iter().zip(qs.iter()) {
            if pi > tol {
                if qi <= tol {
                    acc = T::infinity();
                    break;
                }
                acc += pi * (pi.ln() - qi.ln());
            }
        }
        acc
    } else if alpha == T::zero() {
        let mass: T = ps
            .iter()
            .zip(qs.iter())
            .filter(|(&pi, _)| pi > tol)
            .map(|(_, &qi)| qi)
            .sum();
        if mass <= tol {
            T::infinity()
        } else {
            -mass.ln()
        }
    } else if alpha > T::one() {
        if ps.iter().zip(qs.iter()).any(|(&pi, &qi)| pi > tol && qi <= tol) {
            T::infinity()
        } else {
            let sum: T = ps
                .iter()
                .zip(qs.iter())
                .filter(|(&pi, _)| pi > T::zero())
                .map(|(&pi, &qi)| pi.powf(alpha) * qi.powf(T::one() - alpha))
                .sum();
            sum.ln() / (alpha - T::one())
        }
    } else if alpha > T::zero() {
        // 0 < α < 1: always finite unless the supports are disjoint.
        let sum: T = ps
            .iter()
            .zip(qs.iter())
            .filter(|(&pi, &qi)| pi > T::zero() && qi > T::zero())
            .map(|(&pi, &qi)| pi.powf(alpha) * qi.powf(T::one() - alpha))
            .sum();
        if sum <= T::zero() {
            T::infinity()
        } else {
            sum.ln() / (alpha - T::one())
        }
    } else {
        // α < 0: diverges when q puts mass outside the support of p.
        if ps.iter().zip(qs.iter()).any(|(&pi, &qi)| qi > tol && pi <= tol) {
            T::infinity()
        } else {
            let sum: T = ps
                .iter()
                .zip(qs.iter())
                .filter(|(&pi, &qi)| pi > T::zero() && qi > T::zero())
                .map(|(&pi, &qi)| pi.powf(alpha) * qi.powf(T::one() - alpha))
                .sum();
            // sgn(α) = −1 here.
            -sum.ln() / (alpha - T::one())
        }
    };

    Ok(DivergenceReport {
        alpha,
        value,
        finite: value.is_finite(),
    })
}

fn max_ratio<T: Real>(num: &[T], den: &[T], tol: T) -> T {
    let mut worst = T::zero();
    for (&n, &d) in num.iter().zip(den.iter()) {
        if n > tol {
            if d <= tol {
                return T::infinity();
            }
            worst = worst.max(n / d);
        }
    }
    if worst <= T::zero() {
        T::zero()
    } else {
        worst.ln()
    }
}

/// Quantum relative entropy `S₁(ρ‖σ) = Tr[ρ ln ρ − ρ ln σ]`, computed
/// spectrally with `0 ln 0 = 0`; `+∞` when `supp(ρ) ⊄ supp(σ)`.
pub fn quantum_relative_entropy<T: Real>(
    rho: &DensityMatrix<T>,
    sigma: &DensityMatrix<T>,
) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let tol = rank_tol::<T>();
    let er = eigh(rho.matrix())?;
    let es = eigh(sigma.matrix())?;

    let mut entropy_term = T::zero(); // Σ r ln r
    for &r in &er.values {
        if r > tol {
            entropy_term += r * r.ln();
        }
    }

    // Overlaps |⟨a|b⟩|² between eigenvectors of ρ (a) and σ (b).
    let n = rho.dim();
    let mut cross = T::zero();
    for (a, &r) in er.values.iter().enumerate() {
        if r <= tol {
            continue;
        }
        for (b, &s) in es.values.iter().enumerate() {
            let mut ip = crate::cmat::czero::<T>();
            for i in 0..n {
                ip = ip + er.vectors[(i, a)].conj() * es.vectors[(i, b)];
            }
            let w = ip.norm_sqr();
            if w <= T::epsilon() * T::cast(n as f64) {
                continue;
            }
            if s <= tol {
                return Ok(T::infinity());
            }
            cross += r * w * s.ln();
        }
    }
    Ok(entropy_term - cross)
}

/// Quantum Rényi-0 divergence `S₀(ρ‖σ) = −ln Tr[P_ρ σ]`; `+∞` when the
/// support overlap is below the rank tolerance.
pub fn quantum_renyi_0<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let tol = rank_tol::<T>();
    let p = crate::statekit::support_projector(rho, tol)?;
    let overlap = crate::cmat::trace(&p.dot(sigma.matrix())).re;
    if overlap <= tol {
        return Ok(T::infinity());
    }
    // Tr[Pσ] can exceed 1 by rounding; clamp so S₀ ≥ 0.
    Ok(-overlap.min(T::one()).ln())
}

/// Quantum Rényi-∞ divergence `S_∞(ρ‖σ) = ln min{λ : ρ ≤ λσ}`, evaluated as
/// the top eigenvalue of `σ^{-1/2} ρ σ^{-1/2}` on the support of σ; `+∞`
/// when `supp(ρ) ⊄ supp(σ)`.
pub fn quantum_renyi_inf<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let tol = rank_tol::<T>();
    let es = eigh(sigma.matrix())?;
    let n = rho.dim();

    // ρ in the σ eigenbasis.
    let mut b = CMat::<T>::zeros((n, n));
    for r in 0..n {
        for c in 0..n {
            let mut acc = crate::cmat::czero::<T>();
            for i in 0..n {
                for j in 0..n {
                    acc = acc + es.vectors[(i, r)].conj() * rho.matrix()[(i, j)] * es.vectors[(j, c)];
                }
            }
            b[(r, c)] = acc;
        }
    }

    let support: Vec<usize> = (0..n).filter(|&i| es.values[i] > tol).collect();
    // Mass of ρ outside supp(σ).
    let outside: T = (0..n)
        .filter(|i| es.values[*i] <= tol)
        .map(|i| b[(i, i)].re)
        .sum();
    if outside > tol {
        return Ok(T::infinity());
    }
    if support.is_empty() {
        return Ok(T::infinity());
    }
    let k = support.len();
    let mut m = CMat::<T>::zeros((k, k));
    for (r_new, &r) in support.iter().enumerate() {
        for (c_new, &c) in support.iter().enumerate() {
            let scale = (es.values[r] * es.values[c]).sqrt();
            m[(r_new, c_new)] = b[(r, c)] / crate::cmat::creal(scale);
        }
    }
    let top = eigh(&m)?.values.last().copied().unwrap_or(T::zero());
    if top <= T::zero() {
        return Ok(T::neg_infinity());
    }
    Ok(top.ln())
}

/// Petz Rényi-2 divergence `ln Tr[ρ² σ^{-1}]` on the support of σ; `+∞` when
/// `supp(ρ) ⊄ supp(σ)`. Monotone under channels, so usable as a
/// data-processing certificate alongside S₀, S₁ and S_∞.
pub fn quantum_petz_2<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} vs {}",
            rho.dim(),
            sigma.dim()
        )));
    }
    let tol = rank_tol::<T>();
    let es = eigh(sigma.matrix())?;
    let n = rho.dim();
    // ρ in σ's eigenbasis, then Tr[ρ² σ^{-1}] = Σ_{ab} |ρ_ab|² / s_b.
    let mut b = CMat::<T>::zeros((n, n));
    for r in 0..n {
        for c in 0..n {
            let mut acc = crate::cmat::czero::<T>();
            for i in 0..n {
                for j in 0..n {
                    acc = acc + es.vectors[(i, r)].conj() * rho.matrix()[(i, j)] * es.vectors[(j, c)];
                }
            }
            b[(r, c)] = acc;
        }
    }
    let mut total = T::zero();
    for a in 0..n {
        for bb in 0..n {
            let w = b[(a, bb)].norm_sqr();
            if w <= T::epsilon() {
                continue;
            }
            if es.values[bb] <= tol {
                return Ok(T::infinity());
            }
            total += w / es.values[bb];
        }
    }
    Ok(total.ln())
}

/// Max entropy `H₀(p) = ln #{i : p_i > tol}`.
pub fn max_entropy_h0<T: Real>(p: &ProbDist<T>) -> T {
    let count = p.support_size(rank_tol::<T>());
    T::cast(count as f64).ln()
}

/// Nonequilibrium free energy `F(ρ) = (S₁(ρ‖ρ_G) − ln Z)/β`. Errors for
/// `β = 0`, where the prefactor is ill-defined.
pub fn free_energy<T: Real>(rho: &DensityMatrix<T>, spec: &GibbsSpec<T>) -> Result<T> {
    if spec.beta <= T::zero() {
        return Err(Error::InvalidInput(
            "free energy needs beta > 0 (the 1/beta prefactor is ill-defined at beta = 0)".into(),
        ));
    }
    let g = crate::statekit::gibbs_state(spec)?;
    let s1 = quantum_relative_entropy(rho, &g)?;
    let ln_z = spec.ln_partition()?;
    Ok((s1 - ln_z) / spec.beta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statekit::Hamiltonian;

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn f_alpha_reference_values() {
        let half = ProbDist::<f64>::uniform(2);
        assert!((f_alpha(&half, 1.0) + LN2).abs() < 1e-14);
        assert!((f_alpha(&half, 2.0) - 0.5f64.ln()).abs() < 1e-14);
        let point = ProbDist::<f64>::new(vec![1.0]).unwrap();
        for a in [-3.0, 0.0, 0.5, 1.0, 2.0, f64::INFINITY, f64::NEG_INFINITY] {
            assert!(f_alpha(&point, a).abs() < 1e-12, "alpha={a}");
        }
    }

    #[test]
    fn f_alpha_zero_entries_diverge_at_nonpositive_alpha() {
        let p = ProbDist::<f64>::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(f_alpha(&p, 0.0), f64::INFINITY);
        assert_eq!(f_alpha(&p, -1.0), f64::INFINITY);
        assert!(f_alpha(&p, 0.5).is_finite());
    }

    #[test]
    fn renyi_reference_values() {
        let p = ProbDist::<f64>::new(vec![0.75, 0.25]).unwrap();
        let q = ProbDist::<f64>::uniform(2);
        for a in AlphaGrid::<f64>::default().alphas() {
            let self_div = renyi_divergence(&p, &p, a).unwrap().value;
            assert!(self_div.abs() < 1e-10, "S_{a}(p||p) = {self_div}");
        }
        let s1 = renyi_divergence(&p, &q, 1.0).unwrap().value;
        assert!((s1 - 0.1308120).abs() < 1e-6);
        let sinf = renyi_divergence(&p, &q, f64::INFINITY).unwrap().value;
        assert!((sinf - 1.5f64.ln()).abs() < 1e-12);
        // S_{−∞}(p‖q) = S_∞(q‖p) = ln max q/p = ln 2.
        let sneg = renyi_divergence(&p, &q, f64::NEG_INFINITY).unwrap().value;
        assert!((sneg - 2.0f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn quantum_relative_entropy_reference_values() {
        let rho = DensityMatrix::<f64>::basis_state(2, 0);
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!(quantum_relative_entropy(&rho, &rho).unwrap() < 1e-10);
        assert!((quantum_relative_entropy(&rho, &mixed).unwrap() - LN2).abs() < 1e-12);

        let a = DensityMatrix::<f64>::from_diagonal(&[0.75, 0.25]).unwrap();
        let s = quantum_relative_entropy(&a, &mixed).unwrap();
        assert!((s - 0.1308120).abs() < 1e-6);
    }

    #[test]
    fn quantum_renyi_0_reference_values() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        let rho = DensityMatrix::<f64>::basis_state(2, 0);
        let full = DensityMatrix::<f64>::from_diagonal(&[0.6, 0.4]).unwrap();
        assert!(quantum_renyi_0(&full, &mixed).unwrap().abs() < 1e-12);
        assert!((quantum_renyi_0(&rho, &mixed).unwrap() - LN2).abs() < 1e-12);
        let other = DensityMatrix::<f64>::basis_state(2, 1);
        assert_eq!(quantum_renyi_0(&rho, &other).unwrap(), f64::INFINITY);
    }

    #[test]
    fn quantum_renyi_inf_reference_values() {
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        let rho = DensityMatrix::<f64>::basis_state(2, 0);
        assert!(quantum_renyi_inf(&mixed, &mixed).unwrap().abs() < 1e-12);
        assert!((quantum_renyi_inf(&rho, &mixed).unwrap() - LN2).abs() < 1e-12);
        let a = DensityMatrix::<f64>::from_diagonal(&[0.75, 0.25]).unwrap();
        assert!((quantum_renyi_inf(&a, &mixed).unwrap() - 1.5f64.ln()).abs() < 1e-12);
        let other = DensityMatrix::<f64>::basis_state(2, 1);
        assert_eq!(quantum_renyi_inf(&rho, &other).unwrap(), f64::INFINITY);
    }

    #[test]
    fn max_entropy_thresholds() {
        let p = ProbDist::<f64>::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(max_entropy_h0(&p).abs() < 1e-14);
        let u = ProbDist::<f64>::uniform(5);
        assert!((max_entropy_h0(&u) - 5.0f64.ln()).abs() < 1e-14);
        // An entry below the default 1e-9 threshold does not count.
        let edge = ProbDist::<f64>::new(vec![0.5, 0.5 - 1e-15, 1e-15]).unwrap();
        assert!((max_entropy_h0(&edge) - LN2).abs() < 1e-14);
    }

    #[test]
    fn free_energy_reference_values() {
        let h = Hamiltonian::<f64>::diagonal(vec![0.0, 1.0]).unwrap();
        let spec = GibbsSpec::new(h, 1.0).unwrap();
        let g = crate::statekit::gibbs_state(&spec).unwrap();
        let ln_z = (1.0 + (-1.0f64).exp()).ln();
        let f_eq = free_energy(&g, &spec).unwrap();
        assert!((f_eq + ln_z).abs() < 1e-10);

        // Ground state at β = 1: F = E − TS = 0 exactly.
        let ground = DensityMatrix::<f64>::basis_state(2, 0);
        let f0 = free_energy(&ground, &spec).unwrap();
        assert!(f0.abs() < 1e-10, "F(ground) = {f0}");

        let beta0 = GibbsSpec::new(Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap(), 0.0).unwrap();
        assert!(free_energy(&ground, &beta0).is_err());
    }

    #[test]
    fn petz2_matches_classical() {
        let p = DensityMatrix::<f64>::from_diagonal(&[0.9, 0.1]).unwrap();
        let q = DensityMatrix::<f64>::maximally_mixed(2);
        let expect = (2.0f64 * (0.81 + 0.01)).ln();
        assert!((quantum_petz_2(&p, &q).unwrap() - expect).abs() < 1e-12);
    }
}
