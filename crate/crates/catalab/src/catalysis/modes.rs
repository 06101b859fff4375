//! Coherence-mode analysis: which energy differences carry off-diagonal
//! matrix elements, and when covariant conversion between mode patterns is
//! possible at all.

use crate::convertibility::{Certificate, Decision, Verdict};
use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};
use crate::statekit::{DensityMatrix, Hamiltonian};

/// Denominator cap for declaring two modes rationally related.
const RATIONAL_DENOMINATOR_CAP: u64 = 1_000;
/// Integer-multiple cap for the compatibility predicate.
const INTEGER_MULTIPLE_CAP: f64 = 1e6;

/// The set of Bohr frequencies `E_i − E_j` on which a state carries
/// coherence. Closed under negation; contains 0 whenever any populated
/// level exists (always, for a unit-trace state).
#[derive(Debug, Clone)]
pub struct ModeSet<T: Real = f64> {
    modes: Vec<T>,
    multiplicities: Vec<usize>,
}

impl<T: Real> ModeSet<T> {
    /// Sorted ascending, deduplicated at the mode-equality tolerance.
    pub fn modes(&self) -> &[T] {
        &self.modes
    }

    /// Number of `(i,j)` matrix-element pairs contributing to each mode.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn nonzero_modes(&self) -> Vec<T> {
        let tol = Tolerances::<T>::default().mode;
        self.modes
            .iter()
            .copied()
            .filter(|m| m.abs() > tol)
            .collect()
    }

    /// True when the state carries no coherence between distinct energies.
    pub fn is_incoherent(&self) -> bool {
        self.nonzero_modes().is_empty()
    }
}

/// Modes of `state` with respect to `h`: energy differences whose matrix
/// element (in the energy eigenbasis) exceeds `tol` in magnitude,
/// deduplicated at the mode-equality tolerance.
pub fn mode_set<T: Real>(
    state: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
    tol: T,
) -> Result<ModeSet<T>> {
    if state.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state dim {} vs Hamiltonian dim {}",
            state.dim(),
            h.dim()
        )));
    }
    let b = if h.is_diagonal_basis() {
        state.matrix().clone()
    } else {
        h.to_eigenbasis(state.matrix())
    };
    let e = h.energies();
    let mut raw: Vec<T> = Vec::new();
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if b[(i, j)].norm() > tol {
                raw.push(e[i] - e[j]);
            }
        }
    }
    raw.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let eq = Tolerances::<T>::default().mode;
    let mut modes = Vec::new();
    let mut multiplicities = Vec::new();
    for v in raw {
        match modes.last() {
            Some(&last) if (v - last).abs() <= eq => {
                *multiplicities.last_mut().unwrap() += 1;
            }
            _ => {
                modes.push(v);
                multiplicities.push(1);
            }
        }
    }
    Ok(ModeSet {
        modes,
        multiplicities,
    })
}

/// Is every nonzero target mode an integer multiple (up to `10^6`, within
/// `tol`) of some nonzero source mode? Vacuously true for incoherent
/// targets.
pub fn mode_compatible<T: Real>(source: &ModeSet<T>, target: &ModeSet<T>, tol: T) -> bool {
    let src = source.nonzero_modes();
    target.nonzero_modes().iter().all(|&tm| {
        src.iter().any(|&sm| {
            let ratio = tm / sm;
            let k = ratio.round();
            k.abs() >= T::one()
                && k.abs() <= T::cast(INTEGER_MULTIPLE_CAP)
                && (tm - k * sm).abs() <= tol
        })
    })
}

/// Best rational approximation `num/den` of `x` with `den ≤ cap`, via
/// continued-fraction convergents. Any approximation within `1e-9` at
/// denominators ≤ 10³ is necessarily a convergent (the error bound is far
/// below `1/(2·den²)`), so scanning convergents is exhaustive here.
fn rational_approx(x: f64, cap: u64) -> (i64, u64, f64) {
    let mut best = (x.round() as i64, 1u64, (x - x.round()).abs());
    let (mut h_prev, mut h) = (1i64, x.floor() as i64);
    let (mut k_prev, mut k) = (0u64, 1u64);
    let mut frac = x - x.floor();
    for _ in 0..64 {
        let err = (x - h as f64 / k as f64).abs();
        if err < best.2 {
            best = (h, k, err);
        }
        if frac.abs() < 1e-15 {
            break;
        }
        let next = 1.0 / frac;
        let a = next.floor();
        frac = next - a;
        let a = a as i64;
        let h_new = a
            .saturating_mul(h)
            .saturating_add(h_prev);
        let k_new = (a as u64).saturating_mul(k).saturating_add(k_prev);
        if k_new > cap {
            break;
        }
        h_prev = h;
        h = h_new;
        k_prev = k;
        k = k_new;
    }
    best
}

fn rationally_related(a: f64, b: f64) -> bool {
    let (_, _, err) = rational_approx(a / b, RATIONAL_DENOMINATOR_CAP);
    err <= 1e-9 * (a / b).abs().max(1.0)
}

/// Can `rho` be converted to `rho_prime` by a covariant operation with a
/// correlated catalyst, judging by coherence modes alone?
///
/// - incoherent source, coherent target: never (coherence cannot be
///   broadcast);
/// - a target mode with no source coherence on any rational multiple
///   (detected at denominators ≤ 10³): never;
/// - incoherent target: always (a constant covariant map prepares it);
/// - coherent source whose nonzero target modes are all integer multiples
///   of source modes: convertible with vanishing error;
/// - anything else (rational but non-integer relations, or integer factors
///   beyond the detection cap): Inconclusive.
pub fn broadcasting_verdict<T: Real>(
    rho: &DensityMatrix<T>,
    rho_prime: &DensityMatrix<T>,
    h: &Hamiltonian<T>,
) -> Result<Verdict<T>> {
    let tol = Tolerances::<T>::default().rank;
    let src = mode_set(rho, h, tol)?;
    let tgt = mode_set(rho_prime, h, tol)?;
    let cert = |offending: Option<T>| Certificate::ModeAnalysis {
        source_modes: src.modes().to_vec(),
        target_modes: tgt.modes().to_vec(),
        offending_mode: offending,
    };

    if tgt.is_incoherent() {
        return Ok(Verdict::new(Decision::Convertible, cert(None)).with_note(
            "target is incoherent: the constant preparation map is covariant",
        ));
    }
    if src.is_incoherent() {
        let offending = tgt.nonzero_modes().first().copied();
        return Ok(Verdict::new(Decision::NotConvertible, cert(offending))
            .with_note("source is incoherent and coherence cannot be broadcast"));
    }
    // A target mode with no rationally related source mode blocks the
    // conversion outright.
    let src_nonzero = src.nonzero_modes();
    for &tm in &tgt.nonzero_modes() {
        let related = src_nonzero
            .iter()
            .any(|&sm| rationally_related(tm.to_f64_lossy(), sm.to_f64_lossy()));
        if !related {
            return Ok(Verdict::new(Decision::NotConvertible, cert(Some(tm)))
                .with_note(format!(
                    "target mode {tm} is not a rational multiple (denominators ≤ {RATIONAL_DENOMINATOR_CAP}) of any source mode"
                )));
        }
    }
    if mode_compatible(&src, &tgt, Tolerances::<T>::default().mode) {
        return Ok(Verdict::new(Decision::Convertible, cert(None)).with_note(
            "every target mode is an integer multiple of a source mode; conversion with \
             vanishing error exists",
        ));
    }
    Ok(Verdict::new(Decision::Inconclusive, cert(None)).with_note(
        "target modes are rationally related to source modes but not integer multiples within \
         the detection cap",
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex;

    fn coherent_state_on(dim: usize, i: usize, j: usize) -> DensityMatrix<f64> {
        // Equal mixture of |i⟩,|j⟩ with full coherence between them, mixed
        // with a little identity to stay comfortably PSD.
        let mut m = crate::cmat::CMat::<f64>::zeros((dim, dim));
        let w = 0.1 / dim as f64;
        for k in 0..dim {
            m[(k, k)] = Complex::new(w, 0.0);
        }
        let bulk = 0.45;
        m[(i, i)] += Complex::new(bulk, 0.0);
        m[(j, j)] += Complex::new(bulk, 0.0);
        m[(i, j)] += Complex::new(bulk, 0.0);
        m[(j, i)] += Complex::new(bulk, 0.0);
        DensityMatrix::new(m).unwrap()
    }

    #[test]
    fn diagonal_state_has_only_the_zero_mode() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0, 2.5]).unwrap();
        let s = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let m = mode_set(&s, &h, 1e-9).unwrap();
        assert_eq!(m.modes(), &[0.0]);
        assert!(m.is_incoherent());
    }

    #[test]
    fn superposition_has_plus_minus_one() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap();
        let s = coherent_state_on(2, 0, 1);
        let m = mode_set(&s, &h, 1e-9).unwrap();
        assert_eq!(m.modes(), &[-1.0, 0.0, 1.0]);
        assert!(!m.is_incoherent());
    }

    #[test]
    fn degenerate_block_coherence_is_mode_zero() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0, 1.0]).unwrap();
        let s = coherent_state_on(3, 1, 2);
        let m = mode_set(&s, &h, 1e-9).unwrap();
        assert_eq!(m.modes(), &[0.0]);
        assert!(m.is_incoherent());
    }

    #[test]
    fn integer_multiples_are_compatible() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let src = mode_set(&coherent_state_on(4, 0, 1), &h, 1e-9).unwrap();
        let tgt = mode_set(&coherent_state_on(4, 0, 3), &h, 1e-9).unwrap();
        assert!(mode_compatible(&src, &tgt, 1e-9));
        assert!(!mode_compatible(&tgt, &src, 1e-9));
        // Incoherent target: vacuously compatible.
        let flat = mode_set(
            &DensityMatrix::maximally_mixed(4),
            &h,
            1e-9,
        )
        .unwrap();
        assert!(mode_compatible(&tgt, &flat, 1e-9));
    }

    #[test]
    fn broadcasting_reference_verdicts() {
        use crate::convertibility::Decision;
        // Mode-1 and mode-√2 levels in one spectrum.
        let h = Hamiltonian::diagonal(vec![0.0, 1.0, 2.0f64.sqrt()]).unwrap();

        // Incoherent source, coherent target.
        let diag = DensityMatrix::from_diagonal(&[0.5, 0.3, 0.2]).unwrap();
        let coherent = coherent_state_on(3, 0, 1);
        let v = broadcasting_verdict(&diag, &coherent, &h).unwrap();
        assert_eq!(v.decision, Decision::NotConvertible);

        // Mode 1 → mode 2 (integer multiple).
        let h4 = Hamiltonian::diagonal(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let src = coherent_state_on(4, 0, 1);
        let tgt = coherent_state_on(4, 1, 3);
        let v = broadcasting_verdict(&src, &tgt, &h4).unwrap();
        assert_eq!(v.decision, Decision::Convertible);

        // Mode √2 → mode 1: irrational relation.
        let src_sqrt2 = coherent_state_on(3, 0, 2);
        let tgt_mode1 = coherent_state_on(3, 0, 1);
        let v = broadcasting_verdict(&src_sqrt2, &tgt_mode1, &h).unwrap();
        assert_eq!(v.decision, Decision::NotConvertible);

        // Incoherent target is always reachable.
        let v = broadcasting_verdict(&src_sqrt2, &diag, &h).unwrap();
        assert_eq!(v.decision, Decision::Convertible);
    }

    #[test]
    fn rational_approx_finds_small_fractions() {
        let (n, d, err) = rational_approx(1.5, 1000);
        assert_eq!((n, d), (3, 2));
        assert!(err < 1e-12);
        let (_, _, err) = rational_approx(std::f64::consts::SQRT_2, 1000);
        assert!(err > 1e-9, "√2 must not look rational at cap 1000");
        let (n, d, err) = rational_approx(2_000_000.0, 1000);
        assert_eq!((n, d), (2_000_000, 1));
        assert!(err < 1e-12);
    }
}
