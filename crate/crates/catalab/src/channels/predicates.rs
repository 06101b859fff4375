//! Predicates classifying channels as thermodynamically free, and the
//! thermal-operation constructor.

use num_complex::Complex;

use crate::channels::Channel;
use crate::cmat::{creal, dagger, kron, CMat};
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{gibbs_state, DensityMatrix, GibbsSpec, Hamiltonian};

/// Trace distance between `E(ρ_G)` and `ρ_G`.
pub fn gibbs_preserving_residual<T: Real>(ch: &Channel<T>, spec: &GibbsSpec<T>) -> Result<T> {
    if !ch.is_square() || ch.dim_in() != spec.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel {}→{} vs Gibbs spec dim {}",
            ch.dim_in(),
            ch.dim_out(),
            spec.dim()
        )));
    }
    let g = gibbs_state(spec)?;
    let out = ch.apply(&g)?;
    crate::statekit::trace_distance(&out, &g)
}

/// Does the channel fix the thermal state within `tol`?
pub fn is_gibbs_preserving<T: Real>(
    ch: &Channel<T>,
    spec: &GibbsSpec<T>,
    tol: T,
) -> Result<bool> {
    Ok(gibbs_preserving_residual(ch, spec)? <= tol)
}

/// Largest Choi entry connecting a Bohr frequency of the input to a
/// different Bohr frequency of the output, measured in the Hamiltonian
/// eigenbasis. Zero (up to `tol`) exactly when the channel commutes with
/// time evolution for every `t`: for a finite spectrum the all-`t`
/// covariance condition is equivalent to this mode-block structure, so the
/// finite check is exact.
pub fn covariance_residual<T: Real>(ch: &Channel<T>, h: &Hamiltonian<T>) -> Result<T> {
    if !ch.is_square() || ch.dim_in() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel {}→{} vs Hamiltonian dim {}",
            ch.dim_in(),
            ch.dim_out(),
            h.dim()
        )));
    }
    let d = h.dim();
    let choi = ch.choi();
    // Rotate the Choi matrix into the energy eigenbasis: W = Uᵀ ⊗ U†.
    let choi = if h.is_diagonal_basis() {
        choi
    } else {
        let u = h.basis();
        let mut ut = CMat::<T>::zeros((d, d));
        for i in 0..d {
            for j in 0..d {
                ut[(i, j)] = u[(j, i)];
            }
        }
        let w = kron(&ut, &dagger(u));
        w.dot(&choi).dot(&dagger(&w))
    };
    let e = h.energies();
    let mode_tol = crate::real::Tolerances::<T>::default().mode;
    let mut worst = T::zero();
    for i in 0..d {
        for o in 0..d {
            for j in 0..d {
                for p in 0..d {
                    let mode_in = e[i] - e[j];
                    let mode_out = e[o] - e[p];
                    if (mode_in - mode_out).abs() <= mode_tol {
                        continue;
                    }
                    let v = choi[(i * d + o, j * d + p)].norm();
                    if v > worst {
                        worst = v;
                    }
                }
            }
        }
    }
    Ok(worst)
}

/// Is the channel covariant with respect to `h` within `tol`?
pub fn is_covariant<T: Real>(ch: &Channel<T>, h: &Hamiltonian<T>, tol: T) -> Result<bool> {
    Ok(covariance_residual(ch, h)? <= tol)
}

/// Is the state invariant under time evolution generated by `h`?
/// Off-diagonal matrix elements between distinct energies must vanish;
/// coherence inside degenerate blocks is unconstrained.
pub fn is_incoherent<T: Real>(state: &DensityMatrix<T>, h: &Hamiltonian<T>, tol: T) -> Result<bool> {
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
    let mode_tol = crate::real::Tolerances::<T>::default().mode;
    for i in 0..h.dim() {
        for j in 0..h.dim() {
            if (e[i] - e[j]).abs() <= mode_tol {
                continue;
            }
            if b[(i, j)].norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Channel induced by coupling the system to a bath in its thermal state
/// through an energy-conserving unitary, then discarding the bath:
/// `E(ρ) = Tr_B[U (ρ ⊗ γ_B) U†]`.
///
/// `u` acts on the composite system ⊗ bath space (row-major, system first)
/// and must commute with `H_S ⊗ I + I ⊗ H_B` within `tol`.
pub fn thermal_operation<T: Real>(
    u: &CMat<T>,
    sys: &GibbsSpec<T>,
    bath: &GibbsSpec<T>,
    tol: T,
) -> Result<Channel<T>> {
    let ds = sys.dim();
    let db = bath.dim();
    let d = ds * db;
    if u.dim() != (d, d) {
        return Err(Error::DimensionMismatch(format!(
            "unitary is {:?}, expected {d}x{d} for system {ds} x bath {db}",
            u.dim()
        )));
    }
    let dev = crate::cmat::unitarity_deviation(u);
    if dev > T::cast(1e-9) {
        return Err(Error::InvalidInput(format!(
            "coupling matrix is not unitary (deviation {dev:e})"
        )));
    }
    let h_total = sys
        .hamiltonian
        .compose_with(&bath.hamiltonian)?
        .matrix();
    let comm = u.dot(&h_total) - h_total.dot(u);
    let comm_norm = comm.iter().fold(T::zero(), |acc, c| acc.max(c.norm()));
    if comm_norm > tol {
        return Err(Error::Precondition(format!(
            "unitary is not energy conserving: ‖[U, H_S⊗I + I⊗H_B]‖ = {comm_norm:e} > {tol:e}"
        )));
    }

    // Work in the bath energy eigenbasis, where γ_B is diagonal.
    let weights = bath.gibbs_weights()?;
    let m = if bath.hamiltonian.is_diagonal_basis() {
        u.clone()
    } else {
        let vb = bath.hamiltonian.basis();
        let lift = kron(&crate::cmat::identity(ds), vb);
        dagger(&lift).dot(u).dot(&lift)
    };

    // Kraus operators K_{b'b}[s',s] = √γ_b · M[(s',b'),(s,b)].
    let mut kraus = Vec::with_capacity(db * db);
    for b_out in 0..db {
        for b_in in 0..db {
            let w = weights[b_in].sqrt();
            if w <= T::epsilon() {
                continue;
            }
            let mut k = CMat::<T>::zeros((ds, ds));
            for s_out in 0..ds {
                for s_in in 0..ds {
                    k[(s_out, s_in)] =
                        m[(s_out * db + b_out, s_in * db + b_in)] * creal(w);
                }
            }
            if k.iter().all(|c| c.norm_sqr() == T::zero()) {
                continue;
            }
            kraus.push(k);
        }
    }
    let ch = Channel::from_kraus(ds, ds, kraus)?;

    // The construction guarantees both properties; re-verify numerically so
    // a bad unitary cannot slip through the commutator tolerance.
    let gp = gibbs_preserving_residual(&ch, sys)?;
    let cov = covariance_residual(&ch, &sys.hamiltonian)?;
    let check_tol = T::cast(1e-8).max(tol * T::cast(10.0));
    if gp > check_tol || cov > check_tol {
        return Err(Error::Numerical(format!(
            "thermal operation failed its own checks: Gibbs residual {gp:e}, covariance residual {cov:e}"
        )));
    }
    Ok(ch)
}

/// Swap unitary on `d ⊗ d`.
pub fn swap_unitary<T: Real>(d: usize) -> CMat<T> {
    let mut u = CMat::<T>::zeros((d * d, d * d));
    for a in 0..d {
        for b in 0..d {
            u[(b * d + a, a * d + b)] = Complex::new(T::one(), T::zero());
        }
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::StochasticMatrix;
    use crate::cmat::identity;
    use crate::statekit::trace_distance;
    use ndarray::array;

    fn qubit_spec(beta: f64) -> GibbsSpec<f64> {
        GibbsSpec::new(Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap(), beta).unwrap()
    }

    #[test]
    fn identity_channel_is_gibbs_preserving_and_covariant() {
        let ch = Channel::<f64>::identity(2);
        let spec = qubit_spec(1.3);
        assert!(is_gibbs_preserving(&ch, &spec, 1e-10).unwrap());
        assert!(is_covariant(&ch, &spec.hamiltonian, 1e-10).unwrap());
    }

    #[test]
    fn depolarizing_preserves_gibbs_only_at_infinite_temperature() {
        let ch = Channel::<f64>::completely_depolarizing(2);
        assert!(is_gibbs_preserving(&ch, &qubit_spec(0.0), 1e-10).unwrap());
        assert!(!is_gibbs_preserving(&ch, &qubit_spec(1.0), 1e-3).unwrap());
    }

    #[test]
    fn relaxation_toward_gibbs_is_gibbs_preserving() {
        // Mixture of identity and replace-with-ρ_G: fixed point is ρ_G.
        let spec = qubit_spec(0.7);
        let g = gibbs_state(&spec).unwrap();
        let lam = 0.35;
        let id_choi = Channel::<f64>::identity(2).choi();
        let rep_choi = Channel::constant(&g).choi();
        let mixed = &id_choi * Complex::new(1.0 - lam, 0.0) + &rep_choi * Complex::new(lam, 0.0);
        let ch = Channel::from_choi(2, 2, mixed).unwrap();
        assert!(is_gibbs_preserving(&ch, &spec, 1e-10).unwrap());
    }

    #[test]
    fn dephasing_is_covariant_hadamard_is_not() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap();
        let dephase = Channel::classical(&StochasticMatrix::<f64>::identity(2));
        assert!(is_covariant(&dephase, &h, 1e-10).unwrap());

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let had = array![
            [Complex::new(s, 0.0), Complex::new(s, 0.0)],
            [Complex::new(s, 0.0), Complex::new(-s, 0.0)]
        ];
        let ch = Channel::from_unitary(&had).unwrap();
        assert!(!is_covariant(&ch, &h, 1e-6).unwrap());

        // Fully degenerate Hamiltonian: every channel is covariant.
        let flat = Hamiltonian::diagonal(vec![2.0, 2.0]).unwrap();
        assert!(is_covariant(&ch, &flat, 1e-10).unwrap());
    }

    #[test]
    fn incoherence_respects_degeneracy() {
        let h = Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap();
        let diag = DensityMatrix::<f64>::from_diagonal(&[0.3, 0.7]).unwrap();
        assert!(is_incoherent(&diag, &h, 1e-10).unwrap());

        let plus = DensityMatrix::<f64>::new(array![
            [Complex::new(0.5, 0.0), Complex::new(0.5, 0.0)],
            [Complex::new(0.5, 0.0), Complex::new(0.5, 0.0)]
        ])
        .unwrap();
        assert!(!is_incoherent(&plus, &h, 1e-10).unwrap());

        let degenerate = Hamiltonian::diagonal(vec![1.0, 1.0]).unwrap();
        assert!(is_incoherent(&plus, &degenerate, 1e-10).unwrap());
    }

    #[test]
    fn identity_unitary_gives_identity_channel() {
        let sys = qubit_spec(1.0);
        let bath = qubit_spec(1.0);
        let ch = thermal_operation(&identity::<f64>(4), &sys, &bath, 1e-9).unwrap();
        let rho = DensityMatrix::<f64>::from_diagonal(&[0.9, 0.1]).unwrap();
        let out = ch.apply(&rho).unwrap();
        assert!(trace_distance(&out, &rho).unwrap() < 1e-12);
    }

    #[test]
    fn swap_with_identical_bath_thermalizes() {
        let sys = qubit_spec(1.7);
        let bath = qubit_spec(1.7);
        let u = swap_unitary::<f64>(2);
        let ch = thermal_operation(&u, &sys, &bath, 1e-9).unwrap();
        let rho = DensityMatrix::<f64>::basis_state(2, 1);
        let out = ch.apply(&rho).unwrap();
        let g = gibbs_state(&sys).unwrap();
        assert!(trace_distance(&out, &g).unwrap() < 1e-12);
        assert!(is_gibbs_preserving(&ch, &sys, 1e-9).unwrap());
    }

    #[test]
    fn energy_violating_unitary_is_rejected() {
        let sys = qubit_spec(1.0);
        let bath = qubit_spec(1.0);
        // Swap on a system/bath pair with mismatched Hamiltonians conserves
        // energy only if the spectra match; here we break it by hand with a
        // rotation between |01⟩ and |00⟩ (energy difference 1).
        let th = 0.4f64;
        let mut u = identity::<f64>(4);
        u[(0, 0)] = Complex::new(th.cos(), 0.0);
        u[(0, 1)] = Complex::new(-th.sin(), 0.0);
        u[(1, 0)] = Complex::new(th.sin(), 0.0);
        u[(1, 1)] = Complex::new(th.cos(), 0.0);
        assert!(matches!(
            thermal_operation(&u, &sys, &bath, 1e-9),
            Err(Error::Precondition(_))
        ));
    }
}
