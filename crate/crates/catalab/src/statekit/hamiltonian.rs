use ndarray::Array1;

use crate::cmat::{dagger, diag_real, unitarity_deviation, CMat};
use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};
use crate::statekit::density::DensityMatrix;
use crate::statekit::prob::ProbDist;

/// Hamiltonian stored spectrally: real energies plus the unitary of
/// eigenvectors (identity for a diagonal Hamiltonian). Gibbs states, mode
/// analysis and covariance checks all work from the spectrum, so this is the
/// native representation; a dense matrix can be ingested and is
/// eigendecomposed once.
#[derive(Debug, Clone)]
pub struct Hamiltonian<T: Real = f64> {
    energies: Array1<T>,
    basis: CMat<T>,
}

impl<T: Real> Hamiltonian<T> {
    /// Diagonal Hamiltonian with the given spectrum.
    pub fn diagonal(energies: Vec<T>) -> Result<Self> {
        let n = energies.len();
        Self::with_basis(energies, crate::cmat::identity(n))
    }

    pub fn with_basis(energies: Vec<T>, basis: CMat<T>) -> Result<Self> {
        Self::with_options(energies, basis, &Tolerances::default())
    }

    pub fn with_options(energies: Vec<T>, basis: CMat<T>, tol: &Tolerances<T>) -> Result<Self> {
        if energies.is_empty() {
            return Err(Error::InvalidInput("empty energy spectrum".into()));
        }
        crate::real::check_dim_cap(energies.len())?;
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(Error::InvalidInput("non-finite energy".into()));
        }
        if basis.nrows() != energies.len() || basis.ncols() != energies.len() {
            return Err(Error::DimensionMismatch(format!(
                "basis is {}x{}, expected {}x{}",
                basis.nrows(),
                basis.ncols(),
                energies.len(),
                energies.len()
            )));
        }
        let dev = unitarity_deviation(&basis);
        if dev > tol.validity {
            return Err(Error::InvalidInput(format!(
                "eigenbasis is not unitary (deviation {dev:e})"
            )));
        }
        Ok(Hamiltonian {
            energies: Array1::from(energies),
            basis,
        })
    }

    /// Ingest a dense Hermitian matrix, eigendecomposing it.
    pub fn from_matrix(mat: &CMat<T>) -> Result<Self> {
        let herm = crate::cmat::hermiticity_deviation(mat);
        if herm > T::cast(1e-10) {
            return Err(Error::InvalidInput(format!(
                "Hamiltonian matrix is not Hermitian (deviation {herm:e})"
            )));
        }
        let e = crate::eigen::eigh(mat)?;
        Ok(Hamiltonian {
            energies: Array1::from(e.values),
            basis: e.vectors,
        })
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &Array1<T> {
        &self.energies
    }

    /// Eigenvector unitary; column `k` is the eigenvector of energy `k`.
    pub fn basis(&self) -> &CMat<T> {
        &self.basis
    }

    pub fn is_diagonal_basis(&self) -> bool {
        crate::cmat::max_abs_diff(&self.basis, &crate::cmat::identity(self.dim())) == T::zero()
    }

    /// Dense matrix `U diag(E) U†`.
    pub fn matrix(&self) -> CMat<T> {
        let d = diag_real(self.energies.as_slice().expect("contiguous"));
        self.basis.dot(&d).dot(&dagger(&self.basis))
    }

    /// Rotate an operator into the energy eigenbasis: `U† M U`.
    pub fn to_eigenbasis(&self, m: &CMat<T>) -> CMat<T> {
        dagger(&self.basis).dot(m).dot(&self.basis)
    }

    /// Rotate an operator from eigenbasis coordinates back: `U M U†`.
    pub fn from_eigenbasis(&self, m: &CMat<T>) -> CMat<T> {
        self.basis.dot(m).dot(&dagger(&self.basis))
    }

    /// Direct sum rule for composites: energies of `H ⊗ I + I ⊗ H'` with the
    /// tensor-product eigenbasis.
    pub fn compose_with(&self, other: &Hamiltonian<T>) -> Result<Hamiltonian<T>> {
        crate::real::check_dim_cap(self.dim() * other.dim())?;
        let mut energies = Vec::with_capacity(self.dim() * other.dim());
        for &ea in self.energies.iter() {
            for &eb in other.energies.iter() {
                energies.push(ea + eb);
            }
        }
        let basis = crate::cmat::kron(&self.basis, &other.basis);
        Ok(Hamiltonian {
            energies: Array1::from(energies),
            basis,
        })
    }
}

/// Gibbs-state specification: a Hamiltonian at inverse temperature `β ≥ 0`.
#[derive(Debug, Clone)]
pub struct GibbsSpec<T: Real = f64> {
    pub hamiltonian: Hamiltonian<T>,
    pub beta: T,
}

impl<T: Real> GibbsSpec<T> {
    pub fn new(hamiltonian: Hamiltonian<T>, beta: T) -> Result<Self> {
        if !(beta >= T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidInput(format!(
                "inverse temperature must be a finite nonnegative real, got {beta}"
            )));
        }
        Ok(GibbsSpec { hamiltonian, beta })
    }

    pub fn dim(&self) -> usize {
        self.hamiltonian.dim()
    }

    /// Boltzmann weights `e^{-βE_i}/Z` in the energy eigenbasis, computed
    /// with the spectrum shifted by its minimum so the exponentials cannot
    /// overflow.
    pub fn gibbs_weights(&self) -> Result<Vec<T>> {
        let e_min = self
            .hamiltonian
            .energies()
            .iter()
            .cloned()
            .fold(T::infinity(), T::min);
        let weights: Vec<T> = self
            .hamiltonian
            .energies()
            .iter()
            .map(|&e| (-(self.beta) * (e - e_min)).exp())
            .collect();
        let z: T = weights.iter().cloned().sum();
        if !z.is_finite() || z <= T::zero() {
            return Err(Error::Numerical(format!(
                "partition function is {z} after energy rescaling"
            )));
        }
        Ok(weights.into_iter().map(|w| w / z).collect())
    }

    /// `ln Z = ln Σ e^{-βE_i}`, evaluated stably via the shifted spectrum.
    pub fn ln_partition(&self) -> Result<T> {
        let e_min = self
            .hamiltonian
            .energies()
            .iter()
            .cloned()
            .fold(T::infinity(), T::min);
        let z_shifted: T = self
            .hamiltonian
            .energies()
            .iter()
            .map(|&e| (-(self.beta) * (e - e_min)).exp())
            .sum();
        if !z_shifted.is_finite() || z_shifted <= T::zero() {
            return Err(Error::Numerical(format!(
                "partition function is {z_shifted} after energy rescaling"
            )));
        }
        Ok(z_shifted.ln() - self.beta * e_min)
    }

    /// Classical Gibbs distribution over energy levels.
    pub fn gibbs_dist(&self) -> Result<ProbDist<T>> {
        ProbDist::new(self.gibbs_weights()?)
    }
}

/// Thermal state `e^{-βH}/Z`, diagonal in the Hamiltonian eigenbasis.
pub fn gibbs_state<T: Real>(spec: &GibbsSpec<T>) -> Result<DensityMatrix<T>> {
    let weights = spec.gibbs_weights()?;
    let diag = diag_real(&weights);
    let mat = spec.hamiltonian.from_eigenbasis(&diag);
    // Rounding in the basis rotation is far below validity tolerance.
    Ok(DensityMatrix::trusted(crate::cmat::hermitize(&mat), None))
}

/// Density matrix diagonal in the Hamiltonian eigenbasis with spectrum `p`.
pub fn embed_classical<T: Real>(p: &ProbDist<T>, h: &Hamiltonian<T>) -> Result<DensityMatrix<T>> {
    if p.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distribution dim {} vs Hamiltonian dim {}",
            p.dim(),
            h.dim()
        )));
    }
    let diag = diag_real(p.as_slice());
    let mat = h.from_eigenbasis(&diag);
    Ok(DensityMatrix::trusted(crate::cmat::hermitize(&mat), None))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::max_abs_diff;
    use num_complex::Complex;

    #[test]
    fn gibbs_infinite_temperature_is_mixed() {
        let h = Hamiltonian::<f64>::diagonal(vec![0.0, 3.0]).unwrap();
        let spec = GibbsSpec::new(h, 0.0).unwrap();
        let g = gibbs_state(&spec).unwrap();
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!(max_abs_diff(g.matrix(), mixed.matrix()) < 1e-14);
    }

    #[test]
    fn gibbs_two_level_beta_one() {
        let h = Hamiltonian::<f64>::diagonal(vec![0.0, 1.0]).unwrap();
        let spec = GibbsSpec::new(h, 1.0).unwrap();
        let g = gibbs_state(&spec).unwrap();
        let z = 1.0 + (-1.0f64).exp();
        assert!((g.matrix()[(0, 0)].re - 1.0 / z).abs() < 1e-14);
        assert!((g.matrix()[(1, 1)].re - (-1.0f64).exp() / z).abs() < 1e-14);
        assert!((g.matrix()[(0, 0)].re - 0.731059).abs() < 1e-6);
        assert!((g.matrix()[(1, 1)].re - 0.268941).abs() < 1e-6);
    }

    #[test]
    fn gibbs_degenerate_spectrum_is_mixed() {
        let h = Hamiltonian::<f64>::diagonal(vec![5.0, 5.0]).unwrap();
        let spec = GibbsSpec::new(h, 2.7).unwrap();
        let g = gibbs_state(&spec).unwrap();
        let mixed = DensityMatrix::<f64>::maximally_mixed(2);
        assert!(max_abs_diff(g.matrix(), mixed.matrix()) < 1e-14);
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian() {
        // Non-diagonal basis: rotate by a fixed unitary.
        let th = 0.7f64;
        let mut u: CMat<f64> = CMat::zeros((2, 2));
        u[(0, 0)] = Complex::new(th.cos(), 0.0);
        u[(0, 1)] = Complex::new(-th.sin(), 0.0);
        u[(1, 0)] = Complex::new(th.sin(), 0.0);
        u[(1, 1)] = Complex::new(th.cos(), 0.0);
        let h = Hamiltonian::with_basis(vec![0.0, 2.0], u).unwrap();
        let spec = GibbsSpec::new(h.clone(), 0.8).unwrap();
        let g = gibbs_state(&spec).unwrap();
        let hm = h.matrix();
        let comm = g.matrix().dot(&hm) - hm.dot(g.matrix());
        let worst = comm.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        assert!(worst < 1e-10);
    }

    #[test]
    fn embed_classical_commutes() {
        let th = 0.3f64;
        let mut u: CMat<f64> = CMat::zeros((2, 2));
        u[(0, 0)] = Complex::new(th.cos(), 0.0);
        u[(0, 1)] = Complex::new(-th.sin(), 0.0);
        u[(1, 0)] = Complex::new(th.sin(), 0.0);
        u[(1, 1)] = Complex::new(th.cos(), 0.0);
        let h = Hamiltonian::with_basis(vec![0.0, 1.0], u).unwrap();
        let p = ProbDist::new(vec![0.7, 0.3]).unwrap();
        let rho = embed_classical(&p, &h).unwrap();
        let hm = h.matrix();
        let comm = rho.matrix().dot(&hm) - hm.dot(rho.matrix());
        let worst = comm.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        assert!(worst < 1e-12);

        let uniform = ProbDist::<f64>::uniform(2);
        let id_h = Hamiltonian::diagonal(vec![0.0, 1.0]).unwrap();
        let rho_u = embed_classical(&uniform, &id_h).unwrap();
        assert!(max_abs_diff(rho_u.matrix(), DensityMatrix::maximally_mixed(2).matrix()) < 1e-15);

        let point = ProbDist::<f64>::new(vec![1.0, 0.0]).unwrap();
        let rho_p = embed_classical(&point, &id_h).unwrap();
        assert!(
            max_abs_diff(rho_p.matrix(), DensityMatrix::basis_state(2, 0).matrix()) < 1e-15
        );
    }

    #[test]
    fn ln_partition_matches_direct_sum() {
        let h = Hamiltonian::<f64>::diagonal(vec![0.0, 1.0, 2.5]).unwrap();
        let spec = GibbsSpec::new(h, 1.3).unwrap();
        let direct: f64 =
            (-(1.3 * 0.0f64)).exp() + (-(1.3 * 1.0f64)).exp() + (-(1.3 * 2.5f64)).exp();
        assert!((spec.ln_partition().unwrap() - direct.ln()).abs() < 1e-12);
    }
}
