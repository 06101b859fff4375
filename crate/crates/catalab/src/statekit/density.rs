use num_complex::Complex;

use crate::cmat::{creal, hermiticity_deviation, join_index, kron, split_index, trace, CMat, CVec};
use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};

/// Density matrix: Hermitian, positive-semidefinite, unit trace, with an
/// optional tensor factorization used by partial traces and catalyst
/// constructions.
#[derive(Debug, Clone)]
pub struct DensityMatrix<T: Real = f64> {
    mat: CMat<T>,
    factor_dims: Option<Vec<usize>>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(mat: CMat<T>) -> Result<Self> {
        Self::with_options(mat, None, &Tolerances::default())
    }

    pub fn with_factors(mat: CMat<T>, factor_dims: Vec<usize>) -> Result<Self> {
        Self::with_options(mat, Some(factor_dims), &Tolerances::default())
    }

    pub fn with_options(
        mat: CMat<T>,
        factor_dims: Option<Vec<usize>>,
        tol: &Tolerances<T>,
    ) -> Result<Self> {
        let (r, c) = mat.dim();
        if r != c || r == 0 {
            return Err(Error::InvalidState(format!("matrix is {r}x{c}")));
        }
        crate::real::check_dim_cap(r)?;
        if let Some(dims) = &factor_dims {
            let prod: usize = dims.iter().product();
            if prod != r {
                return Err(Error::InvalidState(format!(
                    "factor dims {dims:?} multiply to {prod}, matrix dim is {r}"
                )));
            }
        }
        let herm = hermiticity_deviation(&mat);
        if herm > tol.validity {
            return Err(Error::InvalidState(format!(
                "Hermiticity deviation {herm:e} exceeds {:e}",
                tol.validity
            )));
        }
        let tr = trace(&mat);
        if (tr.re - T::one()).abs() > tol.validity || tr.im.abs() > tol.validity {
            return Err(Error::InvalidState(format!(
                "trace is {}+{}i (expected 1 within {:e})",
                tr.re, tr.im, tol.validity
            )));
        }
        let evs = crate::eigen::eigvalsh(&mat)?;
        let min_ev = evs.first().copied().unwrap_or(T::zero());
        if min_ev < -tol.validity {
            return Err(Error::InvalidState(format!(
                "smallest eigenvalue {min_ev:e} below -{:e}",
                tol.validity
            )));
        }
        Ok(DensityMatrix { mat, factor_dims })
    }

    /// Pure state `|ψ⟩⟨ψ|` from an (unnormalized) ket.
    pub fn from_ket(ket: &CVec<T>) -> Result<Self> {
        let norm_sq: T = ket.iter().map(|x| x.norm_sqr()).sum();
        if norm_sq <= T::zero() {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let mut m = CMat::<T>::zeros((ket.len(), ket.len()));
        for (i, a) in ket.iter().enumerate() {
            for (j, b) in ket.iter().enumerate() {
                m[(i, j)] = *a * b.conj() / creal(norm_sq);
            }
        }
        Self::new(m)
    }

    /// Computational basis state `|k⟩⟨k|`.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = CMat::<T>::zeros((dim, dim));
        m[(k, k)] = creal(T::one());
        DensityMatrix {
            mat: m,
            factor_dims: None,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        let w = T::one() / T::cast(dim as f64);
        DensityMatrix {
            mat: crate::cmat::diag_real(&vec![w; dim]),
            factor_dims: None,
        }
    }

    /// Diagonal state with the given spectrum (assumed a valid distribution).
    pub fn from_diagonal(probs: &[T]) -> Result<Self> {
        Self::new(crate::cmat::diag_real(probs))
    }

    /// Construct without re-validating; for internal paths whose outputs are
    /// valid by algebra (tensor products, partial traces of valid states).
    pub(crate) fn trusted(mat: CMat<T>, factor_dims: Option<Vec<usize>>) -> Self {
        DensityMatrix { mat, factor_dims }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.mat
    }

    pub fn factor_dims(&self) -> Option<&[usize]> {
        self.factor_dims.as_deref()
    }

    pub fn set_factor_dims(&mut self, dims: Vec<usize>) -> Result<()> {
        let prod: usize = dims.iter().product();
        if prod != self.dim() {
            return Err(Error::InvalidState(format!(
                "factor dims {dims:?} multiply to {prod}, state dim is {}",
                self.dim()
            )));
        }
        self.factor_dims = Some(dims);
        Ok(())
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<T>> {
        crate::eigen::eigvalsh(&self.mat)
    }

    /// Number of eigenvalues above the rank threshold.
    pub fn rank(&self, rank_tol: T) -> Result<usize> {
        Ok(self
            .eigenvalues()?
            .into_iter()
            .filter(|&e| e > rank_tol)
            .count())
    }

    pub fn is_full_rank(&self, rank_tol: T) -> Result<bool> {
        Ok(self.rank(rank_tol)? == self.dim())
    }

    /// Entrywise check that the matrix is diagonal within `tol`.
    pub fn is_diagonal(&self, tol: T) -> bool {
        for ((i, j), v) in self.mat.indexed_iter() {
            if i != j && v.norm() > tol {
                return false;
            }
        }
        true
    }

    pub fn diagonal_real(&self) -> Vec<T> {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).collect()
    }
}

/// Kronecker product of two states; factor lists concatenate (a missing
/// factorization counts as a single factor).
pub fn tensor<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
    crate::real::check_dim_cap(a.dim() * b.dim())?;
    let m = kron(a.matrix(), b.matrix());
    let fa = a
        .factor_dims()
        .map(|d| d.to_vec())
        .unwrap_or_else(|| vec![a.dim()]);
    let fb = b
        .factor_dims()
        .map(|d| d.to_vec())
        .unwrap_or_else(|| vec![b.dim()]);
    let dims = [fa, fb].concat();
    Ok(DensityMatrix::trusted(m, Some(dims)))
}

/// n-fold tensor power.
pub fn tensor_power<T: Real>(a: &DensityMatrix<T>, n: usize) -> Result<DensityMatrix<T>> {
    if n == 0 {
        return Ok(DensityMatrix::trusted(
            crate::cmat::identity(1),
            Some(vec![1]),
        ));
    }
    let mut out = a.clone();
    if out.factor_dims().is_none() {
        out.set_factor_dims(vec![a.dim()])?;
    }
    for _ in 1..n {
        out = tensor(&out, a)?;
    }
    Ok(out)
}

/// Reduced state on the factors listed in `keep` (ascending, deduplicated);
/// remaining factors are traced out. The kept factors stay in their original
/// order.
pub fn partial_trace<T: Real>(
    state: &DensityMatrix<T>,
    keep: &[usize],
) -> Result<DensityMatrix<T>> {
    let dims = state
        .factor_dims()
        .ok_or_else(|| Error::InvalidInput("partial_trace needs factor_dims".into()))?
        .to_vec();
    if keep.is_empty() {
        return Err(Error::InvalidInput("keep set is empty".into()));
    }
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    for &k in &keep {
        if k >= dims.len() {
            return Err(Error::UnknownFactor {
                index: k,
                count: dims.len(),
            });
        }
    }
    let keep_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = keep_dims.iter().product();
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

    let mut out = CMat::<T>::zeros((out_dim, out_dim));
    let mut full_row = vec![0usize; dims.len()];
    let mut full_col = vec![0usize; dims.len()];
    for r_out in 0..out_dim {
        let r_idx = split_index(r_out, &keep_dims);
        for c_out in 0..out_dim {
            let c_idx = split_index(c_out, &keep_dims);
            let mut acc = Complex::new(T::zero(), T::zero());
            for t in 0..traced_total {
                let t_idx = split_index(t, &traced_dims);
                for (pos, &f) in keep.iter().enumerate() {
                    full_row[f] = r_idx[pos];
                    full_col[f] = c_idx[pos];
                }
                for (pos, &f) in traced.iter().enumerate() {
                    full_row[f] = t_idx[pos];
                    full_col[f] = t_idx[pos];
                }
                acc += state.matrix()[(join_index(&full_row, &dims), join_index(&full_col, &dims))];
            }
            out[(r_out, c_out)] = acc;
        }
    }
    Ok(DensityMatrix::trusted(out, Some(keep_dims)))
}

/// Full Schatten 1-norm distance `‖a - b‖₁` (sum of singular values of the
/// difference; orthogonal pure states are at distance 2).
pub fn trace_distance<T: Real>(a: &DensityMatrix<T>, b: &DensityMatrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "states of dim {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    let diff = a.matrix() - b.matrix();
    let evs = crate::eigen::eigvalsh(&diff)?;
    Ok(evs.into_iter().map(|e| e.abs()).sum())
}

/// Projector onto the eigenspaces of `state` with eigenvalue above the rank
/// threshold. Idempotent and Hermitian up to solver accuracy.
pub fn support_projector<T: Real>(state: &DensityMatrix<T>, rank_tol: T) -> Result<CMat<T>> {
    let e = eigh(state.matrix())?;
    Ok(e.apply_fn(|lam| if lam > rank_tol { T::one() } else { T::zero() }))
}
