//! Dense complex-matrix helpers shared by every module.
//!
//! States, Hamiltonians and Choi matrices are all `ndarray` matrices over
//! `Complex<T>`; the handful of tensor-algebra primitives they need (kron,
//! dagger, multi-index bookkeeping) live here.

use ndarray::{Array1, Array2};
use num_complex::Complex;

use crate::real::Real;

pub type CMat<T> = Array2<Complex<T>>;
pub type CVec<T> = Array1<Complex<T>>;

pub fn czero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

pub fn creal<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    let mut m = CMat::<T>::zeros((n, n));
    for i in 0..n {
        m[(i, i)] = creal(T::one());
    }
    m
}

/// Conjugate transpose.
pub fn dagger<T: Real>(m: &CMat<T>) -> CMat<T> {
    let mut out = CMat::<T>::zeros((m.ncols(), m.nrows()));
    for ((i, j), v) in m.indexed_iter() {
        out[(j, i)] = v.conj();
    }
    out
}

pub fn trace<T: Real>(m: &CMat<T>) -> Complex<T> {
    let n = m.nrows().min(m.ncols());
    (0..n).fold(czero(), |acc, i| acc + m[(i, i)])
}

/// Largest entrywise deviation from Hermiticity, `max |M - M†|`.
pub fn hermiticity_deviation<T: Real>(m: &CMat<T>) -> T {
    let mut worst = T::zero();
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let d = (m[(i, j)] - m[(j, i)].conj()).norm();
            if d > worst {
                worst = d;
            }
        }
    }
    worst
}

/// Symmetrize `(M + M†)/2`, removing float-level Hermiticity drift.
pub fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    let half = T::cast(0.5);
    let mut out = m.clone();
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * creal(half);
            out[(i, j)] = avg;
        }
    }
    out
}

pub fn max_abs_diff<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    debug_assert_eq!(a.dim(), b.dim());
    a.iter()
        .zip(b.iter())
        .fold(T::zero(), |acc, (x, y)| acc.max((*x - *y).norm()))
}

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::<T>::zeros((ar * br, ac * bc));
    for ia in 0..ar {
        for ja in 0..ac {
            let va = a[(ia, ja)];
            if va.norm_sqr() == T::zero() {
                continue;
            }
            for ib in 0..br {
                for jb in 0..bc {
                    out[(ia * br + ib, ja * bc + jb)] = va * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn matmul<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.dot(b)
}

/// `|ket⟩⟨bra|` outer product.
pub fn outer<T: Real>(ket: &CVec<T>, bra: &CVec<T>) -> CMat<T> {
    let mut out = CMat::<T>::zeros((ket.len(), bra.len()));
    for (i, a) in ket.iter().enumerate() {
        for (j, b) in bra.iter().enumerate() {
            out[(i, j)] = *a * b.conj();
        }
    }
    out
}

/// Diagonal matrix from real entries.
pub fn diag_real<T: Real>(d: &[T]) -> CMat<T> {
    let mut m = CMat::<T>::zeros((d.len(), d.len()));
    for (i, x) in d.iter().enumerate() {
        m[(i, i)] = creal(*x);
    }
    m
}

/// Decompose a flat index into per-factor indices (row-major: first factor
/// varies slowest).
pub fn split_index(mut flat: usize, dims: &[usize]) -> Vec<usize> {
    let mut idx = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        idx[k] = flat % dims[k];
        flat /= dims[k];
    }
    idx
}

/// Inverse of [`split_index`].
pub fn join_index(idx: &[usize], dims: &[usize]) -> usize {
    idx.iter()
        .zip(dims.iter())
        .fold(0, |acc, (i, d)| acc * d + i)
}

/// Columnwise unitarity deviation `max |U†U - I|`.
pub fn unitarity_deviation<T: Real>(u: &CMat<T>) -> T {
    let gram = dagger(u).dot(u);
    max_abs_diff(&gram, &identity(u.ncols()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kron_and_index_roundtrip() {
        let a: CMat<f64> = diag_real(&[1.0, 2.0]);
        let b: CMat<f64> = diag_real(&[3.0, 5.0, 7.0]);
        let k = kron(&a, &b);
        assert_eq!(k.dim(), (6, 6));
        for flat in 0..6 {
            let idx = split_index(flat, &[2, 3]);
            assert_eq!(join_index(&idx, &[2, 3]), flat);
            let expect = [1.0, 2.0][idx[0]] * [3.0, 5.0, 7.0][idx[1]];
            assert_eq!(k[(flat, flat)].re, expect);
        }
    }

    #[test]
    fn hermiticity_checks() {
        let mut m: CMat<f64> = identity(2);
        m[(0, 1)] = Complex::new(0.0, 1.0);
        m[(1, 0)] = Complex::new(0.0, -1.0);
        assert!(hermiticity_deviation(&m) < 1e-15);
        m[(1, 0)] = Complex::new(0.0, -0.9);
        assert!(hermiticity_deviation(&m) > 0.09);
    }
}
