//! Hermitian eigendecomposition via cyclic Jacobi rotations.
//!
//! Jacobi is slower than Householder+QR asymptotically but is simple,
//! backend-free, works for any [`Real`] scalar, and computes small
//! eigenvalues of (nearly) positive-semidefinite matrices to high relative
//! accuracy, which is what the PSD and support checks in this crate care
//! about. Desk-scale dimensions (≤ a few hundred) stay well under a second;
//! matrices that are already diagonal converge in zero sweeps.

use crate::cmat::{creal, CMat};
use crate::error::{Error, Result};
use crate::real::Real;

const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix: `a = V diag(λ) V†`.
///
/// Eigenvalues ascend; `vectors` holds the matching orthonormal
/// eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct Eigh<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

impl<T: Real> Eigh<T> {
    /// `V diag(f(λ)) V†` for a scalar function of the eigenvalues.
    pub fn apply_fn(&self, f: impl Fn(T) -> T) -> CMat<T> {
        let n = self.values.len();
        let mut out = CMat::<T>::zeros((n, n));
        for (k, &lam) in self.values.iter().enumerate() {
            let flam = f(lam);
            if flam == T::zero() {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)];
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj() * creal(flam);
                }
            }
        }
        out
    }
}

fn off_diagonal_sq<T: Real>(a: &CMat<T>) -> T {
    let n = a.nrows();
    let mut s = T::zero();
    for i in 0..n {
        for j in (i + 1)..n {
            s = s + a[(i, j)].norm_sqr();
        }
    }
    s
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// The input is only required to be Hermitian up to float noise; it is
/// symmetrized internally. Fails with [`Error::Numerical`] if the sweep
/// limit is exhausted, which does not occur for genuinely Hermitian input.
pub fn eigh<T: Real>(a: &CMat<T>) -> Result<Eigh<T>> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "eigh needs a square matrix, got {}x{}",
            n,
            a.ncols()
        )));
    }
    if n == 0 {
        return Ok(Eigh {
            values: vec![],
            vectors: CMat::<T>::zeros((0, 0)),
        });
    }

    let mut m = crate::cmat::hermitize(a);
    let mut v = crate::cmat::identity::<T>(n);

    let norm_sq = m.iter().fold(T::zero(), |acc, x| acc + x.norm_sqr());
    let scale = norm_sq.sqrt().max(T::one());
    // Converged when the off-diagonal Frobenius norm is at rounding level.
    let tol_sq = (T::epsilon() * scale * T::cast(n as f64)).powi(2);

    let mut sweeps = 0;
    while off_diagonal_sq(&m) > tol_sq {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::Numerical(
                "Jacobi eigensolver failed to converge (input not Hermitian?)".into(),
            ));
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let mag = apq.norm();
                if mag <= T::epsilon() * scale {
                    continue;
                }
                // Phase u makes the pivot real; then an ordinary real Jacobi
                // rotation annihilates it: for tau = (a_qq - a_pp) / (2|a_pq|)
                // the stable small root of t^2 + 2 tau t - 1 = 0 gives tan(theta).
                let u = apq / creal(mag);
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (T::cast(2.0) * mag);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = t * c;

                let gpq = u * creal(s); // G[p][q]
                let gqp = -u.conj() * creal(s); // G[q][p]
                let cc = creal(c);

                // Columns: M <- M G.
                for i in 0..n {
                    let mip = m[(i, p)];
                    let miq = m[(i, q)];
                    m[(i, p)] = mip * cc + miq * gqp;
                    m[(i, q)] = mip * gpq + miq * cc;
                }
                // Rows: M <- G† M.
                for j in 0..n {
                    let mpj = m[(p, j)];
                    let mqj = m[(q, j)];
                    m[(p, j)] = mpj * cc + mqj * gqp.conj();
                    m[(q, j)] = mpj * gpq.conj() + mqj * cc;
                }
                // Accumulate eigenvectors: V <- V G.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * cc + viq * gqp;
                    v[(i, q)] = vip * gpq + viq * cc;
                }
                m[(p, q)] = crate::cmat::czero();
                m[(q, p)] = crate::cmat::czero();
                m[(p, p)] = creal(m[(p, p)].re);
                m[(q, q)] = creal(m[(q, q)].re);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<T> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));

    let values: Vec<T> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMat::<T>::zeros((n, n));
    for (new_col, &old_col) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, new_col)] = v[(i, old_col)];
        }
    }
    Ok(Eigh { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh<T: Real>(a: &CMat<T>) -> Result<Vec<T>> {
    Ok(eigh(a)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{dagger, identity, max_abs_diff};
    use num_complex::Complex;

    fn reconstruct(e: &Eigh<f64>) -> CMat<f64> {
        e.apply_fn(|x| x)
    }

    #[test]
    fn diagonal_matrix_is_instant() {
        let m = crate::cmat::diag_real(&[3.0, -1.0, 2.0]);
        let e = eigh(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 2.0, 3.0]);
    }

    #[test]
    fn pauli_x_eigensystem() {
        let mut m: CMat<f64> = CMat::zeros((2, 2));
        m[(0, 1)] = Complex::new(1.0, 0.0);
        m[(1, 0)] = Complex::new(1.0, 0.0);
        let e = eigh(&m).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        assert!(max_abs_diff(&reconstruct(&e), &m) < 1e-13);
    }

    #[test]
    fn complex_hermitian_reconstruction() {
        // Fixed non-trivial Hermitian matrix with complex off-diagonals.
        let n = 5;
        let mut m: CMat<f64> = CMat::zeros((n, n));
        for i in 0..n {
            for j in 0..n {
                let re = ((i * 7 + j * 3) % 11) as f64 / 11.0;
                let im = if i == j {
                    0.0
                } else {
                    ((i * 5 + j * 2) % 13) as f64 / 13.0
                };
                m[(i, j)] = Complex::new(re, if i < j { im } else { 0.0 });
            }
        }
        m = crate::cmat::hermitize(&m);
        let e = eigh(&m).unwrap();
        assert!(max_abs_diff(&reconstruct(&e), &m) < 1e-12);
        let gram = dagger(&e.vectors).dot(&e.vectors);
        assert!(max_abs_diff(&gram, &identity(n)) < 1e-12);
        for k in 1..n {
            assert!(e.values[k] >= e.values[k - 1]);
        }
    }
}
