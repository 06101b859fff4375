use ndarray::Array2;

use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::ProbDist;

/// Column-stochastic matrix: nonnegative entries, every column summing to 1.
/// Acts on distributions as `p ↦ M p`. Doubly stochastic matrices (rows also
/// summing to 1) are the classical free maps at infinite temperature.
#[derive(Debug, Clone)]
pub struct StochasticMatrix<T: Real = f64> {
    m: Array2<T>,
}

impl<T: Real> StochasticMatrix<T> {
    pub fn new(m: Array2<T>) -> Result<Self> {
        let (rows, cols) = m.dim();
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("empty stochastic matrix".into()));
        }
        let tol = T::cast(1e-10);
        for ((r, c), &v) in m.indexed_iter() {
            if !(v >= -T::cast(1e-12)) || !v.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "entry ({r},{c}) = {v} is not a probability"
                )));
            }
        }
        for c in 0..cols {
            let s: T = (0..rows).map(|r| m[(r, c)]).sum();
            if (s - T::one()).abs() > tol {
                return Err(Error::InvalidInput(format!(
                    "column {c} sums to {s} (expected 1 within {tol:e})"
                )));
            }
        }
        Ok(StochasticMatrix { m })
    }

    pub fn identity(dim: usize) -> Self {
        StochasticMatrix {
            m: Array2::eye(dim),
        }
    }

    /// Permutation matrix sending input `i` to output `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let d = perm.len();
        let mut m = Array2::zeros((d, d));
        let mut seen = vec![false; d];
        for (i, &o) in perm.iter().enumerate() {
            if o >= d || seen[o] {
                return Err(Error::InvalidInput("not a permutation".into()));
            }
            seen[o] = true;
            m[(o, i)] = T::one();
        }
        Ok(StochasticMatrix { m })
    }

    pub fn entries(&self) -> &Array2<T> {
        &self.m
    }

    pub fn dim_in(&self) -> usize {
        self.m.ncols()
    }

    pub fn dim_out(&self) -> usize {
        self.m.nrows()
    }

    pub fn is_doubly_stochastic(&self, tol: T) -> bool {
        if self.m.nrows() != self.m.ncols() {
            return false;
        }
        (0..self.m.nrows()).all(|r| {
            let s: T = (0..self.m.ncols()).map(|c| self.m[(r, c)]).sum();
            (s - T::one()).abs() <= tol
        })
    }

    pub fn apply(&self, p: &ProbDist<T>) -> Result<ProbDist<T>> {
        if p.dim() != self.dim_in() {
            return Err(Error::DimensionMismatch(format!(
                "distribution dim {} vs matrix input dim {}",
                p.dim(),
                self.dim_in()
            )));
        }
        let mut out = vec![T::zero(); self.dim_out()];
        for (o, slot) in out.iter_mut().enumerate() {
            for i in 0..self.dim_in() {
                *slot += self.m[(o, i)] * p.as_slice()[i];
            }
        }
        // Exact-arithmetic output of a stochastic map is a distribution;
        // clamp float dust so validation cannot trip.
        let sum: T = out.iter().cloned().sum();
        let out: Vec<T> = out.into_iter().map(|x| x.max(T::zero()) / sum).collect();
        ProbDist::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn validates_columns() {
        let bad = array![[0.5, 0.2], [0.4, 0.8]];
        assert!(StochasticMatrix::<f64>::new(bad).is_err());
        let good = array![[0.5, 0.2], [0.5, 0.8]];
        assert!(StochasticMatrix::<f64>::new(good).is_ok());
    }

    #[test]
    fn doubly_stochastic_preserves_uniform() {
        let m = StochasticMatrix::<f64>::new(array![
            [0.5, 0.3, 0.2],
            [0.25, 0.45, 0.3],
            [0.25, 0.25, 0.5]
        ])
        .unwrap();
        assert!(m.is_doubly_stochastic(1e-12));
        let u = ProbDist::<f64>::uniform(3);
        let out = m.apply(&u).unwrap();
        for &x in out.as_slice() {
            assert!((x - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn permutation_round_trip() {
        let perm = StochasticMatrix::<f64>::permutation(&[2, 0, 1]).unwrap();
        let p = ProbDist::<f64>::new(vec![0.6, 0.3, 0.1]).unwrap();
        let out = perm.apply(&p).unwrap();
        assert_eq!(out.as_slice(), &[0.3, 0.1, 0.6]);
        assert!(perm.is_doubly_stochastic(1e-12));
    }
}
