use ndarray::Array1;

use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};

/// Classical probability distribution: nonnegative entries summing to one.
///
/// Entries are clamped to `[0, 1]` only in the sense that validation rejects
/// anything outside tolerance; stored values are exactly what the caller
/// supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist<T: Real = f64> {
    probs: Array1<T>,
}

impl<T: Real> ProbDist<T> {
    pub fn new(probs: Vec<T>) -> Result<Self> {
        Self::with_tolerance(probs, &Tolerances::default())
    }

    pub fn with_tolerance(probs: Vec<T>, tol: &Tolerances<T>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidState("empty probability vector".into()));
        }
        crate::real::check_dim_cap(probs.len())?;
        let mut sum = T::zero();
        for (i, &p) in probs.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidState(format!("entry {i} is not finite")));
            }
            if p < -tol.nonneg {
                return Err(Error::InvalidState(format!(
                    "entry {i} is negative ({p:e})"
                )));
            }
            sum += p;
        }
        if (sum - T::one()).abs() > T::cast(1e-10) {
            return Err(Error::InvalidState(format!(
                "probabilities sum to {sum} (expected 1 within 1e-10)"
            )));
        }
        Ok(ProbDist {
            probs: Array1::from(probs),
        })
    }

    pub fn uniform(dim: usize) -> Self {
        let w = T::one() / T::cast(dim as f64);
        ProbDist {
            probs: Array1::from(vec![w; dim]),
        }
    }

    /// Deterministic distribution concentrated on `outcome`.
    pub fn point(dim: usize, outcome: usize) -> Self {
        let mut v = vec![T::zero(); dim];
        v[outcome] = T::one();
        ProbDist {
            probs: Array1::from(v),
        }
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &Array1<T> {
        &self.probs
    }

    pub fn as_slice(&self) -> &[T] {
        self.probs.as_slice().expect("contiguous")
    }

    /// Product distribution `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        crate::real::check_dim_cap(self.dim() * other.dim())?;
        let mut v = Vec::with_capacity(self.dim() * other.dim());
        for &a in self.probs.iter() {
            for &b in other.probs.iter() {
                v.push(a * b);
            }
        }
        Ok(ProbDist {
            probs: Array1::from(v),
        })
    }

    /// n-fold product with itself.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        let mut out = ProbDist {
            probs: Array1::from(vec![T::one()]),
        };
        for _ in 0..n {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// Number of entries above the support threshold.
    pub fn support_size(&self, rank_tol: T) -> usize {
        self.probs.iter().filter(|&&p| p > rank_tol).count()
    }

    pub fn is_full_rank(&self, rank_tol: T) -> bool {
        self.support_size(rank_tol) == self.dim()
    }

    /// True when `other` is a permutation of `self` (entrywise, within `tol`).
    pub fn is_permutation_of(&self, other: &Self, tol: T) -> bool {
        if self.dim() != other.dim() {
            return false;
        }
        let mut a: Vec<T> = self.probs.to_vec();
        let mut b: Vec<T> = other.probs.to_vec();
        a.sort_by(|x, y| x.partial_cmp(y).unwrap());
        b.sort_by(|x, y| x.partial_cmp(y).unwrap());
        a.iter().zip(b.iter()).all(|(x, y)| (*x - *y).abs() <= tol)
    }
}

/// `‖p - q‖₁ = Σ |p_i - q_i|` (full 1-norm; orthogonal points are at 2).
pub fn trace_distance_dist<T: Real>(a: &ProbDist<T>, b: &ProbDist<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of dim {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(a.probs()
        .iter()
        .zip(b.probs().iter())
        .map(|(x, y)| (*x - *y).abs())
        .sum())
}
