//! Decision procedures for state-pair convertibility.
//!
//! Every decider returns a three-valued [`Verdict`]: `Convertible`,
//! `NotConvertible`, or `Inconclusive`, the last covering anything within
//! numerical slack of a criterion boundary (grids standing in for "all α",
//! strict inequalities, equalities). A `NotConvertible` verdict always
//! carries a certificate that can be re-checked by evaluating the cited
//! quantities; a `Convertible` verdict from the feasibility solver carries
//! an explicit witness channel.

mod classical;
mod feasibility;
mod quantum;
mod stein;

pub use classical::{
    check_brandao, check_klimesh_turgut, check_muller_correlated, check_muller_exact, trivialize,
    Trivialization,
};
pub use feasibility::{pair_feasibility, DEFAULT_MAX_ITER, DEFAULT_TOL};
pub use quantum::{
    check_exact_full_rank, check_quantum_pair, faist_renner_channel,
    faist_renner_channel_with_report, fr_condition_holds, FrReport,
};
pub use stein::{classical_block_protocol, stein_block_size, BlockBracket, BlockProtocol, SteinSearch};

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{DensityMatrix, ProbDist};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Convertible,
    NotConvertible,
    Inconclusive,
}

/// Residuals reported by the feasibility solver.
#[derive(Debug, Clone, Copy)]
pub struct SolverResiduals<T: Real = f64> {
    /// `max(0, -λ_min)` of the candidate Choi matrix.
    pub psd: T,
    /// `max |Tr_out[C] - I|`.
    pub trace_preserving: T,
    /// `max |Λ(ρ) - ρ'|` entrywise.
    pub map_rho: T,
    /// `max |Λ(σ) - σ'|` entrywise.
    pub map_sigma: T,
    pub iterations: usize,
}

/// Machine-checkable evidence attached to a verdict.
#[derive(Debug, Clone)]
pub enum Certificate<T: Real = f64> {
    /// The criterion fails (or holds with the stated margin) at this order:
    /// `lhs` is the source-side quantity, `rhs` the target side.
    ViolatingAlpha { alpha: T, lhs: T, rhs: T },
    /// Criterion satisfied on the whole grid with this minimum margin.
    Margin { min_margin: T, alpha_at_min: T },
    /// Target is a relabeling of the source.
    Permutation,
    /// Source and target pairs coincide; the identity map converts.
    Identity,
    /// Explicit channel achieving the conversion, with measured residuals.
    WitnessChannel {
        channel: Box<Channel<T>>,
        residuals: SolverResiduals<T>,
    },
    /// Solver state at termination (used for Inconclusive outcomes).
    Solver(SolverResiduals<T>),
    /// Coherence-mode analysis backing a covariant-conversion verdict.
    ModeAnalysis {
        source_modes: Vec<T>,
        target_modes: Vec<T>,
        offending_mode: Option<T>,
    },
}

#[derive(Debug, Clone)]
pub struct Verdict<T: Real = f64> {
    pub decision: Decision,
    pub certificate: Certificate<T>,
    pub note: Option<String>,
}

impl<T: Real> Verdict<T> {
    pub fn new(decision: Decision, certificate: Certificate<T>) -> Self {
        Verdict {
            decision,
            certificate,
            note: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn is_convertible(&self) -> bool {
        self.decision == Decision::Convertible
    }

    pub fn is_not_convertible(&self) -> bool {
        self.decision == Decision::NotConvertible
    }

    pub fn is_inconclusive(&self) -> bool {
        self.decision == Decision::Inconclusive
    }
}

/// Thresholds used by the deciders.
#[derive(Debug, Clone, Copy)]
pub struct DecisionConfig<T: Real = f64> {
    /// Margin below which a grid criterion ("for all α") is Inconclusive.
    pub slack: T,
    /// Inconclusive band around equality for single-inequality criteria.
    pub band: T,
    /// Support threshold for full-rank checks.
    pub rank_tol: T,
    /// Entrywise tolerance for exact-equality and permutation fast paths.
    pub equality_tol: T,
}

impl<T: Real> Default for DecisionConfig<T> {
    fn default() -> Self {
        DecisionConfig {
            slack: T::cast(1e-6),
            band: T::cast(1e-9),
            rank_tol: T::cast(1e-9),
            equality_tol: T::cast(1e-12),
        }
    }
}

/// A source pair and target pair of classical distributions. The source and
/// target dimensions may differ; within each pair they must match.
#[derive(Debug, Clone)]
pub struct ClassicalPair<T: Real = f64> {
    pub p: ProbDist<T>,
    pub q: ProbDist<T>,
    pub p_prime: ProbDist<T>,
    pub q_prime: ProbDist<T>,
}

impl<T: Real> ClassicalPair<T> {
    pub fn new(
        p: ProbDist<T>,
        q: ProbDist<T>,
        p_prime: ProbDist<T>,
        q_prime: ProbDist<T>,
    ) -> Result<Self> {
        if p.dim() != q.dim() {
            return Err(Error::DimensionMismatch(format!(
                "source pair dims {} vs {}",
                p.dim(),
                q.dim()
            )));
        }
        if p_prime.dim() != q_prime.dim() {
            return Err(Error::DimensionMismatch(format!(
                "target pair dims {} vs {}",
                p_prime.dim(),
                q_prime.dim()
            )));
        }
        Ok(ClassicalPair {
            p,
            q,
            p_prime,
            q_prime,
        })
    }

    /// Embed as diagonal density matrices (trivial Hamiltonian basis).
    pub fn embed(&self) -> Result<QuantumPair<T>> {
        Ok(QuantumPair::new(
            DensityMatrix::from_diagonal(self.p.as_slice())?,
            DensityMatrix::from_diagonal(self.q.as_slice())?,
            DensityMatrix::from_diagonal(self.p_prime.as_slice())?,
            DensityMatrix::from_diagonal(self.q_prime.as_slice())?,
        )?)
    }
}

/// A source pair and target pair of quantum states.
#[derive(Debug, Clone)]
pub struct QuantumPair<T: Real = f64> {
    pub rho: DensityMatrix<T>,
    pub sigma: DensityMatrix<T>,
    pub rho_prime: DensityMatrix<T>,
    pub sigma_prime: DensityMatrix<T>,
}

impl<T: Real> QuantumPair<T> {
    pub fn new(
        rho: DensityMatrix<T>,
        sigma: DensityMatrix<T>,
        rho_prime: DensityMatrix<T>,
        sigma_prime: DensityMatrix<T>,
    ) -> Result<Self> {
        if rho.dim() != sigma.dim() {
            return Err(Error::DimensionMismatch(format!(
                "source pair dims {} vs {}",
                rho.dim(),
                sigma.dim()
            )));
        }
        if rho_prime.dim() != sigma_prime.dim() {
            return Err(Error::DimensionMismatch(format!(
                "target pair dims {} vs {}",
                rho_prime.dim(),
                sigma_prime.dim()
            )));
        }
        Ok(QuantumPair {
            rho,
            sigma,
            rho_prime,
            sigma_prime,
        })
    }

    pub fn dim_in(&self) -> usize {
        self.rho.dim()
    }

    pub fn dim_out(&self) -> usize {
        self.rho_prime.dim()
    }
}
