//! Core state representations: probability distributions, density matrices,
//! Hamiltonians and thermal states, plus the tensor-algebra primitives
//! (tensor, partial trace, trace distance, support projector) every other
//! module consumes.
//!
//! Distance convention: `trace_distance` is the **full** Schatten 1-norm
//! `‖a−b‖₁` (orthogonal pure states sit at distance 2, not 1). All epsilon
//! and delta thresholds in this crate are stated in that convention.

mod density;
mod hamiltonian;
mod prob;

pub use density::{
    partial_trace, support_projector, tensor, tensor_power, trace_distance, DensityMatrix,
};
pub use hamiltonian::{embed_classical, gibbs_state, GibbsSpec, Hamiltonian};
pub use prob::{trace_distance_dist, ProbDist};
