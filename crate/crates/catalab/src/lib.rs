//! # catalab
//!
//! Deciding thermodynamic state convertibility, classically and quantumly,
//! with and without correlated catalysts — and constructing the channels and
//! catalysts that do the converting.
//!
//! The toolkit covers, at desk scale (dimensions up to a few thousand):
//!
//! - **statekit** — density matrices, distributions, Hamiltonians, Gibbs
//!   states, tensor algebra; trace distance in the **full** Schatten 1-norm
//!   (orthogonal pure states sit at distance 2).
//! - **divergences** — the `f_α` family, classical and quantum Rényi
//!   divergences (orders 0, 1, ∞ and everything in between), free energy,
//!   exact Neyman–Pearson hypothesis testing, and smoothed-rate brackets on
//!   product blocks via type-class enumeration.
//! - **channels** — Choi/Kraus representations, Gibbs-preserving /
//!   covariant / incoherence predicates, thermal operations from
//!   energy-conserving dilations.
//! - **convertibility** — grid-decided criteria (catalytic majorization,
//!   Rényi second laws), single-potential criteria (free energy, max+Shannon
//!   entropy), the explicit two-branch conversion channel, a Dykstra
//!   feasibility solver with witness channels, trivialization, and
//!   block-size search for asymptotic conversion.
//! - **catalysis** — the explicit correlated-catalyst construction with
//!   measured restoration/error/correlation, coherence-mode analysis, and
//!   the two-level coherence amplifier.
//!
//! Core math is generic over the scalar type through [`Real`] (`f64` is the
//! default type parameter and what the CLI uses); the aliases below pin the
//! common instantiations.
//!
//! Verdicts are three-valued: anything within numerical slack of a
//! criterion boundary is reported `Inconclusive` rather than rounded to a
//! side, and infinities are in-band values, never panics.

pub mod cmat;
pub mod eigen;
mod error;
pub mod real;

pub mod catalysis;
pub mod channels;
pub mod convertibility;
pub mod corpus;
pub mod divergences;
pub mod io;
pub mod statekit;

pub use error::{Error, Result};
pub use real::{dim_cap, Real, Tolerances};

/// `f64` instantiations (the library default).
pub type DensityMatrix = statekit::DensityMatrix<f64>;
pub type ProbDist = statekit::ProbDist<f64>;
pub type Hamiltonian = statekit::Hamiltonian<f64>;
pub type GibbsSpec = statekit::GibbsSpec<f64>;
pub type Channel = channels::Channel<f64>;
pub type Verdict = convertibility::Verdict<f64>;

/// `f32` instantiations, for callers trading precision for footprint; the
/// default tolerances assume `f64`, so pass explicit ones.
pub type DensityMatrix32 = statekit::DensityMatrix<f32>;
pub type ProbDist32 = statekit::ProbDist<f32>;
