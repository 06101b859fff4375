//! CPTP maps and the predicate layer classifying them.
//!
//! Channels are canonically stored as (unnormalized) Choi matrices
//! `C = Σ_{ij} |i⟩⟨j| ⊗ E(|i⟩⟨j|)`, so complete positivity is PSD-ness of
//! `C` and trace preservation is `Tr_out[C] = I_in`. A Kraus-backed
//! representation is kept for channels whose Choi matrix would be too large
//! to validate spectrally (Kraus form is completely positive by
//! construction, leaving only the trace-preservation sum to check).

mod predicates;
mod stochastic;

pub use predicates::{
    covariance_residual, gibbs_preserving_residual, is_covariant, is_gibbs_preserving,
    is_incoherent, swap_unitary, thermal_operation,
};
pub use stochastic::StochasticMatrix;

use crate::cmat::{creal, dagger, hermiticity_deviation, identity, max_abs_diff, CMat};
use crate::error::{Error, Result};
use crate::real::{Real, Tolerances};
use crate::statekit::DensityMatrix;

#[derive(Debug, Clone)]
enum Repr<T: Real> {
    Choi(CMat<T>),
    Kraus(Vec<CMat<T>>),
}

/// A completely positive trace-preserving map between finite-dimensional
/// systems.
#[derive(Debug, Clone)]
pub struct Channel<T: Real = f64> {
    dim_in: usize,
    dim_out: usize,
    repr: Repr<T>,
}

/// Residuals from a full channel verification.
#[derive(Debug, Clone, Copy)]
pub struct ChannelReport<T: Real = f64> {
    /// `max |C - C†|` of the Choi matrix (0 for Kraus-backed channels).
    pub hermiticity: T,
    /// Smallest Choi eigenvalue (`≥ 0` up to tolerance for a CP map).
    /// Kraus-backed channels are CP by construction and report 0.
    pub min_choi_eigenvalue: T,
    /// `max |Tr_out[C] - I|`, equivalently `max |Σ K†K - I|`.
    pub tp_residual: T,
}

impl<T: Real> ChannelReport<T> {
    pub fn is_cptp(&self, tol: T) -> bool {
        self.hermiticity <= tol && self.min_choi_eigenvalue >= -tol && self.tp_residual <= tol
    }
}

impl<T: Real> Channel<T> {
    /// Build from a Choi matrix, verifying Hermiticity, positivity and trace
    /// preservation at the default channel tolerance.
    pub fn from_choi(dim_in: usize, dim_out: usize, choi: CMat<T>) -> Result<Self> {
        Self::from_choi_with_tolerance(dim_in, dim_out, choi, Tolerances::default().channel)
    }

    pub fn from_choi_with_tolerance(
        dim_in: usize,
        dim_out: usize,
        choi: CMat<T>,
        tol: T,
    ) -> Result<Self> {
        let ch = Self::from_choi_unverified(dim_in, dim_out, choi)?;
        let report = ch.verify()?;
        if !report.is_cptp(tol) {
            return Err(Error::InvalidChannel(format!(
                "Choi matrix fails CPTP checks at {tol:e}: hermiticity {:e}, min eigenvalue {:e}, TP residual {:e}",
                report.hermiticity, report.min_choi_eigenvalue, report.tp_residual
            )));
        }
        Ok(ch)
    }

    /// Shape checks only. For internal constructions whose positivity is
    /// guaranteed structurally (spectral PSD checks grow as the cube of the
    /// Choi dimension, which composite-system channels cannot afford).
    pub(crate) fn from_choi_unverified(
        dim_in: usize,
        dim_out: usize,
        choi: CMat<T>,
    ) -> Result<Self> {
        if dim_in == 0 || dim_out == 0 {
            return Err(Error::InvalidChannel("zero-dimensional channel".into()));
        }
        let d = dim_in * dim_out;
        if choi.dim() != (d, d) {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix is {:?}, expected {d}x{d}",
                choi.dim()
            )));
        }
        Ok(Channel {
            dim_in,
            dim_out,
            repr: Repr::Choi(choi),
        })
    }

    /// Build from Kraus operators (`dim_out × dim_in` each); verifies the
    /// completeness sum `Σ K†K = I`.
    pub fn from_kraus(dim_in: usize, dim_out: usize, kraus: Vec<CMat<T>>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("empty Kraus list".into()));
        }
        for (k, op) in kraus.iter().enumerate() {
            if op.dim() != (dim_out, dim_in) {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {k} is {:?}, expected {dim_out}x{dim_in}",
                    op.dim()
                )));
            }
        }
        let ch = Channel {
            dim_in,
            dim_out,
            repr: Repr::Kraus(kraus),
        };
        let resid = ch.tp_residual()?;
        let tol = Tolerances::<T>::default().channel;
        if resid > tol {
            return Err(Error::InvalidChannel(format!(
                "Kraus completeness residual {resid:e} exceeds {tol:e}"
            )));
        }
        Ok(ch)
    }

    /// Unitary conjugation channel `X ↦ U X U†`.
    pub fn from_unitary(u: &CMat<T>) -> Result<Self> {
        let n = u.nrows();
        if u.ncols() != n {
            return Err(Error::DimensionMismatch("unitary must be square".into()));
        }
        let dev = crate::cmat::unitarity_deviation(u);
        let tol = Tolerances::<T>::default().channel;
        if dev > tol {
            return Err(Error::InvalidChannel(format!(
                "matrix is not unitary (deviation {dev:e})"
            )));
        }
        Ok(Channel {
            dim_in: n,
            dim_out: n,
            repr: Repr::Kraus(vec![u.clone()]),
        })
    }

    pub fn identity(dim: usize) -> Self {
        Channel {
            dim_in: dim,
            dim_out: dim,
            repr: Repr::Kraus(vec![identity(dim)]),
        }
    }

    /// `X ↦ Tr[X]·σ` for a fixed output state.
    pub fn constant(state: &DensityMatrix<T>) -> Self {
        let d_out = state.dim();
        Channel {
            dim_in: d_out,
            dim_out: d_out,
            repr: Repr::Choi(crate::cmat::kron(&identity(d_out), state.matrix())),
        }
    }

    /// Completely depolarizing channel `X ↦ Tr[X]·I/d`.
    pub fn completely_depolarizing(dim: usize) -> Self {
        Self::constant(&DensityMatrix::maximally_mixed(dim))
    }

    /// Classical channel induced by a column-stochastic matrix: measures in
    /// the computational basis and resamples, `E(X) = Σ_{oi} M_{oi} X_{ii}
    /// |o⟩⟨o|`.
    pub fn classical(m: &StochasticMatrix<T>) -> Self {
        let (d_out, d_in) = m.entries().dim();
        let mut choi = CMat::<T>::zeros((d_in * d_out, d_in * d_out));
        for i in 0..d_in {
            for o in 0..d_out {
                choi[(i * d_out + o, i * d_out + o)] = creal(m.entries()[(o, i)]);
            }
        }
        Channel {
            dim_in: d_in,
            dim_out: d_out,
            repr: Repr::Choi(choi),
        }
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn is_square(&self) -> bool {
        self.dim_in == self.dim_out
    }

    /// Borrow the Choi matrix when that is the stored representation.
    pub fn choi_ref(&self) -> Option<&CMat<T>> {
        match &self.repr {
            Repr::Choi(c) => Some(c),
            Repr::Kraus(_) => None,
        }
    }

    /// The Choi matrix, materializing it from Kraus operators if needed.
    pub fn choi(&self) -> CMat<T> {
        match &self.repr {
            Repr::Choi(c) => c.clone(),
            Repr::Kraus(ops) => {
                let d = self.dim_in * self.dim_out;
                let mut c = CMat::<T>::zeros((d, d));
                for k in ops {
                    // w[(i,o)] = K[o,i]; C += w w†.
                    for i in 0..self.dim_in {
                        for o in 0..self.dim_out {
                            let wi = k[(o, i)];
                            if wi.norm_sqr() == T::zero() {
                                continue;
                            }
                            for j in 0..self.dim_in {
                                for p in 0..self.dim_out {
                                    c[(i * self.dim_out + o, j * self.dim_out + p)] +=
                                        wi * k[(p, j)].conj();
                                }
                            }
                        }
                    }
                }
                c
            }
        }
    }

    /// Kraus operators: stored ones, or derived from the Choi matrix by
    /// eigendecomposition keeping eigenvalues above `1e-10`.
    pub fn kraus(&self) -> Result<Vec<CMat<T>>> {
        match &self.repr {
            Repr::Kraus(ops) => Ok(ops.clone()),
            Repr::Choi(c) => {
                let e = crate::eigen::eigh(c)?;
                let cutoff = T::cast(1e-10);
                let mut ops = Vec::new();
                for (k, &lam) in e.values.iter().enumerate() {
                    if lam <= cutoff {
                        continue;
                    }
                    let s = lam.sqrt();
                    let mut op = CMat::<T>::zeros((self.dim_out, self.dim_in));
                    for i in 0..self.dim_in {
                        for o in 0..self.dim_out {
                            op[(o, i)] = e.vectors[(i * self.dim_out + o, k)] * creal(s);
                        }
                    }
                    ops.push(op);
                }
                if ops.is_empty() {
                    return Err(Error::InvalidChannel(
                        "Choi matrix has no eigenvalue above the Kraus threshold".into(),
                    ));
                }
                Ok(ops)
            }
        }
    }

    /// Linear action on an arbitrary matrix (no state validation).
    pub fn apply_matrix(&self, x: &CMat<T>) -> Result<CMat<T>> {
        if x.dim() != (self.dim_in, self.dim_in) {
            return Err(Error::DimensionMismatch(format!(
                "input is {:?}, channel expects {0}x{0}",
                self.dim_in,
            )));
        }
        match &self.repr {
            Repr::Choi(c) => {
                let mut y = CMat::<T>::zeros((self.dim_out, self.dim_out));
                for i in 0..self.dim_in {
                    for j in 0..self.dim_in {
                        let v = x[(i, j)];
                        if v.norm_sqr() == T::zero() {
                            continue;
                        }
                        for o in 0..self.dim_out {
                            for p in 0..self.dim_out {
                                y[(o, p)] += v * c[(i * self.dim_out + o, j * self.dim_out + p)];
                            }
                        }
                    }
                }
                Ok(y)
            }
            Repr::Kraus(ops) => {
                let mut y = CMat::<T>::zeros((self.dim_out, self.dim_out));
                for k in ops {
                    y = y + k.dot(x).dot(&dagger(k));
                }
                Ok(y)
            }
        }
    }

    /// Apply to a density matrix; the output is hermitized to absorb float
    /// drift and carries no factor structure.
    pub fn apply(&self, state: &DensityMatrix<T>) -> Result<DensityMatrix<T>> {
        let y = self.apply_matrix(state.matrix())?;
        Ok(DensityMatrix::trusted(crate::cmat::hermitize(&y), None))
    }

    fn tp_residual(&self) -> Result<T> {
        match &self.repr {
            Repr::Choi(c) => {
                let mut tr_out = CMat::<T>::zeros((self.dim_in, self.dim_in));
                for i in 0..self.dim_in {
                    for j in 0..self.dim_in {
                        let mut acc = crate::cmat::czero::<T>();
                        for o in 0..self.dim_out {
                            acc += c[(i * self.dim_out + o, j * self.dim_out + o)];
                        }
                        tr_out[(i, j)] = acc;
                    }
                }
                Ok(max_abs_diff(&tr_out, &identity(self.dim_in)))
            }
            Repr::Kraus(ops) => {
                let mut sum = CMat::<T>::zeros((self.dim_in, self.dim_in));
                for k in ops {
                    sum = sum + dagger(k).dot(k);
                }
                Ok(max_abs_diff(&sum, &identity(self.dim_in)))
            }
        }
    }

    /// Full verification report. For Choi-backed channels this runs a
    /// spectral PSD check (cost grows with the cube of the Choi dimension).
    pub fn verify(&self) -> Result<ChannelReport<T>> {
        let tp = self.tp_residual()?;
        match &self.repr {
            Repr::Choi(c) => {
                let herm = hermiticity_deviation(c);
                let evs = crate::eigen::eigvalsh(c)?;
                Ok(ChannelReport {
                    hermiticity: herm,
                    min_choi_eigenvalue: evs.first().copied().unwrap_or(T::zero()),
                    tp_residual: tp,
                })
            }
            Repr::Kraus(_) => Ok(ChannelReport {
                hermiticity: T::zero(),
                min_choi_eigenvalue: T::zero(),
                tp_residual: tp,
            }),
        }
    }
}

/// `compose(a, b) = a ∘ b` (apply `b` first, then `a`).
pub fn channel_compose<T: Real>(a: &Channel<T>, b: &Channel<T>) -> Result<Channel<T>> {
    if b.dim_out() != a.dim_in() {
        return Err(Error::DimensionMismatch(format!(
            "cannot compose: inner output dim {} vs outer input dim {}",
            b.dim_out(),
            a.dim_in()
        )));
    }
    let ca = a.choi();
    let cb = b.choi();
    let (din, dmid, dout) = (b.dim_in(), b.dim_out(), a.dim_out());
    let mut c = CMat::<T>::zeros((din * dout, din * dout));
    for i in 0..din {
        for j in 0..din {
            for m in 0..dmid {
                for n in 0..dmid {
                    let v = cb[(i * dmid + m, j * dmid + n)];
                    if v.norm_sqr() == T::zero() {
                        continue;
                    }
                    for k in 0..dout {
                        for l in 0..dout {
                            c[(i * dout + k, j * dout + l)] +=
                                v * ca[(m * dout + k, n * dout + l)];
                        }
                    }
                }
            }
        }
    }
    Channel::from_choi_unverified(din, dout, c)
}

/// Tensor product of channels acting on side-by-side systems.
pub fn channel_tensor<T: Real>(a: &Channel<T>, b: &Channel<T>) -> Result<Channel<T>> {
    let din = a.dim_in() * b.dim_in();
    let dout = a.dim_out() * b.dim_out();
    crate::real::check_dim_cap(din.max(dout))?;
    let ca = a.choi();
    let cb = b.choi();
    let mut c = CMat::<T>::zeros((din * dout, din * dout));
    for ia in 0..a.dim_in() {
        for ib in 0..b.dim_in() {
            for oa in 0..a.dim_out() {
                for ob in 0..b.dim_out() {
                    let row_in = ia * b.dim_in() + ib;
                    let row_out = oa * b.dim_out() + ob;
                    let row = row_in * dout + row_out;
                    for ja in 0..a.dim_in() {
                        for jb in 0..b.dim_in() {
                            for pa in 0..a.dim_out() {
                                for pb in 0..b.dim_out() {
                                    let col_in = ja * b.dim_in() + jb;
                                    let col_out = pa * b.dim_out() + pb;
                                    let col = col_in * dout + col_out;
                                    c[(row, col)] = ca
                                        [(ia * a.dim_out() + oa, ja * a.dim_out() + pa)]
                                        * cb[(ib * b.dim_out() + ob, jb * b.dim_out() + pb)];
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    Channel::from_choi_unverified(din, dout, c)
}
