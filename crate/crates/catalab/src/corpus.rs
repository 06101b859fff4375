//! Deterministic random-instance generation for tests and the CLI.
//!
//! Everything flows through a caller-supplied seeded RNG (ChaCha in the
//! CLI), so corpora are bit-reproducible across runs and platforms; no
//! entropy is read from the environment.

use num_complex::Complex;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::channels::{Channel, StochasticMatrix};
use crate::cmat::{creal, dagger, CMat};
use crate::convertibility::QuantumPair;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::statekit::{DensityMatrix, ProbDist};

/// Seeded generator; sub-seeds derived per instance index keep corpora
/// order-independent.
pub fn rng_from_seed(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// Independent stream for instance `index` under a corpus seed.
pub fn rng_for_instance(seed: u64, index: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn standard_normal<T: Real>(rng: &mut impl Rng) -> T {
    // Box–Muller; the log argument is kept strictly positive.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    T::cast((-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos())
}

fn complex_gaussian<T: Real>(rng: &mut impl Rng) -> Complex<T> {
    Complex::new(standard_normal(rng), standard_normal(rng))
}

/// Haar-style random density matrix via the Gram construction `GG†/Tr[GG†]`
/// with a complex Gaussian `dim × rank` factor.
pub fn random_density_with_rank<T: Real>(
    rng: &mut impl Rng,
    dim: usize,
    rank: usize,
) -> Result<DensityMatrix<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::InvalidInput(format!(
            "rank {rank} out of range for dim {dim}"
        )));
    }
    let mut g = CMat::<T>::zeros((dim, rank));
    for i in 0..dim {
        for j in 0..rank {
            g[(i, j)] = complex_gaussian(rng);
        }
    }
    let gram = g.dot(&dagger(&g));
    let tr = crate::cmat::trace(&gram).re;
    let mat = gram.mapv(|x| x / creal(tr));
    DensityMatrix::new(crate::cmat::hermitize(&mat))
}

pub fn random_density<T: Real>(rng: &mut impl Rng, dim: usize) -> Result<DensityMatrix<T>> {
    random_density_with_rank(rng, dim, dim)
}

/// Full-rank random distribution: normalized exponentials, floored by a
/// small uniform admixture so the minimum entry stays well above the rank
/// threshold.
pub fn random_full_rank_dist<T: Real>(rng: &mut impl Rng, dim: usize) -> Result<ProbDist<T>> {
    let mut v: Vec<f64> = (0..dim)
        .map(|_| -(rng.gen_range(f64::MIN_POSITIVE..1.0f64)).ln())
        .collect();
    let sum: f64 = v.iter().sum();
    let floor = 1e-3 / dim as f64;
    let scale = 1.0 - 1e-3;
    for x in v.iter_mut() {
        *x = *x / sum * scale + floor;
    }
    ProbDist::new(v.into_iter().map(T::cast).collect())
}

/// Haar random unitary via modified Gram–Schmidt on a Gaussian matrix, with
/// a re-orthogonalization pass.
pub fn random_unitary<T: Real>(rng: &mut impl Rng, dim: usize) -> CMat<T> {
    let mut g = CMat::<T>::zeros((dim, dim));
    for i in 0..dim {
        for j in 0..dim {
            g[(i, j)] = complex_gaussian(rng);
        }
    }
    for _pass in 0..2 {
        for col in 0..dim {
            for prev in 0..col {
                let mut ip = crate::cmat::czero::<T>();
                for r in 0..dim {
                    ip = ip + g[(r, prev)].conj() * g[(r, col)];
                }
                for r in 0..dim {
                    let sub = g[(r, prev)] * ip;
                    g[(r, col)] -= sub;
                }
            }
            let norm: T = (0..dim)
                .map(|r| g[(r, col)].norm_sqr())
                .sum::<T>()
                .sqrt();
            for r in 0..dim {
                g[(r, col)] = g[(r, col)] / creal(norm);
            }
        }
    }
    g
}

/// Random column-stochastic matrix (columns from normalized exponentials).
pub fn random_stochastic<T: Real>(rng: &mut impl Rng, dim: usize) -> Result<StochasticMatrix<T>> {
    let mut m = ndarray::Array2::<T>::zeros((dim, dim));
    for c in 0..dim {
        let col = random_full_rank_dist::<T>(rng, dim)?;
        for r in 0..dim {
            m[(r, c)] = col.as_slice()[r];
        }
    }
    StochasticMatrix::new(m)
}

/// Random CPTP channel from a Haar isometry: embed the input space into
/// `dim_out × env`, apply a random unitary, trace the environment.
pub fn random_channel<T: Real>(
    rng: &mut impl Rng,
    dim_in: usize,
    dim_out: usize,
) -> Result<Channel<T>> {
    let env = dim_in; // Kraus rank dim_in·... enough to mix thoroughly
    let big = dim_out * env;
    let u = random_unitary::<T>(rng, big.max(dim_in));
    // Isometry V: dim_in columns of the unitary; split into Kraus blocks.
    let mut kraus = Vec::with_capacity(env);
    for e in 0..env {
        let mut k = CMat::<T>::zeros((dim_out, dim_in));
        for o in 0..dim_out {
            for i in 0..dim_in {
                k[(o, i)] = u[(o * env + e, i)];
            }
        }
        kraus.push(k);
    }
    Channel::from_kraus(dim_in, dim_out, kraus)
}

/// Random unitary commuting with the given composite spectrum: Haar blocks
/// on each degenerate total-energy eigenspace (grouping at tolerance 1e-9).
pub fn random_energy_conserving_unitary<T: Real>(
    rng: &mut impl Rng,
    energies: &[T],
) -> CMat<T> {
    let dim = energies.len();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| energies[a].partial_cmp(&energies[b]).unwrap());
    let tol = T::cast(1e-9);
    let mut u = CMat::<T>::zeros((dim, dim));
    let mut start = 0;
    while start < dim {
        let mut end = start + 1;
        while end < dim
            && (energies[order[end]] - energies[order[start]]).abs() <= tol
        {
            end += 1;
        }
        let block = random_unitary::<T>(rng, end - start);
        for (bi, &gi) in order[start..end].iter().enumerate() {
            for (bj, &gj) in order[start..end].iter().enumerate() {
                u[(gi, gj)] = block[(bi, bj)];
            }
        }
        start = end;
    }
    u
}

/// A random quadruple `(ρ, σ, ρ', σ')` satisfying the two-branch channel
/// condition `S₀(ρ‖σ) ≥ S_∞(ρ'‖σ') + margin`: the source state is
/// rank-deficient (giving S₀ > 0) and the target is pulled toward its
/// reference until its max-ratio drops under the budget.
pub fn random_fr_quadruple<T: Real>(
    rng: &mut impl Rng,
    dim: usize,
    margin: T,
) -> Result<QuantumPair<T>> {
    loop {
        let rank = rng.gen_range(1..dim.max(2));
        let rho = random_density_with_rank::<T>(rng, dim, rank)?;
        let sigma = random_density::<T>(rng, dim)?;
        let s0 = crate::divergences::quantum_renyi_0(&rho, &sigma)?;
        if !s0.is_finite() || s0 <= margin {
            continue;
        }
        let sigma_prime = random_density::<T>(rng, dim)?;
        let raw = random_density::<T>(rng, dim)?;
        // ρ'(t) = (1−t)σ' + t·raw has S_∞(ρ'‖σ') → 0 as t → 0.
        let mut t = T::cast(0.5);
        for _ in 0..60 {
            let keep = creal(T::one() - t);
            let add = creal(t);
            let mixed =
                sigma_prime.matrix().mapv(|x| x * keep) + raw.matrix().mapv(|x| x * add);
            let rho_prime = DensityMatrix::new(crate::cmat::hermitize(&mixed))?;
            let s_inf = crate::divergences::quantum_renyi_inf(&rho_prime, &sigma_prime)?;
            if s_inf + margin <= s0 {
                return QuantumPair::new(rho, sigma, rho_prime, sigma_prime);
            }
            t = t * T::cast(0.5);
        }
        // Target too stubborn (S₀ tiny); resample the source.
    }
}

/// Deterministic instance streams for the named corpus kinds.
pub fn seeded_states<T: Real>(seed: u64, dim: usize, count: usize) -> Result<Vec<DensityMatrix<T>>> {
    (0..count)
        .map(|i| random_density(&mut rng_for_instance(seed, i as u64), dim))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn determinism_under_seed() {
        let a = random_density::<f64>(&mut rng_from_seed(7), 4).unwrap();
        let b = random_density::<f64>(&mut rng_from_seed(7), 4).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_density::<f64>(&mut rng_from_seed(8), 4).unwrap();
        assert!(crate::cmat::max_abs_diff(a.matrix(), c.matrix()) > 1e-3);
    }

    #[test]
    fn random_states_are_valid() {
        let mut rng = rng_from_seed(1);
        for dim in [2usize, 3, 5, 8] {
            let s = random_density::<f64>(&mut rng, dim).unwrap();
            assert_eq!(s.dim(), dim);
            let evs = s.eigenvalues().unwrap();
            assert!(evs[0] > -1e-12);
        }
    }

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = rng_from_seed(2);
        for dim in [2usize, 5, 9] {
            let u = random_unitary::<f64>(&mut rng, dim);
            assert!(crate::cmat::unitarity_deviation(&u) < 1e-12);
        }
    }

    #[test]
    fn energy_conserving_unitary_commutes() {
        let mut rng = rng_from_seed(3);
        // Spectrum with degeneracies: 0,1,1,2,2,2.
        let energies = [0.0f64, 1.0, 1.0, 2.0, 2.0, 2.0];
        let u = random_energy_conserving_unitary::<f64>(&mut rng, &energies);
        assert!(crate::cmat::unitarity_deviation(&u) < 1e-12);
        let h = crate::cmat::diag_real(&energies);
        let comm = u.dot(&h) - h.dot(&u);
        let worst = comm.iter().fold(0.0f64, |acc, c| acc.max(c.norm()));
        assert!(worst < 1e-10);
    }

    #[test]
    fn fr_quadruples_satisfy_the_condition() {
        let mut rng = rng_from_seed(4);
        for dim in [2usize, 3] {
            for _ in 0..10 {
                let pair = random_fr_quadruple::<f64>(&mut rng, dim, 1e-6).unwrap();
                let s0 =
                    crate::divergences::quantum_renyi_0(&pair.rho, &pair.sigma).unwrap();
                let si = crate::divergences::quantum_renyi_inf(
                    &pair.rho_prime,
                    &pair.sigma_prime,
                )
                .unwrap();
                assert!(s0 >= si + 1e-6 - 1e-12, "s0={s0} s_inf={si}");
            }
        }
    }

    #[test]
    fn random_channels_are_cptp() {
        let mut rng = rng_from_seed(5);
        let ch = random_channel::<f64>(&mut rng, 3, 3).unwrap();
        assert!(ch.verify().unwrap().is_cptp(1e-9));
        let rho = random_density::<f64>(&mut rng, 3).unwrap();
        let out = ch.apply(&rho).unwrap();
        let evs = out.eigenvalues().unwrap();
        assert!(evs[0] > -1e-12);
    }
}
