//! Cross-module invariants: metric properties, representation round trips,
//! data processing, mode bookkeeping, and the classical soundness chain
//! against brute-force catalytic majorization.

use catalab::channels::{
    channel_compose, channel_tensor, is_covariant, is_incoherent, thermal_operation, Channel,
    StochasticMatrix,
};
use catalab::catalysis::mode_set;
use catalab::cmat::{dagger, max_abs_diff, CMat};
use catalab::convertibility::{
    check_klimesh_turgut, check_quantum_pair, DecisionConfig, QuantumPair,
};
use catalab::corpus::{
    random_channel, random_density, random_full_rank_dist, random_stochastic, random_unitary,
    rng_from_seed,
};
use catalab::divergences::{renyi_divergence, AlphaGrid};
use catalab::statekit::{
    embed_classical, partial_trace, tensor, trace_distance, trace_distance_dist, DensityMatrix,
    GibbsSpec, Hamiltonian, ProbDist,
};
use proptest::prelude::*;

#[test]
fn trace_distance_triangle_inequality() {
    let mut rng = rng_from_seed(101);
    for dim in [2usize, 3, 5] {
        for _ in 0..40 {
            let a = random_density::<f64>(&mut rng, dim).unwrap();
            let b = random_density::<f64>(&mut rng, dim).unwrap();
            let c = random_density::<f64>(&mut rng, dim).unwrap();
            let ab = trace_distance(&a, &b).unwrap();
            let bc = trace_distance(&b, &c).unwrap();
            let ac = trace_distance(&a, &c).unwrap();
            assert!(ac <= ab + bc + 1e-10);
            assert!((trace_distance(&b, &a).unwrap() - ab).abs() < 1e-10);
        }
    }
}

#[test]
fn partial_trace_recovers_tensor_factors() {
    let mut rng = rng_from_seed(102);
    for _ in 0..25 {
        let a = random_density::<f64>(&mut rng, 3).unwrap();
        let b = random_density::<f64>(&mut rng, 4).unwrap();
        let t = tensor(&a, &b).unwrap();
        let ra = partial_trace(&t, &[0]).unwrap();
        let rb = partial_trace(&t, &[1]).unwrap();
        assert!(max_abs_diff(ra.matrix(), a.matrix()) < 1e-10);
        assert!(max_abs_diff(rb.matrix(), b.matrix()) < 1e-10);
    }
}

#[test]
fn partial_trace_matches_bruteforce_contraction() {
    // Independent oracle: contract indices directly on a two-qubit state.
    let mut rng = rng_from_seed(103);
    for _ in 0..20 {
        let mut s = random_density::<f64>(&mut rng, 4).unwrap();
        s.set_factor_dims(vec![2, 2]).unwrap();
        let r = partial_trace(&s, &[0]).unwrap();
        let m = s.matrix();
        for i in 0..2 {
            for j in 0..2 {
                let direct = m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)];
                assert!((r.matrix()[(i, j)] - direct).norm() < 1e-12);
            }
        }
        let evs = r.eigenvalues().unwrap();
        assert!(evs[0] > -1e-12);
        let tr: f64 = evs.iter().sum();
        assert!((tr - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigh_reconstructs_hermitian_input(seed in 0u64..1000) {
        let mut rng = rng_from_seed(seed);
        let s = random_density::<f64>(&mut rng, 5).unwrap();
        let e = catalab::eigen::eigh(s.matrix()).unwrap();
        let rebuilt = e.apply_fn(|x| x);
        prop_assert!(max_abs_diff(&rebuilt, s.matrix()) < 1e-11);
        let gram = dagger(&e.vectors).dot(&e.vectors);
        prop_assert!(max_abs_diff(&gram, &catalab::cmat::identity(5)) < 1e-11);
    }

    #[test]
    fn l1_distance_of_embeddings_matches_classical(seed in 0u64..1000) {
        let mut rng = rng_from_seed(seed);
        let p = random_full_rank_dist::<f64>(&mut rng, 4).unwrap();
        let q = random_full_rank_dist::<f64>(&mut rng, 4).unwrap();
        let h = Hamiltonian::diagonal(vec![0.0, 1.0, 2.0, 3.0]).unwrap();
        let rho = embed_classical(&p, &h).unwrap();
        let sigma = embed_classical(&q, &h).unwrap();
        let classical = trace_distance_dist(&p, &q).unwrap();
        let quantum = trace_distance(&rho, &sigma).unwrap();
        prop_assert!((classical - quantum).abs() < 1e-10);
    }
}

#[test]
fn choi_kraus_round_trip_preserves_action() {
    let mut rng = rng_from_seed(104);
    for dim in [2usize, 3] {
        for _ in 0..10 {
            let ch = random_channel::<f64>(&mut rng, dim, dim).unwrap();
            let choi_backed = Channel::from_choi(dim, dim, ch.choi()).unwrap();
            let kraus = choi_backed.kraus().unwrap();
            let kraus_backed = Channel::from_kraus(dim, dim, kraus).unwrap();
            let x = random_density::<f64>(&mut rng, dim).unwrap();
            let via_choi = choi_backed.apply(&x).unwrap();
            let via_kraus = kraus_backed.apply(&x).unwrap();
            assert!(max_abs_diff(via_choi.matrix(), via_kraus.matrix()) < 1e-10);
            assert!(max_abs_diff(via_choi.matrix(), ch.apply(&x).unwrap().matrix()) < 1e-10);
        }
    }
}

#[test]
fn compose_and_tensor_match_sequential_application() {
    let mut rng = rng_from_seed(105);
    for _ in 0..8 {
        let a = random_channel::<f64>(&mut rng, 2, 2).unwrap();
        let b = random_channel::<f64>(&mut rng, 2, 2).unwrap();
        let comp = channel_compose(&a, &b).unwrap();
        let x = random_density::<f64>(&mut rng, 2).unwrap();
        let direct = a.apply(&b.apply(&x).unwrap()).unwrap();
        let via_comp = comp.apply(&x).unwrap();
        assert!(max_abs_diff(direct.matrix(), via_comp.matrix()) < 1e-10);

        let prod = channel_tensor(&a, &b).unwrap();
        let y = random_density::<f64>(&mut rng, 2).unwrap();
        let joint = tensor(&x, &y).unwrap();
        let via_tensor = prod.apply(&joint).unwrap();
        let separate = tensor(&a.apply(&x).unwrap(), &b.apply(&y).unwrap()).unwrap();
        assert!(max_abs_diff(via_tensor.matrix(), separate.matrix()) < 1e-10);
    }

    // Identity laws.
    let a = random_channel::<f64>(&mut rng, 2, 2).unwrap();
    let id = Channel::<f64>::identity(2);
    let comp = channel_compose(&a, &id).unwrap();
    let x = random_density::<f64>(&mut rng, 2).unwrap();
    assert!(
        max_abs_diff(comp.apply(&x).unwrap().matrix(), a.apply(&x).unwrap().matrix()) < 1e-12
    );
    let id2 = channel_tensor(&id, &id).unwrap();
    let joint = random_density::<f64>(&mut rng, 4).unwrap();
    assert!(max_abs_diff(id2.apply(&joint).unwrap().matrix(), joint.matrix()) < 1e-12);
}

fn ladder_gibbs(dim: usize, beta: f64) -> GibbsSpec<f64> {
    let energies: Vec<f64> = (0..dim).map(|k| k as f64).collect();
    GibbsSpec::new(Hamiltonian::diagonal(energies).unwrap(), beta).unwrap()
}

fn random_thermal_channel(seed: u64) -> (Channel<f64>, GibbsSpec<f64>) {
    let mut rng = rng_from_seed(seed);
    let sys = ladder_gibbs(2, 1.0);
    let bath = ladder_gibbs(3, 1.0);
    let total = sys
        .hamiltonian
        .compose_with(&bath.hamiltonian)
        .unwrap();
    let u = catalab::corpus::random_energy_conserving_unitary::<f64>(
        &mut rng,
        &total.energies().to_vec(),
    );
    (thermal_operation(&u, &sys, &bath, 1e-9).unwrap(), sys)
}

#[test]
fn covariant_channels_preserve_incoherence_and_modes() {
    for seed in 200..210 {
        let (ch, sys) = random_thermal_channel(seed);
        let h = &sys.hamiltonian;
        assert!(is_covariant(&ch, h, 1e-8).unwrap());

        // Incoherent in, incoherent out.
        let p = {
            let mut rng = rng_from_seed(seed + 1000);
            random_full_rank_dist::<f64>(&mut rng, 2).unwrap()
        };
        let diag = embed_classical(&p, h).unwrap();
        let out = ch.apply(&diag).unwrap();
        assert!(is_incoherent(&out, h, 1e-9).unwrap());

        // Coherent in: the output modes are a subset of the input modes.
        let mut rng = rng_from_seed(seed + 2000);
        let coherent = random_density::<f64>(&mut rng, 2).unwrap();
        let in_modes = mode_set(&coherent, h, 1e-9).unwrap();
        let out_modes = mode_set(&ch.apply(&coherent).unwrap(), h, 1e-9).unwrap();
        for &m in out_modes.modes() {
            assert!(
                in_modes.modes().iter().any(|&x| (x - m).abs() <= 1e-9),
                "covariant channel created mode {m}"
            );
        }
    }
}

#[test]
fn mode_sets_are_negation_symmetric() {
    let mut rng = rng_from_seed(300);
    let h = Hamiltonian::diagonal(vec![0.0, 0.7, 1.9]).unwrap();
    for _ in 0..20 {
        let s = random_density::<f64>(&mut rng, 3).unwrap();
        let m = mode_set(&s, &h, 1e-9).unwrap();
        for &w in m.modes() {
            assert!(m.modes().iter().any(|&x| (x + w).abs() <= 1e-9));
        }
    }
}

#[test]
fn doubly_stochastic_channels_contract_divergences() {
    // Data processing under classical channels, including non-square ones.
    let mut rng = rng_from_seed(301);
    let grid: Vec<f64> = vec![0.0, 0.5, 1.0, 2.0, f64::INFINITY];
    for _ in 0..50 {
        let p = random_full_rank_dist::<f64>(&mut rng, 4).unwrap();
        let q = random_full_rank_dist::<f64>(&mut rng, 4).unwrap();
        let m = random_stochastic::<f64>(&mut rng, 4).unwrap();
        let mp = m.apply(&p).unwrap();
        let mq = m.apply(&q).unwrap();
        for &alpha in &grid {
            let before = renyi_divergence(&p, &q, alpha).unwrap().value;
            let after = renyi_divergence(&mp, &mq, alpha).unwrap().value;
            assert!(after <= before + 1e-9, "alpha={alpha}: {after} > {before}");
        }
    }
}

#[test]
fn renyi_2_subadditivity_violation_fixture() {
    // Correlated joint whose Rényi-2 divergence from a product reference is
    // smaller than the sum of its marginal divergences. Frozen instance:
    // joint [[0.8,0.1],[0.1,0.0]] against uniform ⊗ uniform.
    let joint = ProbDist::<f64>::new(vec![0.8, 0.1, 0.1, 0.0]).unwrap();
    let uniform4 = ProbDist::<f64>::uniform(4);
    let marginal = ProbDist::<f64>::new(vec![0.9, 0.1]).unwrap();
    let uniform2 = ProbDist::<f64>::uniform(2);

    let s2_joint = renyi_divergence(&joint, &uniform4, 2.0).unwrap().value;
    let s2_marginal = renyi_divergence(&marginal, &uniform2, 2.0).unwrap().value;
    // ln(4·0.66) vs 2·ln(2·0.82)
    assert!((s2_joint - (4.0f64 * 0.66).ln()).abs() < 1e-12);
    assert!((s2_marginal - (2.0f64 * 0.82).ln()).abs() < 1e-12);
    assert!(
        s2_joint < 2.0 * s2_marginal - 1e-3,
        "subadditivity violation must be strict: joint {s2_joint} vs sum {}",
        2.0 * s2_marginal
    );

    // At α = 1 the subadditivity direction survives correlations.
    let s1_joint = renyi_divergence(&joint, &uniform4, 1.0).unwrap().value;
    let s1_marginal = renyi_divergence(&marginal, &uniform2, 1.0).unwrap().value;
    assert!(s1_joint >= 2.0 * s1_marginal - 1e-12);
}

#[test]
fn quantum_pair_verdict_is_unitarily_invariant() {
    let mut rng = rng_from_seed(302);
    let cfg = DecisionConfig::<f64>::default();
    for _ in 0..15 {
        let pair = QuantumPair::new(
            random_density::<f64>(&mut rng, 3).unwrap(),
            random_density::<f64>(&mut rng, 3).unwrap(),
            random_density::<f64>(&mut rng, 3).unwrap(),
            random_density::<f64>(&mut rng, 3).unwrap(),
        )
        .unwrap();
        let u = random_unitary::<f64>(&mut rng, 3);
        let v = random_unitary::<f64>(&mut rng, 3);
        let conj = |m: &CMat<f64>, w: &CMat<f64>| -> DensityMatrix<f64> {
            DensityMatrix::new(catalab::cmat::hermitize(&w.dot(m).dot(&dagger(w)))).unwrap()
        };
        let rotated = QuantumPair::new(
            conj(pair.rho.matrix(), &u),
            conj(pair.sigma.matrix(), &u),
            conj(pair.rho_prime.matrix(), &v),
            conj(pair.sigma_prime.matrix(), &v),
        )
        .unwrap();
        let a = check_quantum_pair(&pair, &cfg).unwrap();
        let b = check_quantum_pair(&rotated, &cfg).unwrap();
        assert_eq!(a.decision, b.decision);
    }
}

// ---- classical soundness chain ------------------------------------------

/// Majorization: p ≻ q iff every prefix of the sorted-descending partial
/// sums of p dominates q's.
fn majorizes(p: &[f64], q: &[f64]) -> bool {
    let mut a: Vec<f64> = p.to_vec();
    let mut b: Vec<f64> = q.to_vec();
    a.sort_by(|x, y| y.partial_cmp(x).unwrap());
    b.sort_by(|x, y| y.partial_cmp(x).unwrap());
    let mut sa = 0.0;
    let mut sb = 0.0;
    for i in 0..a.len().max(b.len()) {
        sa += a.get(i).copied().unwrap_or(0.0);
        sb += b.get(i).copied().unwrap_or(0.0);
        if sa < sb - 1e-12 {
            return false;
        }
    }
    true
}

fn kron_dist(p: &[f64], r: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(p.len() * r.len());
    for &a in p {
        for &b in r {
            out.push(a * b);
        }
    }
    out
}

/// Search for a catalyst r (dim ≤ 4, simplex discretized at 1e-2) with
/// p ⊗ r ≻ q ⊗ r.
fn catalytic_majorization_witness(p: &[f64], q: &[f64]) -> Option<Vec<f64>> {
    if majorizes(p, q) {
        return Some(vec![1.0]);
    }
    let steps = 100usize;
    // dim 2 catalysts
    for i in 0..=steps {
        let x = i as f64 / steps as f64;
        let r = vec![x, 1.0 - x];
        if majorizes(&kron_dist(p, &r), &kron_dist(q, &r)) {
            return Some(r);
        }
    }
    // dim 3
    for i in 0..=steps {
        for j in 0..=(steps - i) {
            let r = vec![
                i as f64 / steps as f64,
                j as f64 / steps as f64,
                (steps - i - j) as f64 / steps as f64,
            ];
            if majorizes(&kron_dist(p, &r), &kron_dist(q, &r)) {
                return Some(r);
            }
        }
    }
    // dim 4 (coarser grid keeps the sweep quick)
    let coarse = 20usize;
    for i in 0..=coarse {
        for j in 0..=(coarse - i) {
            for k in 0..=(coarse - i - j) {
                let r = vec![
                    i as f64 / coarse as f64,
                    j as f64 / coarse as f64,
                    k as f64 / coarse as f64,
                    (coarse - i - j - k) as f64 / coarse as f64,
                ];
                if majorizes(&kron_dist(p, &r), &kron_dist(q, &r)) {
                    return Some(r);
                }
            }
        }
    }
    None
}

#[test]
fn klimesh_turgut_convertibles_have_majorization_witnesses() {
    // Inclusion check on dim-2 fixtures: whenever the grid criterion says
    // Convertible, either plain majorization or a small discretized catalyst
    // exhibits the conversion. A miss at this resolution is logged, not
    // failed (the discretization is coarse by construction).
    let fixtures = [
        (vec![0.9, 0.1], vec![0.6, 0.4]),
        (vec![0.8, 0.2], vec![0.7, 0.3]),
        (vec![0.75, 0.25], vec![0.5, 0.5]),
        (vec![0.65, 0.35], vec![0.55, 0.45]),
    ];
    let grid = AlphaGrid::<f64>::default();
    let cfg = DecisionConfig::<f64>::default();
    for (p, q) in fixtures {
        let pd = ProbDist::new(p.clone()).unwrap();
        let qd = ProbDist::new(q.clone()).unwrap();
        let verdict = check_klimesh_turgut(&pd, &qd, &grid, &cfg).unwrap();
        if verdict.is_convertible() {
            match catalytic_majorization_witness(&p, &q) {
                Some(r) => {
                    let joint_p = kron_dist(&p, &r);
                    let joint_q = kron_dist(&q, &r);
                    assert!(majorizes(&joint_p, &joint_q));
                }
                None => {
                    eprintln!(
                        "note: no discretized catalytic witness for {p:?} -> {q:?} at step 1e-2 \
                         (documented resolution limit)"
                    );
                }
            }
        }
    }
}

#[test]
fn f32_instantiation_smoke() {
    // The core is generic over the scalar; f32 works with loosened checks.
    let p = ProbDist::<f32>::new(vec![0.75f32, 0.25]).unwrap();
    let u = ProbDist::<f32>::uniform(2);
    let s1 = renyi_divergence(&p, &u, 1.0f32).unwrap().value;
    assert!((s1 - 0.1308).abs() < 1e-3);
    let spec = GibbsSpec::<f32>::new(
        Hamiltonian::<f32>::diagonal(vec![0.0, 1.0]).unwrap(),
        1.0,
    )
    .unwrap();
    let g = catalab::statekit::gibbs_state(&spec).unwrap();
    assert!((g.matrix()[(0, 0)].re - 0.731059).abs() < 1e-4);
    let m = StochasticMatrix::<f32>::identity(2);
    let out = m.apply(&p).unwrap();
    assert!((out.as_slice()[0] - 0.75).abs() < 1e-6);
}
