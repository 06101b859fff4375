use catalab::catalysis::{amplifier_iterate, build_correlated_catalyst};
use catalab::convertibility::{classical_block_protocol, stein_block_size, ClassicalPair};
use catalab::divergences::smoothed_renyi_rate;
use catalab::statekit::{DensityMatrix, ProbDist};

fn main() {
    // Criterion 4 numbers
    let p = ProbDist::<f64>::new(vec![0.75, 0.25]).unwrap();
    let q = ProbDist::<f64>::uniform(2);
    let table = smoothed_renyi_rate(&p, &q, 0.01, 30).unwrap();
    for pt in &table {
        if [1, 5, 10, 20, 30].contains(&pt.n) {
            println!(
                "stein n={} lower={:.7} upper={:.7} gap={:.7}",
                pt.n, pt.lower, pt.upper, pt.gap()
            );
        }
    }

    // Criterion 5 pipeline
    let pair = ClassicalPair::new(
        ProbDist::new(vec![0.9, 0.1]).unwrap(),
        ProbDist::uniform(2),
        ProbDist::new(vec![0.6, 0.4]).unwrap(),
        ProbDist::uniform(2),
    )
    .unwrap();
    for eps in [0.2, 0.25, 0.3] {
        let search = stein_block_size(&pair, eps, 8).unwrap();
        println!("eps={eps}: block={:?}", search.block_size);
        for b in &search.table {
            println!("  n={} src_lower={:.5} tgt_upper={:.5}", b.n, b.source_lower, b.target_upper);
        }
    }
    let eps = 0.3;
    let rho = DensityMatrix::from_diagonal(&[0.9, 0.1]).unwrap();
    let rho_p = DensityMatrix::from_diagonal(&[0.6, 0.4]).unwrap();
    for n in 1..=6 {
        match classical_block_protocol(&pair, n, eps) {
            Ok(proto) => {
                let t0 = std::time::Instant::now();
                let bundle = build_correlated_catalyst(&rho, &rho_p, &proto.channel, n).unwrap();
                println!(
                    "n={} s0={:.5} sinf={:.5} exact={:.2e} sys_err={:.6} corr={:.6} proto_err={:.6} mat={} ({:?})",
                    n,
                    proto.s0_source,
                    proto.s_inf_target,
                    bundle.report.catalyst_exactness,
                    bundle.report.system_error,
                    bundle.report.correlation,
                    bundle.report.protocol_error,
                    bundle.conversion_map.is_some(),
                    t0.elapsed()
                );
            }
            Err(e) => println!("n={n}: infeasible ({e})"),
        }
    }

    // Criterion 7 amplifier count
    let run = amplifier_iterate(0.01f64, 0.99, 100_000).unwrap();
    println!("amplifier 0.01->0.99 steps={} reached={}", run.steps, run.reached);
    let run2 = amplifier_iterate(0.5f64, 0.9, 100_000).unwrap();
    println!("amplifier 0.5->0.9 steps={}", run2.steps);
}
