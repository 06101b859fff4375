//! Command-line front end: JSON in, JSON verdicts/reports out.
//!
//! Machine-readable JSON goes to stdout (or `--json-out`); human-readable
//! summaries go to stderr, so pipelines can consume stdout directly.
//! Exit codes: 0 = a verdict or report was computed (including
//! NotConvertible / Inconclusive), 1 = input or precondition failure,
//! 2 = internal numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use catalab::catalysis::{amplifier_iterate, build_correlated_catalyst, mode_set};
use catalab::channels::{
    covariance_residual, gibbs_preserving_residual, thermal_operation, Channel,
};
use catalab::convertibility::{
    check_brandao, check_exact_full_rank, check_klimesh_turgut, check_muller_correlated,
    check_muller_exact, check_quantum_pair, faist_renner_channel_with_report, pair_feasibility,
    stein_block_size, ClassicalPair, DecisionConfig, QuantumPair,
};
use catalab::divergences::{
    quantum_petz_2, quantum_relative_entropy, quantum_renyi_0, quantum_renyi_inf,
    renyi_divergence, smoothed_renyi_rate, AlphaGrid,
};
use catalab::io::{self, Loaded};
use catalab::statekit::{DensityMatrix, GibbsSpec, Hamiltonian, ProbDist};
use catalab::{Error, Result};

const NORM_BANNER: &str =
    "full Schatten 1-norm: ||a-b||_1 = sum of singular values (orthogonal pure states at 2)";

#[derive(Parser)]
#[command(
    name = "catalab",
    version,
    about = "Thermodynamic state convertibility: criteria, channels, catalysts"
)]
struct Cli {
    /// Override the default numerical tolerance of the invoked check.
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Seed for all randomized generation (bit-reproducible corpora).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate Rényi divergences at one order or over the default grid.
    Divergence(DivergenceArgs),
    /// Decide convertibility between two states under a chosen regime.
    CheckConvert(CheckConvertArgs),
    /// Classify a channel: CPTP, Gibbs-preserving, covariant.
    CheckChannel(CheckChannelArgs),
    /// Construct the explicit two-branch conversion channel for a pair.
    FrChannel(FrChannelArgs),
    /// Search for a conversion channel by alternating projections.
    PairFeasibility(PairFeasibilityArgs),
    /// Build the correlated catalyst for a block protocol.
    BuildCatalyst(BuildCatalystArgs),
    /// Coherence modes of a state with respect to a Hamiltonian.
    Modes(ModesArgs),
    /// Iterate the two-level coherence amplifier.
    Amplify(AmplifyArgs),
    /// Smoothed-rate brackets (and optional block-size search).
    SteinRate(SteinRateArgs),
    /// Generate seeded random instance corpora.
    GenCorpus(GenCorpusArgs),
}

#[derive(Args)]
struct DivergenceArgs {
    /// Order: a real number, "inf", "-inf", or "grid".
    #[arg(long)]
    alpha: String,
    /// First argument of the divergence (probdist or density JSON).
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Reference (second argument).
    #[arg(long = "ref", value_name = "PATH")]
    reference: PathBuf,
    /// Force the quantum evaluation (orders 0, 1, 2, inf only).
    #[arg(long)]
    quantum: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Regime {
    Classical,
    Quantum,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CatalystKind {
    None,
    Uncorrelated,
    Correlated,
    Exact,
}

#[derive(Args)]
struct CheckConvertArgs {
    #[arg(long, value_enum)]
    regime: Regime,
    #[arg(long, value_enum)]
    catalyst: CatalystKind,
    /// Inverse temperature for Gibbs references.
    #[arg(long)]
    beta: Option<f64>,
    /// Hamiltonian file for Gibbs references.
    #[arg(long, value_name = "PATH")]
    hamiltonian: Option<PathBuf>,
    /// Source reference state σ.
    #[arg(long, value_name = "PATH")]
    sigma: Option<PathBuf>,
    /// Target reference state σ'.
    #[arg(long = "sigma-prime", value_name = "PATH")]
    sigma_prime: Option<PathBuf>,
    rho: PathBuf,
    rho_prime: PathBuf,
}

#[derive(Args)]
struct CheckChannelArgs {
    /// Check that the channel fixes the thermal state.
    #[arg(long)]
    gibbs_preserving: bool,
    /// Check mode-block covariance.
    #[arg(long)]
    covariant: bool,
    #[arg(long, default_value_t = 1.0)]
    beta: f64,
    #[arg(long, value_name = "PATH")]
    hamiltonian: PathBuf,
    channel: PathBuf,
}

#[derive(Args)]
struct FrChannelArgs {
    #[arg(long, value_name = "PATH")]
    sigma: PathBuf,
    #[arg(long = "sigma-prime", value_name = "PATH")]
    sigma_prime: PathBuf,
    /// Write the constructed channel JSON here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    rho: PathBuf,
    rho_prime: PathBuf,
}

#[derive(Args)]
struct PairFeasibilityArgs {
    #[arg(long, value_name = "PATH")]
    sigma: PathBuf,
    #[arg(long = "sigma-prime", value_name = "PATH")]
    sigma_prime: PathBuf,
    #[arg(long, default_value_t = 20_000)]
    max_iter: usize,
    rho: PathBuf,
    rho_prime: PathBuf,
}

#[derive(Args)]
struct BuildCatalystArgs {
    /// Number of copies the protocol acts on.
    #[arg(long)]
    n: usize,
    /// Block protocol channel on dim^n.
    #[arg(long, value_name = "PATH")]
    protocol: PathBuf,
    /// Also dump the full catalyst state JSON here.
    #[arg(long = "dump-state", value_name = "PATH")]
    dump_state: Option<PathBuf>,
    rho: PathBuf,
    rho_prime: PathBuf,
}

#[derive(Args)]
struct ModesArgs {
    #[arg(long, value_name = "PATH")]
    hamiltonian: PathBuf,
    state: PathBuf,
}

#[derive(Args)]
struct AmplifyArgs {
    #[arg(long)]
    a0: f64,
    #[arg(long)]
    target: f64,
    #[arg(long, default_value_t = 100_000)]
    max_steps: usize,
}

#[derive(Args)]
struct SteinRateArgs {
    #[arg(long)]
    eps: f64,
    #[arg(long = "n-max")]
    n_max: usize,
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long = "ref", value_name = "PATH")]
    reference: PathBuf,
    /// Target distribution: enables the block-size search.
    #[arg(long, value_name = "PATH")]
    target: Option<PathBuf>,
    /// Target reference distribution.
    #[arg(long = "target-ref", value_name = "PATH")]
    target_ref: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CorpusKind {
    States,
    Pairs,
    Channels,
}

#[derive(Args)]
struct GenCorpusArgs {
    #[arg(long, value_enum)]
    kind: CorpusKind,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    count: usize,
    #[arg(long = "out-dir", value_name = "DIR")]
    out_dir: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(result) => {
            let envelope = json!({
                "tool": "catalab",
                "version": env!("CARGO_PKG_VERSION"),
                "norm_convention": NORM_BANNER,
                "tolerances": {
                    "validity": 1e-10,
                    "rank": 1e-9,
                    "channel": 1e-9,
                    "grid_slack": 1e-6,
                    "equality_band": 1e-9,
                    "override": cli.tolerance,
                },
                "result": result,
            });
            let rendered = serde_json::to_string_pretty(&envelope).expect("reports serialize");
            match &cli.json_out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, rendered + "\n") {
                        eprintln!("catalab: cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                    eprintln!("catalab: report written to {}", path.display());
                }
                None => println!("{rendered}"),
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("catalab: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Numerical(_) => 2,
        _ => 1,
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Loaded> {
    io::parse_object(&read_file(path)?)
        .map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn load_prob(path: &Path) -> Result<ProbDist<f64>> {
    match load(path)? {
        Loaded::Prob(p) => Ok(p),
        other => Err(Error::InvalidInput(format!(
            "{}: expected a probdist, found {}",
            path.display(),
            kind_name(&other)
        ))),
    }
}

fn load_density_like(path: &Path) -> Result<DensityMatrix<f64>> {
    match load(path)? {
        Loaded::Density(d) => Ok(d),
        Loaded::Prob(p) => DensityMatrix::from_diagonal(p.as_slice()),
        other => Err(Error::InvalidInput(format!(
            "{}: expected a state, found {}",
            path.display(),
            kind_name(&other)
        ))),
    }
}

fn load_hamiltonian(path: &Path) -> Result<Hamiltonian<f64>> {
    match load(path)? {
        Loaded::Hamiltonian(h) => Ok(h),
        other => Err(Error::InvalidInput(format!(
            "{}: expected a hamiltonian, found {}",
            path.display(),
            kind_name(&other)
        ))),
    }
}

fn load_channel(path: &Path) -> Result<Channel<f64>> {
    match load(path)? {
        Loaded::Channel(c) => Ok(c),
        other => Err(Error::InvalidInput(format!(
            "{}: expected a channel, found {}",
            path.display(),
            kind_name(&other)
        ))),
    }
}

fn kind_name(l: &Loaded) -> &'static str {
    match l {
        Loaded::Density(_) => "density",
        Loaded::Prob(_) => "probdist",
        Loaded::Hamiltonian(_) => "hamiltonian",
        Loaded::Channel(_) => "channel",
    }
}

fn finite_json(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x > 0.0 {
        json!("+inf")
    } else {
        json!("-inf")
    }
}

fn run(cli: &Cli) -> Result<Value> {
    match &cli.command {
        Command::Divergence(args) => run_divergence(args),
        Command::CheckConvert(args) => run_check_convert(args),
        Command::CheckChannel(args) => run_check_channel(args, cli.tolerance),
        Command::FrChannel(args) => run_fr_channel(args),
        Command::PairFeasibility(args) => run_pair_feasibility(args, cli.tolerance),
        Command::BuildCatalyst(args) => run_build_catalyst(args),
        Command::Modes(args) => run_modes(args),
        Command::Amplify(args) => run_amplify(args),
        Command::SteinRate(args) => run_stein_rate(args),
        Command::GenCorpus(args) => run_gen_corpus(args, cli.seed),
    }
}

fn parse_alphas(spec: &str) -> Result<Vec<f64>> {
    match spec {
        "grid" => Ok(AlphaGrid::<f64>::default().alphas()),
        "inf" | "+inf" => Ok(vec![f64::INFINITY]),
        "-inf" => Ok(vec![f64::NEG_INFINITY]),
        other => other
            .parse::<f64>()
            .map(|a| vec![a])
            .map_err(|_| Error::InvalidInput(format!("cannot parse alpha '{other}'"))),
    }
}

fn run_divergence(args: &DivergenceArgs) -> Result<Value> {
    let alphas = parse_alphas(&args.alpha)?;
    let lhs = load(&args.input)?;
    let rhs = load(&args.reference)?;
    let quantum =
        args.quantum || matches!(lhs, Loaded::Density(_)) || matches!(rhs, Loaded::Density(_));

    let mut records = Vec::new();
    if quantum {
        let rho = load_density_like(&args.input)?;
        let sigma = load_density_like(&args.reference)?;
        for &alpha in &alphas {
            let value = if alpha == 0.0 {
                Some(quantum_renyi_0(&rho, &sigma)?)
            } else if alpha == 1.0 {
                Some(quantum_relative_entropy(&rho, &sigma)?)
            } else if alpha == 2.0 {
                Some(quantum_petz_2(&rho, &sigma)?)
            } else if alpha == f64::INFINITY {
                Some(quantum_renyi_inf(&rho, &sigma)?)
            } else {
                None
            };
            if let Some(v) = value {
                records.push(json!({
                    "alpha": finite_json(alpha),
                    "value": finite_json(v),
                    "finite": v.is_finite(),
                }));
            }
        }
        if records.is_empty() {
            return Err(Error::InvalidInput(
                "quantum divergences are implemented at orders 0, 1, 2 and inf".into(),
            ));
        }
    } else {
        let p = load_prob(&args.input)?;
        let q = load_prob(&args.reference)?;
        for &alpha in &alphas {
            let rep = renyi_divergence(&p, &q, alpha)?;
            records.push(json!({
                "alpha": finite_json(rep.alpha),
                "value": finite_json(rep.value),
                "finite": rep.finite,
            }));
        }
    }
    Ok(json!({ "command": "divergence", "quantum": quantum, "records": records }))
}

fn gibbs_spec_from(
    beta: Option<f64>,
    hamiltonian: &Option<PathBuf>,
    dim: usize,
) -> Result<GibbsSpec<f64>> {
    let h = match hamiltonian {
        Some(path) => load_hamiltonian(path)?,
        None => Hamiltonian::diagonal(vec![0.0; dim])?,
    };
    GibbsSpec::new(h, beta.unwrap_or(0.0))
}

fn run_check_convert(args: &CheckConvertArgs) -> Result<Value> {
    let cfg = DecisionConfig::<f64>::default();
    let grid = AlphaGrid::<f64>::default();
    let verdict = match (args.regime, args.catalyst) {
        (Regime::Classical, CatalystKind::Uncorrelated) => {
            let p = load_prob(&args.rho)?;
            let p2 = load_prob(&args.rho_prime)?;
            match (&args.sigma, &args.sigma_prime) {
                (Some(s), Some(s2)) => {
                    let pair = ClassicalPair::new(p, load_prob(s)?, p2, load_prob(s2)?)?;
                    check_brandao(&pair, &grid, &cfg)?
                }
                (None, None) => check_klimesh_turgut(&p, &p2, &grid, &cfg)?,
                _ => {
                    return Err(Error::InvalidInput(
                        "--sigma and --sigma-prime must be given together".into(),
                    ))
                }
            }
        }
        (Regime::Classical, CatalystKind::Correlated) => {
            let p = load_prob(&args.rho)?;
            let p2 = load_prob(&args.rho_prime)?;
            match (&args.sigma, &args.sigma_prime) {
                (Some(s), Some(s2)) => {
                    let pair = ClassicalPair::new(p, load_prob(s)?, p2, load_prob(s2)?)?;
                    check_quantum_pair(&pair.embed()?, &cfg)?
                }
                _ => {
                    let spec = gibbs_spec_from(args.beta, &args.hamiltonian, p.dim())?;
                    check_muller_correlated(&p, &p2, &spec, &cfg)?
                }
            }
        }
        (Regime::Classical, CatalystKind::Exact) => {
            let p = load_prob(&args.rho)?;
            let p2 = load_prob(&args.rho_prime)?;
            check_muller_exact(&p, &p2, &cfg)?
        }
        (Regime::Quantum, CatalystKind::Correlated) => {
            let rho = load_density_like(&args.rho)?;
            let rho2 = load_density_like(&args.rho_prime)?;
            let (sigma, sigma2) = quantum_references(args, &rho, &rho2)?;
            check_quantum_pair(&QuantumPair::new(rho, sigma, rho2, sigma2)?, &cfg)?
        }
        (Regime::Quantum, CatalystKind::Exact) => {
            let rho = load_density_like(&args.rho)?;
            let rho2 = load_density_like(&args.rho_prime)?;
            let (sigma, sigma2) = quantum_references(args, &rho, &rho2)?;
            check_exact_full_rank(&QuantumPair::new(rho, sigma, rho2, sigma2)?, &cfg)?
        }
        (_, CatalystKind::None) => {
            return Err(Error::InvalidInput(
                "catalyst-free ordering is not exposed; choose uncorrelated, correlated or exact"
                    .into(),
            ))
        }
        (Regime::Quantum, CatalystKind::Uncorrelated) => {
            return Err(Error::InvalidInput(
                "quantum uncorrelated-catalyst conversion has no implemented criterion; use \
                 correlated or exact"
                    .into(),
            ))
        }
    };
    eprintln!("check-convert: {:?}", verdict.decision);
    Ok(json!({ "command": "check-convert", "verdict": io::verdict_to_json(&verdict) }))
}

fn quantum_references(
    args: &CheckConvertArgs,
    rho: &DensityMatrix<f64>,
    rho_prime: &DensityMatrix<f64>,
) -> Result<(DensityMatrix<f64>, DensityMatrix<f64>)> {
    match (&args.sigma, &args.sigma_prime) {
        (Some(s), Some(s2)) => Ok((load_density_like(s)?, load_density_like(s2)?)),
        (None, None) => {
            let spec = gibbs_spec_from(args.beta, &args.hamiltonian, rho.dim())?;
            let g = catalab::statekit::gibbs_state(&spec)?;
            if rho_prime.dim() != g.dim() {
                return Err(Error::DimensionMismatch(
                    "Gibbs reference dimension differs from the target state".into(),
                ));
            }
            Ok((g.clone(), g))
        }
        _ => Err(Error::InvalidInput(
            "--sigma and --sigma-prime must be given together".into(),
        )),
    }
}

fn run_check_channel(args: &CheckChannelArgs, tolerance: Option<f64>) -> Result<Value> {
    let ch = load_channel(&args.channel)?;
    let h = load_hamiltonian(&args.hamiltonian)?;
    let tol = tolerance.unwrap_or(1e-8);
    let report = ch.verify()?;
    let mut result = json!({
        "command": "check-channel",
        "cptp": {
            "ok": report.is_cptp(1e-9),
            "hermiticity": report.hermiticity,
            "min_choi_eigenvalue": report.min_choi_eigenvalue,
            "tp_residual": report.tp_residual,
        },
    });
    let both = !args.gibbs_preserving && !args.covariant;
    if args.gibbs_preserving || both {
        let spec = GibbsSpec::new(h.clone(), args.beta)?;
        let residual = gibbs_preserving_residual(&ch, &spec)?;
        result["gibbs_preserving"] = json!({
            "ok": residual <= tol,
            "residual": residual,
            "beta": args.beta,
        });
    }
    if args.covariant || both {
        let residual = covariance_residual(&ch, &h)?;
        result["covariant"] = json!({
            "ok": residual <= tol,
            "residual": residual,
        });
    }
    Ok(result)
}

fn run_fr_channel(args: &FrChannelArgs) -> Result<Value> {
    let pair = QuantumPair::new(
        load_density_like(&args.rho)?,
        load_density_like(&args.sigma)?,
        load_density_like(&args.rho_prime)?,
        load_density_like(&args.sigma_prime)?,
    )?;
    let (channel, report) = faist_renner_channel_with_report(&pair)?;
    let wire = io::channel_to_wire(&channel);
    if let Some(path) = &args.out {
        std::fs::write(path, io::to_json_string(&wire) + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut result = json!({
        "command": "fr-channel",
        "s0_source": finite_json(report.s0_source),
        "s_inf_target": finite_json(report.s_inf_target),
        "tau_min_eigenvalue": report.tau_min_eigenvalue,
        "map_rho_error": report.map_rho_error,
        "map_sigma_error": report.map_sigma_error,
    });
    if args.out.is_none() {
        result["channel"] = serde_json::to_value(wire).expect("channel wires");
    }
    Ok(result)
}

fn run_pair_feasibility(args: &PairFeasibilityArgs, tolerance: Option<f64>) -> Result<Value> {
    let pair = QuantumPair::new(
        load_density_like(&args.rho)?,
        load_density_like(&args.sigma)?,
        load_density_like(&args.rho_prime)?,
        load_density_like(&args.sigma_prime)?,
    )?;
    let tol = tolerance.unwrap_or(1e-7);
    let verdict = pair_feasibility(&pair, args.max_iter, tol)?;
    eprintln!("pair-feasibility: {:?}", verdict.decision);
    Ok(json!({
        "command": "pair-feasibility",
        "verdict": io::verdict_to_json(&verdict),
    }))
}

fn run_build_catalyst(args: &BuildCatalystArgs) -> Result<Value> {
    let rho = load_density_like(&args.rho)?;
    let rho_prime = load_density_like(&args.rho_prime)?;
    let protocol = load_channel(&args.protocol)?;
    let bundle = build_correlated_catalyst(&rho, &rho_prime, &protocol, args.n)?;
    if let Some(path) = &args.dump_state {
        let wire = io::density_to_wire(&bundle.catalyst_state);
        std::fs::write(path, io::to_json_string(&wire) + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(json!({
        "command": "build-catalyst",
        "n": bundle.n,
        "catalyst_dim": bundle.catalyst_state.dim(),
        "catalyst_exactness": bundle.report.catalyst_exactness,
        "system_error": bundle.report.system_error,
        "correlation": bundle.report.correlation,
        "protocol_error": bundle.report.protocol_error,
        "conversion_map_materialized": bundle.conversion_map.is_some(),
    }))
}

fn run_modes(args: &ModesArgs) -> Result<Value> {
    let state = load_density_like(&args.state)?;
    let h = load_hamiltonian(&args.hamiltonian)?;
    let modes = mode_set(&state, &h, 1e-9)?;
    Ok(json!({
        "command": "modes",
        "modes": modes.modes(),
        "multiplicities": modes.multiplicities(),
        "incoherent": modes.is_incoherent(),
    }))
}

fn run_amplify(args: &AmplifyArgs) -> Result<Value> {
    let run = amplifier_iterate(args.a0, args.target, args.max_steps)?;
    Ok(json!({
        "command": "amplify",
        "a0": args.a0,
        "target": args.target,
        "steps": run.steps,
        "reached": run.reached,
        "trajectory": run.trajectory,
    }))
}

fn run_stein_rate(args: &SteinRateArgs) -> Result<Value> {
    let p = load_prob(&args.input)?;
    let q = load_prob(&args.reference)?;
    let table = smoothed_renyi_rate(&p, &q, args.eps, args.n_max)?;
    let rows: Vec<Value> = table
        .iter()
        .map(|pt| {
            json!({
                "n": pt.n,
                "lower": finite_json(pt.lower),
                "upper": finite_json(pt.upper),
                "gap": finite_json(pt.gap()),
            })
        })
        .collect();
    let mut result = json!({
        "command": "stein-rate",
        "eps": args.eps,
        "table": rows,
    });
    if let (Some(tp), Some(tq)) = (&args.target, &args.target_ref) {
        let pair = ClassicalPair::new(p, q, load_prob(tp)?, load_prob(tq)?)?;
        let search = stein_block_size(&pair, args.eps, args.n_max)?;
        result["block_size"] = match search.block_size {
            Some(n) => json!(n),
            None => json!("NotFound"),
        };
        result["search"] = Value::Array(
            search
                .table
                .iter()
                .map(|b| {
                    json!({
                        "n": b.n,
                        "source_lower": finite_json(b.source_lower),
                        "target_upper": finite_json(b.target_upper),
                    })
                })
                .collect(),
        );
    } else if args.target.is_some() || args.target_ref.is_some() {
        return Err(Error::InvalidInput(
            "--target and --target-ref must be given together".into(),
        ));
    }
    Ok(result)
}

fn run_gen_corpus(args: &GenCorpusArgs, seed: u64) -> Result<Value> {
    std::fs::create_dir_all(&args.out_dir).map_err(|e| {
        Error::InvalidInput(format!("cannot create {}: {e}", args.out_dir.display()))
    })?;
    let mut files = Vec::new();
    let write = |name: String, contents: String, files: &mut Vec<String>| -> Result<()> {
        let path = args.out_dir.join(&name);
        std::fs::write(&path, contents + "\n")
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))?;
        files.push(name);
        Ok(())
    };
    match args.kind {
        CorpusKind::States => {
            for i in 0..args.count {
                let mut rng = catalab::corpus::rng_for_instance(seed, i as u64);
                let s = catalab::corpus::random_density::<f64>(&mut rng, args.dim)?;
                write(
                    format!("state_{i:04}.json"),
                    io::to_json_string(&io::density_to_wire(&s)),
                    &mut files,
                )?;
            }
        }
        CorpusKind::Pairs => {
            for i in 0..args.count {
                let mut rng = catalab::corpus::rng_for_instance(seed, i as u64);
                let p = catalab::corpus::random_full_rank_dist::<f64>(&mut rng, args.dim)?;
                let q = catalab::corpus::random_full_rank_dist::<f64>(&mut rng, args.dim)?;
                write(
                    format!("pair_{i:04}_p.json"),
                    io::to_json_string(&io::prob_to_wire(&p)),
                    &mut files,
                )?;
                write(
                    format!("pair_{i:04}_q.json"),
                    io::to_json_string(&io::prob_to_wire(&q)),
                    &mut files,
                )?;
            }
        }
        CorpusKind::Channels => {
            // Thermal operations from block-Haar energy-conserving unitaries
            // on a ladder system coupled to a same-spectrum ladder bath.
            let energies: Vec<f64> = (0..args.dim).map(|k| k as f64).collect();
            let sys = GibbsSpec::new(Hamiltonian::diagonal(energies.clone())?, 1.0)?;
            for i in 0..args.count {
                let mut rng = catalab::corpus::rng_for_instance(seed, i as u64);
                let bath = GibbsSpec::new(Hamiltonian::diagonal(energies.clone())?, 1.0)?;
                let total = sys.hamiltonian.compose_with(&bath.hamiltonian)?;
                let total_energies: Vec<f64> = total.energies().to_vec();
                let u = catalab::corpus::random_energy_conserving_unitary::<f64>(
                    &mut rng,
                    &total_energies,
                );
                let ch = thermal_operation(&u, &sys, &bath, 1e-9)?;
                write(
                    format!("channel_{i:04}.json"),
                    io::to_json_string(&io::channel_to_wire(&ch)),
                    &mut files,
                )?;
            }
        }
    }
    Ok(json!({
        "command": "gen-corpus",
        "kind": match args.kind {
            CorpusKind::States => "states",
            CorpusKind::Pairs => "pairs",
            CorpusKind::Channels => "channels",
        },
        "dim": args.dim,
        "count": args.count,
        "seed": seed,
        "out_dir": args.out_dir,
        "files": files,
    }))
}
