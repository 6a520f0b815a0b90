//! Thin command-line front end over the `budgeted` library.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use budgeted::assignment::{solve_constrained_matching, MatchConfig};
use budgeted::harness::{self, ExperimentConfig};
use budgeted::instance::{default_budgets, Budgets, GraphKind, Instance};
use budgeted::oracle;
use budgeted::spanning_tree::{solve_constrained_tree, TreeConfig};

#[derive(Parser)]
#[command(
    name = "budgeted",
    about = "Budget-constrained spanning trees and bipartite assignments on random instances"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance and write it as a text file.
    Gen(GenArgs),
    /// Solve the budget-constrained spanning tree problem.
    SolveTree(SolveTreeArgs),
    /// Solve the budget-constrained bipartite matching problem.
    SolveMatching(SolveMatchingArgs),
    /// Run a trial batch from a TOML config; emits CSV and a summary.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Complete,
    CompleteBipartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleArg {
    Auto,
    Force,
    Skip,
}

impl From<OracleArg> for harness::OracleMode {
    fn from(v: OracleArg) -> Self {
        match v {
            OracleArg::Auto => harness::OracleMode::Auto,
            OracleArg::Force => harness::OracleMode::Force,
            OracleArg::Skip => harness::OracleMode::Skip,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "complete")]
    kind: KindArg,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    r: usize,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct InstanceSource {
    /// Read the instance from a file instead of generating one.
    #[arg(long, conflicts_with_all = ["n", "alpha", "seed"])]
    input: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct SolveTreeArgs {
    #[command(flatten)]
    source: InstanceSource,
    #[arg(long, default_value_t = 1)]
    r: usize,
    /// Auto budgets C_i = min(n, omega n^{1-r/(alpha(r+1))} ln n).
    #[arg(long)]
    omega: Option<f64>,
    /// Explicit budgets, comma separated.
    #[arg(long, value_delimiter = ',')]
    budget: Option<Vec<f64>>,
    #[arg(long)]
    lambda_tol: Option<f64>,
    #[arg(long)]
    tie_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    oracle: OracleArg,
}

#[derive(Args)]
struct SolveMatchingArgs {
    #[command(flatten)]
    source: InstanceSource,
    /// Auto budget C_1 = omega n^{3/4}.
    #[arg(long)]
    omega: Option<f64>,
    /// Explicit budget value.
    #[arg(long)]
    budget: Option<f64>,
    /// Budget C_1 = factor n^exponent (see --budget-factor).
    #[arg(long)]
    budget_exponent: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    budget_factor: f64,
    #[arg(long)]
    lambda_tol: Option<f64>,
    #[arg(long, value_enum, default_value = "auto")]
    oracle: OracleArg,
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment description.
    #[arg(long)]
    config: PathBuf,
    /// CSV output path (overrides the config's `out`).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the config's trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Override the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    oracle: Option<OracleArg>,
}

fn load_instance(source: &InstanceSource, kind: GraphKind, r: usize) -> budgeted::Result<Instance> {
    match (&source.input, source.n) {
        (Some(path), _) => Instance::read_file(path),
        (None, Some(n)) => Instance::generate(kind, n, r, source.alpha, source.seed),
        (None, None) => Err(budgeted::Error::InvalidParameter(
            "provide --input FILE or --n N".into(),
        )),
    }
}

fn run() -> budgeted::Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => {
            let kind = match args.kind {
                KindArg::Complete => GraphKind::Complete,
                KindArg::CompleteBipartite => GraphKind::CompleteBipartite,
            };
            let instance = Instance::generate(kind, args.n, args.r, args.alpha, args.seed)?;
            match args.out {
                Some(path) => {
                    instance.write_file(&path)?;
                    println!(
                        "wrote {} instance: n={} r={} alpha={} seed={} -> {}",
                        kind.as_str(),
                        args.n,
                        args.r,
                        args.alpha,
                        args.seed,
                        path.display()
                    );
                }
                None => print!("{}", instance.to_text()),
            }
        }
        Command::SolveTree(args) => {
            let instance = load_instance(&args.source, GraphKind::Complete, args.r)?;
            let budgets = match (&args.budget, args.omega) {
                (Some(values), _) => Budgets::explicit(values.clone()),
                (None, Some(omega)) => default_budgets(&instance, omega)?,
                (None, None) => default_budgets(&instance, 2.0)?,
            };
            let mut config = TreeConfig::default();
            if let Some(t) = args.lambda_tol {
                config.lambda_tol = t;
            }
            if let Some(t) = args.tie_tol {
                config.tie_tol = t;
            }
            let (solution, certificate) = solve_constrained_tree(&instance, &budgets, &config)?;
            println!(
                "problem: tree n={} r={} alpha={}",
                instance.n, instance.r, instance.alpha
            );
            println!("budgets: {:?}", budgets.values);
            println!("lambda_star: {:?}", certificate.lambda_star);
            println!("phi: {}", certificate.phi);
            println!("subgradient: {:?}", certificate.subgradient);
            println!("family_size: {}", certificate.optimal_family.len());
            println!("weight: {}", solution.weight);
            println!("costs: {:?}", solution.costs);
            println!("feasible: {}", solution.feasible);
            println!("ratio_dual: {}", solution.weight / certificate.phi);
            println!("deleted: {:?}", solution.trace.deleted);
            println!("added: {:?}", solution.trace.added);
            println!("psi_escalations: {}", solution.trace.psi_escalations);
            println!("fallback_to_family: {}", solution.trace.fallback_to_family);
            println!(
                "edges: {}",
                solution
                    .edges
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            let run_oracle = match args.oracle {
                OracleArg::Force => true,
                OracleArg::Auto => instance.n <= oracle::MAX_EXHAUSTIVE_N,
                OracleArg::Skip => false,
            };
            if run_oracle {
                let res = oracle::brute_force_tree(&instance, &budgets)?;
                match res.optimum {
                    Some(w) => println!("w_oracle: {w} (over {} trees)", res.enumerated),
                    None => println!("w_oracle: infeasible"),
                }
            }
        }
        Command::SolveMatching(args) => {
            let instance = load_instance(&args.source, GraphKind::CompleteBipartite, 1)?;
            let c1 = match (args.budget, args.budget_exponent, args.omega) {
                (Some(c), _, _) => c,
                (None, Some(e), _) => args.budget_factor * (instance.n as f64).powf(e),
                (None, None, Some(omega)) => default_budgets(&instance, omega)?.values[0],
                (None, None, None) => default_budgets(&instance, 2.0)?.values[0],
            };
            let mut config = MatchConfig::default();
            if let Some(t) = args.lambda_tol {
                config.lambda_tol = t;
            }
            let result = solve_constrained_matching(&instance, c1, &config)?;
            println!(
                "problem: matching n={} alpha={}",
                instance.n, instance.alpha
            );
            println!("budget: {c1}");
            println!("lambda_star: {}", result.certificate.lambda_star);
            println!("phi: {}", result.certificate.phi);
            println!("lambda_bound: {}", result.certificate.lambda_bound);
            println!("cycle_len: {}", result.trace.cycle_len);
            println!("ell: {}", result.trace.ell);
            println!("tau: {}", result.trace.tau);
            println!("theta_escalations: {}", result.trace.theta_escalations);
            println!("patch_rounds: {}", result.trace.patch_rounds_used);
            println!("fallback_to_m_low: {}", result.trace.fallback_to_m_low);
            println!("weight: {}", result.solution.weight);
            println!("cost: {}", result.solution.cost);
            println!("feasible: {}", result.solution.feasible);
            println!(
                "ratio_dual: {}",
                result.solution.weight / result.certificate.phi
            );
            println!(
                "pairs: {}",
                result
                    .solution
                    .pairs
                    .iter()
                    .map(|p| p.map(|j| j.to_string()).unwrap_or_else(|| "-".into()))
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            let run_oracle = match args.oracle {
                OracleArg::Force => true,
                OracleArg::Auto => instance.n <= oracle::MAX_EXHAUSTIVE_N,
                OracleArg::Skip => false,
            };
            if run_oracle {
                let res = oracle::brute_force_matching(&instance, c1)?;
                match res.optimum {
                    Some(w) => println!("w_oracle: {w} (over {} matchings)", res.enumerated),
                    None => println!("w_oracle: infeasible"),
                }
            }
        }
        Command::Experiment(args) => {
            let mut config = ExperimentConfig::load(&args.config)?;
            if let Some(trials) = args.trials {
                config.trials = trials;
            }
            if let Some(seed) = args.seed {
                config.master_seed = seed;
            }
            if let Some(mode) = args.oracle {
                config.oracle = mode.into();
            }
            if let Some(out) = args.out {
                config.out = Some(out);
            }
            let records = harness::run_experiment(&config)?;
            if let Some(path) = &config.out {
                println!("wrote {} records -> {}", records.len(), path.display());
            }
            if records.is_empty() {
                println!("no records (trials = 0)");
            } else {
                let summary = harness::summarize(&records);
                println!("{summary}");
                println!();
                print!("{}", summary.to_structured_text());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
