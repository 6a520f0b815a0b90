//! Experiment runner: seeded instance batches, solver and oracle runs,
//! CSV records, and claim-level summaries.
//!
//! Trials are embarrassingly parallel; each cell derives its own child seed
//! from `(master_seed, n, trial)`, so results are independent of execution
//! order and identical configs reproduce identical records apart from wall
//! times.

use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use rayon::prelude::*;
use serde::Deserialize;

use crate::assignment::{solve_constrained_matching, MatchConfig};
use crate::instance::{default_budgets, Budgets, GraphKind, Instance};
use crate::oracle;
use crate::spanning_tree::{solve_constrained_tree, TreeConfig};
use crate::util::mix64;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Problem {
    Tree,
    Matching,
}

impl Problem {
    pub fn graph_kind(self) -> GraphKind {
        match self {
            Problem::Tree => GraphKind::Complete,
            Problem::Matching => GraphKind::CompleteBipartite,
        }
    }
}

/// How each cell's budgets are produced.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum BudgetRule {
    /// Auto budgets from the built-in scale law, with a fixed omega.
    AutoOmega { omega: f64 },
    /// Auto budgets with omega = n^pow, so the factor diverges with n.
    AutoOmegaPow { pow: f64 },
    /// `C_i = factor * n^exponent` for every constraint.
    Exponent { exponent: f64, factor: f64 },
    /// Fixed values, identical across the n grid.
    Explicit { values: Vec<f64> },
}

impl BudgetRule {
    pub fn budgets_for(&self, instance: &Instance) -> Result<Budgets> {
        match self {
            BudgetRule::AutoOmega { omega } => default_budgets(instance, *omega),
            BudgetRule::AutoOmegaPow { pow } => {
                let omega = (instance.n as f64).powf(*pow);
                default_budgets(instance, omega)
            }
            BudgetRule::Exponent { exponent, factor } => {
                let c = factor * (instance.n as f64).powf(*exponent);
                if !(c > 0.0) {
                    return Err(Error::InvalidParameter(format!(
                        "exponent budget rule produced C = {c}"
                    )));
                }
                Ok(Budgets {
                    values: vec![c; instance.r],
                    omega: *factor,
                })
            }
            BudgetRule::Explicit { values } => {
                if values.len() != instance.r {
                    return Err(Error::InvalidParameter(format!(
                        "explicit budgets carry {} values but r = {}",
                        values.len(),
                        instance.r
                    )));
                }
                Ok(Budgets::explicit(values.clone()))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMode {
    /// Run the exhaustive oracle whenever n is small enough.
    #[default]
    Auto,
    Force,
    Skip,
}

/// One experiment: a problem, an n grid, a budget rule, and trial counts.
#[derive(Debug, Clone, Deserialize)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub n_grid: Vec<usize>,
    pub alpha: f64,
    #[serde(default = "default_r")]
    pub r: usize,
    pub budget_rule: BudgetRule,
    pub trials: usize,
    pub master_seed: u64,
    #[serde(default)]
    pub oracle: OracleMode,
    #[serde(default)]
    pub lambda_tol: Option<f64>,
    #[serde(default)]
    pub tie_tol: Option<f64>,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_r() -> usize {
    1
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        toml::from_str(text)
            .map_err(|e| Error::InvalidParameter(format!("config parse failure: {e}")))
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<ExperimentConfig> {
        ExperimentConfig::from_toml(&std::fs::read_to_string(path)?)
    }

    fn validate(&self) -> Result<()> {
        if self.problem == Problem::Matching && self.r != 1 {
            return Err(Error::InvalidParameter(
                "matching experiments need r = 1".into(),
            ));
        }
        if self.r < 1 {
            return Err(Error::InvalidParameter("experiments need r >= 1".into()));
        }
        if self.n_grid.iter().any(|&n| n < 2) {
            return Err(Error::InvalidParameter(
                "n grid entries must be >= 2".into(),
            ));
        }
        if self.oracle == OracleMode::Force
            && self.n_grid.iter().any(|&n| n > oracle::MAX_EXHAUSTIVE_N)
        {
            return Err(Error::InvalidParameter(format!(
                "oracle = force needs every n <= {}",
                oracle::MAX_EXHAUSTIVE_N
            )));
        }
        Ok(())
    }

    fn tree_config(&self) -> TreeConfig {
        let mut config = TreeConfig::default();
        if let Some(t) = self.lambda_tol {
            config.lambda_tol = t;
        }
        if let Some(t) = self.tie_tol {
            config.tie_tol = t;
        }
        config
    }

    fn match_config(&self) -> MatchConfig {
        let mut config = MatchConfig::default();
        if let Some(t) = self.lambda_tol {
            config.lambda_tol = t;
        }
        config
    }
}

/// One experiment row. Failures are first-class: a failed solve still
/// produces a record, with NaN metrics and the failure class filled in.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub n: usize,
    pub alpha: f64,
    pub r: usize,
    pub budgets: Vec<f64>,
    pub seed: u64,
    pub w_alg: f64,
    pub cost_vector_alg: Vec<f64>,
    pub feasible: bool,
    pub phi_star: f64,
    pub lambda_star: Vec<f64>,
    pub w_oracle: Option<f64>,
    pub ratio_dual: f64,
    pub ratio_oracle: Option<f64>,
    pub family_size: usize,
    pub escalations: u32,
    pub patch_rounds: u32,
    pub wall_time_ms: f64,
    pub failure: Option<String>,
}

/// Child seed for one `(n, trial)` cell.
pub fn derive_child_seed(master_seed: u64, n: usize, trial: usize) -> u64 {
    mix64(mix64(mix64(master_seed) ^ n as u64) ^ trial as u64)
}

fn run_one_trial(config: &ExperimentConfig, n: usize, trial: usize) -> TrialRecord {
    let seed = derive_child_seed(config.master_seed, n, trial);
    let mut record = TrialRecord {
        n,
        alpha: config.alpha,
        r: config.r,
        budgets: Vec::new(),
        seed,
        w_alg: f64::NAN,
        cost_vector_alg: Vec::new(),
        feasible: false,
        phi_star: f64::NAN,
        lambda_star: Vec::new(),
        w_oracle: None,
        ratio_dual: f64::NAN,
        ratio_oracle: None,
        family_size: 0,
        escalations: 0,
        patch_rounds: 0,
        wall_time_ms: 0.0,
        failure: None,
    };

    let started = Instant::now();
    let outcome = (|| -> Result<()> {
        let instance =
            Instance::generate(config.problem.graph_kind(), n, config.r, config.alpha, seed)?;
        let budgets = config.budget_rule.budgets_for(&instance)?;
        record.budgets = budgets.values.clone();
        let run_oracle = match config.oracle {
            OracleMode::Skip => false,
            OracleMode::Force => true,
            OracleMode::Auto => n <= oracle::MAX_EXHAUSTIVE_N,
        };
        match config.problem {
            Problem::Tree => {
                let (solution, certificate) =
                    solve_constrained_tree(&instance, &budgets, &config.tree_config())?;
                record.w_alg = solution.weight;
                record.cost_vector_alg = solution.costs.clone();
                record.feasible = solution.feasible;
                record.phi_star = certificate.phi;
                record.lambda_star = certificate.lambda_star.clone();
                record.family_size = certificate.optimal_family.len();
                record.escalations = solution.trace.psi_escalations;
                if run_oracle {
                    record.w_oracle = oracle::brute_force_tree(&instance, &budgets)?.optimum;
                }
            }
            Problem::Matching => {
                let c1 = budgets.values[0];
                let result = solve_constrained_matching(&instance, c1, &config.match_config())?;
                record.w_alg = result.solution.weight;
                record.cost_vector_alg = vec![result.solution.cost];
                record.feasible = result.solution.feasible;
                record.phi_star = result.certificate.phi;
                record.lambda_star = vec![result.certificate.lambda_star];
                record.family_size = if result.certificate.degenerate() {
                    1
                } else {
                    2
                };
                record.escalations = result.trace.theta_escalations;
                record.patch_rounds = result.trace.patch_rounds_used;
                if run_oracle {
                    record.w_oracle = oracle::brute_force_matching(&instance, c1)?.optimum;
                }
            }
        }
        record.ratio_dual = record.w_alg / record.phi_star;
        record.ratio_oracle = record.w_oracle.map(|w| record.w_alg / w);
        Ok(())
    })();
    if let Err(e) = outcome {
        record.failure = Some(failure_class(&e));
    }
    record.wall_time_ms = started.elapsed().as_secs_f64() * 1e3;
    record
}

fn failure_class(e: &Error) -> String {
    match e {
        Error::BudgetUnconstrainable => "budget_unconstrainable".into(),
        Error::RepairFailed { .. } => "repair_failed".into(),
        Error::AugmentationFailed { .. } => "augmentation_failed".into(),
        other => format!("{other}").replace([',', '\n'], ";"),
    }
}

/// Run every `(n, trial)` cell in parallel and return records in
/// deterministic `(n, trial)` order. Writes CSV to `config.out` when set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<TrialRecord>> {
    config.validate()?;
    let cells: Vec<(usize, usize)> = config
        .n_grid
        .iter()
        .flat_map(|&n| (0..config.trials).map(move |t| (n, t)))
        .collect();
    let records: Vec<TrialRecord> = cells
        .par_iter()
        .map(|&(n, trial)| run_one_trial(config, n, trial))
        .collect();
    if let Some(path) = &config.out {
        write_csv(&records, path)?;
    }
    Ok(records)
}

pub const CSV_HEADER: &str = "n,alpha,r,budgets,seed,w_alg,cost_vector_alg,feasible,phi_star,\
lambda_star,w_oracle,ratio_dual,ratio_oracle,family_size,escalations,patch_rounds,wall_time_ms,failure";

fn join_reals(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(";")
}

pub fn record_to_csv_row(record: &TrialRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
        record.n,
        record.alpha,
        record.r,
        join_reals(&record.budgets),
        record.seed,
        record.w_alg,
        join_reals(&record.cost_vector_alg),
        record.feasible,
        record.phi_star,
        join_reals(&record.lambda_star),
        record.w_oracle.map(|v| v.to_string()).unwrap_or_default(),
        record.ratio_dual,
        record
            .ratio_oracle
            .map(|v| v.to_string())
            .unwrap_or_default(),
        record.family_size,
        record.escalations,
        record.patch_rounds,
        record.wall_time_ms,
        record.failure.clone().unwrap_or_default(),
    )
}

pub fn records_to_csv(records: &[TrialRecord]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&record_to_csv_row(r));
        out.push('\n');
    }
    out
}

pub fn write_csv(records: &[TrialRecord], path: impl AsRef<std::path::Path>) -> Result<()> {
    std::fs::write(path, records_to_csv(records))?;
    Ok(())
}

/// Median with the usual even-count averaging. Panics on empty input.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median needs at least one value");
    let mut xs = values.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        0.5 * (xs[mid - 1] + xs[mid])
    }
}

fn percentile(values: &[f64], q: f64) -> f64 {
    let mut xs = values.to_vec();
    xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((q * xs.len() as f64).ceil() as usize).clamp(1, xs.len()) - 1;
    xs[idx]
}

/// Per-n aggregate statistics.
#[derive(Debug, Clone)]
pub struct SummaryCell {
    pub n: usize,
    pub trials: usize,
    pub failures: usize,
    pub feasible_rate: f64,
    pub median_ratio_dual: f64,
    pub p90_ratio_dual: f64,
    /// Median of `lambda_1 C_1^2 / n^{2 - 1/alpha}`, the scale the
    /// matching multiplier bound predicts; meaningful for r = 1 runs.
    pub median_lambda_norm: Option<f64>,
    pub escalation_rate: f64,
    pub median_wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct Summary {
    pub cells: Vec<SummaryCell>,
    /// Medians of ratio_dual never increase along the n grid.
    pub ratio_dual_nonincreasing: bool,
}

/// Aggregate records per n cell. Pure function of the records; summarizing
/// twice gives the same table.
pub fn summarize(records: &[TrialRecord]) -> Summary {
    assert!(!records.is_empty(), "summarize needs at least one record");
    let mut ns: Vec<usize> = records.iter().map(|r| r.n).collect();
    ns.sort_unstable();
    ns.dedup();
    let mut cells = Vec::with_capacity(ns.len());
    for &n in &ns {
        let group: Vec<&TrialRecord> = records.iter().filter(|r| r.n == n).collect();
        let ok: Vec<&&TrialRecord> = group.iter().filter(|r| r.failure.is_none()).collect();
        let ratios: Vec<f64> = ok.iter().map(|r| r.ratio_dual).collect();
        let lambda_norms: Vec<f64> = ok
            .iter()
            .filter(|r| r.r == 1 && !r.lambda_star.is_empty() && !r.budgets.is_empty())
            .map(|r| {
                let c1 = r.budgets[0];
                r.lambda_star[0] * c1 * c1 / (r.n as f64).powf(2.0 - 1.0 / r.alpha)
            })
            .collect();
        let escalated = ok.iter().filter(|r| r.escalations > 0).count();
        cells.push(SummaryCell {
            n,
            trials: group.len(),
            failures: group.len() - ok.len(),
            feasible_rate: group.iter().filter(|r| r.feasible).count() as f64 / group.len() as f64,
            median_ratio_dual: if ratios.is_empty() {
                f64::NAN
            } else {
                median(&ratios)
            },
            p90_ratio_dual: if ratios.is_empty() {
                f64::NAN
            } else {
                percentile(&ratios, 0.9)
            },
            median_lambda_norm: if lambda_norms.is_empty() {
                None
            } else {
                Some(median(&lambda_norms))
            },
            escalation_rate: if ok.is_empty() {
                0.0
            } else {
                escalated as f64 / ok.len() as f64
            },
            median_wall_ms: median(&group.iter().map(|r| r.wall_time_ms).collect::<Vec<_>>()),
        });
    }
    let ratio_dual_nonincreasing = cells
        .windows(2)
        .all(|w| w[1].median_ratio_dual <= w[0].median_ratio_dual + 1e-12);
    Summary {
        cells,
        ratio_dual_nonincreasing,
    }
}

impl Summary {
    /// Structured key=value lines, one per cell plus the trend flag.
    pub fn to_structured_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cells {
            out.push_str(&format!(
                "cell n={} trials={} failures={} feasible_rate={:.4} median_ratio_dual={:.6} \
p90_ratio_dual={:.6} median_lambda_norm={} escalation_rate={:.4} median_wall_ms={:.3}\n",
                c.n,
                c.trials,
                c.failures,
                c.feasible_rate,
                c.median_ratio_dual,
                c.p90_ratio_dual,
                c.median_lambda_norm
                    .map(|v| format!("{v:.6}"))
                    .unwrap_or_else(|| "-".into()),
                c.escalation_rate,
                c.median_wall_ms,
            ));
        }
        out.push_str(&format!(
            "trend ratio_dual={}\n",
            if self.ratio_dual_nonincreasing {
                "nonincreasing"
            } else {
                "increasing"
            }
        ));
        out
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>6} {:>7} {:>9} {:>10} {:>12} {:>12} {:>13} {:>10} {:>10}",
            "n",
            "trials",
            "failures",
            "feas_rate",
            "med_ratio",
            "p90_ratio",
            "lambda_norm",
            "esc_rate",
            "med_ms"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:>6} {:>7} {:>9} {:>10.4} {:>12.6} {:>12.6} {:>13} {:>10.4} {:>10.2}",
                c.n,
                c.trials,
                c.failures,
                c.feasible_rate,
                c.median_ratio_dual,
                c.p90_ratio_dual,
                c.median_lambda_norm
                    .map(|v| format!("{v:.5}"))
                    .unwrap_or_else(|| "-".into()),
                c.escalation_rate,
                c.median_wall_ms,
            )?;
        }
        write!(
            f,
            "ratio_dual trend: {}",
            if self.ratio_dual_nonincreasing {
                "non-increasing"
            } else {
                "increasing"
            }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_tree_config() -> ExperimentConfig {
        ExperimentConfig {
            problem: Problem::Tree,
            n_grid: vec![6],
            alpha: 1.0,
            r: 1,
            budget_rule: BudgetRule::Exponent {
                exponent: 1.0,
                factor: 0.4,
            },
            trials: 10,
            master_seed: 42,
            oracle: OracleMode::Auto,
            lambda_tol: None,
            tie_tol: None,
            out: None,
        }
    }

    #[test]
    fn oracle_present_for_small_cells() {
        let records = run_experiment(&tiny_tree_config()).unwrap();
        assert_eq!(records.len(), 10);
        for r in &records {
            assert!(r.failure.is_some() || r.w_oracle.is_some());
        }
    }

    #[test]
    fn zero_trials_give_empty_records() {
        let mut config = tiny_tree_config();
        config.trials = 0;
        assert!(run_experiment(&config).unwrap().is_empty());
    }

    #[test]
    fn reruns_are_identical_modulo_wall_time() {
        let config = tiny_tree_config();
        let mut a = run_experiment(&config).unwrap();
        let mut b = run_experiment(&config).unwrap();
        for r in a.iter_mut().chain(b.iter_mut()) {
            r.wall_time_ms = 0.0;
        }
        let csv_a = records_to_csv(&a);
        let csv_b = records_to_csv(&b);
        assert_eq!(csv_a, csv_b);
    }

    #[test]
    fn feasible_records_respect_budgets() {
        let records = run_experiment(&tiny_tree_config()).unwrap();
        for r in records.iter().filter(|r| r.feasible) {
            for (c, cap) in r.cost_vector_alg.iter().zip(&r.budgets) {
                assert!(c <= cap);
            }
            assert!(r.ratio_dual >= 1.0 - 1e-9);
        }
    }

    #[test]
    fn median_examples() {
        assert_eq!(median(&[1.0, 1.2, 1.4]), 1.2);
        assert_eq!(median(&[1.0, 2.0]), 1.5);
        assert_eq!(median(&[3.0]), 3.0);
    }

    #[test]
    fn summary_flags_trend() {
        let mk = |n: usize, ratio: f64| TrialRecord {
            n,
            alpha: 1.0,
            r: 1,
            budgets: vec![1.0],
            seed: 0,
            w_alg: ratio,
            cost_vector_alg: vec![0.5],
            feasible: true,
            phi_star: 1.0,
            lambda_star: vec![0.1],
            w_oracle: None,
            ratio_dual: ratio,
            ratio_oracle: None,
            family_size: 2,
            escalations: 0,
            patch_rounds: 0,
            wall_time_ms: 1.0,
            failure: None,
        };
        let decreasing = vec![mk(10, 1.3), mk(20, 1.1)];
        assert!(summarize(&decreasing).ratio_dual_nonincreasing);
        let increasing = vec![mk(10, 1.1), mk(20, 1.3)];
        assert!(!summarize(&increasing).ratio_dual_nonincreasing);
        let summary = summarize(&decreasing);
        assert_eq!(summary.cells.len(), 2);
        assert_eq!(summary.cells[0].feasible_rate, 1.0);
    }

    #[test]
    fn config_parses_from_toml() {
        let text = r#"
problem = "matching"
n_grid = [50, 100]
alpha = 1.0
trials = 3
master_seed = 7

[budget_rule]
rule = "exponent"
exponent = 0.75
factor = 1.0
"#;
        let config = ExperimentConfig::from_toml(text).unwrap();
        assert_eq!(config.problem, Problem::Matching);
        assert_eq!(config.r, 1);
        assert!(matches!(config.budget_rule, BudgetRule::Exponent { .. }));
        assert_eq!(config.oracle, OracleMode::Auto);
    }

    #[test]
    fn matching_experiment_smoke() {
        let config = ExperimentConfig {
            problem: Problem::Matching,
            n_grid: vec![6],
            alpha: 1.0,
            r: 1,
            budget_rule: BudgetRule::Exponent {
                exponent: 0.75,
                factor: 1.0,
            },
            trials: 6,
            master_seed: 5,
            oracle: OracleMode::Auto,
            lambda_tol: None,
            tie_tol: None,
            out: None,
        };
        let records = run_experiment(&config).unwrap();
        let summary = summarize(&records);
        assert_eq!(summary.cells[0].trials, 6);
        for r in records.iter().filter(|r| r.failure.is_none()) {
            assert!(r.feasible);
            assert!(r.ratio_dual >= 1.0 - 1e-9);
        }
    }
}
