//! Seeded tree-trial batch over an n grid: the ratio of the algorithm's
//! weight to the dual lower bound shrinks as n grows once the budget binds.
//!
//! Run with: cargo run --release --example tree_experiment

use budgeted::harness::{
    run_experiment, summarize, BudgetRule, ExperimentConfig, OracleMode, Problem,
};

fn main() -> budgeted::Result<()> {
    let config = ExperimentConfig {
        problem: Problem::Tree,
        n_grid: vec![200, 400, 800],
        alpha: 1.0,
        r: 1,
        budget_rule: BudgetRule::AutoOmegaPow { pow: 0.05 },
        trials: 10,
        master_seed: 20240811,
        oracle: OracleMode::Skip,
        lambda_tol: None,
        tie_tol: None,
        out: None,
    };
    let records = run_experiment(&config)?;
    let summary = summarize(&records);
    println!("{summary}");
    println!();
    print!("{}", summary.to_structured_text());
    Ok(())
}
