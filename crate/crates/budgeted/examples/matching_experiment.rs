//! Seeded matching-trial batch with C_1 = n^(3/4): the dual ratio falls
//! with n and the normalized multiplier lambda* C_1^2 / n^(2-1/alpha) sits
//! in a narrow band, as the multiplier bound predicts.
//!
//! Run with: cargo run --release --example matching_experiment

use budgeted::harness::{
    run_experiment, summarize, BudgetRule, ExperimentConfig, OracleMode, Problem,
};

fn main() -> budgeted::Result<()> {
    for alpha in [1.0, 2.0] {
        let config = ExperimentConfig {
            problem: Problem::Matching,
            n_grid: vec![50, 100, 200],
            alpha,
            r: 1,
            budget_rule: BudgetRule::Exponent {
                exponent: 0.75,
                factor: 1.0,
            },
            trials: 10,
            master_seed: 20240811,
            oracle: OracleMode::Skip,
            lambda_tol: None,
            tie_tol: None,
            out: None,
        };
        let records = run_experiment(&config)?;
        println!("alpha = {alpha}:");
        println!("{}", summarize(&records));
        println!();
    }
    Ok(())
}
