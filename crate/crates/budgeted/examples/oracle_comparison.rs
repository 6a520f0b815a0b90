//! Compare both solvers against exhaustive enumeration on tiny instances:
//! the feasible output never beats the brute-force optimum, and the dual
//! value never exceeds it.
//!
//! Run with: cargo run --example oracle_comparison

use budgeted::assignment::{min_assignment, solve_constrained_matching, MatchConfig};
use budgeted::instance::{Budgets, GraphKind, Instance};
use budgeted::oracle::{brute_force_matching, brute_force_tree};
use budgeted::spanning_tree::{min_tree, solve_constrained_tree, TreeConfig};

fn main() -> budgeted::Result<()> {
    println!(
        "{:>6} {:>10} {:>10} {:>10} {:>8}",
        "trial", "w_alg", "w_oracle", "phi", "ok"
    );

    println!("trees (n = 6):");
    for seed in 0..5u64 {
        let inst = Instance::generate(GraphKind::Complete, 6, 1, 1.0, seed)?;
        let budget = 0.8 * min_tree(&inst, &[0.0]).costs[0];
        let budgets = Budgets::explicit(vec![budget]);
        let Some(w_star) = brute_force_tree(&inst, &budgets)?.optimum else {
            println!("{seed:>6} infeasible budget, skipped");
            continue;
        };
        let (sol, cert) = solve_constrained_tree(&inst, &budgets, &TreeConfig::default())?;
        let ok = sol.feasible && sol.weight >= w_star - 1e-9 && cert.phi <= w_star + 1e-9;
        println!(
            "{seed:>6} {:>10.5} {w_star:>10.5} {:>10.5} {ok:>8}",
            sol.weight, cert.phi
        );
    }

    println!("matchings (n = 7):");
    for seed in 0..5u64 {
        let inst = Instance::generate(GraphKind::CompleteBipartite, 7, 1, 1.0, seed)?;
        let c1 = 0.7 * min_assignment(&inst, 0.0).cost;
        let Some(w_star) = brute_force_matching(&inst, c1)?.optimum else {
            println!("{seed:>6} infeasible budget, skipped");
            continue;
        };
        let res = solve_constrained_matching(&inst, c1, &MatchConfig::default())?;
        let ok = res.solution.cost <= c1
            && res.solution.weight >= w_star - 1e-9
            && res.certificate.phi <= w_star + 1e-9;
        println!(
            "{seed:>6} {:>10.5} {w_star:>10.5} {:>10.5} {ok:>8}",
            res.solution.weight, res.certificate.phi
        );
    }
    Ok(())
}
