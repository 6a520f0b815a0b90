//! End-to-end budget-constrained spanning tree solve with the full trace:
//! dual ascent, tie family, candidate selection, and psi-threshold repair.
//!
//! Run with: cargo run --release --example solve_tree

use budgeted::instance::{default_budgets, GraphKind, Instance};
use budgeted::spanning_tree::{solve_constrained_tree, TreeConfig};

fn main() -> budgeted::Result<()> {
    let n = 300;
    let instance = Instance::generate(GraphKind::Complete, n, 1, 1.0, 2024)?;
    let omega = (n as f64).powf(0.05);
    let budgets = default_budgets(&instance, omega)?;
    println!("n = {n}, r = 1, alpha = 1, C_1 = {:.3}", budgets.values[0]);

    let (solution, certificate) =
        solve_constrained_tree(&instance, &budgets, &TreeConfig::default())?;
    println!("lambda*        = {:?}", certificate.lambda_star);
    println!(
        "phi(lambda*)   = {:.6}  (lower bound on the optimum)",
        certificate.phi
    );
    println!("family size    = {}", certificate.optimal_family.len());
    println!("tree weight    = {:.6}", solution.weight);
    println!(
        "tree cost      = {:.3} (budget {:.3})",
        solution.costs[0], budgets.values[0]
    );
    println!("feasible       = {}", solution.feasible);
    println!("ratio to dual  = {:.4}", solution.weight / certificate.phi);
    println!(
        "repair         = {} deletions, {} additions, {} psi escalations",
        solution.trace.deleted.len(),
        solution.trace.added.len(),
        solution.trace.psi_escalations
    );
    Ok(())
}
