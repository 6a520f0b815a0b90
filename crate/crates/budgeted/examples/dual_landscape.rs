//! Sweep the Lagrangean dual phi(lambda) of a constrained tree instance to
//! show its concave piecewise-linear shape and the breakpoint where the
//! subgradient changes sign.
//!
//! Run with: cargo run --example dual_landscape

use budgeted::instance::{Budgets, GraphKind, Instance};
use budgeted::spanning_tree::{dual_ascent_tree, min_tree, phi_tree, TreeConfig};

fn main() -> budgeted::Result<()> {
    let instance = Instance::generate(GraphKind::Complete, 40, 1, 1.0, 7)?;
    // a budget below the plain MST's cost, so the constraint binds
    let mst = min_tree(&instance, &[0.0]);
    let budgets = Budgets::explicit(vec![0.6 * mst.costs[0]]);
    println!(
        "n = 40, C_1 = {:.3} (MST cost {:.3})",
        budgets.values[0], mst.costs[0]
    );

    println!("{:>8} {:>12} {:>12}", "lambda", "phi", "c_1(T) - C_1");
    for k in 0..=20 {
        let lambda = k as f64 * 0.02;
        let t = min_tree(&instance, &[lambda]);
        let phi = phi_tree(&instance, &budgets, &[lambda]);
        println!(
            "{lambda:>8.3} {phi:>12.6} {:>12.4}",
            t.costs[0] - budgets.values[0]
        );
    }

    let cert = dual_ascent_tree(&instance, &budgets, &TreeConfig::default())?;
    println!(
        "\ndual optimum: lambda* = {:.6}, phi(lambda*) = {:.6}, subgradient = {:.4}",
        cert.lambda_star[0], cert.phi, cert.subgradient[0]
    );
    println!(
        "phi(lambda*) lower-bounds every feasible tree's weight (weak duality); \
the tied trees at the breakpoint: {}",
        cert.optimal_family.len()
    );
    Ok(())
}
