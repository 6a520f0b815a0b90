//! The gasoline lemma and cycle rotation on a small instance: the two
//! breakpoint matchings, their alternating cycle, the signed sequence, the
//! start index with nonpositive prefix sums, and the feasible exchange.
//!
//! Run with: cargo run --example gasoline_rotation

use budgeted::assignment::{dual_search_match, gasoline_start, rotate_cycle, MatchConfig};
use budgeted::instance::{GraphKind, Instance};
use budgeted::oracle::exhaustive_rotation_check;

fn main() -> budgeted::Result<()> {
    // the lemma itself on a bare sequence
    let a = [2.0, -1.0, -1.0, 1.0, -2.0, 1.0];
    let ell = gasoline_start(&a)?;
    println!("sequence {a:?}: gasoline start {ell}");
    println!(
        "all valid starts (exhaustive): {:?}",
        exhaustive_rotation_check(&a)?
    );

    // and in context: rotate between the two breakpoint matchings
    let n = 9;
    let instance = Instance::generate(GraphKind::CompleteBipartite, n, 1, 1.0, 5)?;
    let config = MatchConfig::default();
    let costly = budgeted::assignment::min_assignment(&instance, 0.0).cost;
    let c1 = 0.55 * costly;
    let cert = dual_search_match(&instance, c1, &config)?;
    println!(
        "\nn = {n}, C_1 = {c1:.3}: lambda* = {:.5}, breakpoint costs {:.3} / {:.3}",
        cert.lambda_star, cert.m_low.cost, cert.m_high.cost
    );
    let (matching, state) = rotate_cycle(&instance, &cert, c1)?;
    println!("cycle edge ids  : {:?}", state.cycle);
    println!(
        "signed sequence : {:?}",
        state
            .a
            .iter()
            .map(|x| (x * 1e3).round() / 1e3)
            .collect::<Vec<_>>()
    );
    println!("start ell = {}, extent tau = {}", state.ell, state.tau);
    println!(
        "result: size {} (of {n}), cost {:.3} <= {c1:.3}, composite never rose: {}",
        matching.size,
        matching.cost,
        matching.composite_weight(cert.lambda_star)
            <= cert.m_low.composite_weight(cert.lambda_star) + 1e-9
    );
    Ok(())
}
