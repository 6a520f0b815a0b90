//! Generate a random instance, derive scale-law budgets, and round-trip
//! it through the text format.
//!
//! Run with: cargo run --example generate_instance

use budgeted::instance::{default_budgets, GraphKind, Instance};

fn main() -> budgeted::Result<()> {
    let instance = Instance::generate(GraphKind::Complete, 8, 2, 1.5, 42)?;
    println!(
        "generated {} instance: n = {}, r = {}, alpha = {}, {} edges",
        instance.kind.as_str(),
        instance.n,
        instance.r,
        instance.alpha,
        instance.edges.len()
    );
    for e in instance.edges.iter().take(3) {
        println!(
            "  edge {} ({},{}): w = {:.4}, c = {:?}",
            e.edge_id, e.u, e.v, e.weight, e.costs
        );
    }
    println!("  ...");

    let budgets = default_budgets(&instance, 2.0)?;
    println!("auto budgets at omega = 2: {:?}", budgets.values);

    // the text form round-trips bit-exactly
    let text = instance.to_text();
    let back = Instance::from_text(&text)?;
    assert_eq!(back, instance);
    println!("text form: {} bytes, round-trip exact", text.len());
    println!(
        "first lines:\n{}",
        text.lines().take(3).collect::<Vec<_>>().join("\n")
    );

    // regenerating from the same parameters reproduces every draw
    let again = Instance::generate(GraphKind::Complete, 8, 2, 1.5, 42)?;
    assert_eq!(again, instance);
    println!("regeneration from (kind, n, r, alpha, seed) is bit-for-bit identical");
    Ok(())
}
