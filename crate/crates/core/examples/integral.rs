//! Hodge integrals from the W-number recursion.
//!
//! `cargo run --example integral -- 3 1`

use hodge_trees::engine::WEngine;
use hodge_trees::hodge::{binomial_terms, hodge_integral, HodgeQuery};

fn main() -> hodge_trees::Result<()> {
    let args: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.parse().ok())
        .collect();
    let (g, i) = match args[..] {
        [g, i] => (g, i),
        _ => (2, 1),
    };
    let query = HodgeQuery::new(g as i64, i as i64)?;
    println!(
        "integral of psi^{} lambda_{i} over M_{g},1",
        query.psi_power()
    );
    for term in binomial_terms(&query) {
        println!("  {:>6} * {}", term.sign_coefficient, term.key);
    }
    let mut engine = WEngine::new();
    let value = hodge_integral(&mut engine, &query)?;
    println!("= {value}  (~{})", value.to_decimal(12));
    println!("{} W-numbers memoized", engine.cache().len());
    Ok(())
}
