//! Run every cross-check and print one line per check.

use hodge_trees::engine::WEngine;
use hodge_trees::verify::{
    check_bernoulli_identity, check_choice_independence, check_genus0, check_oracle_agreement,
    check_tree_identity, default_aux_set,
};

fn main() -> hodge_trees::Result<()> {
    let mut engine = WEngine::new();
    let reports = [
        check_tree_identity(&mut engine, 3, 5)?,
        check_bernoulli_identity(3, 3)?,
        check_genus0(8)?,
        check_oracle_agreement(&mut engine, 6)?,
        check_choice_independence(&mut engine, 3, &default_aux_set())?,
    ];
    for r in &reports {
        println!("{r}");
    }
    if reports.iter().any(|r| !r.passed()) {
        std::process::exit(1);
    }
    Ok(())
}
