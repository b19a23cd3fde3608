//! Individual W-numbers and the terms of one recursion step.

use hodge_trees::engine::{canonicalize, recursion_terms, WEngine};

fn main() -> hodge_trees::Result<()> {
    let key = canonicalize(&[1, 1, 1], 2, 1)?;
    println!("{key}, exponent {}", key.exponent());
    for (c, child) in recursion_terms(&key)? {
        println!("  {c:>8} * {child}");
    }

    let mut engine = WEngine::new();
    println!("{key} = {}", engine.w_value(&key)?);
    for weights in [vec![2], vec![3], vec![2, 1], vec![1, 1, 1, 1]] {
        for i in 0..=2 {
            let v = engine.w(2, i, &weights)?;
            println!("W^{i}_2({weights:?}) = {v}");
        }
    }
    println!("{:?}", engine.stats());
    Ok(())
}
