//! Decorated trees: listing, weights, validation and history round trips.

use hodge_trees::trees::{
    bijectivity_explicit, canonical_encoding, count_histories, enumerate_trees, history_of,
    tree_sum, tree_weight, validate_tree, DecoratedTree,
};

fn main() -> hodge_trees::Result<()> {
    let (g, n) = (2, 3);
    let trees = enumerate_trees(g, n);
    println!("g={g} n={n}: {} trees", trees.len());
    for t in &trees {
        println!("  {:<28} {}", canonical_encoding(t), tree_weight(t)?);
    }
    println!("sum = {}", tree_sum(g, n));

    let t = DecoratedTree::from_encoding("U2(B3(L1,L2))")?;
    println!(
        "{} has history {:?}",
        canonical_encoding(&t),
        history_of(&t)
    );

    let bad = DecoratedTree::from_encoding("B2(B1(L1,L2),L3)")?;
    println!("B2(B1(L1,L2),L3): {:?}", validate_tree(&bad));

    for (g, n) in [(0, 6), (1, 5), (2, 4)] {
        let r = bijectivity_explicit(g, n);
        println!(
            "g={g} n={n}: {} histories, bijective={}",
            count_histories(g, n),
            r.ok
        );
    }
    Ok(())
}
