//! Persisting the W-number memo table and reusing it.

use hodge_trees::engine::{MemoCache, WEngine};
use hodge_trees::hodge::{hodge_integral, HodgeQuery};

fn main() -> hodge_trees::Result<()> {
    let path = std::env::temp_dir().join("hodge-example.cache");

    let mut engine = WEngine::new();
    let v = hodge_integral(&mut engine, &HodgeQuery::new(4, 2)?)?;
    let cold = engine.stats().expansions;
    engine.cache().save(&path)?;
    println!(
        "g=4 i=2: {v}, {cold} expansions, {} entries saved",
        engine.cache().len()
    );

    let mut warm = WEngine::with_cache(MemoCache::load(&path)?);
    let again = hodge_integral(&mut warm, &HodgeQuery::new(4, 2)?)?;
    assert_eq!(v, again);
    println!("reloaded: {again}, {} expansions", warm.stats().expansions);

    let text = std::fs::read_to_string(&path)?;
    println!("first lines:");
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    std::fs::remove_file(&path)?;
    Ok(())
}
