//! The generating-function oracle `((t/2)/sin(t/2))^{k+1}`.

use hodge_trees::oracle::{bernoulli_rhs, gf_expand, oracle_integral, sine_kernel};

fn main() -> hodge_trees::Result<()> {
    let kernel = sine_kernel(9)?;
    for (p, c) in kernel
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
    {
        println!("t^{p}: {c}");
    }

    let g_max = 4;
    let gf = gf_expand(g_max)?;
    for g in 1..=g_max {
        let row: Vec<String> = (0..=g)
            .map(|i| oracle_integral(g, i, &gf).map(|v| v.to_string()))
            .collect::<Result<_, _>>()?;
        println!("g={g}: {}", row.join("  "));
    }
    println!(
        "g! * integral of lambda_3, closed form: {}",
        bernoulli_rhs(3)?
    );
    Ok(())
}
