//! Bernoulli numbers, with the convention B_1 = -1/2.

use hodge_trees::arith::bernoulli;

fn main() {
    for m in 0..=20 {
        let b = bernoulli(m);
        if !b.is_zero() {
            println!("B_{m:<2} = {b}");
        }
    }
}
