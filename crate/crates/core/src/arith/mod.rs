//! Exact numeric substrate: rationals, truncated power series, Bernoulli
//! numbers and a few integer helpers.

mod bernoulli;
mod rational;
mod series;

pub use bernoulli::{bernoulli, BernoulliTable};
pub use rational::{rational_arithmetic, ArithOp, ExactRational};
pub use series::{series_combine, series_exp, series_log, SeriesOp, TruncatedSeries};

use num_bigint::BigInt;
use num_traits::One;

/// `C(n, k)` as a big integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, j| acc * j)
}
