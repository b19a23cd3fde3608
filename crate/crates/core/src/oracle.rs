//! Closed-form oracle: the expansion
//!
//! ```text
//! 1 + Σ_{g≥1} Σ_{j=0}^{g} t^{2g} k^j ∫ ψ_1^{2g-2+j} λ_{g-j} = ((t/2) / sin(t/2))^{k+1}
//! ```
//!
//! computed over exact rationals as a polynomial in `k` whose coefficients
//! are truncated series in `t`.

use crate::arith::{bernoulli, factorial, ExactRational, TruncatedSeries};
use crate::error::{Error, Result};

/// `(t/2) / sin(t/2)` modulo `t^order`.
pub fn sine_kernel(order: usize) -> Result<TruncatedSeries> {
    // sin(t/2)/(t/2) = Σ_m (-1)^m t^{2m} / (4^m (2m+1)!)
    let coeffs = (0..order).map(|p| {
        if p % 2 == 1 {
            return ExactRational::zero();
        }
        let m = p / 2;
        let den = ExactRational::from(factorial(2 * m as u64 + 1))
            * ExactRational::from(4u64).pow(m as i32).expect("nonzero");
        let c = den.recip().expect("nonzero");
        if m % 2 == 1 {
            -c
        } else {
            c
        }
    });
    TruncatedSeries::from_coeffs(coeffs, order)?.inverse()
}

/// `((t/2)/sin(t/2))^{k+1}` as `Σ_j k^j F_j(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BivariateGF {
    g_max: u32,
    /// Entry `j` is the series multiplying `k^j`.
    coefficients: Vec<TruncatedSeries>,
}

impl BivariateGF {
    pub fn g_max(&self) -> u32 {
        self.g_max
    }

    pub fn k_degree_bound(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn order_bound(&self) -> usize {
        self.coefficients[0].order_bound()
    }

    /// Series multiplying `k^j`.
    pub fn k_entry(&self, j: usize) -> Option<&TruncatedSeries> {
        self.coefficients.get(j)
    }

    /// Coefficient of `t^p k^j` (zero past the stored `k` degree).
    pub fn coeff(&self, p: usize, j: usize) -> Option<ExactRational> {
        if p >= self.order_bound() {
            return None;
        }
        Some(
            self.coefficients
                .get(j)
                .map_or_else(ExactRational::zero, |s| s.coeffs()[p].clone()),
        )
    }
}

/// Expand the kernel power modulo `t^{2 g_max + 2}`.
///
/// With `L = log kernel`, `kernel^{k+1} = kernel · exp(k L) = Σ_j k^j kernel L^j / j!`.
/// `L` starts at `t^2`, so `k^j` only reaches `t^{2j}` and up; `j ≤ g_max` suffices.
pub fn gf_expand(g_max: u32) -> Result<BivariateGF> {
    if g_max < 1 {
        return Err(Error::InvalidQuery("max genus must be at least 1".into()));
    }
    let order = 2 * g_max as usize + 2;
    let kernel = sine_kernel(order)?;
    let log = kernel.log()?;
    let mut power = TruncatedSeries::one(order)?;
    let mut coefficients = Vec::with_capacity(g_max as usize + 1);
    for j in 0..=g_max as usize {
        if j > 0 {
            power = power.mul(&log)?.scale(&ExactRational::frac(1, j as i64));
        }
        coefficients.push(kernel.mul(&power)?);
    }
    Ok(BivariateGF {
        g_max,
        coefficients,
    })
}

/// `∫ ψ_1^{3g-2-i} λ_i`: the `t^{2g} k^{g-i}` coefficient.
pub fn oracle_integral(g: u32, i: u32, gf: &BivariateGF) -> Result<ExactRational> {
    if g < 1 || g > gf.g_max {
        return Err(Error::InvalidQuery(format!(
            "genus {g} outside 1..={}",
            gf.g_max
        )));
    }
    if i > g {
        return Err(Error::InvalidQuery(format!(
            "lambda index {i} exceeds genus {g}"
        )));
    }
    Ok(gf
        .coeff(2 * g as usize, (g - i) as usize)
        .expect("within truncation"))
}

/// `(2^{2g-1} - 1) g! |B_{2g}| / (2^{2g-1} (2g)!)`.
pub fn bernoulli_rhs(g: u32) -> Result<ExactRational> {
    if g < 1 {
        return Err(Error::InvalidQuery("genus must be at least 1".into()));
    }
    let p = ExactRational::from(2u64).pow(2 * g as i32 - 1)?;
    let num = (&p - &ExactRational::one())
        * ExactRational::from(factorial(g as u64))
        * bernoulli(2 * g as usize).abs();
    num.checked_div(&(p * ExactRational::from(factorial(2 * g as u64))))
}
