//! Univariate power series in `t` truncated modulo `t^order`.

use crate::arith::ExactRational;
use crate::error::{Error, Result};

/// Power series `Σ c_k t^k` kept modulo `t^order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<ExactRational>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Mul,
    Div,
}

/// Combine two series of equal order bound.
pub fn series_combine(
    lhs: &TruncatedSeries,
    rhs: &TruncatedSeries,
    op: SeriesOp,
) -> Result<TruncatedSeries> {
    match op {
        SeriesOp::Add => lhs.add(rhs),
        SeriesOp::Mul => lhs.mul(rhs),
        SeriesOp::Div => lhs.div(rhs),
    }
}

pub fn series_log(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.log()
}

pub fn series_exp(s: &TruncatedSeries) -> Result<TruncatedSeries> {
    s.exp()
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Result<Self> {
        if order == 0 {
            return Err(Error::ZeroOrder);
        }
        Ok(Self {
            coeffs: vec![ExactRational::zero(); order],
        })
    }

    pub fn one(order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        s.coeffs[0] = ExactRational::one();
        Ok(s)
    }

    /// Build from leading coefficients; missing ones are zero and extra ones
    /// beyond the bound are dropped.
    pub fn from_coeffs(
        coeffs: impl IntoIterator<Item = ExactRational>,
        order: usize,
    ) -> Result<Self> {
        let mut s = Self::zero(order)?;
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        Ok(s)
    }

    /// The series `t` (or `0` when the bound is 1).
    pub fn variable(order: usize) -> Result<Self> {
        let mut s = Self::zero(order)?;
        if order > 1 {
            s.coeffs[1] = ExactRational::one();
        }
        Ok(s)
    }

    pub fn order_bound(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    /// Coefficient of `t^k`; `None` when `k` is beyond the truncation.
    pub fn coeff(&self, k: usize) -> Option<&ExactRational> {
        self.coeffs.get(k)
    }

    pub fn constant_term(&self) -> &ExactRational {
        &self.coeffs[0]
    }

    fn check_order(&self, rhs: &Self) -> Result<()> {
        if self.order_bound() != rhs.order_bound() {
            return Err(Error::OrderMismatch(self.order_bound(), rhs.order_bound()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        Ok(Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        let n = self.order_bound();
        let mut out = vec![ExactRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Ok(Self { coeffs: out })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .constant_term()
            .recip()
            .map_err(|_| Error::NotInvertible)?;
        let n = self.order_bound();
        let mut out: Vec<ExactRational> = Vec::with_capacity(n);
        out.push(c0.clone());
        for k in 1..n {
            let acc: ExactRational = (1..=k).map(|j| &self.coeffs[j] * &out[k - j]).sum();
            out.push(-(acc * &c0));
        }
        Ok(Self { coeffs: out })
    }

    pub fn div(&self, rhs: &Self) -> Result<Self> {
        self.check_order(rhs)?;
        self.mul(&rhs.inverse()?)
    }

    /// Nonnegative integer power by repeated squaring.
    pub fn pow(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.order_bound()).expect("order is positive");
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).expect("same order");
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base).expect("same order");
            }
        }
        acc
    }

    /// Formal derivative; the top coefficient becomes zero.
    fn derivative(&self) -> Self {
        let n = self.order_bound();
        let mut coeffs = vec![ExactRational::zero(); n];
        for k in 1..n {
            coeffs[k - 1] = &self.coeffs[k] * &ExactRational::from(k);
        }
        Self { coeffs }
    }

    /// Antiderivative with zero constant term, truncated at the same bound.
    fn integral(&self) -> Self {
        let n = self.order_bound();
        let coeffs = std::iter::once(ExactRational::zero())
            .chain((1..n).map(|k| {
                self.coeffs[k - 1]
                    .checked_div(&ExactRational::from(k))
                    .expect("k > 0")
            }))
            .collect();
        Self { coeffs }
    }

    /// `log s = ∫ s'/s`; requires constant term 1.
    pub fn log(&self) -> Result<Self> {
        if !self.constant_term().is_one() {
            return Err(Error::LogConstantTerm);
        }
        Ok(self.derivative().mul(&self.inverse()?)?.integral())
    }

    /// `f = exp(h)` from `f' = h' f`, i.e. `k f_k = Σ_{j=1}^{k} j h_j f_{k-j}`.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::ExpConstantTerm);
        }
        let n = self.order_bound();
        let mut out: Vec<ExactRational> = Vec::with_capacity(n);
        out.push(ExactRational::one());
        for k in 1..n {
            let acc: ExactRational = (1..=k)
                .filter(|&j| !self.coeffs[j].is_zero())
                .map(|j| &self.coeffs[j] * &ExactRational::from(j) * &out[k - j])
                .sum();
            out.push(acc.checked_div(&ExactRational::from(k)).expect("k > 0"));
        }
        Ok(Self { coeffs: out })
    }
}
