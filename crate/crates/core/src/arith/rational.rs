//! Exact rationals backed by arbitrary-precision integers.
//!
//! Every value is kept in lowest terms with a positive denominator, and
//! renders as `p/q` (or `p` when the denominator is one).

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact, reduced fraction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ExactRational(BigRational);

/// Binary operation selector for [`rational_arithmetic`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Apply `op` to two rationals. Only division can fail.
pub fn rational_arithmetic(
    lhs: &ExactRational,
    rhs: &ExactRational,
    op: ArithOp,
) -> Result<ExactRational> {
    Ok(match op {
        ArithOp::Add => lhs + rhs,
        ArithOp::Sub => lhs - rhs,
        ArithOp::Mul => lhs * rhs,
        ArithOp::Div => lhs.checked_div(rhs)?,
    })
}

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Result<Self> {
        let denom = denom.into();
        if denom.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // BigRational::new reduces and moves the sign to the numerator.
        Ok(Self(BigRational::new(numer.into(), denom)))
    }

    /// Shorthand for small literal fractions. Panics on a zero denominator.
    pub fn frac(numer: i64, denom: i64) -> Self {
        Self::new(numer, denom).expect("nonzero denominator")
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn one() -> Self {
        Self(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self> {
        if exp < 0 && self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self(num_traits::Pow::pow(&self.0, exp)))
    }

    /// True when stored in lowest terms with a positive denominator.
    pub fn is_canonical(&self) -> bool {
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }

    /// Decimal rendering with `digits` places after the point, rounded half
    /// away from zero. Only for display; never feeds back into computation.
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let scaled: BigInt = self.numer().abs() * &scale * 2 + self.denom();
        let rounded = scaled.div_floor(&(self.denom() * 2));
        let (int_part, frac_part) = rounded.div_rem(&scale);
        let sign = if self.numer().is_negative() && !rounded.is_zero() {
            "-"
        } else {
            ""
        };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!(
                "{sign}{int_part}.{:0>width$}",
                frac_part.to_string(),
                width = digits
            )
        }
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        Self(r)
    }
}

macro_rules! from_int {
    ($($t:ty),*) => {$(
        impl From<$t> for ExactRational {
            fn from(n: $t) -> Self {
                Self::from_integer(n)
            }
        }
    )*};
}
from_int!(i32, i64, u32, u64, usize, BigInt);

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    /// Accepts `p` or `p/q` with `q > 0`. Unreduced input is reduced.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseRational(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, Some(q)),
            None => (s, None),
        };
        let numer: BigInt = p.parse().map_err(|_| bad())?;
        let denom: BigInt = match q {
            Some(q) if q.starts_with(['+', '-']) => return Err(bad()),
            Some(q) => q.parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if denom.is_zero() {
            return Err(bad());
        }
        Self::new(numer, denom)
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr<&ExactRational> for &ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(rhs.0))
            }
        }
        impl $tr<&ExactRational> for ExactRational {
            type Output = ExactRational;
            fn $m(self, rhs: &ExactRational) -> ExactRational {
                ExactRational(self.0.$m(&rhs.0))
            }
        }
        impl $atr<&ExactRational> for ExactRational {
            fn $am(&mut self, rhs: &ExactRational) {
                self.0.$am(&rhs.0);
            }
        }
        impl $atr<ExactRational> for ExactRational {
            fn $am(&mut self, rhs: ExactRational) {
                self.0.$am(rhs.0);
            }
        }
    };
}
binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl Sum for ExactRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a ExactRational> for ExactRational {
    fn sum<I: Iterator<Item = &'a Self>>(iter: I) -> Self {
        iter.fold(Self::zero(), |acc, x| acc + x)
    }
}

impl Product for ExactRational {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> ExactRational {
        s.parse().unwrap()
    }

    #[test]
    fn appendix_difference() {
        let two = ExactRational::from(2);
        let lhs = q("1/180");
        let rhs = rational_arithmetic(&two, &q("1/640"), ArithOp::Mul).unwrap();
        let diff = rational_arithmetic(&lhs, &rhs, ArithOp::Sub).unwrap();
        assert_eq!(diff, q("7/2880"));
    }

    #[test]
    fn add_reduces() {
        let sum = rational_arithmetic(&q("3/24"), &q("1/6"), ArithOp::Add).unwrap();
        assert_eq!(sum.to_string(), "7/24");
        assert!(sum.is_canonical());
    }

    #[test]
    fn multiplicative_identity() {
        for s in ["0", "-5/7", "13", "1/480"] {
            let x = q(s);
            assert_eq!(
                rational_arithmetic(&x, &ExactRational::one(), ArithOp::Mul).unwrap(),
                x
            );
        }
    }

    #[test]
    fn divide_by_zero_is_an_error() {
        let err = rational_arithmetic(&q("1/2"), &ExactRational::zero(), ArithOp::Div);
        assert_eq!(err, Err(Error::DivisionByZero));
        assert_eq!(ExactRational::new(1, 0), Err(Error::DivisionByZero));
        assert!(ExactRational::zero().pow(-1).is_err());
    }

    #[test]
    fn rendering() {
        assert_eq!(ExactRational::frac(6, -4).to_string(), "-3/2");
        assert_eq!(ExactRational::frac(8, 4).to_string(), "2");
        assert_eq!(ExactRational::zero().to_string(), "0");
        assert_eq!(q("10/4").to_string(), "5/2");
        assert!("1/-2".parse::<ExactRational>().is_err());
        assert!("1/0".parse::<ExactRational>().is_err());
        assert!("abc".parse::<ExactRational>().is_err());
        assert!("1/".parse::<ExactRational>().is_err());
    }

    #[test]
    fn decimal_rounding() {
        assert_eq!(q("1/480").to_decimal(6), "0.002083");
        assert_eq!(q("2/3").to_decimal(3), "0.667");
        assert_eq!(q("-1/30").to_decimal(4), "-0.0333");
        assert_eq!(q("1/2").to_decimal(0), "1");
        assert_eq!(q("-1/2000").to_decimal(2), "0.00");
    }

    #[test]
    fn powers() {
        assert_eq!(q("2/3").pow(3).unwrap(), q("8/27"));
        assert_eq!(q("2/3").pow(-2).unwrap(), q("9/4"));
        assert_eq!(q("5").pow(0).unwrap(), ExactRational::one());
    }
}
