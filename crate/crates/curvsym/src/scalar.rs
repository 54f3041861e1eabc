//! Exact rational scalars and the scalar-kind abstraction shared by tensors.
//!
//! Tensors are homogeneous in their scalar kind: either exact rationals
//! (arbitrary precision, always in lowest terms with positive denominator)
//! or IEEE 754 doubles. All identity verification runs on the rational kind
//! with zero tolerance; floats appear only in the numerical curvature lab.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::ParseError;

/// Tag distinguishing the two scalar kinds in serialized tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ScalarKind {
    #[serde(rename = "rational")]
    Rational,
    #[serde(rename = "float64")]
    Float64,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "rational"),
            ScalarKind::Float64 => write!(f, "float64"),
        }
    }
}

/// Arbitrary-precision rational, kept in canonical reduced form
/// (lowest terms, denominator > 0) by the backing implementation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q` with q != 0; the result is reduced and the denominator positive.
    pub fn new(p: i64, q: i64) -> Self {
        assert!(q != 0, "rational with zero denominator");
        Rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Canonical `p/q` form, always with an explicit denominator (`3/1`, `-1/6`).
    pub fn to_fraction_string(&self) -> String {
        format!("{}/{}", self.0.numer(), self.0.denom())
    }

    /// Accepts `p/q` or a bare integer `p`; normalizes (reduces, makes the
    /// denominator positive), so `2/4` and `-1/-2` both parse to `1/2`.
    pub fn parse(s: &str) -> Result<Self, ParseError> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p = BigInt::from_str(p.trim()).map_err(|_| ParseError::BadRational(s.to_string()))?;
        let q = BigInt::from_str(q.trim()).map_err(|_| ParseError::BadRational(s.to_string()))?;
        if q.is_zero() {
            return Err(ParseError::BadRational(s.to_string()));
        }
        Ok(Rational(BigRational::new(p, q)))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_fraction_string())
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

/// Scalar kinds a [`crate::tensor::DenseTensor`] can hold.
///
/// Rational arithmetic is exact; float arithmetic is ordinary f64. The trait
/// carries just enough surface for tensor component algebra plus conversion
/// from the rational operator coefficients.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Absolute value, for inf-norm computations.
    fn abs_val(&self) -> Self;
    /// Total-order comparison of absolute values (exact for rationals).
    fn abs_gt(&self, rhs: &Self) -> bool;
    /// Lift an exact operator coefficient into this scalar kind.
    fn from_rational(r: &Rational) -> Self;
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero() -> Self {
        Rational::zero()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn abs_gt(&self, rhs: &Self) -> bool {
        self.abs() > rhs.abs()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Float64;

    fn zero() -> Self {
        0.0
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn abs_val(&self) -> Self {
        self.abs()
    }
    fn abs_gt(&self, rhs: &Self) -> bool {
        self.abs() > rhs.abs()
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reduces_and_normalizes_sign() {
        assert_eq!(Rational::parse("2/4").unwrap(), Rational::new(1, 2));
        assert_eq!(Rational::parse("-1/-2").unwrap(), Rational::new(1, 2));
        assert_eq!(Rational::parse("3/-6").unwrap(), Rational::new(-1, 2));
        assert_eq!(Rational::parse("7").unwrap(), Rational::from_int(7));
        assert!(Rational::parse("1/0").is_err());
        assert!(Rational::parse("x/2").is_err());
    }

    #[test]
    fn canonical_string_has_positive_denominator() {
        assert_eq!(Rational::new(1, -6).to_fraction_string(), "-1/6");
        assert_eq!(Rational::from_int(3).to_fraction_string(), "3/1");
    }

    #[test]
    fn exact_arithmetic() {
        let a = Rational::new(1, 3);
        let b = Rational::new(1, 6);
        assert_eq!(&a + &b, Rational::new(1, 2));
        assert_eq!(&a - &b, b);
        assert_eq!(&a * &b, Rational::new(1, 18));
        assert_eq!(&a / &b, Rational::from_int(2));
    }
}
