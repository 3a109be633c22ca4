//! Exact rational scalars and the extended value group `Q ∪ {∞}`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always stored reduced with a positive
/// denominator. Serializes as the string `"p/q"` (just `"p"` when `q = 1`).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rat(self.0.recip()))
    }

    /// Largest integer `≤ self`, as a `Rat`.
    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    /// Smallest integer `≥ self`, as a `Rat`.
    pub fn ceil(&self) -> Rat {
        Rat(self.0.ceil())
    }

    /// Fractional part `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Rat {
        self - &self.floor()
    }

    /// Exact conversion to `i64`; errors on non-integers and overflow.
    pub fn to_i64(&self) -> Result<i64> {
        if !self.is_integer() {
            return Err(Error::ValueGroup(self.to_string()));
        }
        self.0
            .numer()
            .to_i64()
            .ok_or_else(|| Error::Malformed(format!("integer out of range: {self}")))
    }

    pub fn pow(&self, exp: u32) -> Rat {
        let mut out = Rat::one();
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("invalid rational: {s:?}"));
        let mut parts = s.splitn(2, '/');
        let num: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let den: BigInt = match parts.next() {
            Some(d) => d.trim().parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(bad());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Self {
        Rat::from_int(n)
    }
}

macro_rules! rat_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
    };
}

rat_binop!(Add, add, +);
rat_binop!(Sub, sub, -);
rat_binop!(Mul, mul, *);

impl Div for &Rat {
    type Output = Rat;
    fn div(self, rhs: &Rat) -> Rat {
        assert!(!rhs.is_zero(), "division by zero");
        Rat(&self.0 / &rhs.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

/// A value in `Γ ∪ {∞}`: the valuation of a field element.
///
/// `∞` is absorbing for addition and larger than every rational.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum GammaVal {
    Finite(Rat),
    Infinity,
}

impl GammaVal {
    pub fn finite(q: impl Into<Rat>) -> Self {
        GammaVal::Finite(q.into())
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, GammaVal::Infinity)
    }

    pub fn as_finite(&self) -> Option<&Rat> {
        match self {
            GammaVal::Finite(q) => Some(q),
            GammaVal::Infinity => None,
        }
    }
}

impl PartialOrd for GammaVal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GammaVal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GammaVal::Infinity, GammaVal::Infinity) => Ordering::Equal,
            (GammaVal::Infinity, _) => Ordering::Greater,
            (_, GammaVal::Infinity) => Ordering::Less,
            (GammaVal::Finite(a), GammaVal::Finite(b)) => a.cmp(b),
        }
    }
}

impl Add for &GammaVal {
    type Output = GammaVal;
    fn add(self, rhs: &GammaVal) -> GammaVal {
        match (self, rhs) {
            (GammaVal::Finite(a), GammaVal::Finite(b)) => GammaVal::Finite(a + b),
            _ => GammaVal::Infinity,
        }
    }
}

impl fmt::Display for GammaVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GammaVal::Finite(q) => write!(f, "{q}"),
            GammaVal::Infinity => write!(f, "inf"),
        }
    }
}

impl Serialize for GammaVal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for GammaVal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "inf" {
            return Ok(GammaVal::Infinity);
        }
        s.parse()
            .map(GammaVal::Finite)
            .map_err(|e: Error| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_string_round_trip() {
        for s in ["0", "-7", "3/4", "-22/7", "100000000000000000000/3"] {
            let q: Rat = s.parse().unwrap();
            assert_eq!(q.to_string(), s);
        }
        assert_eq!("4/2".parse::<Rat>().unwrap().to_string(), "2");
        assert_eq!("2/-4".parse::<Rat>().unwrap().to_string(), "-1/2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn gamma_val_order_and_sum() {
        let inf = GammaVal::Infinity;
        let two = GammaVal::finite(2);
        assert!(inf > two);
        assert_eq!(&inf + &two, GammaVal::Infinity);
        assert_eq!(&two + &GammaVal::finite(-5), GammaVal::finite(-3));
    }
}
