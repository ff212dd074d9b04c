//! Exact rational arithmetic.
//!
//! Every fractional quantity in this crate (quotas, multipliers, breakpoints,
//! signpost shifts, decomposition weights) is a [`Rat`]: an arbitrary-precision
//! rational kept in lowest terms with a positive denominator. There is no
//! floating-point fast path anywhere; `to_f64` exists only for reporting.

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

/// Arbitrary-precision rational, always in lowest terms, denominator > 0.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    /// `num/den` from machine integers. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_u64(n: u64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ParseRat("division by zero".into()));
        }
        Ok(Rat(BigRational::new(num, den)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rat(BigRational::from_integer(n))
    }

    /// The dyadic rational `bits / 2^64`, the exact value of one 64-bit
    /// uniform draw. Lies in `[0, 1)`.
    pub fn dyadic64(bits: u64) -> Self {
        let den = BigInt::from(BigUint::one() << 64);
        Rat(BigRational::new(BigInt::from(bits), den))
    }

    /// The exact rational value of a finite float (every finite f64 is a
    /// dyadic rational). Panics on NaN or infinity.
    pub fn from_f64_exact(x: f64) -> Self {
        Rat(BigRational::from_float(x).expect("finite float"))
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Fractional part `self - floor(self)`, in `[0, 1)`.
    pub fn fract(&self) -> Rat {
        Rat(&self.0 - self.0.floor())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Result<Rat> {
        if self.is_zero() {
            return Err(Error::ParseRat("reciprocal of zero".into()));
        }
        Ok(Rat(self.0.recip()))
    }

    /// Exact division; division by zero is an error.
    pub fn checked_div(&self, rhs: &Rat) -> Result<Rat> {
        if rhs.is_zero() {
            return Err(Error::ParseRat("division by zero".into()));
        }
        Ok(Rat(&self.0 / &rhs.0))
    }

    pub fn pow(&self, exp: i32) -> Rat {
        Rat(self.0.pow(exp))
    }

    pub fn min(self, other: Rat) -> Rat {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Rat) -> Rat {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Lossy conversion for reports and Hoeffding-style bounds only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn to_u64(&self) -> Option<u64> {
        if self.is_integer() {
            self.0.to_integer().to_u64()
        } else {
            None
        }
    }
}

impl fmt::Display for Rat {
    /// Canonical form is always `num/den`, e.g. `13/2` or `7/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Accepts `a/b` or a bare integer `a`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = || Error::ParseRat(s.to_string());
        match s.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
                let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
                if den.is_zero() {
                    return Err(err());
                }
                Ok(Rat(BigRational::new(num, den)))
            }
            None => {
                let num = BigInt::from_str(s).map_err(|_| err())?;
                Ok(Rat(BigRational::from_integer(num)))
            }
        }
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct RatVisitor;
        impl de::Visitor<'_> for RatVisitor {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "a rational as \"num/den\" or an integer")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Rat, E> {
                Rat::from_str(v).map_err(E::custom)
            }
            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_int(v))
            }
            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Rat, E> {
                Ok(Rat::from_u64(v))
            }
        }
        deserializer.deserialize_any(RatVisitor)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl $trait<&Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl $trait<Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn lowest_terms_and_sign() {
        let r = Rat::new(6, -4);
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!(Rat::new(0, 5).to_string(), "0/1");
    }

    #[test]
    fn parse_forms() {
        assert_eq!("13/2".parse::<Rat>().unwrap(), Rat::new(13, 2));
        assert_eq!("7".parse::<Rat>().unwrap(), Rat::from_int(7));
        assert_eq!("14/4".parse::<Rat>().unwrap(), Rat::new(7, 2));
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn floor_ceil_fract() {
        let r = Rat::new(-7, 2);
        assert_eq!(r.floor_int(), BigInt::from(-4));
        assert_eq!(r.ceil_int(), BigInt::from(-3));
        assert_eq!(r.fract(), Rat::new(1, 2));
        assert_eq!(Rat::new(39, 10).fract(), Rat::new(9, 10));
    }

    #[test]
    fn division_by_zero_is_error() {
        assert!(Rat::one().checked_div(&Rat::zero()).is_err());
    }

    #[test]
    fn dyadic_draws_live_in_unit_interval() {
        assert_eq!(Rat::dyadic64(0), Rat::zero());
        let top = Rat::dyadic64(u64::MAX);
        assert!(top < Rat::one());
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rat::new(n, d);
            let back: Rat = r.to_string().parse().unwrap();
            prop_assert_eq!(back, r);
        }

        #[test]
        fn arithmetic_is_exact(a in -100i64..100, b in 1i64..100, c in -100i64..100, d in 1i64..100) {
            let x = Rat::new(a, b);
            let y = Rat::new(c, d);
            // ad + cb over bd, unreduced cross-check
            let sum = &x + &y;
            prop_assert_eq!(sum, Rat::new(a * d + c * b, b * d));
            let prod = &x * &y;
            prop_assert_eq!(prod, Rat::new(a * c, b * d));
        }
    }
}
