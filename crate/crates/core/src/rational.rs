//! Exact rationals extended by a single point at positive infinity.
//!
//! Lebesgue exponents live in `[1, ∞]`, so `∞` is an ordinary value here:
//! it compares above every finite value and `1/∞ = 0`. Operations whose
//! result would leave the extended half-line (`∞ − ∞`, `0·∞`, `−∞`) and
//! division by zero are errors through the `checked_*` methods; the operator
//! impls panic on them the same way integer division by zero does.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Rational {
    Finite(BigRational),
    PosInf,
}

impl Rational {
    /// `n/d` in lowest terms. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        assert!(d != 0, "zero denominator");
        Rational::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn int(n: i64) -> Self {
        Rational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational::Finite(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational::Finite(BigRational::one())
    }

    pub fn inf() -> Self {
        Rational::PosInf
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Result<Self, Error> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Rational::Finite(BigRational::new(n, d)))
    }

    /// Exact value of a finite double (every finite `f64` is a dyadic rational).
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Rational::Finite)
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Rational::Finite(_))
    }

    pub fn is_inf(&self) -> bool {
        matches!(self, Rational::PosInf)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Rational::Finite(x) if x.is_zero())
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Rational::Finite(x) => x.is_positive(),
            Rational::PosInf => true,
        }
    }

    pub fn is_negative(&self) -> bool {
        matches!(self, Rational::Finite(x) if x.is_negative())
    }

    pub fn is_integer(&self) -> bool {
        matches!(self, Rational::Finite(x) if x.is_integer())
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        match self {
            Rational::PosInf => 1,
            Rational::Finite(x) if x.is_positive() => 1,
            Rational::Finite(x) if x.is_negative() => -1,
            _ => 0,
        }
    }

    pub fn as_big(&self) -> Option<&BigRational> {
        match self {
            Rational::Finite(x) => Some(x),
            Rational::PosInf => None,
        }
    }

    pub fn numer(&self) -> Option<&BigInt> {
        self.as_big().map(|x| x.numer())
    }

    pub fn denom(&self) -> Option<&BigInt> {
        self.as_big().map(|x| x.denom())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Rational::PosInf => f64::INFINITY,
            Rational::Finite(x) => ratio_to_f64(x),
        }
    }

    pub fn abs(&self) -> Self {
        match self {
            Rational::Finite(x) => Rational::Finite(x.abs()),
            Rational::PosInf => Rational::PosInf,
        }
    }

    /// Reciprocal with `1/∞ = 0`; zero has no reciprocal.
    pub fn recip(&self) -> Result<Self, Error> {
        match self {
            Rational::PosInf => Ok(Rational::zero()),
            Rational::Finite(x) if x.is_zero() => Err(Error::DivisionByZero),
            Rational::Finite(x) => Ok(Rational::Finite(x.recip())),
        }
    }

    /// Lebesgue exponent from its reciprocal: `0 ↦ ∞`, otherwise `1/x`.
    pub fn from_reciprocal(x: &Rational) -> Result<Self, Error> {
        if x.is_zero() {
            Ok(Rational::PosInf)
        } else {
            x.recip()
        }
    }

    /// Integer power of a finite value.
    pub fn powi(&self, e: i32) -> Result<Self, Error> {
        match self {
            Rational::PosInf if e > 0 => Ok(Rational::PosInf),
            Rational::PosInf if e == 0 => Ok(Rational::one()),
            Rational::PosInf => Ok(Rational::zero()),
            Rational::Finite(x) if e < 0 && x.is_zero() => Err(Error::DivisionByZero),
            Rational::Finite(x) => Ok(Rational::Finite(num_traits::pow::Pow::pow(x, e))),
        }
    }

    pub fn checked_add(&self, rhs: &Rational) -> Result<Self, Error> {
        match (self, rhs) {
            (Rational::Finite(a), Rational::Finite(b)) => Ok(Rational::Finite(a + b)),
            _ => Ok(Rational::PosInf),
        }
    }

    pub fn checked_sub(&self, rhs: &Rational) -> Result<Self, Error> {
        match (self, rhs) {
            (Rational::Finite(a), Rational::Finite(b)) => Ok(Rational::Finite(a - b)),
            (Rational::PosInf, Rational::Finite(_)) => Ok(Rational::PosInf),
            _ => Err(Error::Arithmetic("difference with an infinite subtrahend".into())),
        }
    }

    pub fn checked_mul(&self, rhs: &Rational) -> Result<Self, Error> {
        match (self, rhs) {
            (Rational::Finite(a), Rational::Finite(b)) => Ok(Rational::Finite(a * b)),
            (Rational::PosInf, x) | (x, Rational::PosInf) => {
                if x.is_positive() {
                    Ok(Rational::PosInf)
                } else {
                    Err(Error::Arithmetic("infinity times a non-positive value".into()))
                }
            }
        }
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, Error> {
        match (self, rhs) {
            (_, r) if r.is_zero() => Err(Error::DivisionByZero),
            (Rational::Finite(a), Rational::Finite(b)) => Ok(Rational::Finite(a / b)),
            (Rational::Finite(_), Rational::PosInf) => Ok(Rational::zero()),
            (Rational::PosInf, r @ Rational::Finite(_)) if r.is_positive() => Ok(Rational::PosInf),
            _ => Err(Error::Arithmetic("quotient involving infinity is undefined".into())),
        }
    }

    /// Largest dyadic `k/2^bits` not exceeding a finite value.
    pub fn floor_dyadic(&self, bits: u32) -> Self {
        match self {
            Rational::PosInf => Rational::PosInf,
            Rational::Finite(x) => {
                let scale = BigInt::one() << bits;
                let scaled = (x * BigRational::from_integer(scale.clone())).floor();
                Rational::Finite(BigRational::new(scaled.to_integer(), scale))
            }
        }
    }
}

fn ratio_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Huge numerators or denominators: shift both to a common scale first.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift = (nb.max(db) - 900).max(0) as usize;
    let n = (x.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift).to_f64().unwrap_or(f64::INFINITY);
    n / d
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::int(n)
    }
}

impl From<BigRational> for Rational {
    fn from(x: BigRational) -> Self {
        Rational::Finite(x)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Rational::PosInf, Rational::PosInf) => Ordering::Equal,
            (Rational::PosInf, _) => Ordering::Greater,
            (_, Rational::PosInf) => Ordering::Less,
            (Rational::Finite(a), Rational::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::PosInf => f.write_str("inf"),
            Rational::Finite(x) if x.is_integer() => write!(f, "{}", x.numer()),
            Rational::Finite(x) => write!(f, "{}/{}", x.numer(), x.denom()),
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `inf`, `p/q`, integers and plain decimals (`0.25` is read as `1/4`).
    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        let bad = || Error::Parse(format!("not a rational: {s:?}"));
        match t {
            "inf" | "+inf" | "∞" | "infinity" => return Ok(Rational::PosInf),
            "" => return Err(bad()),
            _ => {}
        }
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            return Rational::from_big(n, d);
        }
        if let Some((ip, fp)) = t.split_once('.') {
            if fp.is_empty() || !fp.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let neg = ip.starts_with('-');
            let ip = ip.trim_start_matches(['-', '+']);
            if !ip.bytes().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
            let scale = num_traits::pow(BigInt::from(10), fp.len());
            let n = if neg { -digits } else { digits };
            return Rational::from_big(n, scale);
        }
        let n: BigInt = t.parse().map_err(|_| bad())?;
        Ok(Rational::Finite(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Rational;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a rational string such as \"3/4\" or \"inf\", or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rational, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::Finite(BigRational::from_integer(BigInt::from(v))))
            }
        }
        d.deserialize_any(V)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&self).$m(rhs)
            }
        }
        impl $tr<Rational> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$m(&rhs)
            }
        }
        impl $tr<i64> for Rational {
            type Output = Rational;
            fn $m(self, rhs: i64) -> Rational {
                (&self).$m(&Rational::int(rhs))
            }
        }
        impl $tr<i64> for &Rational {
            type Output = Rational;
            fn $m(self, rhs: i64) -> Rational {
                self.$m(&Rational::int(rhs))
            }
        }
        impl $tr<Rational> for i64 {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                (&Rational::int(self)).$m(&rhs)
            }
        }
        impl $tr<&Rational> for i64 {
            type Output = Rational;
            fn $m(self, rhs: &Rational) -> Rational {
                (&Rational::int(self)).$m(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Finite(x) => Rational::Finite(-x),
            Rational::PosInf => panic!("negative infinity is not representable"),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        -self.clone()
    }
}

/// Shorthand for `Rational::new`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}
