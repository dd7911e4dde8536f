//! Exact signed dyadic rationals `m * 2^-k`.
//!
//! Every quantity the constructions manipulate (approximants, restraints,
//! measures of machine domains) is a dyadic rational, so this type never
//! rounds. Values are kept in canonical form: the mantissa is odd, or the
//! value is zero with exponent zero. Two equal values therefore have
//! identical representations, which is what makes the textual form
//! (`"141*2^-8"`) round-trip bit for bit.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DyadicError {
    #[error("malformed dyadic literal {0:?} (expected \"<mantissa>*2^-<exponent>\")")]
    Parse(String),
    #[error("value {0} is outside [0, 1]")]
    OutOfUnitInterval(Dyadic),
}

/// An exact dyadic rational `mantissa * 2^-exponent`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: u64,
}

impl Dyadic {
    /// Canonical form of `m * 2^-k`.
    pub fn new(mantissa: impl Into<BigInt>, exponent: u64) -> Self {
        Self::normalize(mantissa.into(), exponent)
    }

    fn normalize(mantissa: BigInt, exponent: u64) -> Self {
        if mantissa.is_zero() {
            return Self::zero();
        }
        let twos = mantissa.trailing_zeros().unwrap_or(0);
        let shift = twos.min(exponent);
        if shift == 0 {
            Dyadic { mantissa, exponent }
        } else {
            Dyadic {
                mantissa: mantissa >> shift,
                exponent: exponent - shift,
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            mantissa: BigInt::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: 0,
        }
    }

    pub fn from_int(value: i64) -> Self {
        Self::new(value, 0)
    }

    /// `2^-n`.
    pub fn pow2_neg(n: u64) -> Self {
        Dyadic {
            mantissa: BigInt::one(),
            exponent: n,
        }
    }

    /// `2^n`.
    pub fn pow2(n: u64) -> Self {
        Dyadic {
            mantissa: BigInt::one() << n,
            exponent: 0,
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.mantissa.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.mantissa.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic {
            mantissa: self.mantissa.abs(),
            exponent: self.exponent,
        }
    }

    /// `self * 2^-n`, exact.
    pub fn shr(&self, n: u64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::normalize(self.mantissa.clone(), self.exponent + n)
    }

    pub fn half(&self) -> Self {
        self.shr(1)
    }

    /// `floor(log2 |self|)`, or `None` for zero.
    pub fn floor_log2(&self) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(self.mantissa.bits() as i64 - 1 - self.exponent as i64)
    }

    /// If `self = 2^e` for some integer `e`, returns `e`.
    pub fn log2_exact(&self) -> Option<i64> {
        if self.mantissa.is_one() {
            Some(-(self.exponent as i64))
        } else if self.is_positive() && self.exponent == 0 {
            let bits = self.mantissa.bits();
            let twos = self.mantissa.trailing_zeros()?;
            (twos + 1 == bits).then_some(twos as i64)
        } else {
            None
        }
    }

    /// Largest multiple of `2^-precision` not exceeding `self`.
    pub fn floor_to(&self, precision: u64) -> Self {
        if self.exponent <= precision {
            return self.clone();
        }
        // BigInt >> rounds toward negative infinity.
        Self::normalize(&self.mantissa >> (self.exponent - precision), precision)
    }

    /// Finite binary expansion of a value in `[0, 1]`: the lengths `n` with
    /// `self = sum 2^-n`, shortest (heaviest) first.
    pub fn binary_expansion(&self) -> Result<Vec<u64>, DyadicError> {
        if self.is_negative() || *self > Dyadic::one() {
            return Err(DyadicError::OutOfUnitInterval(self.clone()));
        }
        if self.is_zero() {
            return Ok(Vec::new());
        }
        if self.exponent == 0 {
            return Ok(vec![0]);
        }
        let magnitude = self.mantissa.magnitude();
        let top = magnitude.bits();
        Ok((0..top)
            .rev()
            .filter(|&j| magnitude.bit(j))
            .map(|j| self.exponent - j)
            .collect())
    }

    /// Lossy conversion for display purposes.
    pub fn to_f64(&self) -> f64 {
        let bits = self.mantissa.bits();
        let (mantissa, exponent) = if bits > 60 {
            let drop = bits - 60;
            (&self.mantissa >> drop, self.exponent as i64 - drop as i64)
        } else {
            (self.mantissa.clone(), self.exponent as i64)
        };
        let m = mantissa.to_f64().unwrap_or(0.0);
        m * 2f64.powi(-(exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32))
    }

    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, u64) {
        match self.exponent.cmp(&other.exponent) {
            Ordering::Equal => (self.mantissa.clone(), other.mantissa.clone(), self.exponent),
            Ordering::Greater => (
                self.mantissa.clone(),
                &other.mantissa << (self.exponent - other.exponent),
                self.exponent,
            ),
            Ordering::Less => (
                &self.mantissa << (other.exponent - self.exponent),
                other.mantissa.clone(),
                other.exponent,
            ),
        }
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Self::zero()
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (ls, rs) = (self.mantissa.sign(), other.mantissa.sign());
        if ls != rs {
            let rank = |s: Sign| match s {
                Sign::Minus => 0,
                Sign::NoSign => 1,
                Sign::Plus => 2,
            };
            return rank(ls).cmp(&rank(rs));
        }
        if ls == Sign::NoSign {
            return Ordering::Equal;
        }
        if self.exponent == other.exponent {
            return self.mantissa.cmp(&other.mantissa);
        }
        // Same sign: magnitudes in different binades compare without shifting.
        let (a, b) = (self.floor_log2().unwrap(), other.floor_log2().unwrap());
        if a != b {
            let by_magnitude = a.cmp(&b);
            return if ls == Sign::Plus {
                by_magnitude
            } else {
                by_magnitude.reverse()
            };
        }
        let (l, r, _) = self.aligned(other);
        l.cmp(&r)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^-{}", self.mantissa, self.exponent)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Dyadic {
    type Err = DyadicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || DyadicError::Parse(s.to_string());
        let (m, k) = match s.split_once("*2^-") {
            Some((m, k)) => (m, k.parse::<u64>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let m = m.parse::<BigInt>().map_err(|_| bad())?;
        Ok(Dyadic::new(m, k))
    }
}

impl Serialize for Dyadic {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Dyadic {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl From<i64> for Dyadic {
    fn from(value: i64) -> Self {
        Dyadic::from_int(value)
    }
}

fn add_ref(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    let (l, r, e) = a.aligned(b);
    Dyadic::normalize(l + r, e)
}

fn sub_ref(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if b.is_zero() {
        return a.clone();
    }
    let (l, r, e) = a.aligned(b);
    Dyadic::normalize(l - r, e)
}

fn mul_ref(a: &Dyadic, b: &Dyadic) -> Dyadic {
    if a.is_zero() || b.is_zero() {
        return Dyadic::zero();
    }
    Dyadic::normalize(&a.mantissa * &b.mantissa, a.exponent + b.exponent)
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $f:ident) => {
        impl $trait<&Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                $f(self, rhs)
            }
        }
        impl $trait<Dyadic> for &Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                $f(self, &rhs)
            }
        }
        impl $trait<&Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: &Dyadic) -> Dyadic {
                $f(&self, rhs)
            }
        }
        impl $trait<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $method(self, rhs: Dyadic) -> Dyadic {
                $f(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mantissa: -self.mantissa,
            exponent: self.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -(self.clone())
    }
}

impl AddAssign<&Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: &Dyadic) {
        *self = add_ref(self, rhs);
    }
}

impl AddAssign<Dyadic> for Dyadic {
    fn add_assign(&mut self, rhs: Dyadic) {
        *self = add_ref(self, &rhs);
    }
}

impl SubAssign<&Dyadic> for Dyadic {
    fn sub_assign(&mut self, rhs: &Dyadic) {
        *self = sub_ref(self, rhs);
    }
}

impl Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Dyadic> for Dyadic {
    fn sum<I: Iterator<Item = &'a Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |acc, x| acc + x)
    }
}

/// Shorthand for `m * 2^-k` in tests and examples.
pub fn dy(mantissa: i64, exponent: u64) -> Dyadic {
    Dyadic::new(mantissa, exponent)
}
