//! Scalar kinds for distance matrices.
//!
//! Metrics are stored either as `f64` (real kind) or as exact rationals
//! (rational kind). Two exact representations share the rational kind:
//! [`Rational`] for general fractions and [`Dyadic`] for fractions whose
//! denominator is a power of two, which avoid gcd normalization and stay
//! cheap at hundreds of thousands of bits.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::json::real_value;
use crate::wide::Wide;

pub type Rational = BigRational;

/// Relative tolerance for real-kind metric axioms.
pub const REAL_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarKind {
    Real,
    Rational,
}

impl ScalarKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ScalarKind::Real => "real",
            ScalarKind::Rational => "rational",
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub trait Scalar: Clone + fmt::Debug + PartialEq + PartialOrd + Send + Sync + 'static {
    const KIND: ScalarKind;

    fn zero() -> Self;
    fn from_i64(v: i64) -> Self;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn halve(&self) -> Self;
    fn to_f64(&self) -> f64;
    fn to_wide(&self) -> Wide;

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Absolute slack allowed in the triangle inequality for a matrix whose
    /// largest entry is `max_entry`. Zero for exact kinds.
    fn triangle_tolerance(max_entry: &Self) -> Self;

    /// Whether the value equals the integer `k` (exactly, or within
    /// [`REAL_TOLERANCE`] for reals).
    fn is_integer_value(&self, k: i64) -> bool;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self, String>;
}

impl Scalar for f64 {
    const KIND: ScalarKind = ScalarKind::Real;

    fn zero() -> Self {
        0.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self) -> Self {
        self / 2.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn to_wide(&self) -> Wide {
        Wide::from_f64(*self)
    }
    fn triangle_tolerance(max_entry: &Self) -> Self {
        REAL_TOLERANCE * max_entry.abs()
    }
    fn is_integer_value(&self, k: i64) -> bool {
        (self - k as f64).abs() <= REAL_TOLERANCE
    }
    fn to_json(&self) -> Value {
        real_value(*self)
    }
    fn from_json(v: &Value) -> Result<Self, String> {
        v.as_f64()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("expected a finite number, found {v}"))
    }
}

/// Parses `"p/q"` or `"k"`; the result is normalized to lowest terms.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let bad = || format!("malformed rational {s:?}");
    let r = match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Rational::new(p, q)
        }
        None => Rational::from_integer(BigInt::from_str(s.trim()).map_err(|_| bad())?),
    };
    Ok(r)
}

/// Lowest-terms `"p/q"`, or `"k"` for integers.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero() -> Self {
        Zero::zero()
    }
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn halve(&self) -> Self {
        self / BigInt::from(2)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self)
            .filter(|x| x.is_finite())
            .unwrap_or_else(|| self.to_wide().to_f64())
    }
    fn to_wide(&self) -> Wide {
        Wide::from_rational(self)
    }
    fn triangle_tolerance(_max_entry: &Self) -> Self {
        Zero::zero()
    }
    fn is_integer_value(&self, k: i64) -> bool {
        self.is_integer() && self.numer() == &BigInt::from(k)
    }
    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }
    fn from_json(v: &Value) -> Result<Self, String> {
        match v {
            Value::String(s) => parse_rational(s),
            other => Err(format!("expected a rational string \"p/q\", found {other}")),
        }
    }
}

/// Exact number `mantissa * 2^exponent`.
///
/// Normalized so the mantissa is odd (or the value is zero with exponent 0);
/// equality is therefore structural.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigInt,
    exponent: i64,
}

impl Dyadic {
    pub fn new(mantissa: BigInt, exponent: i64) -> Dyadic {
        if mantissa.is_zero() {
            return Dyadic { mantissa, exponent: 0 };
        }
        let tz = mantissa.trailing_zeros().unwrap_or(0);
        Dyadic { mantissa: mantissa >> tz, exponent: exponent + tz as i64 }
    }

    pub fn from_int(v: i64) -> Dyadic {
        Dyadic::new(BigInt::from(v), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Dyadic {
        Dyadic { mantissa: BigInt::one(), exponent: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    /// Both mantissas shifted to the smaller exponent.
    fn aligned(&self, other: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = self.exponent.min(other.exponent);
        let a = &self.mantissa << (self.exponent - e) as usize;
        let b = &other.mantissa << (other.exponent - e) as usize;
        (a, b, e)
    }

    pub fn to_rational(&self) -> Rational {
        if self.exponent >= 0 {
            Rational::from_integer(&self.mantissa << self.exponent as usize)
        } else {
            // odd mantissa over a power of two is already in lowest terms
            Rational::new_raw(self.mantissa.clone(), BigInt::one() << (-self.exponent) as usize)
        }
    }

    pub fn from_rational(r: &Rational) -> Option<Dyadic> {
        let d = r.denom();
        let tz = d.trailing_zeros().unwrap_or(0);
        if (d >> tz as usize).is_one() {
            Some(Dyadic::new(r.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    pub fn signum(&self) -> i32 {
        if self.mantissa.is_zero() {
            0
        } else if self.mantissa.is_negative() {
            -1
        } else {
            1
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        self.minus(other).signum().cmp(&0)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.to_rational()))
    }
}

impl Scalar for Dyadic {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn zero() -> Self {
        Dyadic::from_int(0)
    }
    fn from_i64(v: i64) -> Self {
        Dyadic::from_int(v)
    }
    fn plus(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }
    fn minus(&self, other: &Self) -> Self {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a - b, e)
    }
    fn times(&self, other: &Self) -> Self {
        Dyadic::new(&self.mantissa * &other.mantissa, self.exponent + other.exponent)
    }
    fn halve(&self) -> Self {
        if self.mantissa.is_zero() {
            return self.clone();
        }
        Dyadic { mantissa: self.mantissa.clone(), exponent: self.exponent - 1 }
    }
    fn to_f64(&self) -> f64 {
        self.to_wide().to_f64()
    }
    fn to_wide(&self) -> Wide {
        Wide::from_bigint(&self.mantissa) * Wide::pow2(self.exponent)
    }
    fn triangle_tolerance(_max_entry: &Self) -> Self {
        Dyadic::from_int(0)
    }
    fn is_integer_value(&self, k: i64) -> bool {
        *self == Dyadic::from_int(k)
    }
    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }
    fn from_json(v: &Value) -> Result<Self, String> {
        let r = Rational::from_json(v)?;
        Dyadic::from_rational(&r).ok_or_else(|| format!("{v} is not a dyadic rational"))
    }
}

/// Exact kinds whose matrices can be cleared to integers for
/// determinant work.
pub trait ExactScalar: Scalar {
    fn to_rational(&self) -> Rational;

    /// Multiplies every entry by one positive factor so all become
    /// integers; returns the integer matrix and the factor.
    fn clear_denominators(rows: &[Vec<Self>]) -> (Vec<Vec<BigInt>>, Rational);
}

impl ExactScalar for Rational {
    fn to_rational(&self) -> Rational {
        self.clone()
    }

    fn clear_denominators(rows: &[Vec<Self>]) -> (Vec<Vec<BigInt>>, Rational) {
        let lcm = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints = rows
            .iter()
            .map(|row| row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
            .collect();
        (ints, Rational::from_integer(lcm))
    }
}

impl ExactScalar for Dyadic {
    fn to_rational(&self) -> Rational {
        Dyadic::to_rational(self)
    }

    fn clear_denominators(rows: &[Vec<Self>]) -> (Vec<Vec<BigInt>>, Rational) {
        let min_exp = rows
            .iter()
            .flatten()
            .filter(|x| !x.mantissa.is_zero())
            .map(|x| x.exponent)
            .min()
            .unwrap_or(0)
            .min(0);
        let ints = rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|x| &x.mantissa << (x.exponent - min_exp) as usize)
                    .collect()
            })
            .collect();
        (ints, Dyadic::pow2(-min_exp).to_rational())
    }
}

/// Saturating conversion of an exact value to `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    Scalar::to_f64(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_strings_round_trip() {
        let r = parse_rational("6/8").unwrap();
        assert_eq!(format_rational(&r), "3/4");
        assert_eq!(format_rational(&parse_rational("-10/5").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn dyadic_arithmetic_is_exact() {
        let a = Dyadic::new(BigInt::from(3), -2); // 3/4
        let b = Dyadic::pow2(-3); // 1/8
        assert_eq!(a.plus(&b).to_rational(), parse_rational("7/8").unwrap());
        assert_eq!(a.minus(&b).to_string(), "5/8");
        assert_eq!(a.times(&b).to_string(), "3/32");
        assert_eq!(Dyadic::from_int(12), Dyadic::new(BigInt::from(3), 2));
        assert!(b < a);
        let tiny = Dyadic::pow2(-100_000);
        let one = Dyadic::from_int(1);
        assert!(one.minus(&tiny) < one);
        assert_eq!(one.minus(&tiny).plus(&tiny), one);
        assert_eq!(tiny.to_wide().ilog2(), Some(-100_000));
    }

    #[test]
    fn dyadic_rational_conversion() {
        assert!(Dyadic::from_rational(&parse_rational("1/3").unwrap()).is_none());
        let d = Dyadic::from_rational(&parse_rational("-5/16").unwrap()).unwrap();
        assert_eq!(d, Dyadic::new(BigInt::from(-5), -4));
    }

    #[test]
    fn clearing_denominators_scales_uniformly() {
        let rows = vec![vec![parse_rational("1/2").unwrap(), parse_rational("2/3").unwrap()]];
        let (ints, scale) = Rational::clear_denominators(&rows);
        assert_eq!(scale, parse_rational("6").unwrap());
        assert_eq!(ints[0], vec![BigInt::from(3), BigInt::from(4)]);
        let rows = vec![vec![Dyadic::pow2(-3), Dyadic::from_int(5)]];
        let (ints, scale) = Dyadic::clear_denominators(&rows);
        assert_eq!(scale, parse_rational("8").unwrap());
        assert_eq!(ints[0], vec![BigInt::from(1), BigInt::from(40)]);
    }
}
