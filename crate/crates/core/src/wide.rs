//! Floating point with an unbounded binary exponent.
//!
//! The isometric-hardness construction produces slacks far below
//! `f64::MIN_POSITIVE`. `Wide` keeps a 53-bit mantissa and an `i64`
//! exponent, which is enough to compare and combine those quantities with
//! ordinary double-precision relative error.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

/// `mant * 2^exp` with `0.5 <= |mant| < 1`, or exactly zero.
#[derive(Clone, Copy, Debug)]
pub struct Wide {
    mant: f64,
    exp: i64,
}

/// Splits a finite nonzero `x` into `(m, e)` with `x = m * 2^e`, `0.5 <= |m| < 1`.
fn frexp(x: f64) -> (f64, i64) {
    debug_assert!(x.is_finite() && x != 0.0);
    let bits = x.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i64;
    if biased == 0 {
        // subnormal: renormalize through a scale of 2^64
        let (m, e) = frexp(x * 18446744073709551616.0);
        return (m, e - 64);
    }
    let m_bits = (bits & !(0x7ffu64 << 52)) | (1022u64 << 52);
    (f64::from_bits(m_bits), biased - 1022)
}

/// `m * 2^e` as an `f64`, saturating to infinity or flushing to zero.
fn ldexp(m: f64, e: i64) -> f64 {
    if m == 0.0 {
        return 0.0;
    }
    if e > 2000 {
        return m.signum() * f64::INFINITY;
    }
    if e < -2200 {
        return m.signum() * 0.0;
    }
    let mut x = m;
    let mut e = e as i32;
    // stepwise to stay within powi's exact range
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e)
}

impl Wide {
    pub const ZERO: Wide = Wide { mant: 0.0, exp: 0 };

    pub fn from_f64(x: f64) -> Wide {
        assert!(x.is_finite(), "Wide::from_f64 on non-finite value {x}");
        if x == 0.0 {
            return Wide::ZERO;
        }
        let (mant, exp) = frexp(x);
        Wide { mant, exp }
    }

    fn from_parts(m: f64, e: i64) -> Wide {
        if m == 0.0 {
            return Wide::ZERO;
        }
        let (mant, shift) = frexp(m);
        Wide { mant, exp: e + shift }
    }

    /// `2^e` exactly.
    pub fn pow2(e: i64) -> Wide {
        Wide { mant: 0.5, exp: e + 1 }
    }

    /// Nearest `f64`; values beyond the double range saturate.
    pub fn to_f64(self) -> f64 {
        ldexp(self.mant, self.exp)
    }

    pub fn is_zero(self) -> bool {
        self.mant == 0.0
    }

    pub fn is_negative(self) -> bool {
        self.mant < 0.0
    }

    pub fn abs(self) -> Wide {
        Wide { mant: self.mant.abs(), exp: self.exp }
    }

    /// `floor(log2 |x|)`; `None` for zero.
    pub fn ilog2(self) -> Option<i64> {
        (!self.is_zero()).then_some(self.exp - 1)
    }

    /// `log2 |x|` as an `f64`.
    pub fn log2(self) -> f64 {
        self.mant.abs().log2() + self.exp as f64
    }

    pub fn sqrt(self) -> Wide {
        assert!(!self.is_negative(), "sqrt of negative Wide");
        if self.is_zero() {
            return self;
        }
        if self.exp % 2 == 0 {
            Wide::from_parts(self.mant.sqrt(), self.exp / 2)
        } else {
            Wide::from_parts((2.0 * self.mant).sqrt(), (self.exp - 1).div_euclid(2))
        }
    }

    /// `x^(1/k)` for a positive integer root index.
    pub fn root(self, k: u32) -> Wide {
        assert!(k >= 1);
        assert!(!self.is_negative(), "root of negative Wide");
        if self.is_zero() || k == 1 {
            return self;
        }
        let k = k as i64;
        let q = self.exp.div_euclid(k);
        let r = self.exp.rem_euclid(k);
        let inner = self.mant * 2f64.powi(r as i32);
        Wide::from_parts(inner.powf(1.0 / k as f64), q)
    }

    /// `x^y` for positive `x` and real `y`.
    pub fn powf(self, y: f64) -> Wide {
        assert!(!self.is_negative(), "powf of negative Wide");
        if self.is_zero() {
            return if y == 0.0 { Wide::from_f64(1.0) } else { self };
        }
        if y == 0.5 {
            return self.sqrt();
        }
        if y > 0.0 && (1.0 / y).fract() == 0.0 && 1.0 / y <= u32::MAX as f64 {
            return self.root((1.0 / y) as u32);
        }
        // exponent split: y*exp = whole + frac
        let scaled = y * self.exp as f64;
        let whole = scaled.floor();
        let frac = scaled - whole;
        Wide::from_parts(self.mant.powf(y) * frac.exp2(), whole as i64)
    }

    pub fn min(self, other: Wide) -> Wide {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Wide) -> Wide {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn from_bigint(v: &BigInt) -> Wide {
        if v.is_zero() {
            return Wide::ZERO;
        }
        let bits = v.bits() as i64;
        let shift = (bits - 64).max(0);
        let top: BigInt = v.abs() >> (shift as usize);
        let (_, digits) = top.to_u64_digits();
        let top = digits.first().copied().unwrap_or(0) as f64;
        let m = if v.sign() == Sign::Minus { -top } else { top };
        Wide::from_parts(m, shift)
    }

    pub fn from_rational(v: &BigRational) -> Wide {
        Wide::from_bigint(v.numer()) / Wide::from_bigint(v.denom())
    }
}

impl PartialEq for Wide {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Wide {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let sa = self.mant.partial_cmp(&0.0)?;
        let sb = other.mant.partial_cmp(&0.0)?;
        if sa != sb {
            return sa.partial_cmp(&sb);
        }
        if sa == Ordering::Equal {
            return Some(Ordering::Equal);
        }
        let mag = self
            .exp
            .cmp(&other.exp)
            .then(self.mant.abs().partial_cmp(&other.mant.abs())?);
        Some(if sa == Ordering::Less { mag.reverse() } else { mag })
    }
}

impl Neg for Wide {
    type Output = Wide;
    fn neg(self) -> Wide {
        Wide { mant: -self.mant, exp: self.exp }
    }
}

impl Add for Wide {
    type Output = Wide;
    fn add(self, rhs: Wide) -> Wide {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exp >= rhs.exp { (self, rhs) } else { (rhs, self) };
        let gap = big.exp - small.exp;
        if gap > 64 {
            return big;
        }
        Wide::from_parts(big.mant + small.mant * 2f64.powi(-(gap as i32)), big.exp)
    }
}

impl Sub for Wide {
    type Output = Wide;
    fn sub(self, rhs: Wide) -> Wide {
        self + (-rhs)
    }
}

impl Mul for Wide {
    type Output = Wide;
    fn mul(self, rhs: Wide) -> Wide {
        if self.is_zero() || rhs.is_zero() {
            return Wide::ZERO;
        }
        Wide::from_parts(self.mant * rhs.mant, self.exp + rhs.exp)
    }
}

impl Div for Wide {
    type Output = Wide;
    fn div(self, rhs: Wide) -> Wide {
        assert!(!rhs.is_zero(), "Wide division by zero");
        if self.is_zero() {
            return Wide::ZERO;
        }
        Wide::from_parts(self.mant / rhs.mant, self.exp - rhs.exp)
    }
}

impl From<f64> for Wide {
    fn from(x: f64) -> Wide {
        Wide::from_f64(x)
    }
}

impl fmt::Display for Wide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        if (-1000..1000).contains(&self.exp) {
            return write!(f, "{:e}", self.to_f64());
        }
        // decimal mantissa/exponent from log10
        let l10 = self.log2() * std::f64::consts::LOG10_2;
        let e10 = l10.floor();
        let m10 = 10f64.powf(l10 - e10);
        let sign = if self.is_negative() { "-" } else { "" };
        write!(f, "{sign}{m10:.6}e{}", e10 as i64)
    }
}
