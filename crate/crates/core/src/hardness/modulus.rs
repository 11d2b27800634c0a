//! Moduli of uniform convexity and their generalized inverses.
//!
//! `δ^{-1}(t) = sup{ε ∈ [0, 2] : δ(ε) ≤ t}`, so arguments at or above
//! `δ(2)` map to 2. Every inverse also has an extended-exponent form
//! ([`ConvexityModulus::inverse_wide`]) for arguments far below the
//! double range.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::wide::Wide;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModulusError {
    #[error("modulus exponent must satisfy 1 < p < inf, got {0}")]
    InvalidExponent(f64),
    #[error("unrecognized modulus {0:?} (expected l2 or lp:<p>)")]
    Unrecognized(String),
    #[error("argument {0} is below the double range of a custom modulus")]
    Underflow(String),
}

#[derive(Clone)]
enum Kind {
    L2,
    /// `1 − (1 − (ε/2)^p)^{1/p}` for `p ≥ 2`.
    Lp(f64),
    /// `(p − 1)ε²/8`, a lower estimate of the `ℓ_p` modulus for `1 < p < 2`.
    LowP(f64),
    Custom { name: String, delta: Arc<dyn Fn(f64) -> f64 + Send + Sync> },
}

#[derive(Clone)]
pub struct ConvexityModulus {
    kind: Kind,
}

impl fmt::Debug for ConvexityModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ConvexityModulus({})", self.name())
    }
}

impl PartialEq for ConvexityModulus {
    fn eq(&self, other: &Self) -> bool {
        match (&self.kind, &other.kind) {
            (Kind::L2, Kind::L2) => true,
            (Kind::Lp(a), Kind::Lp(b)) | (Kind::LowP(a), Kind::LowP(b)) => a == b,
            (Kind::Custom { delta: a, .. }, Kind::Custom { delta: b, .. }) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

/// Requested preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModulusSpec {
    L2,
    Lp(f64),
}

pub fn make_modulus(spec: ModulusSpec) -> Result<ConvexityModulus, ModulusError> {
    match spec {
        ModulusSpec::L2 => Ok(ConvexityModulus::l2()),
        ModulusSpec::Lp(p) => ConvexityModulus::lp(p),
    }
}

/// Bisection on `[0, 2]` for a nondecreasing `f`.
fn bisect_inverse(f: &dyn Fn(f64) -> f64, t: f64) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= t {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `1 − (1 − t)^p` without cancellation for small `t`.
fn one_minus_pow(t: f64, p: f64) -> f64 {
    -(p * (-t).ln_1p()).exp_m1()
}

impl ConvexityModulus {
    /// `δ(ε) = 1 − √(1 − ε²/4)`.
    pub fn l2() -> ConvexityModulus {
        ConvexityModulus { kind: Kind::L2 }
    }

    /// The `ℓ_p` modulus for `p ≥ 2`; for `1 < p < 2` the estimate
    /// `(p − 1)ε²/8`.
    pub fn lp(p: f64) -> Result<ConvexityModulus, ModulusError> {
        if !(p.is_finite() && p > 1.0) {
            return Err(ModulusError::InvalidExponent(p));
        }
        Ok(ConvexityModulus { kind: if p >= 2.0 { Kind::Lp(p) } else { Kind::LowP(p) } })
    }

    /// A user-supplied modulus. It must be continuous and increasing on
    /// `(0, 2]`; the inverse is found by bisection.
    pub fn custom(name: impl Into<String>, delta: impl Fn(f64) -> f64 + Send + Sync + 'static) -> ConvexityModulus {
        ConvexityModulus { kind: Kind::Custom { name: name.into(), delta: Arc::new(delta) } }
    }

    /// `l2`, `lp:<p>` (also `lp` estimates below 2) or `custom:<name>`.
    pub fn name(&self) -> String {
        match &self.kind {
            Kind::L2 => "l2".into(),
            Kind::Lp(p) | Kind::LowP(p) => format!("lp:{p}"),
            Kind::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    /// Parses `l2` or `lp:<p>`.
    pub fn parse(s: &str) -> Result<ConvexityModulus, ModulusError> {
        let s = s.trim();
        if s == "l2" {
            return Ok(ConvexityModulus::l2());
        }
        match s.strip_prefix("lp:").map(str::parse::<f64>) {
            Some(Ok(p)) => ConvexityModulus::lp(p),
            _ => Err(ModulusError::Unrecognized(s.to_owned())),
        }
    }

    /// Whether the value is a lower estimate rather than the exact modulus.
    pub fn is_estimate(&self) -> bool {
        matches!(self.kind, Kind::LowP(_))
    }

    pub fn evaluate(&self, eps: f64) -> f64 {
        assert!((0.0..=2.0).contains(&eps), "modulus argument {eps} outside [0, 2]");
        match &self.kind {
            Kind::L2 => {
                let q = eps * eps / 4.0;
                q / (1.0 + (1.0 - q).sqrt())
            }
            Kind::Lp(p) => {
                let q = (eps / 2.0).powf(*p);
                -((-q).ln_1p() / p).exp_m1()
            }
            Kind::LowP(p) => (p - 1.0) * eps * eps / 8.0,
            Kind::Custom { delta, .. } => delta(eps),
        }
    }

    /// `δ(2)`: arguments at or above it invert to 2.
    pub fn delta_at_two(&self) -> f64 {
        match &self.kind {
            Kind::L2 | Kind::Lp(_) => 1.0,
            Kind::LowP(p) => (p - 1.0) / 2.0,
            Kind::Custom { delta, .. } => delta(2.0),
        }
    }

    pub fn inverse(&self, t: f64) -> f64 {
        assert!(t >= 0.0, "modulus inverse of negative argument {t}");
        if t >= self.delta_at_two() {
            return 2.0;
        }
        match &self.kind {
            Kind::L2 => 2.0 * (t * (2.0 - t)).sqrt(),
            Kind::Lp(p) => 2.0 * one_minus_pow(t, *p).powf(1.0 / p),
            Kind::LowP(p) => (8.0 * t / (p - 1.0)).sqrt(),
            Kind::Custom { delta, .. } => {
                if t == 0.0 {
                    0.0
                } else {
                    bisect_inverse(delta.as_ref(), t)
                }
            }
        }
    }

    /// [`inverse`](Self::inverse) on an extended-exponent argument.
    pub fn inverse_wide(&self, t: Wide) -> Result<Wide, ModulusError> {
        assert!(!t.is_negative(), "modulus inverse of negative argument {t}");
        if t.is_zero() {
            return Ok(Wide::ZERO);
        }
        if t >= Wide::from(self.delta_at_two()) {
            return Ok(Wide::from(2.0));
        }
        let two = Wide::from(2.0);
        match &self.kind {
            Kind::L2 => Ok(two * (t * (two - t)).sqrt()),
            Kind::Lp(p) => {
                let tf = t.to_f64();
                if tf >= 2f64.powi(-60) {
                    return Ok(Wide::from(self.inverse(tf)));
                }
                // 1 − (1 − t)^p = p·t·(1 + O(p·t)), far below double resolution here
                Ok(two * (Wide::from(*p) * t).powf(1.0 / p))
            }
            Kind::LowP(p) => Ok((Wide::from(8.0 / (p - 1.0)) * t).sqrt()),
            Kind::Custom { .. } => {
                let tf = t.to_f64();
                if tf == 0.0 || !tf.is_normal() {
                    return Err(ModulusError::Underflow(t.to_string()));
                }
                Ok(Wide::from(self.inverse(tf)))
            }
        }
    }
}
