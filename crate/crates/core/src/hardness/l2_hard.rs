//! The metric `d(i,j) = |i − j| − ε·a_{|i−j|}` on `{1..n}` with
//! `a_0 = 0`, `a_1 = 1`, `a_{i+1} = 2(n+1)·a_i`: for small `ε` no four of
//! its points embed isometrically in `ℓ_2`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::embeddings::{schoenberg_test, PsdScalar, PsdWitness, SchoenbergCertificate, Verdict};
use crate::metric::MetricSpace;
use crate::scalar::Rational;

use super::HardnessError;

/// Shrink rounds before giving up.
pub const MAX_SHRINK_ROUNDS: u32 = 64;

#[derive(Debug, Clone)]
pub struct L2HardConstruction {
    pub metric: MetricSpace<Rational>,
    /// `a_0, …, a_n`.
    pub a: Vec<BigInt>,
    pub eps: Rational,
    pub shrink_rounds: u32,
}

/// Schoenberg certificate of one 4-subset (base = its first point).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleCertificate<S> {
    pub quad: [usize; 4],
    pub certificate: SchoenbergCertificate<S>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleReport<S> {
    /// One per 4-subset in lexicographic order.
    pub certificates: Vec<QuadrupleCertificate<S>>,
    pub embeddable: Vec<[usize; 4]>,
}

impl<S> QuadrupleReport<S> {
    pub fn all_clear(&self) -> bool {
        self.embeddable.is_empty()
    }
}

fn quadruples(n: usize) -> impl Iterator<Item = [usize; 4]> {
    (0..n).flat_map(move |a| {
        (a + 1..n).flat_map(move |b| (b + 1..n).flat_map(move |c| (c + 1..n).map(move |d| [a, b, c, d])))
    })
}

/// Runs the Schoenberg test on every 4-subset. Certificate indices refer
/// to points of `m`.
pub fn verify_no_isometric_quadruple<S: PsdScalar>(m: &MetricSpace<S>) -> Result<QuadrupleReport<S>, HardnessError> {
    if m.len() < 4 {
        return Err(HardnessError::InvalidSize(m.len()));
    }
    let mut certificates = Vec::new();
    let mut embeddable = Vec::new();
    for quad in quadruples(m.len()) {
        let sub = m.restrict(&quad)?;
        let mut cert = schoenberg_test(&sub, 0)?;
        cert.base = quad[cert.base];
        cert.points = cert.points.iter().map(|&i| quad[i]).collect();
        if let Some(PsdWitness::NegativeMinor { indices, .. }) = cert.witness.as_mut() {
            for i in indices.iter_mut() {
                *i = quad[*i];
            }
        }
        if cert.verdict == Verdict::Psd {
            embeddable.push(quad);
        }
        certificates.push(QuadrupleCertificate { quad, certificate: cert });
    }
    Ok(QuadrupleReport { certificates, embeddable })
}

fn hard_metric(a: &[BigInt], eps: &Rational) -> Result<MetricSpace<Rational>, HardnessError> {
    let n = a.len() - 1;
    let d = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = i.abs_diff(j);
                    Rational::from_integer(BigInt::from(k)) - eps * Rational::from_integer(a[k].clone())
                })
                .collect()
        })
        .collect();
    Ok(MetricSpace::validate(d)?)
}

/// Builds the metric with `ε = 1/(4a_n)`, dividing `ε` by `2(n+1)` until
/// every 4-subset is certified non-embeddable.
pub fn build_l2_hard_metric(n: usize) -> Result<L2HardConstruction, HardnessError> {
    if n < 4 {
        return Err(HardnessError::InvalidSize(n));
    }
    let ratio = BigInt::from(2 * (n + 1));
    let mut a = vec![BigInt::zero(), BigInt::one()];
    while a.len() <= n {
        let next = a.last().expect("nonempty") * &ratio;
        a.push(next);
    }
    let mut eps = Rational::new(BigInt::one(), BigInt::from(4) * &a[n]);
    for shrink_rounds in 0..=MAX_SHRINK_ROUNDS {
        let metric = hard_metric(&a, &eps)?;
        if verify_no_isometric_quadruple(&metric)?.all_clear() {
            let metric = metric.with_label(format!("l2-hard n={n}"));
            return Ok(L2HardConstruction { metric, a, eps, shrink_rounds });
        }
        eps /= Rational::from_integer(ratio.clone());
    }
    Err(HardnessError::ShrinkLimitExceeded(MAX_SHRINK_ROUNDS))
}
