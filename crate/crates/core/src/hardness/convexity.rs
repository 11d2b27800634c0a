//! The uniform-convexity three-point inequality and its four-point
//! consequence.

use crate::metric::{check_exponent, lp_distance_unchecked, MetricSpace};
use crate::scalar::Scalar;
use crate::wide::Wide;

use super::modulus::ConvexityModulus;
use super::HardnessError;

/// Arguments of `δ^{-1}` may leave `[0, 2]` by this much through rounding.
const ARG_TOLERANCE: f64 = 1e-9;

/// Checks a `δ^{-1}` argument and clamps rounding excursions into `[0, 2]`.
pub(crate) fn checked_arg(arg: Wide) -> Result<Wide, HardnessError> {
    let lo = Wide::from(-ARG_TOLERANCE);
    let hi = Wide::from(2.0 + ARG_TOLERANCE);
    if arg < lo || arg > hi {
        return Err(HardnessError::InverseArgumentOutOfRange(arg.to_f64()));
    }
    Ok(arg.max(Wide::ZERO).min(Wide::from(2.0)))
}

/// `δ^{-1}((d(a,c) + d(c,e) − d(a,e)) / min(d(a,c), d(c,e)))`, with the
/// numerator formed in the metric's own arithmetic.
pub(crate) fn excess_inverse<S: Scalar>(
    m: &MetricSpace<S>,
    a: usize,
    c: usize,
    e: usize,
    delta: &ConvexityModulus,
) -> Result<Wide, HardnessError> {
    let (ac, ce, ae) = (m.dist(a, c), m.dist(c, e), m.dist(a, e));
    let num = ac.plus(ce).minus(ae);
    let den = if ac <= ce { ac } else { ce };
    let arg = checked_arg(num.to_wide() / den.to_wide())?;
    Ok(delta.inverse_wide(arg)?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UcSlack {
    /// Distance from `y` to the weighted combination of `x` and `z`.
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// `RHS − LHS` of
/// `‖y − (b/(a+b))x − (a/(a+b))z‖ ≤ (ab/(a+b))·δ^{-1}((a + b − c)/min(a, b))`
/// with `a = ‖x − y‖`, `b = ‖y − z‖`, `c = ‖x − z‖` in `ℓ_p`.
pub fn uc_slack(x: &[f64], y: &[f64], z: &[f64], p: f64, delta: &ConvexityModulus) -> Result<UcSlack, HardnessError> {
    check_exponent(p)?;
    let dim = x.len();
    if let Some(v) = [y, z].into_iter().find(|v| v.len() != dim) {
        return Err(HardnessError::DimensionMismatch { left: dim, right: v.len() });
    }
    let a = lp_distance_unchecked(x, y, p);
    let b = lp_distance_unchecked(y, z, p);
    let c = lp_distance_unchecked(x, z, p);
    if a == 0.0 || b == 0.0 || c == 0.0 {
        return Err(HardnessError::CoincidentPoints);
    }
    let (wx, wz) = (b / (a + b), a / (a + b));
    let combo: Vec<f64> = x.iter().zip(z).map(|(xi, zi)| wx * xi + wz * zi).collect();
    let lhs = lp_distance_unchecked(y, &combo, p);
    let arg = checked_arg(Wide::from((a + b - c) / a.min(b)))?;
    let rhs = a * b / (a + b) * delta.inverse_wide(arg)?.to_f64();
    Ok(UcSlack { lhs, rhs, slack: rhs - lhs })
}

/// Both sides of the four-point lemma in extended precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WideGap {
    /// `(d12 + d23 − d13) / (2·d23)`.
    pub lhs: Wide,
    /// `δ^{-1}(·) + δ^{-1}(·)` over the `(1,3,4)` and `(2,3,4)` excesses.
    pub rhs: Wide,
    pub gap: Wide,
}

/// The lemma on the points `q = [x1, x2, x3, x4]` of a metric.
///
/// The inequality holds in the space only when `d(x1,x3) ≥ d(x2,x3)`; with
/// the roles of `x1` and `x2` reversed it can fail even on a line.
pub fn lemma_gap_in<S: Scalar>(
    m: &MetricSpace<S>,
    q: [usize; 4],
    delta: &ConvexityModulus,
) -> Result<WideGap, HardnessError> {
    let [x1, x2, x3, x4] = q;
    for index in q {
        if index >= m.len() {
            return Err(HardnessError::IndexError(format!("point {index} of a {}-point space", m.len())));
        }
    }
    let num = m.dist(x1, x2).plus(m.dist(x2, x3)).minus(m.dist(x1, x3));
    let lhs = num.to_wide() / (Wide::from(2.0) * m.dist(x2, x3).to_wide());
    let rhs = excess_inverse(m, x1, x3, x4, delta)? + excess_inverse(m, x2, x3, x4, delta)?;
    Ok(WideGap { lhs, rhs, gap: rhs - lhs })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LemmaGap {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// `RHS − LHS` of the four-point lemma for the six pairwise distances of
/// `x1..x4`. When `d13 ≥ d23`, a negative gap certifies that no four points
/// of a space with modulus at least `delta` realize these distances.
pub fn convexity_lemma_gap(
    d12: f64,
    d13: f64,
    d14: f64,
    d23: f64,
    d24: f64,
    d34: f64,
    delta: &ConvexityModulus,
) -> Result<LemmaGap, HardnessError> {
    let d = vec![
        vec![0.0, d12, d13, d14],
        vec![d12, 0.0, d23, d24],
        vec![d13, d23, 0.0, d34],
        vec![d14, d24, d34, 0.0],
    ];
    let m = MetricSpace::validate(d)?;
    let g = lemma_gap_in(&m, [0, 1, 2, 3], delta)?;
    Ok(LemmaGap { lhs: g.lhs.to_f64(), rhs: g.rhs.to_f64(), gap: g.gap.to_f64() })
}
