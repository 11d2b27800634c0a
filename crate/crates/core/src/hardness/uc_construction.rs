//! Iterative construction of a metric on `{1..n}` in which every quadruple
//! violates the four-point convexity lemma for a given modulus.
//!
//! `M_3` is the equilateral triangle of side 2 with `η_3 = 1`. Point `k+1`
//! is attached to `M_k` by
//!
//! ```text
//! d(k, k+1) = 1 − s/2        d(i, k+1) = d(i, k) + 1 − s   (i < k)
//! ```
//!
//! where `s = s₀/2^h` for the least `h` such that, over all `i < j < k`,
//! `2·d(j,k)·[δ^{-1}((s/2)/min{d(i,k), 1 − s/2}) + δ^{-1}((s/2)/min{d(j,k), 1 − s/2})] ≤ η_k/2`,
//! starting from `s₀ = min{1, 2·min_i d(i,k)}/2`.
//!
//! Stage `l` below means `M_l`; its last point has 0-based index `l − 1`.
//! Distances are exact dyadic rationals: `s` and `η` shrink doubly
//! exponentially under [`EtaSchedule::SlackBounded`], far past `f64`.

use crate::metric::MetricSpace;
use crate::scalar::{Dyadic, Scalar};
use crate::wide::Wide;

use super::convexity::{excess_inverse, lemma_gap_in};
use super::modulus::ConvexityModulus;
use super::HardnessError;

/// How `η_{k+1}` follows from `η_k` and the chosen `s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaSchedule {
    /// `η_{k+1} = η_k/2`. Condition (b) fails from stage 5 on: the triple
    /// `(i, k−1, k)` has slack `s_k/2`, far below `η_{k+1}`.
    Halving,
    /// `η_{k+1} = min(η_k/2, s/2)`, which keeps every triple slack at
    /// least `η` and so restores the induction.
    SlackBounded,
}

impl EtaSchedule {
    pub fn as_str(self) -> &'static str {
        match self {
            EtaSchedule::Halving => "halving",
            EtaSchedule::SlackBounded => "slack-bounded",
        }
    }
}

/// Relative safety factor on the search bound, covering the rounding in
/// the extended-precision evaluation.
const SEARCH_SAFETY: f64 = 1e-6;

/// Halvings allowed under [`EtaSchedule::SlackBounded`]; beyond this the
/// exact distances would need more than 2^24 bits.
pub const MAX_SLACK_BOUNDED_HALVINGS: u64 = 1 << 24;

#[derive(Debug, Clone)]
pub struct UCConstruction {
    metric: MetricSpace<Dyadic>,
    etas: Vec<Dyadic>,
    esses: Vec<Dyadic>,
    halvings: Vec<u64>,
    schedule: EtaSchedule,
    modulus: ConvexityModulus,
}

impl UCConstruction {
    pub fn n(&self) -> usize {
        self.metric.len()
    }

    pub fn metric(&self) -> &MetricSpace<Dyadic> {
        &self.metric
    }

    /// Nearest-double copy; triple slacks below `2^{-52}` are lost.
    pub fn real_metric(&self) -> MetricSpace<f64> {
        self.metric.to_real()
    }

    /// `η_3, …, η_n`.
    pub fn etas(&self) -> &[Dyadic] {
        &self.etas
    }

    /// `η` of stage `l` (`3 ≤ l ≤ n`).
    pub fn eta(&self, stage: usize) -> &Dyadic {
        &self.etas[stage - 3]
    }

    /// The `s` that attached points 4, …, n.
    pub fn esses(&self) -> &[Dyadic] {
        &self.esses
    }

    /// `h` with `s = s₀/2^h` for each attached point.
    pub fn halvings(&self) -> &[u64] {
        &self.halvings
    }

    pub fn schedule(&self) -> EtaSchedule {
        self.schedule
    }

    pub fn modulus(&self) -> &ConvexityModulus {
        &self.modulus
    }
}

/// Builds `M_n` with the [`EtaSchedule::SlackBounded`] schedule.
pub fn build_uc_hard_metric(n: usize, delta: &ConvexityModulus) -> Result<UCConstruction, HardnessError> {
    build_uc_hard_metric_with(n, delta, EtaSchedule::SlackBounded)
}

pub fn build_uc_hard_metric_with(
    n: usize,
    delta: &ConvexityModulus,
    schedule: EtaSchedule,
) -> Result<UCConstruction, HardnessError> {
    if n < 3 {
        return Err(HardnessError::InvalidSize(n));
    }
    let two = Dyadic::from_int(2);
    let mut d: Vec<Vec<Dyadic>> = (0..3)
        .map(|i| (0..3).map(|j| if i == j { Dyadic::zero() } else { two.clone() }).collect())
        .collect();
    let mut etas = vec![Dyadic::from_int(1)];
    let mut esses = Vec::new();
    let mut halvings = Vec::new();
    let one = Dyadic::from_int(1);
    for k in 3..n {
        let eta = etas.last().expect("η_3 is present").clone();
        let last = k - 1;
        let min_d = (0..last).map(|i| &d[i][last]).min().expect("k ≥ 3").clone();
        let s0 = if min_d.times(&two) < one { min_d } else { one.halve() };
        let h = search_halvings(&d, k, &s0, &eta, delta, schedule)?;
        let s = s0.times(&Dyadic::pow2(-(h as i64)));
        let one_minus_s = one.minus(&s);
        let mut col: Vec<Dyadic> = (0..last).map(|i| d[i][last].plus(&one_minus_s)).collect();
        col.push(one.minus(&s.halve()));
        for (row, x) in d.iter_mut().zip(&col) {
            row.push(x.clone());
        }
        col.push(Dyadic::zero());
        d.push(col);
        let next = match schedule {
            EtaSchedule::Halving => eta.halve(),
            EtaSchedule::SlackBounded => std::cmp::min(eta.halve(), s.halve()),
        };
        etas.push(next);
        esses.push(s);
        halvings.push(h);
    }
    let metric = MetricSpace::validate(d)
        .map_err(|e| HardnessError::Internal(format!("constructed matrix is not a metric: {e}")))?;
    Ok(UCConstruction {
        metric: metric.with_label(format!("uc-hard n={n} {}", delta.name())),
        etas,
        esses,
        halvings,
        schedule,
        modulus: delta.clone(),
    })
}

/// Least `h` with `s = s₀/2^h` passing the search bound at stage `k`.
///
/// The bound quantity is increasing in `s`, so doubling then bisecting on
/// `h` finds the same `h` as halving one step at a time.
fn search_halvings(
    d: &[Vec<Dyadic>],
    k: usize,
    s0: &Dyadic,
    eta: &Dyadic,
    delta: &ConvexityModulus,
    schedule: EtaSchedule,
) -> Result<u64, HardnessError> {
    let last = k - 1;
    let dw: Vec<Wide> = (0..last).map(|i| d[i][last].to_wide()).collect();
    let s0w = s0.to_wide();
    let target = eta.to_wide() / Wide::from(2.0);
    let one = Wide::from(1.0);
    let accept = |h: u64| -> Result<bool, HardnessError> {
        let half = s0w * Wide::pow2(-(h as i64) - 1);
        let cap = one - half;
        let invs = dw
            .iter()
            .map(|&di| delta.inverse_wide(half / di.min(cap)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut worst = Wide::ZERO;
        for j in 1..last {
            for i in 0..j {
                worst = worst.max(Wide::from(2.0) * dw[j] * (invs[i] + invs[j]));
            }
        }
        Ok(worst * Wide::from(1.0 + SEARCH_SAFETY) <= target)
    };
    let limit = match schedule {
        // s may not fall below 1e-300
        EtaSchedule::Halving => (s0.to_wide().log2() + 300.0 * std::f64::consts::LOG2_10).floor().max(0.0) as u64,
        EtaSchedule::SlackBounded => MAX_SLACK_BOUNDED_HALVINGS,
    };
    if accept(0)? {
        return Ok(0);
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    loop {
        if hi >= limit {
            if !accept(limit)? {
                return Err(HardnessError::SearchFailure { stage: k, halvings: limit });
            }
            hi = limit;
            break;
        }
        if accept(hi)? {
            break;
        }
        lo = hi;
        hi *= 2;
    }
    // invariant: lo rejected, hi accepted
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if accept(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn check_triple(c: &UCConstruction, stage: usize, i: usize, j: usize, k: usize) -> Result<(), HardnessError> {
    if stage <= 3 {
        return Err(HardnessError::VacuousStage(stage));
    }
    if stage > c.n() {
        return Err(HardnessError::IndexError(format!("stage {stage} exceeds n = {}", c.n())));
    }
    if !(i < j && j < k && k + 1 < stage) {
        return Err(HardnessError::IndexError(format!(
            "need i < j < k < {} for stage {stage}, got ({i}, {j}, {k})",
            stage - 1
        )));
    }
    Ok(())
}

/// Condition (b) at `stage` for the triple `i < j < k` (0-based), with
/// fourth point `stage − 1`:
/// `d_ij + d_jk − d_ik − η − 2·d_jk·[δ^{-1}(·) + δ^{-1}(·)]`.
pub fn condition_b_margin(c: &UCConstruction, stage: usize, i: usize, j: usize, k: usize) -> Result<Wide, HardnessError> {
    check_triple(c, stage, i, j, k)?;
    condition_b_margin_with_eta(c, stage, i, j, k, c.eta(stage))
}

/// [`condition_b_margin`] against an arbitrary `η`.
pub fn condition_b_margin_with_eta(
    c: &UCConstruction,
    stage: usize,
    i: usize,
    j: usize,
    k: usize,
    eta: &Dyadic,
) -> Result<Wide, HardnessError> {
    check_triple(c, stage, i, j, k)?;
    let m = &c.metric;
    let l = stage - 1;
    let head = m.dist(i, j).plus(m.dist(j, k)).minus(m.dist(i, k)).minus(eta);
    let inv = excess_inverse(m, i, k, l, &c.modulus)? + excess_inverse(m, j, k, l, &c.modulus)?;
    Ok(head.to_wide() - Wide::from(2.0) * m.dist(j, k).to_wide() * inv)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginRecord {
    pub stage: usize,
    pub triple: [usize; 3],
    pub margin: Wide,
}

/// Condition (b) margins for every stage `4..=n` and every admissible
/// triple, against `eta_of(stage)`.
pub fn all_margins_with(
    c: &UCConstruction,
    eta_of: impl Fn(usize) -> Dyadic,
) -> Result<Vec<MarginRecord>, HardnessError> {
    let mut out = Vec::new();
    for stage in 4..=c.n() {
        let eta = eta_of(stage);
        for k in 2..stage - 1 {
            for j in 1..k {
                for i in 0..j {
                    let margin = condition_b_margin_with_eta(c, stage, i, j, k, &eta)?;
                    out.push(MarginRecord { stage, triple: [i, j, k], margin });
                }
            }
        }
    }
    Ok(out)
}

/// Margins against the construction's own `η` sequence.
pub fn all_margins(c: &UCConstruction) -> Result<Vec<MarginRecord>, HardnessError> {
    all_margins_with(c, |stage| c.eta(stage).clone())
}

/// `η_l = 2^{3−l}`, the value of the halving schedule.
pub fn halving_eta(stage: usize) -> Dyadic {
    Dyadic::pow2(3 - stage as i64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadrupleRecord {
    pub quad: [usize; 4],
    pub gap: Wide,
    /// `−η_l/(2·d_jk)` with `l` the stage of the last point.
    pub bound: Wide,
}

/// The lemma gap of every quadruple `i < j < k < l` with its target bound.
pub fn quadruple_gaps(c: &UCConstruction) -> Result<Vec<QuadrupleRecord>, HardnessError> {
    let n = c.n();
    let mut out = Vec::new();
    for l in 3..n {
        let eta = c.eta(l + 1).to_wide();
        for k in 2..l {
            for j in 1..k {
                for i in 0..j {
                    let g = lemma_gap_in(&c.metric, [i, j, k, l], &c.modulus)?;
                    let bound = -(eta / (Wide::from(2.0) * c.metric.dist(j, k).to_wide()));
                    out.push(QuadrupleRecord { quad: [i, j, k, l], gap: g.gap, bound });
                }
            }
        }
    }
    Ok(out)
}

/// Triple slack `d_ij + d_jk − d_ik`, exact.
pub fn triple_slack(c: &UCConstruction, i: usize, j: usize, k: usize) -> Dyadic {
    let m = &c.metric;
    m.dist(i, j).plus(m.dist(j, k)).minus(m.dist(i, k))
}

/// Bits in the largest distance mantissa.
pub fn max_mantissa_bits(c: &UCConstruction) -> u64 {
    c.metric.rows().iter().flatten().map(|x| x.mantissa().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n3_is_equilateral() {
        let c = build_uc_hard_metric(3, &ConvexityModulus::l2()).unwrap();
        assert_eq!(c.n(), 3);
        assert_eq!(c.etas(), &[Dyadic::from_int(1)]);
        assert!(c.esses().is_empty());
        assert_eq!(*c.metric().dist(0, 2), Dyadic::from_int(2));
        assert!(matches!(condition_b_margin(&c, 3, 0, 1, 2), Err(HardnessError::VacuousStage(3))));
        assert!(build_uc_hard_metric(2, &ConvexityModulus::l2()).is_err());
    }

    /// Closed-form search bound at stage 3 for δ_ℓ2, where every
    /// `d(i,3) = 2` and `min{2, 1 − s/2} = 1 − s/2`.
    fn stage3_bound(s: f64) -> f64 {
        let t = (s / 2.0) / (1.0 - s / 2.0);
        2.0 * 2.0 * 2.0 * (2.0 * (2.0 * t - t * t).sqrt())
    }

    #[test]
    fn n4_search_matches_closed_form() {
        let c = build_uc_hard_metric_with(4, &ConvexityModulus::l2(), EtaSchedule::Halving).unwrap();
        assert_eq!(c.halvings(), &[10]);
        let s = 0.5 / 1024.0;
        assert_eq!(c.esses()[0].to_f64(), s);
        assert!(stage3_bound(s) <= 0.5 && stage3_bound(2.0 * s) > 0.5);
        assert!((c.real_metric().dist(2, 3) - 0.999756).abs() < 1e-6);
        assert!((c.real_metric().dist(0, 3) - 2.999512).abs() < 1e-6);
        assert_eq!(c.metric().dist(0, 3), c.metric().dist(1, 3));
        assert!(condition_b_margin(&c, 4, 0, 1, 2).unwrap() >= Wide::ZERO);
    }

    #[test]
    fn halving_schedule_breaks_at_stage_five() {
        let c = build_uc_hard_metric_with(5, &ConvexityModulus::l2(), EtaSchedule::Halving).unwrap();
        assert_eq!(c.eta(5).to_f64(), 0.25);
        assert_eq!(triple_slack(&c, 0, 2, 3), c.esses()[0].halve());
        assert!(condition_b_margin(&c, 5, 0, 2, 3).unwrap() < Wide::ZERO);
    }

    #[test]
    fn slack_bounded_certifies_small_cases() {
        for delta in [ConvexityModulus::l2(), ConvexityModulus::lp(4.0).unwrap()] {
            let c = build_uc_hard_metric(7, &delta).unwrap();
            for r in all_margins(&c).unwrap() {
                assert!(r.margin >= Wide::ZERO, "{r:?}");
            }
            for q in quadruple_gaps(&c).unwrap() {
                assert!(q.gap <= q.bound && q.gap < Wide::ZERO, "{q:?}");
            }
        }
    }

    #[test]
    fn triple_slack_pattern() {
        let c = build_uc_hard_metric(6, &ConvexityModulus::l2()).unwrap();
        for k in 2..6 {
            for j in 1..k {
                for i in 0..j {
                    let expected = if j <= 1 { Dyadic::from_int(2) } else { c.esses()[j - 2].halve() };
                    assert_eq!(triple_slack(&c, i, j, k), expected, "({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn margin_index_errors() {
        let c = build_uc_hard_metric(5, &ConvexityModulus::l2()).unwrap();
        assert!(matches!(condition_b_margin(&c, 5, 0, 1, 4), Err(HardnessError::IndexError(_))));
        assert!(matches!(condition_b_margin(&c, 6, 0, 1, 2), Err(HardnessError::IndexError(_))));
        assert!(matches!(condition_b_margin(&c, 5, 1, 0, 2), Err(HardnessError::IndexError(_))));
    }
}
