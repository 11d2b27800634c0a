//! `(K_{k,k}, s)`-universal graphs and their `{0,1,2}` metrics.

use itertools::Itertools;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::{graph_from_012_metric, metric_from_graph_012, Graph, MetricSpace};
use crate::scalar::Scalar;

use super::family::miss_probability_bound;
use super::graphs::{contains_induced_within, sample_gn_half, MAX_TARGET_VERTICES};
use super::{binomial, RamseyError};

/// Subset count up to which universality is checked exhaustively.
pub const EXHAUSTIVE_BUDGET: u128 = 1_000_000;

/// Subsets drawn in sampled mode.
pub const SAMPLED_SUBSETS: u128 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerificationMode {
    /// Every `s`-subset checked: the report is a certificate.
    Exhaustive,
    /// Random `s`-subsets only: heuristic evidence.
    Sampled,
}

impl VerificationMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VerificationMode::Exhaustive => "exhaustive",
            VerificationMode::Sampled => "sampled",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalityReport {
    pub graph: Graph,
    pub target: Graph,
    pub s: usize,
    pub mode: VerificationMode,
    pub checked: u64,
    /// Checked subsets with no induced copy of `target`.
    pub misses: Vec<Vec<usize>>,
    /// Chance that `G(s, 1/2)` lacks an induced `target`, when `s > 2|V(target)|²`.
    pub theoretical_bound: Option<f64>,
    /// 0-based attempt that produced `graph`, and its sampling seed.
    pub attempt: usize,
    pub graph_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniversalMetric {
    pub graph: Graph,
    pub metric: MetricSpace<f64>,
    pub report: UniversalityReport,
}

/// Samples up to `attempts` graphs from `G(n, 1/2)` and returns the first
/// in which every checked `s`-subset induces `K_{k,k}`.
///
/// Seeds: a master `ChaCha8Rng::seed_from_u64(seed)` yields, per attempt,
/// the graph seed and then the seed of the subset sampler. Subsets are
/// checked exhaustively when `C(n, s) ≤ 10^6`, otherwise
/// `min(10^4, C(n, s))` uniform subsets are drawn.
pub fn build_universal_metric(
    n: usize,
    k: usize,
    s: usize,
    attempts: usize,
    seed: u64,
) -> Result<UniversalMetric, RamseyError> {
    if k == 0 || 2 * k > s || s > n {
        return Err(RamseyError::InvalidSizes(format!("need 1 <= k, 2k <= s <= n; got n = {n}, k = {k}, s = {s}")));
    }
    if 2 * k > MAX_TARGET_VERTICES {
        return Err(RamseyError::TargetTooLarge(2 * k));
    }
    if attempts == 0 {
        return Err(RamseyError::InvalidSizes("attempts must be at least 1".into()));
    }
    let target = Graph::complete_bipartite(k, k);
    let total = binomial(n, s);
    let mode = if total <= EXHAUSTIVE_BUDGET { VerificationMode::Exhaustive } else { VerificationMode::Sampled };
    let theoretical_bound = miss_probability_bound(2 * k, s).ok();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<UniversalityReport> = None;
    for attempt in 0..attempts {
        let graph_seed = master.next_u64();
        let sampler_seed = master.next_u64();
        let graph = sample_gn_half(n, graph_seed);
        let mut misses = Vec::new();
        let mut checked = 0u64;
        let mut check = |subset: Vec<usize>| -> Result<(), RamseyError> {
            checked += 1;
            if contains_induced_within(&graph, &target, &subset)?.is_none() {
                misses.push(subset);
            }
            Ok(())
        };
        match mode {
            VerificationMode::Exhaustive => {
                for subset in (0..n).combinations(s) {
                    check(subset)?;
                }
            }
            VerificationMode::Sampled => {
                let mut rng = ChaCha8Rng::seed_from_u64(sampler_seed);
                for _ in 0..total.min(SAMPLED_SUBSETS) {
                    let mut subset = rand::seq::index::sample(&mut rng, n, s).into_vec();
                    subset.sort_unstable();
                    check(subset)?;
                }
            }
        }
        let report = UniversalityReport {
            graph: graph.clone(),
            target: target.clone(),
            s,
            mode,
            checked,
            misses,
            theoretical_bound,
            attempt,
            graph_seed,
        };
        if report.misses.is_empty() {
            let metric = metric_from_graph_012(&graph)?.with_label(format!("universal K_{{{k},{k}}} n={n} s={s}"));
            return Ok(UniversalMetric { graph, metric, report });
        }
        if best.as_ref().is_none_or(|b| report.misses.len() < b.misses.len()) {
            best = Some(report);
        }
    }
    Err(RamseyError::AllAttemptsFailed { attempts, best: Box::new(best.expect("attempts >= 1")) })
}

/// `2k` points of `subset` on which `m` restricts to `knn_metric(k)`,
/// `u`-side first.
pub fn find_knn_copy<S: Scalar>(m: &MetricSpace<S>, k: usize, subset: &[usize]) -> Result<Option<Vec<usize>>, RamseyError> {
    let g = graph_from_012_metric(m)?;
    if 2 * k > MAX_TARGET_VERTICES {
        return Err(RamseyError::TargetTooLarge(2 * k));
    }
    if k == 0 || subset.len() < 2 * k {
        return Err(RamseyError::InvalidSizes(format!("subset of {} points cannot hold K_{{{k},{k}}}", subset.len())));
    }
    if let Some(&index) = subset.iter().find(|&&i| i >= m.len()) {
        return Err(RamseyError::InvalidSizes(format!("index {index} out of range for {} points", m.len())));
    }
    contains_induced_within(&g, &Graph::complete_bipartite(k, k), subset)
}
