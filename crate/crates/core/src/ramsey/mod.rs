//! Almost-disjoint set families, `G(n, 1/2)` random graphs, induced
//! subgraph search, and exhaustive subset searches for isometric and
//! low-distortion subspaces.

use thiserror::Error;

use crate::bounds::BoundError;
use crate::embeddings::EmbedError;
use crate::metric::MetricError;

pub mod family;
pub mod graphs;
pub mod subsets;
pub mod universal;

pub use family::{almost_disjoint_family, miss_probability_bound, SetFamily};
pub use graphs::{contains_induced, contains_induced_within, monte_carlo_universality, sample_gn_half, MAX_TARGET_VERTICES};
pub use subsets::{distortion_certificate_bound, iso_ramsey_l2, MAX_SUBSET_SEARCH};
pub use universal::{build_universal_metric, find_knn_copy, UniversalMetric, UniversalityReport, VerificationMode};

#[derive(Debug, Error)]
pub enum RamseyError {
    #[error("need s > 2k^2 and k >= 2, got s = {s}, k = {k}")]
    PreconditionViolated { s: usize, k: usize },
    #[error("no prime in [s/2k, s/k] for s = {s}, k = {k}")]
    NoPrimeFound { s: usize, k: usize },
    #[error("target graph has {0} vertices, above the search cap")]
    TargetTooLarge(usize),
    #[error("invalid sizes: {0}")]
    InvalidSizes(String),
    #[error("no universal graph in {attempts} attempts; best had {} misses", best.misses.len())]
    AllAttemptsFailed { attempts: usize, best: Box<UniversalityReport> },
    #[error("{0} points exceed the exhaustive search cap")]
    TooLarge(usize),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Embed(#[from] EmbedError),
    #[error(transparent)]
    Bound(#[from] BoundError),
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc·(n−i)/(i+1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}
