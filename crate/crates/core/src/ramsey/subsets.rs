//! Exhaustive searches for the largest subspace with a property that
//! passes to subsets.

use itertools::Itertools;

use crate::bounds::bipartite_bound_from_sums;
use crate::embeddings::{is_l2_isometric, PsdScalar};
use crate::metric::{check_exponent, MetricSpace};

use super::RamseyError;

/// Point cap for the subset searches.
pub const MAX_SUBSET_SEARCH: usize = 16;

/// Largest certificate subset in [`distortion_certificate_bound`].
pub const MAX_CERTIFICATE_SUBSET: usize = 8;

/// Size of the largest subspace of `m` that embeds isometrically in `ℓ_2`,
/// with the lexicographically first subset of that size.
///
/// Sizes are tried in increasing order; a size with no embeddable subset
/// ends the search, as restrictions of embeddable spaces embed.
pub fn iso_ramsey_l2<S: PsdScalar>(m: &MetricSpace<S>) -> Result<(usize, Vec<usize>), RamseyError> {
    let n = m.len();
    if n > MAX_SUBSET_SEARCH {
        return Err(RamseyError::TooLarge(n));
    }
    let mut best = (0, Vec::new());
    for size in 1..=n {
        let mut found = None;
        for subset in (0..n).combinations(size) {
            if is_l2_isometric(&m.restrict(&subset)?)? {
                found = Some(subset);
                break;
            }
        }
        match found {
            Some(subset) => best = (size, subset),
            None => break,
        }
    }
    Ok(best)
}

/// Size of the largest subset `S` such that no equal-size bipartition of
/// an even subset of `S` with at most 8 points has a bipartite lower
/// bound above `alpha`; ties go to the lexicographically first `S`.
///
/// This is a one-sided screen: `S` passing says only that these
/// certificates do not rule out an `alpha`-embedding into `ℓ_p`. The true
/// `c_p` of the subspace may still exceed `alpha`.
pub fn distortion_certificate_bound(m: &MetricSpace<f64>, p: f64, alpha: f64) -> Result<(usize, Vec<usize>), RamseyError> {
    let n = m.len();
    if n > MAX_SUBSET_SEARCH {
        return Err(RamseyError::TooLarge(n));
    }
    check_exponent(p)?;
    if !(alpha >= 1.0) {
        return Err(RamseyError::InvalidSizes(format!("alpha must be at least 1, got {alpha}")));
    }
    let dp: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.dist(i, j).powf(p)).collect()).collect();
    let full = 1usize << n;
    // violated[mask]: some certificate inside `mask` exceeds alpha
    let mut violated = vec![false; full];
    for mask in 1..full {
        let size = mask.count_ones() as usize;
        if size.is_multiple_of(2) && size <= MAX_CERTIFICATE_SUBSET && certificate_exceeds(&dp, mask, p, alpha) {
            violated[mask] = true;
            continue;
        }
        violated[mask] = (0..n).any(|i| mask >> i & 1 == 1 && violated[mask & !(1 << i)]);
    }
    for size in (0..=n).rev() {
        if let Some(subset) = (0..n).combinations(size).find(|s| !violated[s.iter().map(|&i| 1usize << i).sum::<usize>()]) {
            return Ok((size, subset));
        }
    }
    unreachable!("the empty subset always passes")
}

fn certificate_exceeds(dp: &[Vec<f64>], mask: usize, p: f64, alpha: f64) -> bool {
    let points: Vec<usize> = (0..dp.len()).filter(|&i| mask >> i & 1 == 1).collect();
    let half = points.len() / 2;
    let (first, rest) = points.split_first().expect("even nonempty subset");
    // the first point stays on side A; each bipartition is seen once
    rest.iter().copied().combinations(half - 1).any(|mut a| {
        a.push(*first);
        let b: Vec<usize> = points.iter().copied().filter(|x| !a.contains(x)).collect();
        let mut within = 0.0;
        let mut cross = 0.0;
        for i in 0..half {
            for j in 0..half {
                within += dp[a[i]][a[j]] + dp[b[i]][b[j]];
                cross += dp[a[i]][b[j]];
            }
        }
        bipartite_bound_from_sums(within, cross, p) > alpha
    })
}
