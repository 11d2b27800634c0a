//! `G(n, 1/2)` sampling and induced-subgraph search.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::Graph;

use super::RamseyError;

/// Largest target graph for [`contains_induced`].
pub const MAX_TARGET_VERTICES: usize = 10;

/// `G(n, 1/2)` from `ChaCha8Rng::seed_from_u64(seed)`: pairs `(i, j)`,
/// `i < j`, are visited in lexicographic order and the pair is an edge
/// when the low bit of the next `u64` is set.
pub fn sample_gn_half(n: usize, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.next_u64() & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("lexicographic pairs form a simple graph")
}

/// An induced copy of `h` in `g`: entry `t` is the image of vertex `t`.
pub fn contains_induced(g: &Graph, h: &Graph) -> Result<Option<Vec<usize>>, RamseyError> {
    let all: Vec<usize> = (0..g.vertex_count()).collect();
    contains_induced_within(g, h, &all)
}

/// [`contains_induced`] with images restricted to `pool`.
///
/// Injections are tried in lexicographic order of pool positions; a
/// candidate for `t` must have at least `deg_h(t)` neighbours and
/// `k − 1 − deg_h(t)` non-neighbours inside the pool.
pub fn contains_induced_within(g: &Graph, h: &Graph, pool: &[usize]) -> Result<Option<Vec<usize>>, RamseyError> {
    let k = h.vertex_count();
    if k > MAX_TARGET_VERTICES {
        return Err(RamseyError::TargetTooLarge(k));
    }
    if k > pool.len() {
        return Ok(None);
    }
    let r = pool.len();
    let gdeg: Vec<usize> = pool.iter().map(|&v| pool.iter().filter(|&&u| g.has_edge(u, v)).count()).collect();
    let hdeg: Vec<usize> = (0..k).map(|t| h.degree(t)).collect();
    let fits = |t: usize, x: usize| gdeg[x] >= hdeg[t] && r - 1 - gdeg[x] >= k - 1 - hdeg[t];

    let mut image: Vec<usize> = Vec::with_capacity(k);
    let mut used = vec![false; r];
    let mut next = vec![0usize; k + 1];
    loop {
        let t = image.len();
        if t == k {
            return Ok(Some(image.iter().map(|&x| pool[x]).collect()));
        }
        let start = next[t];
        let found = (start..r).find(|&x| {
            !used[x] && fits(t, x) && (0..t).all(|u| g.has_edge(pool[image[u]], pool[x]) == h.has_edge(u, t))
        });
        match found {
            Some(x) => {
                next[t] = x + 1;
                used[x] = true;
                image.push(x);
                next[t + 1] = 0;
            }
            None => {
                let Some(x) = image.pop() else {
                    return Ok(None);
                };
                used[x] = false;
            }
        }
    }
}

/// Fraction of `trials` graphs from `G(s, 1/2)` with no induced `h`.
/// Trial seeds are successive `u64`s of `ChaCha8Rng::seed_from_u64(seed)`.
pub fn monte_carlo_universality(h: &Graph, s: usize, trials: usize, seed: u64) -> Result<f64, RamseyError> {
    if trials == 0 {
        return Err(RamseyError::InvalidSizes("trials must be at least 1".into()));
    }
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let mut misses = 0usize;
    for _ in 0..trials {
        let g = sample_gn_half(s, master.next_u64());
        if contains_induced(&g, h)?.is_none() {
            misses += 1;
        }
    }
    Ok(misses as f64 / trials as f64)
}
