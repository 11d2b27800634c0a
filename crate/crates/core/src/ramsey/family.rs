//! Almost-disjoint families from affine lines over `Z_p`.

use super::RamseyError;

/// `k`-subsets of `0..ground` pairwise meeting in at most one element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFamily {
    pub ground: usize,
    pub k: usize,
    /// The prime behind the construction.
    pub p: usize,
    /// Sorted index sets, `A_{a,b}` in order of `(a, b)`.
    pub sets: Vec<Vec<usize>>,
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// The lines `A_{a,b} = {(i, ai + b mod p) : 0 ≤ i < k}` for the smallest
/// prime `p` with `s/(2k) ≤ p ≤ s/k`, with `(i, j)` placed at `i·p + j`.
/// There are `p² ≥ ⌊s/2k⌋²` of them.
pub fn almost_disjoint_family(s: usize, k: usize) -> Result<SetFamily, RamseyError> {
    if k < 2 || s <= 2 * k * k {
        return Err(RamseyError::PreconditionViolated { s, k });
    }
    let p = (s.div_ceil(2 * k)..=s / k)
        .find(|&p| is_prime(p))
        .ok_or(RamseyError::NoPrimeFound { s, k })?;
    let sets = (0..p)
        .flat_map(|a| (0..p).map(move |b| (0..k).map(|i| i * p + (a * i + b) % p).collect()))
        .collect();
    Ok(SetFamily { ground: s, k, p, sets })
}

/// `(1 − 2^{−C(k,2)})^{⌊s/2k⌋²}`, the chance that `G(s, 1/2)` misses a
/// fixed `k`-vertex graph as an induced subgraph on every line of the
/// family.
pub fn miss_probability_bound(k: usize, s: usize) -> Result<f64, RamseyError> {
    if k < 1 || s <= 2 * k * k {
        return Err(RamseyError::PreconditionViolated { s, k });
    }
    let pairs = (k * (k - 1) / 2) as i32;
    let lines = (s / (2 * k)) as f64;
    let q = -(2f64.powi(-pairs));
    Ok((lines * lines * q.ln_1p()).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_family() {
        let f = almost_disjoint_family(19, 3).unwrap();
        assert_eq!(f.p, 5);
        assert_eq!(f.sets.len(), 25);
        assert!(f.sets.iter().all(|s| s.len() == 3 && s.iter().all(|&x| x < 19)));
        assert!(matches!(almost_disjoint_family(18, 3), Err(RamseyError::PreconditionViolated { .. })));
    }

    #[test]
    fn miss_bounds() {
        assert!((miss_probability_bound(3, 19).unwrap() - (7f64 / 8.0).powi(9)).abs() < 1e-15);
        assert!((miss_probability_bound(3, 19).unwrap() - 0.300658).abs() < 1e-6);
        assert!((miss_probability_bound(2, 9).unwrap() - 0.0625).abs() < 1e-15);
        assert!(miss_probability_bound(3, 18).is_err());
    }

    #[test]
    fn primes() {
        let ps: Vec<usize> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(ps, [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    }
}
