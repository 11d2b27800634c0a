//! Explicit embeddings of `K_{n,n}` and `{0,1,2}` metrics, and the
//! Schoenberg test for isometric embeddability into `ℓ_2`.

use num_traits::Pow;
use thiserror::Error;

use crate::linalg::{first_negative_principal_minor, jacobi_eigen, psd_sqrt, trace};
use crate::metric::{graph_from_012_metric, MetricError, MetricSpace, PointSet};
use crate::scalar::{Dyadic, ExactScalar, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmbedError {
    #[error("invalid size {0}")]
    InvalidSize(usize),
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("base index {base} out of range for {n} points")]
    InvalidBase { base: usize, n: usize },
    #[error("exact PSD test limited to {cap} rows, got {rows}")]
    SizeTooLarge { rows: usize, cap: usize },
    #[error(transparent)]
    Metric(#[from] MetricError),
}

/// The first `n` rows of a Sylvester Hadamard matrix of order `m`, with
/// the all-ones column moved to the last position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HadamardSystem {
    pub m: usize,
    pub rows: Vec<Vec<i8>>,
}

pub fn hadamard_system(n: usize) -> Result<HadamardSystem, EmbedError> {
    if n < 1 {
        return Err(EmbedError::InvalidSize(n));
    }
    let m = n.next_power_of_two();
    let mut h: Vec<Vec<i8>> = vec![vec![1]];
    while h.len() < m {
        let k = h.len();
        let mut next = vec![vec![0i8; 2 * k]; 2 * k];
        for i in 0..k {
            for j in 0..k {
                next[i][j] = h[i][j];
                next[i][j + k] = h[i][j];
                next[i + k][j] = h[i][j];
                next[i + k][j + k] = -h[i][j];
            }
        }
        h = next;
    }
    // column 0 of a Sylvester matrix is all ones
    let rows = h
        .into_iter()
        .take(n)
        .map(|row| row[1..].iter().chain(&row[..1]).copied().collect())
        .collect();
    Ok(HadamardSystem { m, rows })
}

/// `f(u_i) = √2(e_i − (1/n)Σe_j)`, `f(v_i) = √2(e_{n+i} − (1/n)Σe_{n+j})`
/// in `ℓ_2^{2n}`.
pub fn embed_knn_l2(n: usize) -> Result<PointSet, EmbedError> {
    if n < 2 {
        return Err(EmbedError::InvalidSize(n));
    }
    let r = 2f64.sqrt();
    let inv = 1.0 / n as f64;
    let points = (0..2 * n)
        .map(|a| {
            let block = a / n * n;
            (0..2 * n)
                .map(|c| {
                    if c / n * n != block {
                        0.0
                    } else if c == a {
                        r * (1.0 - inv)
                    } else {
                        -r * inv
                    }
                })
                .collect()
        })
        .collect();
    Ok(PointSet::new(points, 2.0)?)
}

fn hadamard_exponent_check(n: usize, p: f64) -> Result<HadamardSystem, EmbedError> {
    if n < 2 {
        return Err(EmbedError::InvalidSize(n));
    }
    if !(p.is_finite() && p > 2.0) {
        return Err(EmbedError::InvalidExponent(p));
    }
    hadamard_system(n)
}

/// `f(u_i) = (z_i, 0)`, `f(v_i) = (0, z_i)` in `ℓ_p^{2m}`, scaled by
/// `(m/2)^{−1/p}` so same-side pairs sit at distance exactly 2.
pub fn embed_knn_lp_basic(n: usize, p: f64) -> Result<PointSet, EmbedError> {
    let hs = hadamard_exponent_check(n, p)?;
    let m = hs.m;
    let mut points = Vec::with_capacity(2 * n);
    for z in &hs.rows {
        let mut v = vec![0.0; 2 * m];
        v[..m].iter_mut().zip(z).for_each(|(x, &s)| *x = s as f64);
        points.push(v);
    }
    for z in &hs.rows {
        let mut v = vec![0.0; 2 * m];
        v[m..].iter_mut().zip(z).for_each(|(x, &s)| *x = s as f64);
        points.push(v);
    }
    let ps = PointSet::new(points, p)?;
    Ok(ps.scaled((m as f64 / 2.0).powf(-1.0 / p)))
}

/// `g(u_i) = (z_i, 0^{m−1})`, `g(v_i) = (0^{m−1}, 1, z_i[..m−1])` in
/// `ℓ_p^{2m−1}`, with the same normalization as [`embed_knn_lp_basic`].
pub fn embed_knn_lp(n: usize, p: f64) -> Result<PointSet, EmbedError> {
    let hs = hadamard_exponent_check(n, p)?;
    let m = hs.m;
    let dim = 2 * m - 1;
    let mut points = Vec::with_capacity(2 * n);
    for z in &hs.rows {
        let mut v = vec![0.0; dim];
        v[..m].iter_mut().zip(z).for_each(|(x, &s)| *x = s as f64);
        points.push(v);
    }
    for z in &hs.rows {
        let mut v = vec![0.0; dim];
        v[m - 1] = 1.0;
        v[m..].iter_mut().zip(&z[..m - 1]).for_each(|(x, &s)| *x = s as f64);
        points.push(v);
    }
    let ps = PointSet::new(points, p)?;
    Ok(ps.scaled((m as f64 / 2.0).powf(-1.0 / p)))
}

/// Closed-form distortion of [`embed_knn_lp`]: `2^{2/p}(1 − 1/m)^{1/p}`.
pub fn knn_lp_distortion_formula(n: usize, p: f64) -> f64 {
    let m = n.next_power_of_two() as f64;
    2f64.powf(2.0 / p) * (1.0 - 1.0 / m).powf(1.0 / p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Psd,
    NotPsd,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Psd => "PSD",
            Verdict::NotPsd => "NotPSD",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum PsdWitness {
    /// Point indices (base excluded) whose principal minor of `B` is negative.
    NegativeMinor { indices: Vec<usize>, minor: Rational },
    /// Smallest eigenvalue of `B` and the acceptance threshold `−1e−9·tr B`.
    Eigenvalue { min: f64, threshold: f64 },
}

/// The Gram matrix `B` relative to a base point and the PSD decision on it.
#[derive(Debug, Clone, PartialEq)]
pub struct SchoenbergCertificate<S> {
    pub base: usize,
    /// Original point index of each row of `matrix`.
    pub points: Vec<usize>,
    pub matrix: Vec<Vec<S>>,
    pub verdict: Verdict,
    /// Present for `NotPsd`.
    pub witness: Option<PsdWitness>,
}

/// Largest `B` on which the exact kinds enumerate principal minors.
pub const EXACT_PSD_CAP: usize = 8;

/// Relative eigenvalue threshold for the real-kind PSD decision.
pub const EIGEN_PSD_TOLERANCE: f64 = 1e-9;

/// Scalars with a PSD decision procedure.
pub trait PsdScalar: Scalar {
    /// Row cap for the decision, if any.
    const ROW_CAP: Option<usize>;

    /// `None` when `b` is PSD, otherwise a witness in the local indexing.
    fn psd_witness(b: &[Vec<Self>]) -> Option<PsdWitness>;
}

impl PsdScalar for f64 {
    const ROW_CAP: Option<usize> = None;

    fn psd_witness(b: &[Vec<f64>]) -> Option<PsdWitness> {
        let min = jacobi_eigen(b).min_value();
        let threshold = -EIGEN_PSD_TOLERANCE * trace(b);
        (min < threshold).then_some(PsdWitness::Eigenvalue { min, threshold })
    }
}

fn exact_psd_witness<S: ExactScalar>(b: &[Vec<S>]) -> Option<PsdWitness> {
    let (ints, scale) = S::clear_denominators(b);
    let (indices, det) = first_negative_principal_minor(&ints)?;
    let k = indices.len();
    let minor = Rational::from_integer(det) / Pow::pow(scale, k);
    Some(PsdWitness::NegativeMinor { indices, minor })
}

impl PsdScalar for Rational {
    const ROW_CAP: Option<usize> = Some(EXACT_PSD_CAP);

    fn psd_witness(b: &[Vec<Self>]) -> Option<PsdWitness> {
        exact_psd_witness(b)
    }
}

impl PsdScalar for Dyadic {
    const ROW_CAP: Option<usize> = Some(EXACT_PSD_CAP);

    fn psd_witness(b: &[Vec<Self>]) -> Option<PsdWitness> {
        exact_psd_witness(b)
    }
}

/// `B[i][j] = (d(b,i)² + d(b,j)² − d(i,j)²)/2` over the points other
/// than `base`, in increasing index order.
pub fn gram_matrix<S: Scalar>(m: &MetricSpace<S>, base: usize) -> (Vec<usize>, Vec<Vec<S>>) {
    let others: Vec<usize> = (0..m.len()).filter(|&i| i != base).collect();
    let sq = |i: usize, j: usize| m.dist(i, j).times(m.dist(i, j));
    let b = others
        .iter()
        .map(|&i| {
            others
                .iter()
                .map(|&j| {
                    if i == j {
                        sq(base, i)
                    } else {
                        sq(base, i).plus(&sq(base, j)).minus(&sq(i, j)).halve()
                    }
                })
                .collect()
        })
        .collect();
    (others, b)
}

/// Schoenberg's criterion: the metric embeds isometrically in `ℓ_2` iff
/// `B` is positive semidefinite. Exact kinds check every principal minor;
/// reals use the smallest Jacobi eigenvalue against `−1e−9·tr B`.
pub fn schoenberg_test<S: PsdScalar>(
    m: &MetricSpace<S>,
    base: usize,
) -> Result<SchoenbergCertificate<S>, EmbedError> {
    let n = m.len();
    if n < 2 {
        return Err(EmbedError::InvalidSize(n));
    }
    if base >= n {
        return Err(EmbedError::InvalidBase { base, n });
    }
    if let Some(cap) = S::ROW_CAP {
        if n - 1 > cap {
            return Err(EmbedError::SizeTooLarge { rows: n - 1, cap });
        }
    }
    let (points, matrix) = gram_matrix(m, base);
    let witness = S::psd_witness(&matrix).map(|w| match w {
        PsdWitness::NegativeMinor { indices, minor } => PsdWitness::NegativeMinor {
            indices: indices.into_iter().map(|i| points[i]).collect(),
            minor,
        },
        other => other,
    });
    let verdict = if witness.is_some() { Verdict::NotPsd } else { Verdict::Psd };
    Ok(SchoenbergCertificate { base, points, matrix, verdict, witness })
}

/// Schoenberg verdict with base 0; spaces of at most 2 points always embed.
pub fn is_l2_isometric<S: PsdScalar>(m: &MetricSpace<S>) -> Result<bool, EmbedError> {
    if m.len() <= 2 {
        return Ok(true);
    }
    Ok(schoenberg_test(m, 0)?.verdict == Verdict::Psd)
}

/// The matrix `A` with `a_ii = 2`, `a_ij = 2/n` on distance-1 pairs and 0
/// on distance-2 pairs.
pub fn psd012_matrix<S: Scalar>(m: &MetricSpace<S>) -> Result<Vec<Vec<f64>>, EmbedError> {
    let n = m.len();
    if n < 2 {
        return Err(EmbedError::InvalidSize(n));
    }
    let g = graph_from_012_metric(m)?;
    let off = 2.0 / n as f64;
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        2.0
                    } else if g.has_edge(i, j) {
                        off
                    } else {
                        0.0
                    }
                })
                .collect()
        })
        .collect())
}

/// `f(i) = A^{1/2} e_i`: distance-1 pairs land at `√(4 − 4/n)`, distance-2
/// pairs at 2.
pub fn embed_012_l2<S: Scalar>(m: &MetricSpace<S>) -> Result<PointSet, EmbedError> {
    let a = psd012_matrix(m)?;
    // A = 2I + (2/n)·adjacency has smallest eigenvalue at least 2/n
    let root = psd_sqrt(&a, EIGEN_PSD_TOLERANCE * trace(&a)).expect("A is positive definite");
    Ok(PointSet::new(root, 2.0)?)
}
