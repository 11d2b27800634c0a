//! Generalized roundness and the distortion lower bounds it yields.
//!
//! Double sums run over ordered pairs `(i, j)` including `i = j`.

use thiserror::Error;

use crate::metric::{check_exponent, MetricError, MetricSpace};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("point families have sizes {left} and {right}")]
    SizeMismatch { left: usize, right: usize },
    #[error("vectors of dimension {left} and {right} cannot be compared")]
    DimensionMismatch { left: usize, right: usize },
    #[error("invalid exponent p = {0}")]
    InvalidExponent(f64),
    #[error("matrix is not square")]
    NotSquare,
    #[error("index {0} appears on both sides")]
    Overlap(usize),
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("invalid size {0}")]
    InvalidSize(usize),
}

impl From<MetricError> for BoundError {
    fn from(e: MetricError) -> Self {
        match e {
            MetricError::InvalidExponent(p) => BoundError::InvalidExponent(p),
            MetricError::DimensionMismatch { left, right } => BoundError::DimensionMismatch { left, right },
            other => unreachable!("unexpected metric error {other}"),
        }
    }
}

/// `2` for `p ≤ 2`, `2^{p−1}` for `p ≥ 2`.
pub fn roundness_constant(p: f64) -> f64 {
    if p <= 2.0 {
        2.0
    } else {
        2f64.powf(p - 1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundnessReport {
    /// `Σ_{i,j} (‖x_i − x_j‖_p^p + ‖y_i − y_j‖_p^p)`.
    pub lhs: f64,
    /// `constant · Σ_{i,j} ‖x_i − y_j‖_p^p`.
    pub rhs: f64,
    pub slack: f64,
    pub constant: f64,
}

/// `‖x − y‖_p^p`.
fn lp_pow(x: &[f64], y: &[f64], p: f64) -> f64 {
    x.iter().zip(y).map(|(a, b)| (a - b).abs().powf(p)).sum()
}

pub fn roundness_slack(xs: &[Vec<f64>], ys: &[Vec<f64>], p: f64) -> Result<RoundnessReport, BoundError> {
    check_exponent(p)?;
    if xs.len() != ys.len() || xs.is_empty() {
        return Err(BoundError::SizeMismatch { left: xs.len(), right: ys.len() });
    }
    let dim = xs[0].len();
    if let Some(v) = xs.iter().chain(ys).find(|v| v.len() != dim) {
        return Err(BoundError::DimensionMismatch { left: dim, right: v.len() });
    }
    let mut lhs = 0.0;
    let mut cross = 0.0;
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            lhs += lp_pow(&xs[i], &xs[j], p) + lp_pow(&ys[i], &ys[j], p);
            cross += lp_pow(&xs[i], &ys[j], p);
        }
    }
    let constant = roundness_constant(p);
    let rhs = constant * cross;
    Ok(RoundnessReport { lhs, rhs, slack: rhs - lhs, constant })
}

/// Both sides of the row/column matrix inequality for `p ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSlack {
    /// `Σ_{i,j} (|r_i − r_j|^p + |c_i − c_j|^p)`.
    pub lhs: f64,
    /// `(2n)^p/2 · Σ_{i,j} |a_ij|^p`.
    pub rhs: f64,
    pub slack: f64,
}

fn check_square(a: &[Vec<f64>]) -> Result<usize, BoundError> {
    let n = a.len();
    if n == 0 || a.iter().any(|r| r.len() != n) {
        return Err(BoundError::NotSquare);
    }
    Ok(n)
}

fn row_col_sums(a: &[Vec<f64>]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let r = a.iter().map(|row| row.iter().sum()).collect();
    let c = (0..n).map(|j| a.iter().map(|row| row[j]).sum()).collect();
    (r, c)
}

pub fn matrix_rowcol_slack(a: &[Vec<f64>], p: f64) -> Result<MatrixSlack, BoundError> {
    let n = check_square(a)?;
    if !(p.is_finite() && p >= 2.0) {
        return Err(BoundError::InvalidExponent(p));
    }
    let (r, c) = row_col_sums(a);
    let mut lhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            lhs += (r[i] - r[j]).abs().powf(p) + (c[i] - c[j]).abs().powf(p);
        }
    }
    let mass: f64 = a.iter().flatten().map(|x| x.abs().powf(p)).sum();
    let rhs = (2.0 * n as f64).powf(p) / 2.0 * mass;
    Ok(MatrixSlack { lhs, rhs, slack: rhs - lhs })
}

/// Both sides of
/// `2n²Σa_ij² = Σ[(r_i − r_j)² + (c_i − c_j)²] + 2Σ(n·a_ij − r_i − c_j)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
}

pub fn matrix_identity_residual(a: &[Vec<f64>]) -> Result<IdentityResidual, BoundError> {
    let n = check_square(a)?;
    let nf = n as f64;
    let (r, c) = row_col_sums(a);
    let lhs = 2.0 * nf * nf * a.iter().flatten().map(|x| x * x).sum::<f64>();
    let mut rhs = 0.0;
    for i in 0..n {
        for j in 0..n {
            let t = nf * a[i][j] - r[i] - c[j];
            rhs += (r[i] - r[j]).powi(2) + (c[i] - c[j]).powi(2) + 2.0 * t * t;
        }
    }
    Ok(IdentityResidual { lhs, rhs, residual: (lhs - rhs).abs() })
}

/// `max(1, (Σ_within d^p / (c_p · Σ_cross d^p))^{1/p})`: a lower bound on
/// the `ℓ_p` distortion of the subspace on `side_a ∪ side_b`.
pub fn bipartite_lower_bound(
    m: &MetricSpace<f64>,
    side_a: &[usize],
    side_b: &[usize],
    p: f64,
) -> Result<f64, BoundError> {
    check_exponent(p)?;
    if side_a.len() != side_b.len() || side_a.is_empty() {
        return Err(BoundError::SizeMismatch { left: side_a.len(), right: side_b.len() });
    }
    for &index in side_a.iter().chain(side_b) {
        if index >= m.len() {
            return Err(BoundError::IndexOutOfRange { index, n: m.len() });
        }
    }
    if let Some(&x) = side_a.iter().find(|x| side_b.contains(x)) {
        return Err(BoundError::Overlap(x));
    }
    let d = |i: usize, j: usize| m.dist(i, j).powf(p);
    let mut within = 0.0;
    let mut cross = 0.0;
    for (&a1, &b1) in side_a.iter().zip(side_b) {
        for (&a2, &b2) in side_a.iter().zip(side_b) {
            within += d(a1, a2) + d(b1, b2);
            cross += d(a1, b2);
        }
    }
    Ok(bipartite_bound_from_sums(within, cross, p))
}

pub(crate) fn bipartite_bound_from_sums(within: f64, cross: f64, p: f64) -> f64 {
    (within / (roundness_constant(p) * cross)).powf(1.0 / p).max(1.0)
}

/// Lower and upper bounds on the `ℓ_p` distortion of `K_{n,n}`.
pub fn knn_cp_bounds(n: usize, p: f64) -> Result<(f64, f64), BoundError> {
    if n < 2 {
        return Err(BoundError::InvalidSize(n));
    }
    check_exponent(p)?;
    let nf = n as f64;
    let ratio = (nf - 1.0) / nf;
    Ok(if p <= 2.0 {
        (2.0 * ratio.powf(1.0 / p), 2.0 * ratio.sqrt())
    } else {
        let c = 2f64.powf(2.0 / p);
        (c * ratio.powf(1.0 / p), c * (1.0 - 1.0 / (2.0 * nf)).powf(1.0 / p))
    })
}
