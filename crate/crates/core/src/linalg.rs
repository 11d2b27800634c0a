//! Small dense symmetric linear algebra: cyclic Jacobi eigendecomposition,
//! PSD square roots, and exact integer determinants.

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// `A = Q diag(values) Qᵀ`; the columns of `vectors` are eigenvectors.
#[derive(Debug, Clone)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Eigen {
    pub fn min_value(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `Q f(Λ) Qᵀ`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> Vec<Vec<f64>> {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let q = &self.vectors;
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| q[i][k] * fl[k] * q[j][k]).sum())
                    .collect()
            })
            .collect()
    }
}

const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi rotations until the off-diagonal mass is negligible.
///
/// Panics if `a` is not square. Symmetry is assumed; only the upper
/// triangle drives the rotations.
pub fn jacobi_eigen(a: &[Vec<f64>]) -> Eigen {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "jacobi_eigen needs a square matrix");
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut q = identity(n);
    let scale = a.iter().flatten().fold(0.0f64, |s, x| s.max(x.abs()));
    if scale == 0.0 {
        return Eigen { values: vec![0.0; n], vectors: q };
    }
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[i][j])
            .sum();
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = m[p][r];
                if apr.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m[r][r] - m[p][p]) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkr = m[k][r];
                    m[k][p] = c * mkp - s * mkr;
                    m[k][r] = s * mkp + c * mkr;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mrk = m[r][k];
                    m[p][k] = c * mpk - s * mrk;
                    m[r][k] = s * mpk + c * mrk;
                }
                for row in q.iter_mut() {
                    let qkp = row[p];
                    let qkr = row[r];
                    row[p] = c * qkp - s * qkr;
                    row[r] = s * qkp + c * qkr;
                }
            }
        }
    }
    Eigen { values: (0..n).map(|i| m[i][i]).collect(), vectors: q }
}

pub fn identity(n: usize) -> Vec<Vec<f64>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect()
}

pub fn max_abs(a: &[Vec<f64>]) -> f64 {
    a.iter().flatten().fold(0.0, |s, x| s.max(x.abs()))
}

pub fn trace(a: &[Vec<f64>]) -> f64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

/// Symmetric square root; eigenvalues in `[−tol, 0)` are treated as zero.
/// Returns `None` when some eigenvalue is below `−tol`.
pub fn psd_sqrt(a: &[Vec<f64>], tol: f64) -> Option<Vec<Vec<f64>>> {
    let e = jacobi_eigen(a);
    if e.min_value() < -tol {
        return None;
    }
    Some(e.reconstruct_with(|l| l.max(0.0).sqrt()))
}

/// Fraction-free Gaussian elimination (Bareiss); exact.
pub fn bareiss_det(a: &[Vec<BigInt>]) -> BigInt {
    let n = a.len();
    match n {
        0 => return BigInt::one(),
        1 => return a[0][0].clone(),
        2 => return &a[0][0] * &a[1][1] - &a[0][1] * &a[1][0],
        _ => {}
    }
    let mut m: Vec<Vec<BigInt>> = a.to_vec();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Determinant of the principal submatrix on `indices`.
pub fn principal_minor(a: &[Vec<BigInt>], indices: &[usize]) -> BigInt {
    let sub: Vec<Vec<BigInt>> = indices
        .iter()
        .map(|&i| indices.iter().map(|&j| a[i][j].clone()).collect())
        .collect();
    bareiss_det(&sub)
}

/// Every nonempty principal minor, by increasing size and then
/// lexicographic index set; stops at the first negative one.
pub fn first_negative_principal_minor(a: &[Vec<BigInt>]) -> Option<(Vec<usize>, BigInt)> {
    let n = a.len();
    assert!(n < 32);
    let mut masks: Vec<u32> = (1u32..1 << n).collect();
    masks.sort_by_key(|&m| (m.count_ones(), subset_key(m, n)));
    for mask in masks {
        let idx: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let det = principal_minor(a, &idx);
        if det < BigInt::zero() {
            return Some((idx, det));
        }
    }
    None
}

/// Sort key that orders equal-size subsets lexicographically.
fn subset_key(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}
