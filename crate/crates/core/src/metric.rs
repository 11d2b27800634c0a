//! Finite metric spaces, graphs, `ℓ_p` point sets and the distortion of an
//! embedding.
//!
//! All indices are 0-based. The `K_{n,n}` metric orders the `u` block
//! before the `v` block, so the two sides are the index ranges `0..n` and
//! `n..2n`.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::scalar::{Scalar, ScalarKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square (row {row} has {len} entries, expected {n})")]
    NotSquare { row: usize, len: usize, n: usize },
    #[error("empty metric space")]
    Empty,
    #[error("nonzero diagonal entry d[{i}][{i}]")]
    NonzeroDiagonal { i: usize },
    #[error("d[{i}][{j}] != d[{j}][{i}]")]
    NonSymmetric { i: usize, j: usize },
    #[error("non-positive off-diagonal entry d[{i}][{j}]")]
    NonPositiveOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality violated: d[{i}][{k}] > d[{i}][{j}] + d[{j}][{k}]")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("vectors of dimension {left} and {right} cannot be compared")]
    DimensionMismatch { left: usize, right: usize },
    #[error("exponent p = {0} is not in [1, inf)")]
    InvalidExponent(f64),
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("correspondence is not a bijection onto the image points")]
    NotBijective,
    #[error("image points {i} and {j} coincide; contraction is unbounded")]
    ZeroImageDistance { i: usize, j: usize },
    #[error("invalid size {0}")]
    InvalidSize(usize),
    #[error("d[{i}][{j}] is neither 1 nor 2")]
    NotZeroOneTwo { i: usize, j: usize },
    #[error("index {index} out of range for {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} repeated")]
    Duplicate(usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge ({0}, {1}) is a loop")]
    Loop(usize, usize),
    #[error("edge ({0}, {1}) repeated")]
    DuplicateEdge(usize, usize),
}

/// A finite metric space with a validated distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace<S> {
    d: Vec<Vec<S>>,
    label: Option<String>,
}

impl<S: Scalar> MetricSpace<S> {
    /// Checks the metric axioms in order (shape, diagonal, symmetry,
    /// positivity, triangle) and reports the first violation.
    pub fn validate(d: Vec<Vec<S>>) -> Result<Self, MetricError> {
        let n = d.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        for (row, r) in d.iter().enumerate() {
            if r.len() != n {
                return Err(MetricError::NotSquare { row, len: r.len(), n });
            }
        }
        let zero = S::zero();
        for (i, row) in d.iter().enumerate() {
            if row[i] != zero {
                return Err(MetricError::NonzeroDiagonal { i });
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if d[i][j] != d[j][i] {
                    return Err(MetricError::NonSymmetric { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && !d[i][j].is_positive() {
                    return Err(MetricError::NonPositiveOffDiagonal { i, j });
                }
            }
        }
        let max = d
            .iter()
            .flatten()
            .fold(S::zero(), |m, x| if *x > m { x.clone() } else { m });
        let tol = S::triangle_tolerance(&max);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if i == j || j == k || i == k {
                        continue;
                    }
                    if d[i][k] > d[i][j].plus(&d[j][k]).plus(&tol) {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(MetricSpace { d, label: None })
    }

    /// Builds from a matrix the caller already knows to be a metric.
    pub(crate) fn from_trusted(d: Vec<Vec<S>>) -> Self {
        debug_assert!(MetricSpace::validate(d.clone()).is_ok());
        MetricSpace { d, label: None }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn kind(&self) -> ScalarKind {
        S::KIND
    }

    pub fn dist(&self, i: usize, j: usize) -> &S {
        &self.d[i][j]
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.d
    }

    pub fn into_rows(self) -> Vec<Vec<S>> {
        self.d
    }

    /// Real-kind copy (rational entries rounded to nearest).
    pub fn to_real(&self) -> MetricSpace<f64> {
        MetricSpace {
            d: self.d.iter().map(|r| r.iter().map(S::to_f64).collect()).collect(),
            label: self.label.clone(),
        }
    }

    /// The submetric on `subset`, in the given order.
    pub fn restrict(&self, subset: &[usize]) -> Result<Self, MetricError> {
        if subset.is_empty() {
            return Err(MetricError::Empty);
        }
        let mut seen = BTreeSet::new();
        for &index in subset {
            if index >= self.len() {
                return Err(MetricError::IndexOutOfRange { index, n: self.len() });
            }
            if !seen.insert(index) {
                return Err(MetricError::Duplicate(index));
            }
        }
        let d = subset
            .iter()
            .map(|&i| subset.iter().map(|&j| self.d[i][j].clone()).collect())
            .collect();
        Ok(MetricSpace { d, label: None })
    }
}

/// Free-function form of [`MetricSpace::validate`].
pub fn validate_metric<S: Scalar>(d: Vec<Vec<S>>) -> Result<MetricSpace<S>, MetricError> {
    MetricSpace::validate(d)
}

/// Free-function form of [`MetricSpace::restrict`].
pub fn restrict<S: Scalar>(m: &MetricSpace<S>, subset: &[usize]) -> Result<MetricSpace<S>, MetricError> {
    m.restrict(subset)
}

/// `(Σ|x_k − y_k|^p)^{1/p}`.
pub fn lp_distance(x: &[f64], y: &[f64], p: f64) -> Result<f64, MetricError> {
    if x.len() != y.len() {
        return Err(MetricError::DimensionMismatch { left: x.len(), right: y.len() });
    }
    check_exponent(p)?;
    Ok(lp_distance_unchecked(x, y, p))
}

pub(crate) fn check_exponent(p: f64) -> Result<(), MetricError> {
    if p.is_finite() && p >= 1.0 {
        Ok(())
    } else {
        Err(MetricError::InvalidExponent(p))
    }
}

pub(crate) fn lp_distance_unchecked(x: &[f64], y: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        return x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    }
    if p == 1.0 {
        return x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum();
    }
    // scale by the largest coordinate gap to keep the p-th powers in range
    let scale = x.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    let s: f64 = x.iter().zip(y).map(|(a, b)| ((a - b).abs() / scale).powf(p)).sum();
    scale * s.powf(1.0 / p)
}

/// Points in `ℓ_p^k` with `p ∈ [1, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Vec<f64>>,
    p: f64,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>, p: f64) -> Result<Self, MetricError> {
        check_exponent(p)?;
        if let Some(first) = points.first() {
            for pt in &points {
                if pt.len() != first.len() {
                    return Err(MetricError::DimensionMismatch { left: first.len(), right: pt.len() });
                }
            }
        }
        if let Some(x) = points.iter().flatten().find(|x| !x.is_finite()) {
            return Err(MetricError::InvalidExponent(*x));
        }
        Ok(PointSet { points, p })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        lp_distance_unchecked(&self.points[i], &self.points[j], self.p)
    }

    /// Every coordinate multiplied by `c`.
    pub fn scaled(&self, c: f64) -> PointSet {
        PointSet {
            points: self.points.iter().map(|v| v.iter().map(|x| x * c).collect()).collect(),
            p: self.p,
        }
    }

    /// Same coordinates measured in a different `ℓ_p`.
    pub fn with_exponent(&self, p: f64) -> Result<PointSet, MetricError> {
        PointSet::new(self.points.clone(), p)
    }
}

/// The metric induced on a point set by its `ℓ_p` norm.
pub fn induced_metric(ps: &PointSet) -> Result<MetricSpace<f64>, MetricError> {
    let n = ps.len();
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = ps.distance(i, j);
            if v == 0.0 {
                return Err(MetricError::DuplicatePoints { i, j });
            }
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    MetricSpace::validate(d)
}

/// Expansion, contraction and distortion of a map between finite spaces.
#[derive(Debug, Clone, PartialEq)]
pub struct DistortionReport {
    /// `sup d_X(f(x), f(y)) / d_M(x, y)`.
    pub expansion: f64,
    /// `sup d_M(x, y) / d_X(f(x), f(y))`.
    pub contraction: f64,
    pub distortion: f64,
    /// Source pair attaining the expansion (`None` for fewer than 2 points).
    pub expansion_pair: Option<(usize, usize)>,
    pub contraction_pair: Option<(usize, usize)>,
}

/// Distortion of the map sending source point `i` to `image[correspondence[i]]`.
pub fn distortion(
    source: &MetricSpace<f64>,
    image: &PointSet,
    correspondence: &[usize],
) -> Result<DistortionReport, MetricError> {
    let n = source.len();
    if correspondence.len() != n || image.len() != n {
        return Err(MetricError::NotBijective);
    }
    let mut hit = vec![false; n];
    for &c in correspondence {
        if c >= n || hit[c] {
            return Err(MetricError::NotBijective);
        }
        hit[c] = true;
    }
    let mut report = DistortionReport {
        expansion: 1.0,
        contraction: 1.0,
        distortion: 1.0,
        expansion_pair: None,
        contraction_pair: None,
    };
    if n < 2 {
        return Ok(report);
    }
    let mut expansion = f64::NEG_INFINITY;
    let mut contraction = f64::NEG_INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let dm = source.dist(i, j);
            let dx = image.distance(correspondence[i], correspondence[j]);
            if dx == 0.0 {
                return Err(MetricError::ZeroImageDistance { i, j });
            }
            if dx / dm > expansion {
                expansion = dx / dm;
                report.expansion_pair = Some((i, j));
            }
            if dm / dx > contraction {
                contraction = dm / dx;
                report.contraction_pair = Some((i, j));
            }
        }
    }
    report.expansion = expansion;
    report.contraction = contraction;
    report.distortion = expansion * contraction;
    Ok(report)
}

/// Distortion under the identity correspondence.
pub fn distortion_identity(source: &MetricSpace<f64>, image: &PointSet) -> Result<DistortionReport, MetricError> {
    let ident: Vec<usize> = (0..source.len()).collect();
    distortion(source, image, &ident)
}

/// The `K_{n,n}` metric: `u_0..u_{n−1}` then `v_0..v_{n−1}`; same side at
/// distance 2, across at distance 1.
pub fn knn_metric<S: Scalar>(n: usize) -> Result<MetricSpace<S>, MetricError> {
    if n < 1 {
        return Err(MetricError::InvalidSize(n));
    }
    let (one, two) = (S::from_i64(1), S::from_i64(2));
    let d = (0..2 * n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if i == j {
                        S::zero()
                    } else if (i < n) == (j < n) {
                        two.clone()
                    } else {
                        one.clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(MetricSpace::from_trusted(d).with_label(format!("K_{{{n},{n}}}")))
}

/// A simple undirected graph on `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<bool>>,
}

impl Graph {
    /// Edges may be given in either orientation; loops, repeats and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, MetricError> {
        let mut adj = vec![vec![false; n]; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            for index in [a, b] {
                if index >= n {
                    return Err(MetricError::IndexOutOfRange { index, n });
                }
            }
            if a == b {
                return Err(MetricError::Loop(a, b));
            }
            if adj[a][b] {
                return Err(MetricError::DuplicateEdge(a, b));
            }
            adj[a][b] = true;
            adj[b][a] = true;
            list.push((a.min(b), a.max(b)));
        }
        list.sort_unstable();
        Ok(Graph { n, edges: list, adj })
    }

    pub fn empty(n: usize) -> Graph {
        Graph { n, edges: Vec::new(), adj: vec![vec![false; n]; n] }
    }

    pub fn complete(n: usize) -> Graph {
        Graph::new(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).expect("valid")
    }

    pub fn path(n: usize) -> Graph {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid")
    }

    /// `K_{a,b}` with the first side at `0..a`.
    pub fn complete_bipartite(a: usize, b: usize) -> Graph {
        Graph::new(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j)))).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Sorted `(min, max)` pairs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&x| x).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().enumerate().filter(|(_, &e)| e).map(|(u, _)| u)
    }

    /// Induced subgraph on `vertices`; vertex `t` of the result is `vertices[t]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let k = vertices.len();
        let edges = (0..k)
            .flat_map(|a| (a + 1..k).map(move |b| (a, b)))
            .filter(|&(a, b)| self.adj[vertices[a]][vertices[b]]);
        Graph::new(k, edges.collect::<Vec<_>>()).expect("induced subgraph is simple")
    }

    /// Breadth-first distances from `src` (`None` when unreachable).
    pub fn bfs(&self, src: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[src] = Some(0);
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].expect("queued vertices are labelled");
            for u in self.neighbors(v) {
                if dist[u].is_none() {
                    dist[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }
}

/// Distance 1 on edges, 2 on non-edges.
pub fn metric_from_graph_012<S: Scalar>(g: &Graph) -> Result<MetricSpace<S>, MetricError> {
    let n = g.vertex_count();
    if n < 2 {
        return Err(MetricError::InvalidSize(n));
    }
    let (one, two) = (S::from_i64(1), S::from_i64(2));
    let d = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        S::zero()
                    } else if g.has_edge(i, j) {
                        one.clone()
                    } else {
                        two.clone()
                    }
                })
                .collect()
        })
        .collect();
    Ok(MetricSpace::from_trusted(d))
}

/// Inverse of [`metric_from_graph_012`].
pub fn graph_from_012_metric<S: Scalar>(m: &MetricSpace<S>) -> Result<Graph, MetricError> {
    let n = m.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let v = m.dist(i, j);
            if v.is_integer_value(1) {
                edges.push((i, j));
            } else if !v.is_integer_value(2) {
                return Err(MetricError::NotZeroOneTwo { i, j });
            }
        }
    }
    Graph::new(n, edges)
}

/// A shortest path realizing the diameter.
///
/// The endpoints are the lexicographically smallest pair at maximum
/// distance; among the shortest paths between them the lexicographically
/// smallest vertex sequence is returned.
pub fn extract_geodesic(g: &Graph) -> Result<Vec<usize>, MetricError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(MetricError::InvalidSize(0));
    }
    let mut all = Vec::with_capacity(n);
    for v in 0..n {
        let row: Option<Vec<usize>> = g.bfs(v).into_iter().collect();
        all.push(row.ok_or(MetricError::Disconnected)?);
    }
    let mut best = (0, 0, 0);
    for (a, row) in all.iter().enumerate() {
        for (b, &dist) in row.iter().enumerate().skip(a + 1) {
            if dist > best.2 {
                best = (a, b, dist);
            }
        }
    }
    let (a, b, diameter) = best;
    let mut path = vec![a];
    let mut cur = a;
    for step in 1..=diameter {
        cur = g
            .neighbors(cur)
            .find(|&w| all[a][w] == step && all[w][b] == diameter - step)
            .expect("a geodesic continues through some neighbour");
        path.push(cur);
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{parse_rational, Rational};

    fn real(rows: &[&[f64]]) -> Vec<Vec<f64>> {
        rows.iter().map(|r| r.to_vec()).collect()
    }

    #[test]
    fn equilateral_is_valid() {
        let m = validate_metric(real(&[&[0., 1., 1.], &[1., 0., 1.], &[1., 1., 0.]])).unwrap();
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn reports_first_violated_axiom() {
        let bad = real(&[&[0., 1., 3.], &[1., 0., 1.], &[3., 1., 0.]]);
        assert_eq!(validate_metric(bad), Err(MetricError::TriangleViolation { i: 0, j: 1, k: 2 }));
        let asym = real(&[&[0., 1.], &[2., 0.]]);
        assert_eq!(validate_metric(asym), Err(MetricError::NonSymmetric { i: 0, j: 1 }));
        let diag = real(&[&[1., 1.], &[1., 0.]]);
        assert_eq!(validate_metric(diag), Err(MetricError::NonzeroDiagonal { i: 0 }));
        let zero = real(&[&[0., 0.], &[0., 0.]]);
        assert_eq!(validate_metric(zero), Err(MetricError::NonPositiveOffDiagonal { i: 0, j: 1 }));
        let ragged = vec![vec![0.0, 1.0], vec![1.0]];
        assert!(matches!(validate_metric(ragged), Err(MetricError::NotSquare { .. })));
    }

    #[test]
    fn rational_triangle_is_exact() {
        let q = |s: &str| parse_rational(s).unwrap();
        // 1/3 + 1/3 = 2/3 exactly: a degenerate but valid triangle
        let ok = vec![
            vec![q("0"), q("1/3"), q("2/3")],
            vec![q("1/3"), q("0"), q("1/3")],
            vec![q("2/3"), q("1/3"), q("0")],
        ];
        assert!(validate_metric::<Rational>(ok).is_ok());
        let bad = vec![
            vec![q("0"), q("1/3"), q("2/3")],
            vec![q("1/3"), q("0"), q("333333333/1000000000")],
            vec![q("2/3"), q("333333333/1000000000"), q("0")],
        ];
        assert!(matches!(validate_metric::<Rational>(bad), Err(MetricError::TriangleViolation { .. })));
    }

    #[test]
    fn lp_distance_examples() {
        assert!((lp_distance(&[1., 1.], &[-1., 1.], 4.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(lp_distance(&[3., 4.], &[0., 0.], 2.0).unwrap(), 5.0);
        assert_eq!(lp_distance(&[1., 0.], &[0., 1.], 1.0).unwrap(), 2.0);
        assert_eq!(lp_distance(&[1.], &[0., 1.], 2.0), Err(MetricError::DimensionMismatch { left: 1, right: 2 }));
        assert_eq!(lp_distance(&[1.], &[0.], 0.5), Err(MetricError::InvalidExponent(0.5)));
    }

    #[test]
    fn induced_metric_examples() {
        let two = PointSet::new(vec![vec![0.], vec![1.]], 2.0).unwrap();
        assert_eq!(*induced_metric(&two).unwrap().dist(0, 1), 1.0);
        let square = PointSet::new(vec![vec![0., 0.], vec![1., 0.], vec![1., 1.], vec![0., 1.]], 2.0).unwrap();
        let m = induced_metric(&square).unwrap();
        assert_eq!(*m.dist(0, 1), 1.0);
        assert!((m.dist(0, 2) - 2f64.sqrt()).abs() < 1e-15);
        let line = PointSet::new(vec![vec![0.], vec![1.], vec![3.]], 1.0).unwrap();
        let m = induced_metric(&line).unwrap();
        assert_eq!((*m.dist(0, 1), *m.dist(1, 2), *m.dist(0, 2)), (1.0, 2.0, 3.0));
        let dup = PointSet::new(vec![vec![0.], vec![0.]], 1.0).unwrap();
        assert_eq!(induced_metric(&dup), Err(MetricError::DuplicatePoints { i: 0, j: 1 }));
    }

    #[test]
    fn distortion_of_isometry_and_permutation() {
        let ps = PointSet::new(vec![vec![0.], vec![1.], vec![3.]], 2.0).unwrap();
        let m = induced_metric(&ps).unwrap();
        let r = distortion_identity(&m, &ps).unwrap();
        assert!((r.distortion - 1.0).abs() < 1e-15);
        // swapping two images is not an isometry
        let r = distortion(&m, &ps, &[1, 0, 2]).unwrap();
        assert!(r.distortion > 1.0);
        assert_eq!(distortion(&m, &ps, &[0, 0, 2]), Err(MetricError::NotBijective));
        let coincident = PointSet::new(vec![vec![0.], vec![0.], vec![3.]], 2.0).unwrap();
        assert_eq!(distortion_identity(&m, &coincident), Err(MetricError::ZeroImageDistance { i: 0, j: 1 }));
    }

    #[test]
    fn knn_layout() {
        assert!(knn_metric::<f64>(0).is_err());
        let m = knn_metric::<f64>(1).unwrap();
        assert_eq!(*m.dist(0, 1), 1.0);
        let m = knn_metric::<f64>(2).unwrap();
        assert_eq!((*m.dist(0, 1), *m.dist(0, 2)), (2.0, 1.0));
        assert!(validate_metric(knn_metric::<f64>(5).unwrap().into_rows()).is_ok());
    }

    #[test]
    fn graph_metric_correspondence() {
        let k22 = Graph::complete_bipartite(2, 2);
        let m: MetricSpace<f64> = metric_from_graph_012(&k22).unwrap();
        assert_eq!(m.rows(), knn_metric::<f64>(2).unwrap().rows());
        let tri: MetricSpace<f64> = metric_from_graph_012(&Graph::complete(3)).unwrap();
        assert!(tri.rows().iter().flatten().all(|&x| x == 0.0 || x == 1.0));
        let empty: MetricSpace<f64> = metric_from_graph_012(&Graph::empty(3)).unwrap();
        assert!(empty.rows().iter().flatten().all(|&x| x == 0.0 || x == 2.0));
        assert_eq!(graph_from_012_metric(&knn_metric::<Rational>(3).unwrap()).unwrap(), Graph::complete_bipartite(3, 3));
        let k4: MetricSpace<f64> = metric_from_graph_012(&Graph::complete(4)).unwrap();
        assert_eq!(graph_from_012_metric(&k4).unwrap(), Graph::complete(4));
        let odd = validate_metric(real(&[&[0., 1.5], &[1.5, 0.]])).unwrap();
        assert_eq!(graph_from_012_metric(&odd), Err(MetricError::NotZeroOneTwo { i: 0, j: 1 }));
        assert_eq!(metric_from_graph_012::<f64>(&Graph::empty(1)), Err(MetricError::InvalidSize(1)));
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert_eq!(Graph::new(2, [(0, 0)]), Err(MetricError::Loop(0, 0)));
        assert_eq!(Graph::new(2, [(0, 1), (1, 0)]), Err(MetricError::DuplicateEdge(1, 0)));
        assert_eq!(Graph::new(2, [(0, 2)]), Err(MetricError::IndexOutOfRange { index: 2, n: 2 }));
    }

    #[test]
    fn restrict_examples() {
        let m = knn_metric::<f64>(2).unwrap();
        assert_eq!(m.restrict(&[0, 1, 2, 3]).unwrap().rows(), m.rows());
        let pair = m.restrict(&[0, 2]).unwrap();
        assert_eq!(*pair.dist(0, 1), 1.0);
        assert_eq!(m.restrict(&[3]).unwrap().len(), 1);
        assert_eq!(m.restrict(&[4]), Err(MetricError::IndexOutOfRange { index: 4, n: 4 }));
        assert_eq!(m.restrict(&[1, 1]), Err(MetricError::Duplicate(1)));
        assert_eq!(m.restrict(&[]), Err(MetricError::Empty));
    }

    /// Floyd–Warshall distances, independent of the BFS used by the code.
    fn all_pairs(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.vertex_count();
        let inf = usize::MAX / 4;
        let mut d = vec![vec![inf; n]; n];
        for i in 0..n {
            d[i][i] = 0;
        }
        for &(a, b) in g.edges() {
            d[a][b] = 1;
            d[b][a] = 1;
        }
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
                }
            }
        }
        d
    }

    #[test]
    fn geodesic_examples() {
        assert_eq!(extract_geodesic(&Graph::path(5)).unwrap(), vec![0, 1, 2, 3, 4]);
        let c6 = Graph::cycle(6);
        let diam = *all_pairs(&c6).iter().flatten().max().unwrap();
        assert_eq!(diam, 3);
        let path = extract_geodesic(&c6).unwrap();
        assert_eq!(path, vec![0, 1, 2, 3]);
        assert_eq!(extract_geodesic(&Graph::complete(4)).unwrap(), vec![0, 1]);
        assert_eq!(extract_geodesic(&Graph::empty(2)), Err(MetricError::Disconnected));
        assert_eq!(extract_geodesic(&Graph::empty(1)).unwrap(), vec![0]);
    }
}
