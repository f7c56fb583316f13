//! Proximity graphs over agent positions and their spectral quantities.
//!
//! Links exist between agents within communication range. Under the
//! [`WeightKind::Smooth`] profile each link carries `w = exp(-decay * d^2)`,
//! which makes the algebraic connectivity differentiable in the positions;
//! the [`WeightKind::Binary`] profile gives every in-range link weight 1.
//!
//! The algebraic connectivity `lambda2` is the second-smallest eigenvalue of
//! the weighted Laplacian `L = D - W`. It is positive iff the graph is
//! connected, and for a simple eigenvalue with unit eigenvector `v`
//!
//! ```text
//! d lambda2 = sum over links (i, j) of (v_i - v_j)^2 * d w_ij
//! ```
//!
//! which is what [`connectivity_gradient`] evaluates.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Eigenvalue gap below which `lambda2` is reported as repeated.
pub const SIMPLE_GAP_TOL: f64 = 1e-8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("need at least {needed} agents, got {got}")]
    TooFewAgents { needed: usize, got: usize },

    #[error("position {index} has dimension {got}, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("position {index} has a non-finite coordinate")]
    NonFinite { index: usize },

    #[error("edge index {index} out of range for a graph with {edges} edges")]
    InvalidEdge { index: usize, edges: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weight profile: {0}")]
    InvalidProfile(String),

    #[error("connectivity gradient needs a smooth weight profile")]
    NotDifferentiable,

    #[error("eigensolver did not converge for a {0}x{0} Laplacian")]
    Eigen(usize),
}

/// A point in 2-D or 3-D space, in meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Position(pub Vec<f64>);

impl Position {
    pub fn new(coords: Vec<f64>) -> Self {
        Position(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Position(vec![0.0; dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn distance(&self, other: &Position) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self + scale * direction`.
    pub fn offset(&self, direction: &Position, scale: f64) -> Position {
        Position(
            self.0
                .iter()
                .zip(&direction.0)
                .map(|(a, d)| a + scale * d)
                .collect(),
        )
    }
}

impl Add for &Position {
    type Output = Position;
    fn add(self, rhs: &Position) -> Position {
        Position(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Position {
    type Output = Position;
    fn sub(self, rhs: &Position) -> Position {
        Position(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Mul<f64> for &Position {
    type Output = Position;
    fn mul(self, rhs: f64) -> Position {
        Position(self.0.iter().map(|a| a * rhs).collect())
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:.3}")?;
        }
        write!(f, ")")
    }
}

/// Checks that all positions are finite and share one dimension.
pub fn check_positions(positions: &[Position]) -> Result<usize, GraphError> {
    let dim = positions.first().map(Position::dim).unwrap_or(0);
    for (index, p) in positions.iter().enumerate() {
        if p.dim() != dim {
            return Err(GraphError::DimensionMismatch {
                index,
                expected: dim,
                got: p.dim(),
            });
        }
        if !p.is_finite() {
            return Err(GraphError::NonFinite { index });
        }
    }
    Ok(dim)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WeightKind {
    Binary,
    Smooth,
}

/// Link rule: range cutoff plus, for the smooth kind, a Gaussian decay.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightProfile {
    pub kind: WeightKind,
    /// Communication range in meters.
    pub range: f64,
    /// Decay rate in 1/m^2; ignored by the binary kind.
    pub decay: f64,
}

impl WeightProfile {
    pub fn binary(range: f64) -> Self {
        WeightProfile {
            kind: WeightKind::Binary,
            range,
            decay: 0.0,
        }
    }

    /// Smooth profile whose weight at the range boundary is 1e-3.
    pub fn smooth(range: f64) -> Self {
        Self::smooth_with_decay(range, Self::default_decay(range))
    }

    pub fn smooth_with_decay(range: f64, decay: f64) -> Self {
        WeightProfile {
            kind: WeightKind::Smooth,
            range,
            decay,
        }
    }

    pub fn default_decay(range: f64) -> f64 {
        1000f64.ln() / (range * range)
    }

    pub fn validate(&self) -> Result<(), GraphError> {
        if !(self.range.is_finite() && self.range > 0.0) {
            return Err(GraphError::InvalidProfile(format!(
                "range must be positive and finite, got {}",
                self.range
            )));
        }
        if self.kind == WeightKind::Smooth && !(self.decay.is_finite() && self.decay > 0.0) {
            return Err(GraphError::InvalidProfile(format!(
                "smooth profile needs a positive decay, got {}",
                self.decay
            )));
        }
        Ok(())
    }

    /// Link weight at distance `d`, or `None` when out of range.
    pub fn weight(&self, d: f64) -> Option<f64> {
        if d > self.range {
            return None;
        }
        Some(match self.kind {
            WeightKind::Binary => 1.0,
            WeightKind::Smooth => (-self.decay * d * d).exp().min(1.0),
        })
    }
}

/// Assignment of a weight profile to every agent pair.
///
/// With per-agent profiles a pair uses the profile with the shorter range
/// (ties go to the larger decay): both radios must reach.
#[derive(Debug, Clone, PartialEq)]
pub enum LinkModel {
    Uniform(WeightProfile),
    PerAgent(Vec<WeightProfile>),
}

impl From<WeightProfile> for LinkModel {
    fn from(p: WeightProfile) -> Self {
        LinkModel::Uniform(p)
    }
}

impl LinkModel {
    pub fn pair(&self, i: usize, j: usize) -> WeightProfile {
        match self {
            LinkModel::Uniform(p) => *p,
            LinkModel::PerAgent(ps) => {
                let (a, b) = (ps[i], ps[j]);
                if a.range < b.range || (a.range == b.range && a.decay >= b.decay) {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn validate(&self, n: usize) -> Result<(), GraphError> {
        match self {
            LinkModel::Uniform(p) => p.validate(),
            LinkModel::PerAgent(ps) => {
                if ps.len() != n {
                    return Err(GraphError::InvalidProfile(format!(
                        "{} per-agent profiles for {} agents",
                        ps.len(),
                        n
                    )));
                }
                ps.iter().try_for_each(WeightProfile::validate)
            }
        }
    }

    pub fn is_smooth(&self) -> bool {
        match self {
            LinkModel::Uniform(p) => p.kind == WeightKind::Smooth,
            LinkModel::PerAgent(ps) => ps.iter().all(|p| p.kind == WeightKind::Smooth),
        }
    }

    /// Longest pair range in the model.
    pub fn max_range(&self) -> f64 {
        match self {
            LinkModel::Uniform(p) => p.range,
            LinkModel::PerAgent(ps) => ps.iter().map(|p| p.range).fold(0.0, f64::max),
        }
    }

    pub fn build_graph(&self, positions: &[Position]) -> Result<WeightedGraph, GraphError> {
        if positions.len() < 2 {
            return Err(GraphError::TooFewAgents {
                needed: 2,
                got: positions.len(),
            });
        }
        check_positions(positions)?;
        self.validate(positions.len())?;
        let n = positions.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let d = positions[i].distance(&positions[j]);
                if let Some(w) = self.pair(i, j).weight(d) {
                    edges.push(Edge { i, j, w });
                }
            }
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn gradient(
        &self,
        positions: &[Position],
        spectral: &SpectralResult,
        g: &WeightedGraph,
    ) -> Result<ConnectivityGradient, GraphError> {
        if !self.is_smooth() {
            return Err(GraphError::NotDifferentiable);
        }
        gradient_with_decay(positions, spectral, g, |i, j| self.pair(i, j).decay)
    }
}

/// An undirected link, stored once with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub i: usize,
    pub j: usize,
    pub w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl WeightedGraph {
    /// Validates and canonicalizes: endpoints are reordered to `i < j` and
    /// edges sorted lexicographically.
    pub fn new(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        let mut edges: Vec<Edge> = edges
            .into_iter()
            .map(|e| {
                if e.i > e.j {
                    Edge {
                        i: e.j,
                        j: e.i,
                        w: e.w,
                    }
                } else {
                    e
                }
            })
            .collect();
        for e in &edges {
            if e.i == e.j {
                return Err(GraphError::InvalidGraph(format!(
                    "self-loop at node {}",
                    e.i
                )));
            }
            if e.j >= n {
                return Err(GraphError::InvalidGraph(format!(
                    "edge ({}, {}) references a node >= {n}",
                    e.i, e.j
                )));
            }
            if !(e.w > 0.0 && e.w <= 1.0) {
                return Err(GraphError::InvalidGraph(format!(
                    "edge ({}, {}) has weight {} outside (0, 1]",
                    e.i, e.j, e.w
                )));
            }
        }
        edges.sort_by_key(|e| (e.i, e.j));
        if let Some(w) = edges
            .windows(2)
            .find(|w| (w[0].i, w[0].j) == (w[1].i, w[1].j))
        {
            return Err(GraphError::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].i, w[0].j
            )));
        }
        Ok(WeightedGraph { n, edges })
    }

    pub fn empty(n: usize) -> Self {
        WeightedGraph {
            n,
            edges: Vec::new(),
        }
    }

    /// Unit-weight graph from an edge list; handy in tests and examples.
    pub fn unweighted(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        Self::new(
            n,
            pairs.iter().map(|&(i, j)| Edge { i, j, w: 1.0 }).collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn find_edge(&self, i: usize, j: usize) -> Option<usize> {
        let key = if i < j { (i, j) } else { (j, i) };
        self.edges.binary_search_by(|e| (e.i, e.j).cmp(&key)).ok()
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.i].push(e.j);
            adj[e.j].push(e.i);
        }
        adj
    }

    pub fn weighted_degrees(&self) -> Vec<f64> {
        let mut deg = vec![0.0; self.n];
        for e in &self.edges {
            deg[e.i] += e.w;
            deg[e.j] += e.w;
        }
        deg
    }

    pub fn laplacian(&self) -> DMatrix<f64> {
        laplacian(self)
    }

    /// Graph on `nodes` (in the given order) keeping only links between them.
    /// Also returns, for each kept edge, its index in `self`.
    pub fn induced_subgraph(&self, nodes: &[usize]) -> (WeightedGraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (k, &v) in nodes.iter().enumerate() {
            local[v] = k;
        }
        let mut kept = Vec::new();
        let mut origin = Vec::new();
        for (idx, e) in self.edges.iter().enumerate() {
            let (a, b) = (local[e.i], local[e.j]);
            if a != usize::MAX && b != usize::MAX {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                kept.push((Edge { i, j, w: e.w }, idx));
            }
        }
        kept.sort_by_key(|(e, _)| (e.i, e.j));
        let edges = kept.iter().map(|(e, _)| *e).collect();
        origin.extend(kept.iter().map(|(_, idx)| *idx));
        (
            WeightedGraph {
                n: nodes.len(),
                edges,
            },
            origin,
        )
    }
}

/// Second-smallest Laplacian eigenpair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub lambda2: f64,
    /// Unit eigenvector for `lambda2`, orthogonal to the all-ones vector.
    pub fiedler: Vec<f64>,
    /// `lambda3 - lambda2 > SIMPLE_GAP_TOL`.
    pub is_simple: bool,
}

/// Per-agent `d lambda2 / d x_i` in 1/m.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityGradient {
    pub per_agent: Vec<Position>,
    /// False when `lambda2` is repeated; the result is then a subgradient
    /// for the particular eigenvector used.
    pub exact: bool,
}

pub fn build_proximity_graph(
    positions: &[Position],
    profile: &WeightProfile,
) -> Result<WeightedGraph, GraphError> {
    LinkModel::Uniform(*profile).build_graph(positions)
}

/// `L = D - W`.
pub fn laplacian(g: &WeightedGraph) -> DMatrix<f64> {
    let mut l = DMatrix::zeros(g.n, g.n);
    for e in &g.edges {
        l[(e.i, e.j)] -= e.w;
        l[(e.j, e.i)] -= e.w;
        l[(e.i, e.i)] += e.w;
        l[(e.j, e.j)] += e.w;
    }
    l
}

/// Laplacian with the constant eigenvector lifted above the rest of the
/// spectrum (lambda_max <= 2 * max degree), so the smallest eigenpair of the
/// result is (lambda2, fiedler) with fiedler orthogonal to 1. Also returns
/// the roundoff floor below which lambda2 counts as zero.
fn lifted_laplacian(g: &WeightedGraph) -> Result<(DMatrix<f64>, f64), GraphError> {
    let n = g.n;
    if n < 2 {
        return Err(GraphError::TooFewAgents { needed: 2, got: n });
    }
    let max_degree = g.weighted_degrees().into_iter().fold(0.0, f64::max);
    let lift = 2.0 * max_degree + 1.0;
    let mut m = laplacian(g);
    m.add_scalar_mut(lift / n as f64);
    Ok((m, 64.0 * n as f64 * f64::EPSILON * lift))
}

fn is_connected(g: &WeightedGraph) -> bool {
    let adj = g.adjacency_lists();
    let mut seen = vec![false; g.n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

/// `lambda2` alone: zero without a solve for disconnected graphs, otherwise
/// eigenvalues without eigenvectors.
pub fn lambda2(g: &WeightedGraph) -> Result<f64, GraphError> {
    let (m, zero_tol) = lifted_laplacian(g)?;
    if !is_connected(g) {
        return Ok(0.0);
    }
    let raw = m
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    if !raw.is_finite() {
        return Err(GraphError::Eigen(g.n));
    }
    Ok(if raw < zero_tol { 0.0 } else { raw })
}

pub fn algebraic_connectivity(g: &WeightedGraph) -> Result<SpectralResult, GraphError> {
    let n = g.n;
    let (m, zero_tol) = lifted_laplacian(g)?;
    let eig = SymmetricEigen::try_new(m, f64::EPSILON, 10_000).ok_or(GraphError::Eigen(n))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let raw2 = eig.eigenvalues[order[0]];
    let lambda3 = if n >= 3 {
        eig.eigenvalues[order[1]]
    } else {
        f64::INFINITY
    };
    if !raw2.is_finite() {
        return Err(GraphError::Eigen(n));
    }

    let mut v: Vec<f64> = eig.eigenvectors.column(order[0]).iter().copied().collect();
    let mean = v.iter().sum::<f64>() / n as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 || !norm.is_finite() {
        return Err(GraphError::Eigen(n));
    }
    v.iter_mut().for_each(|x| *x /= norm);
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-9) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }

    let lambda2 = if raw2 < zero_tol { 0.0 } else { raw2 };
    Ok(SpectralResult {
        lambda2,
        fiedler: v,
        is_simple: lambda3 - raw2 > SIMPLE_GAP_TOL,
    })
}

pub fn connectivity_gradient(
    positions: &[Position],
    profile: &WeightProfile,
    spectral: &SpectralResult,
    g: &WeightedGraph,
) -> Result<ConnectivityGradient, GraphError> {
    LinkModel::Uniform(*profile).gradient(positions, spectral, g)
}

/// Gradient for Gaussian link weights `w = exp(-decay(i, j) * d^2)`.
pub(crate) fn gradient_with_decay(
    positions: &[Position],
    spectral: &SpectralResult,
    g: &WeightedGraph,
    decay: impl Fn(usize, usize) -> f64,
) -> Result<ConnectivityGradient, GraphError> {
    let dim = check_positions(positions)?;
    if positions.len() != g.n || spectral.fiedler.len() != g.n {
        return Err(GraphError::InvalidGraph(format!(
            "{} positions and a {}-entry Fiedler vector for a {}-node graph",
            positions.len(),
            spectral.fiedler.len(),
            g.n
        )));
    }
    let v = &spectral.fiedler;
    let mut grad = vec![Position::zeros(dim); g.n];
    for e in &g.edges {
        let diff = &positions[e.i] - &positions[e.j];
        let d = diff.norm();
        if d == 0.0 {
            continue;
        }
        let dw_dd = -2.0 * decay(e.i, e.j) * d * e.w;
        let coef = (v[e.i] - v[e.j]).powi(2) * dw_dd / d;
        grad[e.i] = grad[e.i].offset(&diff, coef);
        grad[e.j] = grad[e.j].offset(&diff, -coef);
    }
    Ok(ConnectivityGradient {
        per_agent: grad,
        exact: spectral.is_simple,
    })
}

/// Copy of `g` without the listed edges. Duplicate indices are ignored.
pub fn remove_links(g: &WeightedGraph, removal: &[usize]) -> Result<WeightedGraph, GraphError> {
    let mut drop = vec![false; g.edges.len()];
    for &index in removal {
        if index >= g.edges.len() {
            return Err(GraphError::InvalidEdge {
                index,
                edges: g.edges.len(),
            });
        }
        drop[index] = true;
    }
    Ok(WeightedGraph {
        n: g.n,
        edges: g
            .edges
            .iter()
            .zip(&drop)
            .filter(|(_, &d)| !d)
            .map(|(e, _)| *e)
            .collect(),
    })
}
