//! Finite metric measure spaces and reversible Markov chains.
//!
//! Both carriers expose the same ambient interface (point count, distance,
//! measure) so set enlargement, set-to-set distance and set families work
//! uniformly. A chain's distance is the shortest-path metric of its support
//! graph (edge iff `p(x,y) > 0`, `x != y`), computed by repeated BFS.
//!
//! Enlargement comes in two modes. The continuous theory uses the open
//! (strict) enlargement `{x : d(x,A) < r}`; the Markov-chain results step
//! through closed integer enlargements `{x : d(x,A) <= n}` (a strict
//! one-step enlargement on a graph would be empty progress). Metric spaces
//! default to strict, chains to closed; every bound evaluator records which
//! mode it used.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;
use crate::Result;

/// Validation tolerance for distance matrices and probability vectors.
pub const VALIDATION_TOL: f64 = 1e-12;
/// Tolerance for the detailed-balance residual of a chain.
pub const REVERSIBILITY_TOL: f64 = 1e-10;

/// Enlargement convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnlargeMode {
    /// `{x : d(x,A) < r}`, together with `A` itself.
    Strict,
    /// `{x : d(x,A) <= r}`.
    Closed,
}

/// Common read-only view of a finite metric measure structure.
pub trait Ambient {
    fn n(&self) -> usize;
    fn dist(&self, x: usize, y: usize) -> f64;
    fn mu(&self, x: usize) -> f64;
    /// The enlargement convention native to this carrier.
    fn default_mode(&self) -> EnlargeMode;

    fn mu_of_set(&self, set: &[usize]) -> f64 {
        set.iter().map(|&x| self.mu(x)).sum()
    }

    /// `d(x, A)` for every point `x`.
    fn dist_to_set(&self, set: &[usize]) -> Vec<f64> {
        let mut out = vec![f64::INFINITY; self.n()];
        for x in 0..self.n() {
            for &a in set {
                let d = self.dist(x, a);
                if d < out[x] {
                    out[x] = d;
                }
            }
        }
        out
    }

    fn diameter(&self) -> f64 {
        let mut d = 0.0;
        for x in 0..self.n() {
            for y in 0..x {
                if self.dist(x, y) > d {
                    d = self.dist(x, y);
                }
            }
        }
        d
    }
}

/// A finite point set with a distance matrix and a probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricMeasureSpace {
    n: usize,
    dist: Vec<Vec<f64>>,
    mu: Vec<f64>,
}

impl MetricMeasureSpace {
    /// Validates and builds the space: `dist` symmetric with zero diagonal,
    /// positive off-diagonal, triangle inequality within `1e-12`; `mu`
    /// non-negative summing to one within `1e-12`.
    pub fn new(dist: Vec<Vec<f64>>, mu: Vec<f64>) -> Result<Self> {
        let n = dist.len();
        if n == 0 || mu.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        for i in 0..n {
            if dist[i][i] != 0.0 {
                return Err(Error::AsymmetricDistance { i, j: i });
            }
            for j in 0..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::AsymmetricDistance { i, j });
                }
                if i != j && !(dist[i][j] > 0.0) {
                    return Err(Error::AsymmetricDistance { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if dist[i][k] > dist[i][j] + dist[j][k] + VALIDATION_TOL {
                        return Err(Error::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        validate_measure(&mu)?;
        Ok(Self { n, dist, mu })
    }

    pub fn dist_matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn mu_vec(&self) -> &[f64] {
        &self.mu
    }
}

impl Ambient for MetricMeasureSpace {
    fn n(&self) -> usize {
        self.n
    }

    fn dist(&self, x: usize, y: usize) -> f64 {
        self.dist[x][y]
    }

    fn mu(&self, x: usize) -> f64 {
        self.mu[x]
    }

    fn default_mode(&self) -> EnlargeMode {
        EnlargeMode::Strict
    }
}

fn validate_measure(mu: &[f64]) -> Result<()> {
    if mu.iter().any(|&m| m < 0.0 || !m.is_finite()) {
        return Err(Error::BadMeasure { residual: f64::NAN });
    }
    let sum: f64 = mu.iter().sum();
    let residual = crate::fmath::abs(sum - 1.0);
    if residual > VALIDATION_TOL {
        return Err(Error::BadMeasure { residual });
    }
    Ok(())
}

/// How to turn a graph into a reversible chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WalkKind {
    /// `p(x,y) = 1/deg(x)` on edges; `mu(x) = deg(x) / sum(deg)`.
    SimpleWalk,
    /// Uniform `mu`; `p(x,y) = min(1/deg(x), 1/deg(y))` on edges, remainder
    /// on the diagonal.
    MetropolisUniform,
}

/// A row-stochastic kernel with its reversible measure and the shortest-path
/// metric of its support graph.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleChain {
    n: usize,
    p: Vec<Vec<f64>>,
    mu: Vec<f64>,
    graph_dist: Vec<Vec<u32>>,
}

impl ReversibleChain {
    /// Validates and builds the chain: rows of `p` sum to one within `1e-12`,
    /// detailed balance holds within `1e-10`, every state has positive mass,
    /// and the support graph is connected.
    pub fn new(p: Vec<Vec<f64>>, mu: Vec<f64>) -> Result<Self> {
        let n = p.len();
        if n == 0 || mu.len() != n || p.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        for (i, row) in p.iter().enumerate() {
            if row.iter().any(|&v| v < 0.0 || !v.is_finite()) {
                return Err(Error::NotStochastic { row: i });
            }
            let s: f64 = row.iter().sum();
            if crate::fmath::abs(s - 1.0) > VALIDATION_TOL {
                return Err(Error::NotStochastic { row: i });
            }
        }
        validate_measure(&mu)?;
        if let Some(index) = mu.iter().position(|&m| m == 0.0) {
            return Err(Error::ZeroMeasureState { index });
        }
        let mut residual = 0.0f64;
        for x in 0..n {
            for y in 0..n {
                let d = crate::fmath::abs(p[x][y] * mu[x] - p[y][x] * mu[y]);
                if d > residual {
                    residual = d;
                }
            }
        }
        if residual > REVERSIBILITY_TOL {
            return Err(Error::NotReversible { residual });
        }
        let graph_dist = support_distances(&p)?;
        Ok(Self { n, p, mu, graph_dist })
    }

    /// Builds a chain from `p` alone, inferring the reversible measure by
    /// solving detailed balance along a spanning tree of the support graph.
    pub fn from_kernel(p: Vec<Vec<f64>>) -> Result<Self> {
        let n = p.len();
        if n == 0 || p.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        let mut mu = vec![0.0f64; n];
        mu[0] = 1.0;
        let mut queue = VecDeque::from([0usize]);
        let mut seen = vec![false; n];
        seen[0] = true;
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if y != x && p[x][y] > 0.0 && !seen[y] {
                    if p[y][x] <= 0.0 {
                        return Err(Error::NotReversible { residual: f64::INFINITY });
                    }
                    mu[y] = mu[x] * p[x][y] / p[y][x];
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::DisconnectedGraph);
        }
        let total: f64 = mu.iter().sum();
        for m in &mut mu {
            *m /= total;
        }
        Self::new(p, mu)
    }

    /// Random walk on a simple graph, either `simple-walk` or
    /// `metropolis-uniform`. Detailed balance holds by construction.
    pub fn from_graph(adjacency: &[Vec<u8>], kind: WalkKind) -> Result<Self> {
        let n = adjacency.len();
        if n == 0 || adjacency.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch);
        }
        for i in 0..n {
            if adjacency[i][i] != 0 {
                return Err(Error::BadAdjacency);
            }
            for j in 0..n {
                if adjacency[i][j] > 1 || adjacency[i][j] != adjacency[j][i] {
                    return Err(Error::BadAdjacency);
                }
            }
        }
        let deg: Vec<usize> = adjacency.iter().map(|row| row.iter().map(|&a| a as usize).sum()).collect();
        if deg.iter().any(|&d| d == 0) {
            return Err(Error::DisconnectedGraph);
        }
        let mut p = vec![vec![0.0f64; n]; n];
        let mu = match kind {
            WalkKind::SimpleWalk => {
                let total: usize = deg.iter().sum();
                for x in 0..n {
                    for y in 0..n {
                        if adjacency[x][y] == 1 {
                            p[x][y] = 1.0 / deg[x] as f64;
                        }
                    }
                }
                deg.iter().map(|&d| d as f64 / total as f64).collect()
            }
            WalkKind::MetropolisUniform => {
                for x in 0..n {
                    let mut off = 0.0;
                    for y in 0..n {
                        if adjacency[x][y] == 1 {
                            p[x][y] = crate::fmath::min(1.0 / deg[x] as f64, 1.0 / deg[y] as f64);
                            off += p[x][y];
                        }
                    }
                    p[x][x] = 1.0 - off;
                }
                vec![1.0 / n as f64; n]
            }
        };
        Self::new(p, mu)
    }

    pub fn kernel(&self) -> &[Vec<f64>] {
        &self.p
    }

    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.p[x][y]
    }

    pub fn mu_vec(&self) -> &[f64] {
        &self.mu
    }

    pub fn graph_dist(&self, x: usize, y: usize) -> u32 {
        self.graph_dist[x][y]
    }
}

impl Ambient for ReversibleChain {
    fn n(&self) -> usize {
        self.n
    }

    fn dist(&self, x: usize, y: usize) -> f64 {
        self.graph_dist[x][y] as f64
    }

    fn mu(&self, x: usize) -> f64 {
        self.mu[x]
    }

    fn default_mode(&self) -> EnlargeMode {
        EnlargeMode::Closed
    }
}

/// All-pairs shortest-path distances of the support graph via repeated BFS.
/// Errors if the graph is disconnected (the chain must be irreducible).
fn support_distances(p: &[Vec<f64>]) -> Result<Vec<Vec<u32>>> {
    let n = p.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for x in 0..n {
        for y in 0..n {
            if x != y && (p[x][y] > 0.0 || p[y][x] > 0.0) {
                adj[x].push(y);
            }
        }
    }
    let mut dist = vec![vec![u32::MAX; n]; n];
    for s in 0..n {
        dist[s][s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[s][y] == u32::MAX {
                    dist[s][y] = dist[s][x] + 1;
                    queue.push_back(y);
                }
            }
        }
        if dist[s].iter().any(|&d| d == u32::MAX) {
            return Err(Error::DisconnectedGraph);
        }
    }
    Ok(dist)
}

/// The r-enlargement of `a`, strict (`d(x,A) < r`, plus `A` itself) or
/// closed (`d(x,A) <= r`). Monotone in `r` and in `a`.
pub fn enlarge<S: Ambient + ?Sized>(space: &S, a: &[usize], r: f64, mode: EnlargeMode) -> Result<Vec<usize>> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let d = space.dist_to_set(a);
    let mut out = Vec::new();
    for (x, &dx) in d.iter().enumerate() {
        let inside = match mode {
            EnlargeMode::Strict => dx < r || dx == 0.0,
            EnlargeMode::Closed => dx <= r,
        };
        if inside {
            out.push(x);
        }
    }
    Ok(out)
}

/// `d(A,B) = min { d(x,y) : x in A, y in B }`; zero iff the sets intersect.
pub fn set_distance<S: Ambient + ?Sized>(space: &S, a: &[usize], b: &[usize]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut best = f64::INFINITY;
    for &x in a {
        for &y in b {
            let d = space.dist(x, y);
            if d < best {
                best = d;
            }
        }
    }
    Ok(best)
}

/// Complement of a sorted index set in `{0..n-1}`.
pub fn complement(n: usize, a: &[usize]) -> Vec<usize> {
    let mut member = vec![false; n];
    for &x in a {
        member[x] = true;
    }
    (0..n).filter(|&x| !member[x]).collect()
}

/// `k` pairwise-disjoint non-empty index subsets with derived measures and
/// separation `min_{i != j} d(A_i, A_j)` (infinite for `k = 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SetFamily {
    sets: Vec<Vec<usize>>,
    measures: Vec<f64>,
    separation: f64,
}

impl SetFamily {
    pub fn new<S: Ambient + ?Sized>(space: &S, sets: Vec<Vec<usize>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::EmptySet);
        }
        let n = space.n();
        let mut clean: Vec<Vec<usize>> = Vec::with_capacity(sets.len());
        let mut member = vec![false; n];
        for set in &sets {
            if set.is_empty() {
                return Err(Error::EmptySet);
            }
            let mut s = set.clone();
            s.sort_unstable();
            s.dedup();
            for &x in &s {
                if x >= n {
                    return Err(Error::DimensionMismatch);
                }
                if member[x] {
                    return Err(Error::ZeroSeparation);
                }
                member[x] = true;
            }
            clean.push(s);
        }
        let mut separation = f64::INFINITY;
        for i in 0..clean.len() {
            for j in 0..i {
                let d = set_distance(space, &clean[i], &clean[j])?;
                if d < separation {
                    separation = d;
                }
            }
        }
        if separation <= 0.0 {
            return Err(Error::ZeroSeparation);
        }
        let measures = clean.iter().map(|s| space.mu_of_set(s)).collect();
        Ok(Self { sets: clean, measures, separation })
    }

    pub fn k(&self) -> usize {
        self.sets.len()
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn set(&self, i: usize) -> &[usize] {
        &self.sets[i]
    }

    /// `(mu(A_1), ..., mu(A_k))`.
    pub fn measures(&self) -> &[f64] {
        &self.measures
    }

    /// `min_{i != j} d(A_i, A_j)`; `+inf` when `k = 1`.
    pub fn separation(&self) -> f64 {
        self.separation
    }

    /// Sorted union of all sets.
    pub fn union(&self) -> Vec<usize> {
        let mut u: Vec<usize> = self.sets.iter().flatten().copied().collect();
        u.sort_unstable();
        u
    }

    /// `mu(A)` with `A` the union (the sets are disjoint).
    pub fn union_measure(&self) -> f64 {
        self.measures.iter().sum()
    }
}
