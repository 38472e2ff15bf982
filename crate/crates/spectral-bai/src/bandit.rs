//! Domain types and elementary formulas: bandit instances, similarity
//! graphs, Laplacians, smoothness, Gaussian divergence, simplex weights.
//!
//! All types are immutable value objects after construction and safe to
//! share across threads. Arm/node indices are zero-based everywhere in
//! the library; the CLI layer converts to one-based indices at the I/O
//! boundary.

use ndarray::Array2;

use crate::error::{Error, Result};

/// Absolute tolerance below which two means count as an exact tie.
pub const TIE_TOL: f64 = 1e-12;

/// Tolerance on the total mass of a simplex point.
pub const SIMPLEX_SUM_TOL: f64 = 1e-12;

/// A Gaussian bandit instance with unit variance: one mean per arm.
#[derive(Debug, Clone, PartialEq)]
pub struct BanditInstance {
    means: Vec<f64>,
}

impl BanditInstance {
    pub fn new(means: Vec<f64>) -> Result<Self> {
        if means.len() < 2 {
            return Err(Error::TooFewArms(means.len()));
        }
        if let Some(pos) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::NonFiniteMean(pos));
        }
        Ok(Self { means })
    }

    pub fn k(&self) -> usize {
        self.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn mean(&self, arm: usize) -> f64 {
        self.means[arm]
    }

    /// Index of the arm with the largest mean.
    ///
    /// Errors with [`Error::AmbiguousBestArm`] when a second arm lies
    /// within [`TIE_TOL`] of the maximum; computations that rely on a
    /// unique maximizer treat that as an input error.
    pub fn best_arm(&self) -> Result<usize> {
        let leader = self.leader();
        let max = self.means[leader];
        for (a, &m) in self.means.iter().enumerate() {
            if a != leader && (max - m).abs() <= TIE_TOL {
                return Err(Error::AmbiguousBestArm {
                    a: leader.min(a),
                    b: leader.max(a),
                    tol: TIE_TOL,
                });
            }
        }
        Ok(leader)
    }

    /// Lowest-index argmax of the means. Never fails; ties resolve to the
    /// smallest index, which is how the simulator treats tied empirical
    /// estimates.
    pub fn leader(&self) -> usize {
        let mut best = 0;
        for a in 1..self.means.len() {
            if self.means[a] > self.means[best] {
                best = a;
            }
        }
        best
    }

    pub fn max_mean(&self) -> f64 {
        self.means[self.leader()]
    }
}

/// KL divergence between two unit-variance Gaussians, `(mu - lambda)^2 / 2`.
#[inline]
pub fn kl_gaussian(mu: f64, lambda: f64) -> f64 {
    let d = mu - lambda;
    d * d / 2.0
}

/// An undirected weighted similarity graph over the arms.
///
/// Stored as an explicit edge list (at most one entry per unordered
/// pair, no self-loops, nonnegative weights).
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    k: usize,
    edges: Vec<(usize, usize, f64)>,
}

impl WeightedGraph {
    /// Builds a graph on `k` zero-based nodes from `(a, b, weight)` triples.
    pub fn new(k: usize, edges: Vec<(usize, usize, f64)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for &(a, b, w) in &edges {
            if a >= k {
                return Err(Error::NodeOutOfRange { node: a, k });
            }
            if b >= k {
                return Err(Error::NodeOutOfRange { node: b, k });
            }
            if a == b {
                return Err(Error::SelfLoop(a));
            }
            if !(w.is_finite() && w >= 0.0) {
                return Err(Error::BadEdgeWeight { a, b, weight: w });
            }
            if !seen.insert((a.min(b), a.max(b))) {
                return Err(Error::DuplicateEdge {
                    a: a.min(b),
                    b: a.max(b),
                });
            }
        }
        Ok(Self { k, edges })
    }

    /// Builds a graph from one-based `(a, b, weight)` triples, the
    /// convention used in config files and reports.
    pub fn from_one_based(k: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let shifted = edges
            .iter()
            .map(|&(a, b, w)| {
                if a == 0 {
                    return Err(Error::NodeOutOfRange { node: usize::MAX, k });
                }
                if b == 0 {
                    return Err(Error::NodeOutOfRange { node: usize::MAX, k });
                }
                Ok((a - 1, b - 1, w))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(k, shifted)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn edges(&self) -> &[(usize, usize, f64)] {
        &self.edges
    }

    /// Edgeless graph on `k` nodes (zero Laplacian).
    pub fn edgeless(k: usize) -> Self {
        Self { k, edges: Vec::new() }
    }
}

/// A graph Laplacian: symmetric, zero row sums, nonpositive off-diagonal.
/// Those three properties make it diagonally dominant and hence positive
/// semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    matrix: Array2<f64>,
}

impl Laplacian {
    /// Validates an explicit matrix against the Laplacian invariants.
    pub fn new(matrix: Array2<f64>) -> Result<Self> {
        let (r, c) = matrix.dim();
        if r != c {
            return Err(Error::NotALaplacian("matrix is not square"));
        }
        let tol = 1e-10;
        for i in 0..r {
            let mut row_sum = 0.0;
            for j in 0..r {
                let v = matrix[[i, j]];
                if !v.is_finite() {
                    return Err(Error::NotALaplacian("non-finite entry"));
                }
                if (v - matrix[[j, i]]).abs() > tol {
                    return Err(Error::NotALaplacian("matrix is not symmetric"));
                }
                if i != j && v > tol {
                    return Err(Error::NotALaplacian("positive off-diagonal entry"));
                }
                row_sum += v;
            }
            if row_sum.abs() > tol {
                return Err(Error::NotALaplacian("row sum is not zero"));
            }
        }
        Ok(Self { matrix })
    }

    /// Laplacian of a weighted graph: `L[a][b] = -w_ab` off the diagonal
    /// and `L[a][a] = sum_b w_ab`.
    pub fn from_graph(g: &WeightedGraph) -> Self {
        let k = g.k();
        let mut m = Array2::<f64>::zeros((k, k));
        for &(a, b, w) in g.edges() {
            m[[a, b]] -= w;
            m[[b, a]] -= w;
            m[[a, a]] += w;
            m[[b, b]] += w;
        }
        Self { matrix: m }
    }

    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.matrix
    }

    /// Quadratic form `x^T L x`, evaluated without allocating.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let k = self.k();
        debug_assert_eq!(x.len(), k);
        let mut acc = 0.0;
        for i in 0..k {
            let mut row = 0.0;
            for j in 0..k {
                row += self.matrix[[i, j]] * x[j];
            }
            acc += x[i] * row;
        }
        acc
    }
}

/// Builds the Laplacian of `g`; errors on invalid graphs are caught at
/// graph construction, so this is total.
pub fn laplacian_from_graph(g: &WeightedGraph) -> Laplacian {
    Laplacian::from_graph(g)
}

/// Graph smoothness of a signal: the quadratic form `mu^T L mu`.
pub fn smoothness(mu: &BanditInstance, lap: &Laplacian) -> Result<f64> {
    if mu.k() != lap.k() {
        return Err(Error::DimensionMismatch {
            expected: lap.k(),
            got: mu.k(),
        });
    }
    Ok(lap.quadratic_form(mu.means()))
}

/// A point of the probability simplex: nonnegative weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct SimplexWeights {
    weights: Vec<f64>,
}

impl SimplexWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("empty weight vector".into()));
        }
        let mut sum = 0.0;
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights(format!(
                    "weight {} at position {} is not a nonnegative real",
                    w,
                    i + 1
                )));
            }
            sum += w;
        }
        if (sum - 1.0).abs() > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights })
    }

    /// The uniform point `(1/k, ..., 1/k)`.
    pub fn uniform(k: usize) -> Self {
        Self {
            weights: vec![1.0 / k as f64; k],
        }
    }

    pub fn k(&self) -> usize {
        self.weights.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.weights
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.weights
    }
}

impl std::ops::Index<usize> for SimplexWeights {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.weights[i]
    }
}

/// Upper bound on the graph smoothness of admissible signals. The
/// unbounded variant recovers the unconstrained problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothnessBudget {
    Finite(f64),
    Unbounded,
}

impl SmoothnessBudget {
    pub fn finite(r: f64) -> Result<Self> {
        if !(r.is_finite() && r >= 0.0) {
            return Err(Error::NegativeBudget(r));
        }
        Ok(Self::Finite(r))
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Finite(r) => Some(*r),
            Self::Unbounded => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self, Self::Unbounded)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn kl_gaussian_examples() {
        assert!((kl_gaussian(0.9, 0.5) - 0.08).abs() < 1e-15);
        assert_eq!(kl_gaussian(1.75, 1.75), 0.0);
        assert!((kl_gaussian(0.0, 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn laplacian_single_edge() {
        // one edge between nodes 2 and 3 (one-based) on three nodes
        let g = WeightedGraph::from_one_based(3, &[(2, 3, 1.0)]).unwrap();
        let lap = laplacian_from_graph(&g);
        let expected = array![[0.0, 0.0, 0.0], [0.0, 1.0, -1.0], [0.0, -1.0, 1.0]];
        assert_eq!(lap.matrix(), &expected);
    }

    #[test]
    fn laplacian_edgeless_and_two_node() {
        let lap = laplacian_from_graph(&WeightedGraph::edgeless(3));
        assert_eq!(lap.matrix(), &Array2::<f64>::zeros((3, 3)));

        let g = WeightedGraph::from_one_based(2, &[(1, 2, 2.0)]).unwrap();
        let lap = laplacian_from_graph(&g);
        let expected = array![[2.0, -2.0], [-2.0, 2.0]];
        assert_eq!(lap.matrix(), &expected);
    }

    #[test]
    fn graph_rejects_bad_edges() {
        assert!(matches!(
            WeightedGraph::new(3, vec![(1, 1, 1.0)]),
            Err(Error::SelfLoop(1))
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 1, -0.5)]),
            Err(Error::BadEdgeWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 3, 1.0)]),
            Err(Error::NodeOutOfRange { .. })
        ));
        assert!(matches!(
            WeightedGraph::new(3, vec![(0, 1, 1.0), (1, 0, 2.0)]),
            Err(Error::DuplicateEdge { .. })
        ));
    }

    #[test]
    fn smoothness_paper_instance() {
        let mu = BanditInstance::new(vec![0.9, 0.5, 0.6]).unwrap();
        let g = WeightedGraph::from_one_based(3, &[(2, 3, 1.0)]).unwrap();
        let lap = laplacian_from_graph(&g);
        let s = smoothness(&mu, &lap).unwrap();
        assert!((s - 0.01).abs() < 1e-12, "got {s}");
    }

    #[test]
    fn smoothness_degenerate_cases() {
        let mu = BanditInstance::new(vec![0.3, -1.2, 4.0]).unwrap();
        let lap = laplacian_from_graph(&WeightedGraph::edgeless(3));
        assert_eq!(smoothness(&mu, &lap).unwrap(), 0.0);

        let c = BanditInstance::new(vec![0.7, 0.7, 0.7]).unwrap();
        let g = WeightedGraph::new(3, vec![(0, 1, 2.0), (1, 2, 0.3)]).unwrap();
        let lap = laplacian_from_graph(&g);
        assert!(smoothness(&c, &lap).unwrap().abs() < 1e-15);
    }

    #[test]
    fn smoothness_dimension_mismatch() {
        let mu = BanditInstance::new(vec![0.0, 1.0]).unwrap();
        let lap = laplacian_from_graph(&WeightedGraph::edgeless(3));
        assert!(matches!(
            smoothness(&mu, &lap),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn best_arm_examples() {
        let mu = BanditInstance::new(vec![0.9, 0.5, 0.6]).unwrap();
        assert_eq!(mu.best_arm().unwrap(), 0);
        let mu = BanditInstance::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(mu.best_arm().unwrap(), 1);
        let tied = BanditInstance::new(vec![1.0, 1.0]).unwrap();
        assert!(matches!(tied.best_arm(), Err(Error::AmbiguousBestArm { .. })));
        assert_eq!(tied.leader(), 0);
    }

    #[test]
    fn random_laplacians_are_psd_with_zero_row_sums() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let k = rng.gen_range(2..=8);
            let mut edges = Vec::new();
            for a in 0..k {
                for b in (a + 1)..k {
                    if rng.gen_bool(0.5) {
                        edges.push((a, b, rng.gen_range(0.0..3.0)));
                    }
                }
            }
            let lap = laplacian_from_graph(&WeightedGraph::new(k, edges).unwrap());
            for i in 0..k {
                let row_sum: f64 = (0..k).map(|j| lap.matrix()[[i, j]]).sum();
                assert!(row_sum.abs() <= 1e-10);
            }
            for _ in 0..100 {
                let x: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
                assert!(lap.quadratic_form(&x) >= -1e-10);
            }
        }
    }

    #[test]
    fn smoothness_matches_edge_sum() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        for _ in 0..200 {
            let k = rng.gen_range(2..=7);
            let mut edges = Vec::new();
            for a in 0..k {
                for b in (a + 1)..k {
                    if rng.gen_bool(0.6) {
                        edges.push((a, b, rng.gen_range(0.0..2.0)));
                    }
                }
            }
            let g = WeightedGraph::new(k, edges).unwrap();
            let lap = laplacian_from_graph(&g);
            let x: Vec<f64> = (0..k).map(|_| rng.gen_range(-3.0..3.0)).collect();
            let by_edges: f64 = g
                .edges()
                .iter()
                .map(|&(a, b, w)| w * (x[a] - x[b]).powi(2))
                .sum();
            assert!((lap.quadratic_form(&x) - by_edges).abs() <= 1e-10);
        }
    }

    #[test]
    fn simplex_weights_validation() {
        assert!(SimplexWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(SimplexWeights::new(vec![0.5, 0.6]).is_err());
        assert!(SimplexWeights::new(vec![1.2, -0.2]).is_err());
        let u = SimplexWeights::uniform(4);
        assert!((u.as_slice().iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn budget_validation() {
        assert!(SmoothnessBudget::finite(0.0).is_ok());
        assert!(SmoothnessBudget::finite(-0.1).is_err());
        assert!(SmoothnessBudget::finite(f64::INFINITY).is_err());
        assert!(SmoothnessBudget::Unbounded.is_unbounded());
    }

    proptest! {
        #[test]
        fn kl_gaussian_is_symmetric(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            prop_assert_eq!(kl_gaussian(a, b), kl_gaussian(b, a));
        }

        #[test]
        fn kl_gaussian_nonnegative_zero_iff_equal(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            let v = kl_gaussian(a, b);
            prop_assert!(v >= 0.0);
            prop_assert_eq!(v == 0.0, a == b);
        }
    }
}
