//! Initial placement of virtual qubits onto storage sites.
//!
//! The interaction graph weights each two-qubit gate in layer `l` by `2^-l`,
//! so early interactions dominate. Spectral placement orders qubits along the
//! line by their component in the Fiedler vector of the graph Laplacian, a
//! relaxation of the minimum linear arrangement problem.

mod eigen;

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

pub use eigen::{jacobi_eigen, SymmetricEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};

use crate::circuit::SlicedCircuit;
use crate::error::{Error, Result};
use crate::rng::SeededRng;

/// Largest instance [`brute_force_minla`] accepts.
pub const BRUTE_FORCE_MAX_N: usize = 9;

// Components below this magnitude count as zero for the sign convention.
const SIGN_EPS: f64 = 1e-9;

/// Symmetric weighted interaction graph with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionGraph {
    weights: Vec<Vec<f64>>,
}

impl InteractionGraph {
    pub fn empty(n: usize) -> Self {
        InteractionGraph { weights: vec![vec![0.0; n]; n] }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[u][v]
    }

    /// Adds `w` to the undirected edge `{u, v}`.
    pub fn add_weight(&mut self, u: usize, v: usize, w: f64) {
        assert_ne!(u, v, "self loops are not allowed");
        assert!(w >= 0.0 && w.is_finite(), "weights must be nonnegative");
        self.weights[u][v] += w;
        self.weights[v][u] += w;
    }

    pub fn scaled(&self, c: f64) -> Self {
        InteractionGraph {
            weights: self.weights.iter().map(|row| row.iter().map(|w| w * c).collect()).collect(),
        }
    }

    /// Edges `(u, v, w)` with `u < v` and `w > 0`, in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v, self.weights[u][v]))).filter(|e| e.2 > 0.0)
    }

    /// Connected components over positive-weight edges, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for root in 0..n {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut stack = vec![root];
            while let Some(u) = stack.pop() {
                for v in 0..n {
                    if self.weights[u][v] > 0.0 && comp[v] == usize::MAX {
                        comp[v] = id;
                        members.push(v);
                        stack.push(v);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    fn induced(&self, vertices: &[usize]) -> InteractionGraph {
        InteractionGraph {
            weights: vertices.iter().map(|&u| vertices.iter().map(|&v| self.weights[u][v]).collect()).collect(),
        }
    }

    /// Weighted edge list as CSV with header `u,v,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("u,v,weight\n");
        for (u, v, w) in self.edges() {
            let _ = writeln!(out, "{u},{v},{w:?}");
        }
        out
    }
}

/// Sums `2^-l` over every two-qubit gate on each pair, `l` being its layer.
pub fn build_interaction_graph(sc: &SlicedCircuit) -> InteractionGraph {
    let mut g = InteractionGraph::empty(sc.num_qubits());
    for (l, layer) in sc.layers.iter().enumerate() {
        let w = 0.5f64.powi(l as i32);
        for &gi in layer {
            let gate = &sc.circuit.gates[gi];
            if gate.is_two_qubit() {
                g.add_weight(gate.qubits[0], gate.qubits[1], w);
            }
        }
    }
    g
}

/// Graph Laplacian `D − A`.
pub fn laplacian(g: &InteractionGraph) -> Vec<Vec<f64>> {
    let n = g.n();
    let mut l = vec![vec![0.0; n]; n];
    for u in 0..n {
        for v in 0..n {
            if u != v {
                l[u][v] = -g.weights[u][v];
                l[u][u] += g.weights[u][v];
            }
        }
    }
    l
}

/// Second-smallest Laplacian eigenpair.
#[derive(Debug, Clone)]
pub struct Fiedler {
    pub value: f64,
    /// Unit norm, orthogonal to the all-ones vector, first non-negligible
    /// component positive.
    pub vector: Vec<f64>,
}

/// Fiedler pair of a Laplacian (symmetric, zero row sums).
///
/// The constant vector is shifted out of the way by adding `α·J/n` with `α`
/// above the spectral radius, so the smallest eigenpair of the shifted matrix
/// is `λ₂` of the original with an eigenvector orthogonal to all-ones, also
/// for disconnected graphs where `λ₂ = 0` is degenerate.
pub fn fiedler_vector(l: &[Vec<f64>]) -> Result<Fiedler> {
    let n = l.len();
    if n < 2 {
        return Err(Error::SizeMismatch { expected: 2, actual: n });
    }
    let max_degree = (0..n).map(|i| l[i][i]).fold(0.0, f64::max);
    let alpha = 2.0 * max_degree + 1.0;
    let shifted: Vec<Vec<f64>> =
        l.iter().map(|row| row.iter().map(|x| x + alpha / n as f64).collect()).collect();
    let eig = jacobi_eigen(&shifted);
    let mut vector = eig.vectors[0].clone();
    let flip = vector.iter().find(|x| x.abs() > SIGN_EPS).is_some_and(|x| *x < 0.0);
    if flip {
        vector.iter_mut().for_each(|x| *x = -*x);
    }
    Ok(Fiedler { value: eig.values[0], vector })
}

/// Bijection from virtual qubit index to storage-site index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Placement {
    perm: Vec<usize>,
}

impl Placement {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &s in &perm {
            if s >= n || seen[s] {
                return Err(Error::InvalidPlacement(format!("{perm:?} is not a permutation")));
            }
            seen[s] = true;
        }
        Ok(Placement { perm })
    }

    pub fn identity(n: usize) -> Self {
        Placement { perm: (0..n).collect() }
    }

    /// Places `order[k]` on site `k`.
    pub fn from_order(order: &[usize]) -> Result<Self> {
        let mut perm = vec![usize::MAX; order.len()];
        for (site, &q) in order.iter().enumerate() {
            if q >= order.len() || perm[q] != usize::MAX {
                return Err(Error::InvalidPlacement(format!("{order:?} is not an ordering")));
            }
            perm[q] = site;
        }
        Ok(Placement { perm })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn site(&self, q: usize) -> usize {
        self.perm[q]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    /// Virtual qubit on each site.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.perm.len()];
        for (q, &s) in self.perm.iter().enumerate() {
            inv[s] = q;
        }
        inv
    }
}

impl TryFrom<Vec<usize>> for Placement {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Placement::new(v)
    }
}

impl From<Placement> for Vec<usize> {
    fn from(p: Placement) -> Self {
        p.perm
    }
}

fn argsort(values: &[f64], ids: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(ids[a].cmp(&ids[b])));
    order.into_iter().map(|k| ids[k]).collect()
}

/// Orders qubits by Fiedler component, ties broken by qubit index.
///
/// Disconnected graphs are laid out component by component (components in
/// order of their smallest qubit), each ordered by its own Fiedler vector;
/// edgeless graphs therefore get the identity placement.
pub fn spectral_placement(g: &InteractionGraph) -> Result<Placement> {
    let n = g.n();
    if n < 2 {
        return Ok(Placement::identity(n));
    }
    let mut order = Vec::with_capacity(n);
    for comp in g.components() {
        if comp.len() < 2 {
            order.extend(comp);
            continue;
        }
        let f = fiedler_vector(&laplacian(&g.induced(&comp)))?;
        order.extend(argsort(&f.vector, &comp));
    }
    Placement::from_order(&order)
}

/// Uniformly random placement, deterministic per seed.
pub fn random_placement(n: usize, seed: u64) -> Placement {
    let mut perm: Vec<usize> = (0..n).collect();
    SeededRng::new(seed).shuffle(&mut perm);
    Placement { perm }
}

/// `Σ w(u,v)·|site(u) − site(v)|` over all edges.
pub fn minla_cost(g: &InteractionGraph, p: &Placement) -> Result<f64> {
    if g.n() != p.len() {
        return Err(Error::SizeMismatch { expected: g.n(), actual: p.len() });
    }
    Ok(g.edges().map(|(u, v, w)| w * p.site(u).abs_diff(p.site(v)) as f64).sum())
}

/// Exact minimum linear arrangement by exhaustive search with pruning.
/// Among optimal placements the lexicographically smallest is returned.
pub fn brute_force_minla(g: &InteractionGraph) -> Result<(Placement, f64)> {
    let n = g.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }

    struct Search<'a> {
        g: &'a InteractionGraph,
        perm: Vec<usize>,
        used: Vec<bool>,
        best: Option<(Vec<usize>, f64)>,
    }

    impl Search<'_> {
        fn improves(&self, cost: f64) -> bool {
            match &self.best {
                None => true,
                Some((_, b)) => cost < b - 1e-12 * b.max(1.0),
            }
        }

        fn go(&mut self, v: usize, cost: f64) {
            let n = self.perm.len();
            if !self.improves(cost) {
                return;
            }
            if v == n {
                self.best = Some((self.perm.clone(), cost));
                return;
            }
            for site in 0..n {
                if self.used[site] {
                    continue;
                }
                let added: f64 = (0..v).map(|u| self.g.weights[u][v] * site.abs_diff(self.perm[u]) as f64).sum();
                self.used[site] = true;
                self.perm[v] = site;
                self.go(v + 1, cost + added);
                self.used[site] = false;
            }
        }
    }

    let mut s = Search { g, perm: vec![0; n], used: vec![false; n], best: None };
    s.go(0, 0.0);
    let (perm, cost) = s.best.expect("at least one arrangement exists");
    Ok((Placement { perm }, cost))
}
