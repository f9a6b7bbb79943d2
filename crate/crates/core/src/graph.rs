//! Simple-graph and hypergraph construction plus their Laplacian algebra.
//!
//! A hypergraph on N vertices is a family of M hyperedges, each a set of at
//! least two vertices, with a positive weight w(e) per edge. Writing H for
//! the N x M binary incidence matrix, W for diag(w(e)), D_e for the diagonal
//! of edge sizes delta(e) and D_v for the diagonal of weighted vertex degrees
//! d(v) = sum_e w(e) h(v,e), the operators built here are
//!
//! ```text
//! normalized hypergraph Laplacian  L = I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}
//! hypergraph adjacency             A = H W H^T - D_v
//! unnormalized simple Laplacian    L = D - W
//! normalized simple Laplacian      L = (I - D^{-1/2} W D^{-1/2}) / 2
//! ```
//!
//! The normalized-simple form is the 2-uniform special case of the
//! hypergraph one (every edge has exactly two vertices, so D_e = 2I), which
//! gives the reduction identity checked by the tests.
//!
//! All emitted matrices are constructed symmetrically: each unordered entry
//! pair is computed once and written to both triangles, so symmetry is exact
//! rather than up to rounding.

use ndarray::{Array1, Array2};

use crate::dataset::FeatureTable;
use crate::error::{Error, Result};

/// Edge-weighting policy for graph and hypergraph construction.
///
/// `Gaussian` uses the heat kernel exp(-dist^2 / sigma^2) with sigma^2 set to
/// the mean squared pairwise distance of the feature table (self-tuning, no
/// free parameter). `Unit` assigns weight 1 and exists mostly for tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightPolicy {
    Gaussian,
    Unit,
}

/// Symmetric nonnegative affinity matrix with zero diagonal.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    weights: Array2<f64>,
}

impl WeightedGraph {
    /// Validates exact symmetry, nonnegativity, and a zero diagonal.
    pub fn new(weights: Array2<f64>) -> Result<Self> {
        let n = weights.nrows();
        if weights.ncols() != n {
            return Err(Error::DimensionMismatch {
                what: "weight matrix",
                expected: n,
                got: weights.ncols(),
            });
        }
        for i in 0..n {
            if weights[[i, i]] != 0.0 {
                return Err(Error::InvalidFeatures(format!(
                    "weight matrix has nonzero diagonal at {i}"
                )));
            }
            for j in 0..n {
                let w = weights[[i, j]];
                if !w.is_finite() || w < 0.0 {
                    return Err(Error::InvalidFeatures(format!(
                        "weight ({i},{j}) = {w} is negative or non-finite"
                    )));
                }
                if weights[[i, j]] != weights[[j, i]] {
                    return Err(Error::NotSymmetric {
                        what: "weight matrix",
                        max_diff: (weights[[i, j]] - weights[[j, i]]).abs(),
                    });
                }
            }
        }
        Ok(Self { weights })
    }

    pub fn n(&self) -> usize {
        self.weights.nrows()
    }

    pub fn weights(&self) -> &Array2<f64> {
        &self.weights
    }

    /// Weighted degree vector (row sums).
    pub fn degrees(&self) -> Array1<f64> {
        let n = self.n();
        Array1::from_iter((0..n).map(|i| self.weights.row(i).sum()))
    }
}

/// Binary incidence structure with positive edge weights and cached degrees.
///
/// Edges hold sorted, deduplicated vertex lists; the dense incidence matrix
/// is materialized on demand.
#[derive(Debug, Clone)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    edge_weights: Vec<f64>,
    vertex_degrees: Vec<f64>,
    edge_degrees: Vec<usize>,
}

impl Hypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>, edge_weights: Vec<f64>) -> Result<Self> {
        if edge_weights.len() != edges.len() {
            return Err(Error::DimensionMismatch {
                what: "edge weights",
                expected: edges.len(),
                got: edge_weights.len(),
            });
        }
        let mut edges = edges;
        for (e, verts) in edges.iter_mut().enumerate() {
            verts.sort_unstable();
            verts.dedup();
            if verts.len() < 2 {
                return Err(Error::HyperedgeTooSmall {
                    edge: e,
                    size: verts.len(),
                });
            }
            if let Some(&v) = verts.iter().find(|&&v| v >= n) {
                return Err(Error::InvalidFeatures(format!(
                    "hyperedge {e} references vertex {v} out of range"
                )));
            }
            let w = edge_weights[e];
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::InvalidFeatures(format!(
                    "hyperedge {e} has non-positive weight {w}"
                )));
            }
        }
        let (vertex_degrees, edge_degrees) = hypergraph_degrees(n, &edges, &edge_weights)?;
        Ok(Self {
            n,
            edges,
            edge_weights,
            vertex_degrees,
            edge_degrees,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    /// d(v) = sum of w(e) over edges containing v.
    pub fn vertex_degrees(&self) -> &[f64] {
        &self.vertex_degrees
    }

    /// delta(e) = number of vertices in e.
    pub fn edge_degrees(&self) -> &[usize] {
        &self.edge_degrees
    }

    /// Dense N x M incidence matrix with 0/1 entries.
    pub fn incidence(&self) -> Array2<f64> {
        let mut h = Array2::zeros((self.n, self.edges.len()));
        for (e, verts) in self.edges.iter().enumerate() {
            for &v in verts {
                h[[v, e]] = 1.0;
            }
        }
        h
    }
}

/// Degree tables of an edge list: d(v) = sum_e w(e) h(v,e) and
/// delta(e) = |e|. Errors on an isolated vertex, whose zero degree would
/// break the D_v^{-1/2} normalization downstream.
pub fn hypergraph_degrees(
    n: usize,
    edges: &[Vec<usize>],
    edge_weights: &[f64],
) -> Result<(Vec<f64>, Vec<usize>)> {
    let mut vertex_degrees = vec![0.0f64; n];
    let mut edge_degrees = Vec::with_capacity(edges.len());
    for (verts, &w) in edges.iter().zip(edge_weights) {
        edge_degrees.push(verts.len());
        for &v in verts {
            vertex_degrees[v] += w;
        }
    }
    if let Some(v) = vertex_degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex(v));
    }
    Ok((vertex_degrees, edge_degrees))
}

/// Which Laplacian a matrix is.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaplacianKind {
    /// I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}
    NormalizedHypergraph,
    /// (I - D^{-1/2} W D^{-1/2}) / 2, the 2-uniform reduction
    NormalizedSimple,
    /// D - W
    UnnormalizedSimple,
}

/// A symmetric positive semi-definite Laplacian with its provenance tag.
#[derive(Debug, Clone)]
pub struct LaplacianMatrix {
    pub matrix: Array2<f64>,
    pub kind: LaplacianKind,
}

fn gaussian_weight(d2: f64, sigma2: f64) -> f64 {
    if sigma2 <= 0.0 {
        1.0 // all points coincide; exp(0) for every pair
    } else {
        (-d2 / sigma2).exp()
    }
}

/// k nearest neighbors of `v` among `candidates` by Euclidean distance,
/// ties broken by ascending row index.
fn k_nearest(table: &FeatureTable, v: usize, candidates: &[usize], k: usize) -> Vec<usize> {
    let mut by_dist: Vec<(f64, usize)> = candidates
        .iter()
        .filter(|&&j| j != v)
        .map(|&j| (table.squared_distance(v, j), j))
        .collect();
    by_dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    by_dist.into_iter().take(k).map(|(_, j)| j).collect()
}

/// Symmetrized k-nearest-neighbor affinity graph.
///
/// Edge (i,j) exists iff j is among i's k nearest neighbors or vice versa
/// (union symmetrization), weighted by the chosen policy.
pub fn build_knn_graph(
    table: &FeatureTable,
    k: usize,
    policy: WeightPolicy,
) -> Result<WeightedGraph> {
    let n = table.len();
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    let sigma2 = match policy {
        WeightPolicy::Gaussian => table.mean_squared_pairwise_distance(),
        WeightPolicy::Unit => 0.0,
    };
    let all: Vec<usize> = (0..n).collect();
    let mut weights = Array2::zeros((n, n));
    for i in 0..n {
        for j in k_nearest(table, i, &all, k) {
            let w = match policy {
                WeightPolicy::Gaussian => gaussian_weight(table.squared_distance(i, j), sigma2),
                WeightPolicy::Unit => 1.0,
            };
            // union symmetrization: write both triangles from one value
            weights[[i, j]] = w;
            weights[[j, i]] = w;
        }
    }
    WeightedGraph::new(weights)
}

/// One hyperedge per vertex: the vertex plus its k nearest neighbors, so
/// every edge has exactly k+1 vertices. With `group_constrained`, neighbors
/// are drawn only from the vertex's own group.
///
/// Gaussian edge weights are the mean pairwise heat-kernel weight over the
/// edge's distinct vertex pairs, which reduces to the pairwise weight for
/// 2-vertex edges.
pub fn build_knn_hypergraph(
    table: &FeatureTable,
    k: usize,
    policy: WeightPolicy,
    group_constrained: bool,
) -> Result<Hypergraph> {
    let n = table.len();
    if k == 0 || k >= n {
        return Err(Error::KOutOfRange { k, n });
    }
    let candidates_of: Vec<Vec<usize>> = if group_constrained {
        let groups = table.group_labels().ok_or(Error::MissingGroupLabels)?;
        let mut ids: Vec<i64> = groups.to_vec();
        ids.sort_unstable();
        ids.dedup();
        let mut per_vertex = vec![Vec::new(); n];
        for id in ids {
            let members: Vec<usize> = (0..n).filter(|&i| groups[i] == id).collect();
            if members.len() <= k {
                return Err(Error::GroupTooSmall {
                    group: id,
                    size: members.len(),
                    k,
                });
            }
            for &v in &members {
                per_vertex[v] = members.clone();
            }
        }
        per_vertex
    } else {
        vec![(0..n).collect(); n]
    };

    let sigma2 = match policy {
        WeightPolicy::Gaussian => table.mean_squared_pairwise_distance(),
        WeightPolicy::Unit => 0.0,
    };

    let mut edges = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for v in 0..n {
        let mut verts = k_nearest(table, v, &candidates_of[v], k);
        verts.push(v);
        verts.sort_unstable();
        let w = match policy {
            WeightPolicy::Unit => 1.0,
            WeightPolicy::Gaussian => {
                let mut sum = 0.0;
                let mut pairs = 0usize;
                for a in 0..verts.len() {
                    for b in (a + 1)..verts.len() {
                        sum += gaussian_weight(table.squared_distance(verts[a], verts[b]), sigma2);
                        pairs += 1;
                    }
                }
                sum / pairs as f64
            }
        };
        edges.push(verts);
        weights.push(w);
    }
    Hypergraph::new(n, edges, weights)
}

/// Normalized hypergraph Laplacian I - D_v^{-1/2} H W D_e^{-1} H^T D_v^{-1/2}.
pub fn hypergraph_laplacian(hg: &Hypergraph) -> LaplacianMatrix {
    let n = hg.n_vertices();
    let inv_sqrt_d: Vec<f64> = hg.vertex_degrees().iter().map(|d| 1.0 / d.sqrt()).collect();

    // theta = H W D_e^{-1} H^T accumulated per edge over unordered pairs
    let mut theta = Array2::zeros((n, n));
    for (e, verts) in hg.edges().iter().enumerate() {
        let c = hg.edge_weights()[e] / hg.edge_degrees()[e] as f64;
        for a in 0..verts.len() {
            theta[[verts[a], verts[a]]] += c;
            for b in (a + 1)..verts.len() {
                let (u, v) = (verts[a], verts[b]);
                theta[[u, v]] += c;
                theta[[v, u]] += c;
            }
        }
    }

    let mut matrix = Array2::zeros((n, n));
    for u in 0..n {
        matrix[[u, u]] = 1.0 - theta[[u, u]] * inv_sqrt_d[u] * inv_sqrt_d[u];
        for v in (u + 1)..n {
            let x = -(theta[[u, v]] * inv_sqrt_d[u] * inv_sqrt_d[v]);
            matrix[[u, v]] = x;
            matrix[[v, u]] = x;
        }
    }
    LaplacianMatrix {
        matrix,
        kind: LaplacianKind::NormalizedHypergraph,
    }
}

/// Hypergraph adjacency H W H^T - D_v: entry (u,v) sums w(e) over edges
/// containing both endpoints; the diagonal cancels exactly and is written
/// as zero.
pub fn hypergraph_adjacency(hg: &Hypergraph) -> WeightedGraph {
    let n = hg.n_vertices();
    let mut weights = Array2::zeros((n, n));
    for (e, verts) in hg.edges().iter().enumerate() {
        let w = hg.edge_weights()[e];
        for a in 0..verts.len() {
            for b in (a + 1)..verts.len() {
                let (u, v) = (verts[a], verts[b]);
                weights[[u, v]] += w;
                weights[[v, u]] += w;
            }
        }
    }
    WeightedGraph::new(weights).expect("construction is symmetric with zero diagonal")
}

/// Unnormalized simple-graph Laplacian D - W.
pub fn unnormalized_laplacian(g: &WeightedGraph) -> LaplacianMatrix {
    let n = g.n();
    let w = g.weights();
    let mut matrix = Array2::zeros((n, n));
    for u in 0..n {
        matrix[[u, u]] = w.row(u).sum();
        for v in (u + 1)..n {
            let x = -w[[u, v]];
            matrix[[u, v]] = x;
            matrix[[v, u]] = x;
        }
    }
    LaplacianMatrix {
        matrix,
        kind: LaplacianKind::UnnormalizedSimple,
    }
}

/// Normalized simple-graph Laplacian (I - D^{-1/2} W D^{-1/2}) / 2, the
/// 2-uniform reduction of the hypergraph form. Errors on isolated vertices.
pub fn normalized_simple_laplacian(g: &WeightedGraph) -> Result<LaplacianMatrix> {
    let n = g.n();
    let degrees = g.degrees();
    if let Some(v) = degrees.iter().position(|&d| d <= 0.0) {
        return Err(Error::IsolatedVertex(v));
    }
    let inv_sqrt_d: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
    let w = g.weights();
    let mut matrix = Array2::zeros((n, n));
    for u in 0..n {
        matrix[[u, u]] = 0.5;
        for v in (u + 1)..n {
            let x = -0.5 * (w[[u, v]] * inv_sqrt_d[u] * inv_sqrt_d[v]);
            matrix[[u, v]] = x;
            matrix[[v, u]] = x;
        }
    }
    Ok(LaplacianMatrix {
        matrix,
        kind: LaplacianKind::NormalizedSimple,
    })
}
