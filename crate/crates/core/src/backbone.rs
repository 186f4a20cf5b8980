//! Disparity-filter backbone of the feature network.
//!
//! Every positive-weight pair becomes an edge. Each endpoint judges the edge
//! by its normalized weight p = w / strength against the null model of a
//! node's strength split uniformly at random among its k edges, giving the
//! significance α = (1 − p)^(k − 1). An edge is kept below a threshold when
//! either endpoint finds it significant. The threshold is swept to maximize
//! the number of multi-node connected components.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum BackboneError {
    #[error("a feature network needs at least two nodes, got {0}")]
    TooFewNodes(usize),
    #[error("weight matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("weight ({0}, {1}) is negative or not finite")]
    InvalidWeight(usize, usize),
    #[error("weights ({0}, {1}) and ({1}, {0}) differ")]
    Asymmetric(usize, usize),
    #[error("diagonal entry {0} is non-zero")]
    NonZeroDiagonal(usize),
    #[error("normalized weight {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
}

/// Grid on which edge significances are stored: multiples of 2^-32.
///
/// Scaling all weights by a constant perturbs p = w / s in the last bit;
/// snapping α to a coarse dyadic grid keeps the sweep and the retained edge
/// set independent of that noise.
pub const ALPHA_QUANTUM: f64 = 1.0 / 4_294_967_296.0;

fn quantize_alpha(alpha: f64) -> f64 {
    (alpha / ALPHA_QUANTUM).round() * ALPHA_QUANTUM
}

/// Symmetric non-negative weights with a zero diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn zeros(n: usize) -> Self {
        WeightMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, BackboneError> {
        let n = rows.len();
        let mut m = WeightMatrix::zeros(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(BackboneError::NotSquare {
                    rows: n,
                    cols: row.len(),
                });
            }
            m.data[i * n..(i + 1) * n].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Set both (i, j) and (j, i).
    pub fn set(&mut self, i: usize, j: usize, w: f64) {
        self.data[i * self.n + j] = w;
        self.data[j * self.n + i] = w;
    }

    pub fn scaled(&self, factor: f64) -> Self {
        WeightMatrix {
            n: self.n,
            data: self.data.iter().map(|w| w * factor).collect(),
        }
    }

    fn validate(&self) -> Result<(), BackboneError> {
        if self.n < 2 {
            return Err(BackboneError::TooFewNodes(self.n));
        }
        for i in 0..self.n {
            if self.get(i, i) != 0.0 {
                return Err(BackboneError::NonZeroDiagonal(i));
            }
            for j in i + 1..self.n {
                let w = self.get(i, j);
                if !w.is_finite() || w < 0.0 {
                    return Err(BackboneError::InvalidWeight(i, j));
                }
                if w != self.get(j, i) {
                    return Err(BackboneError::Asymmetric(i, j));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiEdge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
    /// Significance from `u`'s side.
    pub alpha_uv: f64,
    /// Significance from `v`'s side.
    pub alpha_vu: f64,
    /// `min(alpha_uv, alpha_vu)`.
    pub alpha: f64,
    /// Isolated dyad kept regardless of its α (both endpoints have degree 1).
    pub rescued: bool,
}

impl MiEdge {
    /// Value compared against the threshold: 0 for rescued dyads, else `alpha`.
    pub fn effective_alpha(&self) -> f64 {
        if self.rescued {
            0.0
        } else {
            self.alpha
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedFeatureGraph {
    pub n_nodes: usize,
    pub edges: Vec<MiEdge>,
    /// Count of positive-weight incident edges.
    pub degrees: Vec<usize>,
    /// Sum of incident weights.
    pub strengths: Vec<f64>,
}

impl WeightedFeatureGraph {
    fn from_edges(n_nodes: usize, edges: Vec<MiEdge>) -> Self {
        let mut degrees = vec![0; n_nodes];
        let mut strengths = vec![0.0; n_nodes];
        for e in &edges {
            degrees[e.u] += 1;
            degrees[e.v] += 1;
            strengths[e.u] += e.weight;
            strengths[e.v] += e.weight;
        }
        WeightedFeatureGraph {
            n_nodes,
            edges,
            degrees,
            strengths,
        }
    }
}

/// Upper-triangle edge list over positive weights, in (u, v) order.
pub fn build_edge_list(weights: &WeightMatrix) -> Result<WeightedFeatureGraph, BackboneError> {
    weights.validate()?;
    let n = weights.n();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let w = weights.get(u, v);
            if w > 0.0 {
                edges.push(MiEdge {
                    u,
                    v,
                    weight: w,
                    alpha_uv: 1.0,
                    alpha_vu: 1.0,
                    alpha: 1.0,
                    rescued: false,
                });
            }
        }
    }
    Ok(WeightedFeatureGraph::from_edges(n, edges))
}

/// α = 1 − (k − 1) ∫₀ᵖ (1 − x)^(k−2) dx = (1 − p)^(k − 1); a node of degree 1
/// never finds its only edge significant.
pub fn disparity_alpha(p: f64, degree: usize) -> Result<f64, BackboneError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(BackboneError::ProbabilityOutOfRange(p));
    }
    if degree <= 1 {
        return Ok(1.0);
    }
    Ok((1.0 - p).powi(degree as i32 - 1))
}

/// Fill in both directional significances for every edge.
pub fn score_edges(graph: &WeightedFeatureGraph) -> WeightedFeatureGraph {
    let mut out = graph.clone();
    let side = |node: usize, w: f64| {
        let p = (w / graph.strengths[node]).min(1.0);
        quantize_alpha(disparity_alpha(p, graph.degrees[node]).expect("p clamped to [0, 1]"))
    };
    for e in &mut out.edges {
        e.alpha_uv = side(e.u, e.weight);
        e.alpha_vu = side(e.v, e.weight);
        e.alpha = e.alpha_uv.min(e.alpha_vu);
        e.rescued = graph.degrees[e.u] == 1 && graph.degrees[e.v] == 1;
    }
    out
}

/// Connected components over the nodes touched by `edges`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Components {
    /// Components with at least two nodes.
    pub count: usize,
    /// Per-node component label, numbered by smallest member; `None` when isolated.
    pub labels: Vec<Option<usize>>,
}

struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    fn find(&mut self, mut node: usize) -> usize {
        let mut root = node;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        while self.parent[node] != root {
            let next = self.parent[node];
            self.parent[node] = root;
            node = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        match self.rank[a].cmp(&self.rank[b]) {
            std::cmp::Ordering::Less => self.parent[a] = b,
            std::cmp::Ordering::Greater => self.parent[b] = a,
            std::cmp::Ordering::Equal => {
                self.parent[b] = a;
                self.rank[a] += 1;
            }
        }
    }
}

pub fn component_count<I>(n_nodes: usize, edges: I) -> Components
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut dsu = DisjointSet::new(n_nodes);
    let mut touched = vec![false; n_nodes];
    for (a, b) in edges {
        touched[a] = true;
        touched[b] = true;
        dsu.union(a, b);
    }
    let mut root_label: Vec<Option<usize>> = vec![None; n_nodes];
    let mut labels = vec![None; n_nodes];
    let mut count = 0;
    for node in 0..n_nodes {
        if !touched[node] {
            continue;
        }
        let root = dsu.find(node);
        let label = *root_label[root].get_or_insert_with(|| {
            count += 1;
            count - 1
        });
        labels[node] = Some(label);
    }
    Components { count, labels }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BackboneGraph {
    /// Retained edges only; degrees and strengths recomputed over them.
    pub base: WeightedFeatureGraph,
    pub alpha_chosen: f64,
    pub n_components: usize,
    pub component_id: Vec<Option<usize>>,
}

fn retained(edge: &MiEdge, threshold: f64) -> bool {
    edge.effective_alpha() < threshold
}

/// Keep edges whose significance is below `threshold` (strict).
pub fn sparsify(scored: &WeightedFeatureGraph, threshold: f64) -> BackboneGraph {
    let kept: Vec<MiEdge> = scored
        .edges
        .iter()
        .filter(|e| retained(e, threshold))
        .copied()
        .collect();
    let comps = component_count(scored.n_nodes, kept.iter().map(|e| (e.u, e.v)));
    BackboneGraph {
        base: WeightedFeatureGraph::from_edges(scored.n_nodes, kept),
        alpha_chosen: threshold,
        n_components: comps.count,
        component_id: comps.labels,
    }
}

/// Candidate thresholds: 0 (empty graph), then each distinct effective α
/// raised by half the gap to the next one (or to 1 for the largest).
pub fn candidate_thresholds(scored: &WeightedFeatureGraph) -> Vec<f64> {
    let mut alphas: Vec<f64> = scored.edges.iter().map(MiEdge::effective_alpha).collect();
    alphas.sort_by(f64::total_cmp);
    alphas.dedup();
    let mut out = vec![0.0];
    for (i, &a) in alphas.iter().enumerate() {
        let next = alphas.get(i + 1).copied().unwrap_or(1.0);
        let t = if next > a { a + (next - a) / 2.0 } else { next_up(a) };
        out.push(t);
    }
    out
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// One point on the sweep curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub threshold: f64,
    pub n_edges: usize,
    pub n_components: usize,
}

/// Component count at every candidate threshold, ascending.
pub fn sweep_curve(scored: &WeightedFeatureGraph) -> Vec<SweepPoint> {
    let mut order: Vec<&MiEdge> = scored.edges.iter().collect();
    order.sort_by(|a, b| a.effective_alpha().total_cmp(&b.effective_alpha()));
    let mut curve = Vec::new();
    let mut taken = 0;
    for t in candidate_thresholds(scored) {
        while taken < order.len() && retained(order[taken], t) {
            taken += 1;
        }
        let comps = component_count(scored.n_nodes, order[..taken].iter().map(|e| (e.u, e.v)));
        curve.push(SweepPoint {
            threshold: t,
            n_edges: taken,
            n_components: comps.count,
        });
    }
    curve
}

/// Sparsify at the threshold with the most components, preferring the
/// smallest such threshold.
pub fn sweep_alpha(scored: &WeightedFeatureGraph) -> BackboneGraph {
    let best = sweep_curve(scored)
        .into_iter()
        .fold(None::<SweepPoint>, |best, p| match best {
            Some(b) if b.n_components >= p.n_components => Some(b),
            _ => Some(p),
        })
        .expect("at least the empty candidate");
    sparsify(scored, best.threshold)
}
