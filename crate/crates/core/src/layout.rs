//! Fruchterman–Reingold placement of the backbone in the [−1, 1]² frame.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::backbone::BackboneGraph;

pub const DEFAULT_ITERATIONS: usize = 100;
const FRAME: f64 = 1.0;
/// Radius of the ring holding nodes without retained edges.
const ISOLATED_RING: f64 = 0.95;
/// Connected nodes are shrunk into this disk when the ring is in use.
const CORE_RADIUS: f64 = 0.8;
const MIN_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutPositions {
    pub coords: Vec<[f64; 2]>,
    pub seed: u64,
    pub iterations: usize,
}

/// Force simulation state, exposed so callers can step it one iteration at a time.
#[derive(Debug, Clone)]
pub struct ForceLayout {
    pub positions: Vec<[f64; 2]>,
    edges: Vec<(usize, usize, f64)>,
    active: Vec<usize>,
    optimal_distance: f64,
}

impl ForceLayout {
    /// Seeded uniform start in the frame. Only `active` nodes feel forces.
    pub fn new(n_nodes: usize, edges: Vec<(usize, usize, f64)>, active: Vec<usize>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions = (0..n_nodes)
            .map(|_| [rng.random_range(-FRAME..FRAME), rng.random_range(-FRAME..FRAME)])
            .collect();
        let area = (2.0 * FRAME) * (2.0 * FRAME);
        let optimal_distance = (area / active.len().max(1) as f64).sqrt();
        ForceLayout {
            positions,
            edges,
            active,
            optimal_distance,
        }
    }

    /// One iteration at `temperature`; returns the largest node displacement.
    pub fn step(&mut self, temperature: f64) -> f64 {
        let k = self.optimal_distance;
        let n = self.positions.len();
        let mut disp = vec![[0.0f64; 2]; n];

        for (a_idx, &a) in self.active.iter().enumerate() {
            for &b in &self.active[a_idx + 1..] {
                let (dx, dy, dist) = separation(self.positions[a], self.positions[b], a, b);
                let force = k * k / dist;
                let (fx, fy) = (dx / dist * force, dy / dist * force);
                disp[a][0] += fx;
                disp[a][1] += fy;
                disp[b][0] -= fx;
                disp[b][1] -= fy;
            }
        }
        for &(a, b, w) in &self.edges {
            let (dx, dy, dist) = separation(self.positions[a], self.positions[b], a, b);
            let force = w * dist * dist / k;
            let (fx, fy) = (dx / dist * force, dy / dist * force);
            disp[a][0] -= fx;
            disp[a][1] -= fy;
            disp[b][0] += fx;
            disp[b][1] += fy;
        }

        let mut max_move: f64 = 0.0;
        for &node in &self.active {
            let [dx, dy] = disp[node];
            let len = dx.hypot(dy);
            if len == 0.0 {
                continue;
            }
            let scale = len.min(temperature) / len;
            let old = self.positions[node];
            let new = [
                (old[0] + dx * scale).clamp(-FRAME, FRAME),
                (old[1] + dy * scale).clamp(-FRAME, FRAME),
            ];
            max_move = max_move.max((new[0] - old[0]).hypot(new[1] - old[1]));
            self.positions[node] = new;
        }
        max_move
    }

    /// Linear cooling from 0.1 × frame width down to zero.
    pub fn temperature(iteration: usize, iterations: usize) -> f64 {
        let t0 = 0.1 * 2.0 * FRAME;
        t0 * (1.0 - iteration as f64 / iterations as f64)
    }
}

// Vector from b to a; coincident nodes are pushed apart along a fixed
// index-dependent direction.
fn separation(a: [f64; 2], b: [f64; 2], ia: usize, ib: usize) -> (f64, f64, f64) {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    let dist = dx.hypot(dy);
    if dist >= MIN_DISTANCE {
        return (dx, dy, dist);
    }
    let angle = (ia * 31 + ib * 17) as f64;
    (MIN_DISTANCE * angle.cos(), MIN_DISTANCE * angle.sin(), MIN_DISTANCE)
}

/// Lay out `graph` with weight-modulated attraction.
///
/// Nodes without retained edges sit on a ring near the frame edge when the
/// graph has edges; otherwise every node takes part in the simulation.
pub fn fruchterman_reingold(graph: &BackboneGraph, iterations: usize, seed: u64) -> LayoutPositions {
    let n = graph.base.n_nodes;
    let edges = &graph.base.edges;
    let max_w = edges.iter().map(|e| e.weight).fold(0.0, f64::max);
    let weighted: Vec<(usize, usize, f64)> = edges
        .iter()
        .map(|e| (e.u, e.v, if max_w > 0.0 { e.weight / max_w } else { 1.0 }))
        .collect();

    let isolated: Vec<usize> = if edges.is_empty() {
        Vec::new()
    } else {
        (0..n).filter(|&i| graph.base.degrees[i] == 0).collect()
    };
    let active: Vec<usize> = (0..n).filter(|i| !isolated.contains(i)).collect();

    let mut sim = ForceLayout::new(n, weighted, active.clone(), seed);
    for it in 0..iterations {
        sim.step(ForceLayout::temperature(it, iterations));
    }
    let mut coords = sim.positions;

    if !isolated.is_empty() {
        let reach = active
            .iter()
            .map(|&i| coords[i][0].hypot(coords[i][1]))
            .fold(0.0, f64::max);
        if reach > CORE_RADIUS {
            let shrink = CORE_RADIUS / reach;
            for &i in &active {
                coords[i] = [coords[i][0] * shrink, coords[i][1] * shrink];
            }
        }
        let m = isolated.len() as f64;
        for (slot, &i) in isolated.iter().enumerate() {
            let angle = std::f64::consts::TAU * slot as f64 / m;
            coords[i] = [ISOLATED_RING * angle.cos(), ISOLATED_RING * angle.sin()];
        }
    }

    LayoutPositions {
        coords,
        seed,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backbone::{build_edge_list, score_edges, sparsify, WeightMatrix};

    fn backbone(m: &WeightMatrix) -> BackboneGraph {
        sparsify(&score_edges(&build_edge_list(m).unwrap()), 2.0)
    }

    #[test]
    fn single_node_stays_at_seeded_start() {
        let graph = BackboneGraph {
            base: crate::backbone::WeightedFeatureGraph {
                n_nodes: 1,
                edges: vec![],
                degrees: vec![0],
                strengths: vec![0.0],
            },
            alpha_chosen: 0.0,
            n_components: 0,
            component_id: vec![None],
        };
        let start = ForceLayout::new(1, vec![], vec![0], 4).positions;
        assert_eq!(fruchterman_reingold(&graph, 100, 4).coords, start);
    }

    #[test]
    fn isolated_nodes_on_ring() {
        let mut m = WeightMatrix::zeros(5);
        m.set(0, 1, 1.0);
        m.set(1, 2, 1.0);
        let layout = fruchterman_reingold(&backbone(&m), 50, 1);
        for i in [3, 4] {
            let r = layout.coords[i][0].hypot(layout.coords[i][1]);
            assert!((r - ISOLATED_RING).abs() < 1e-12);
        }
        for i in 0..3 {
            assert!(layout.coords[i][0].hypot(layout.coords[i][1]) <= CORE_RADIUS + 1e-12);
        }
    }

    #[test]
    fn displacement_bounded_by_temperature() {
        let mut m = WeightMatrix::zeros(8);
        for i in 0..7 {
            m.set(i, i + 1, 1.0 + i as f64);
        }
        let g = backbone(&m);
        let edges = g.base.edges.iter().map(|e| (e.u, e.v, e.weight / 7.0)).collect();
        let mut sim = ForceLayout::new(8, edges, (0..8).collect(), 3);
        for it in 0..60 {
            let t = ForceLayout::temperature(it, 60);
            assert!(sim.step(t) <= t + 1e-15);
            assert!(sim.positions.iter().flatten().all(|c| c.abs() <= 1.0));
        }
    }
}
