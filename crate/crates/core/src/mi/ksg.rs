//! Kraskov–Stögbauer–Grassberger estimator (first variant) for two
//! continuous samples.
//!
//! For each point the radius ε is the Chebyshev distance to its k-th nearest
//! neighbour in the joint space. Marginal counts n_x and n_y are the numbers
//! of other points strictly closer than ε along each axis, and
//!
//! I = ψ(k) + ψ(n) − ⟨ψ(n_x + 1) + ψ(n_y + 1)⟩.
//!
//! The neighbour search is exact: points are swept in x order and a scan
//! stops once the x gap alone reaches the current k-th distance.

use super::digamma::DigammaTable;

/// Per-point neighbourhood statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsgPoint {
    pub radius: f64,
    pub n_x: usize,
    pub n_y: usize,
}

/// Keeps the `k` smallest distances seen so far, ascending.
struct KSmallest {
    k: usize,
    items: Vec<f64>,
}

impl KSmallest {
    fn new(k: usize) -> Self {
        KSmallest {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    fn is_full(&self) -> bool {
        self.items.len() == self.k
    }

    fn kth(&self) -> f64 {
        *self.items.last().expect("non-empty")
    }

    fn push(&mut self, d: f64) {
        if self.is_full() && d >= self.kth() {
            return;
        }
        let at = self.items.partition_point(|&x| x <= d);
        self.items.insert(at, d);
        self.items.truncate(self.k);
    }

    fn clear(&mut self) {
        self.items.clear();
    }
}

/// Sorted copy of `values` plus each original index's position in it.
pub(crate) fn sorted_with_positions(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut pos = vec![0; values.len()];
    for (p, &i) in order.iter().enumerate() {
        pos[i] = p;
    }
    (order.iter().map(|&i| values[i]).collect(), pos)
}

/// Number of entries of `sorted` other than the one at `pos` whose distance
/// to `sorted[pos]` is strictly below `radius`.
pub(crate) fn count_strictly_within(sorted: &[f64], pos: usize, radius: f64) -> usize {
    if radius <= 0.0 {
        return 0;
    }
    let center = sorted[pos];
    let left = sorted[..pos].partition_point(|&v| center - v >= radius);
    let right = sorted[pos..].partition_point(|&v| v - center < radius);
    (pos - left) + right - 1
}

/// Exact per-point radius and marginal counts. Requires `n > k ≥ 1`.
pub fn ksg_neighborhoods(x: &[f64], y: &[f64], k: usize) -> Vec<KsgPoint> {
    let n = x.len();
    assert_eq!(n, y.len());
    assert!(k >= 1 && n > k, "need n > k >= 1");

    let (xs, xpos) = sorted_with_positions(x);
    let (ys, ypos) = sorted_with_positions(y);
    let mut order = vec![0; n];
    for (i, &p) in xpos.iter().enumerate() {
        order[p] = i;
    }

    let mut best = KSmallest::new(k);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        best.clear();
        let p = xpos[i];
        for &j in &order[p + 1..] {
            let dx = (x[j] - x[i]).abs();
            if best.is_full() && dx >= best.kth() {
                break;
            }
            best.push(dx.max((y[j] - y[i]).abs()));
        }
        for &j in order[..p].iter().rev() {
            let dx = (x[j] - x[i]).abs();
            if best.is_full() && dx >= best.kth() {
                break;
            }
            best.push(dx.max((y[j] - y[i]).abs()));
        }
        let radius = best.kth();
        out.push(KsgPoint {
            radius,
            n_x: count_strictly_within(&xs, xpos[i], radius),
            n_y: count_strictly_within(&ys, ypos[i], radius),
        });
    }
    out
}

/// Unclamped KSG estimate in nats, or `None` when `n ≤ k`.
pub fn ksg_raw(x: &[f64], y: &[f64], k: usize) -> Option<f64> {
    let n = x.len();
    if k == 0 || n <= k {
        return None;
    }
    let points = ksg_neighborhoods(x, y, k);
    let table = DigammaTable::new(n.min(4096));
    let sum: f64 = points
        .iter()
        .map(|p| table.get(p.n_x + 1) + table.get(p.n_y + 1))
        .sum();
    Some(table.get(k) + table.get(n) - sum / n as f64)
}
