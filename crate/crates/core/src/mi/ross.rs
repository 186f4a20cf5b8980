//! Nearest-neighbour mutual information between a discrete label and a
//! continuous value (Ross, 2014).
//!
//! For a point with label l, d is the distance to its k-th nearest neighbour
//! among the other points carrying l, and m is the number of points of any
//! label (other than the point itself) within distance d, the k-th neighbour
//! included. Then
//!
//! I = ψ(n) + ψ(k) − ⟨ψ(N_l)⟩ − ⟨ψ(m)⟩.
//!
//! Labels with k or fewer members cannot supply a k-th neighbour; their points
//! are dropped before anything is counted, so n, N_l and m all refer to the
//! retained points.

use super::digamma::DigammaTable;
use super::ksg::sorted_with_positions;

/// Per-point statistics for retained points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RossPoint {
    /// Index into the input arrays.
    pub index: usize,
    pub label_count: usize,
    pub radius: f64,
    pub m: usize,
}

/// Number of entries of `sorted`, other than the one at `pos`, within
/// distance `radius` (inclusive) of `sorted[pos]`.
fn count_within_inclusive(sorted: &[f64], pos: usize, radius: f64) -> usize {
    let center = sorted[pos];
    let left = sorted[..pos].partition_point(|&v| center - v > radius);
    let right = sorted[pos..].partition_point(|&v| v - center <= radius);
    (pos - left) + right - 1
}

/// Distance from `sorted[pos]` to its k-th nearest neighbour in `sorted`,
/// excluding itself. Requires `sorted.len() > k`.
fn kth_neighbor_distance(sorted: &[f64], pos: usize, k: usize) -> f64 {
    let center = sorted[pos];
    let (mut lo, mut hi) = (pos, pos + 1);
    let mut d = 0.0;
    for _ in 0..k {
        let left = (lo > 0).then(|| center - sorted[lo - 1]);
        let right = (hi < sorted.len()).then(|| sorted[hi] - center);
        match (left, right) {
            (Some(l), Some(r)) if l <= r => {
                d = l;
                lo -= 1;
            }
            (Some(l), None) => {
                d = l;
                lo -= 1;
            }
            (_, Some(r)) => {
                d = r;
                hi += 1;
            }
            (None, None) => unreachable!("label group smaller than k + 1"),
        }
    }
    d
}

/// Per-point statistics for every point whose label has more than `k` members.
pub fn ross_neighborhoods(labels: &[usize], values: &[f64], k: usize) -> Vec<RossPoint> {
    assert_eq!(labels.len(), values.len());
    assert!(k >= 1);
    let n_labels = labels.iter().max().map_or(0, |m| m + 1);
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n_labels];
    for (i, &l) in labels.iter().enumerate() {
        members[l].push(i);
    }

    let keep: Vec<usize> = (0..labels.len())
        .filter(|&i| members[labels[i]].len() > k)
        .collect();
    if keep.is_empty() {
        return Vec::new();
    }
    let kept_values: Vec<f64> = keep.iter().map(|&i| values[i]).collect();
    let (all_sorted, all_pos) = sorted_with_positions(&kept_values);

    let mut radius = vec![0.0; labels.len()];
    for group in members.iter().filter(|g| g.len() > k) {
        let group_values: Vec<f64> = group.iter().map(|&i| values[i]).collect();
        let (sorted, pos) = sorted_with_positions(&group_values);
        for (g, &i) in group.iter().enumerate() {
            radius[i] = kth_neighbor_distance(&sorted, pos[g], k);
        }
    }

    keep.iter()
        .enumerate()
        .map(|(slot, &i)| RossPoint {
            index: i,
            label_count: members[labels[i]].len(),
            radius: radius[i],
            m: count_within_inclusive(&all_sorted, all_pos[slot], radius[i]),
        })
        .collect()
}

/// Unclamped estimate in nats, or `None` if no label has more than `k` members.
pub fn ross_raw(labels: &[usize], values: &[f64], k: usize) -> Option<f64> {
    if k == 0 {
        return None;
    }
    let points = ross_neighborhoods(labels, values, k);
    if points.is_empty() {
        return None;
    }
    let n = points.len();
    let table = DigammaTable::new(n.min(4096));
    let (sum_label, sum_m) = points.iter().fold((0.0, 0.0), |(a, b), p| {
        (a + table.get(p.label_count), b + table.get(p.m))
    });
    Some(table.get(n) + table.get(k) - sum_label / n as f64 - sum_m / n as f64)
}
