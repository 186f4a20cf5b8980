//! Plug-in mutual information for two categorical samples.

use std::collections::HashMap;
use std::hash::Hash;

/// Map labels to dense codes in order of first appearance.
pub fn encode_labels<T: Hash + Eq>(labels: &[T]) -> (Vec<usize>, usize) {
    let mut index: HashMap<&T, usize> = HashMap::new();
    let codes = labels
        .iter()
        .map(|l| {
            let next = index.len();
            *index.entry(l).or_insert(next)
        })
        .collect();
    (codes, index.len())
}

/// I(U;V) = Σ P(i,j) ln(P(i,j) / (P(i) P(j))) over the empirical joint table,
/// in nats. Empty cells contribute nothing. Returns 0 for empty input.
///
/// Terms are summed in sorted order, so the result is bit-identical when
/// the two arguments are swapped.
pub fn plugin_mi<A: Hash + Eq, B: Hash + Eq>(u: &[A], v: &[B]) -> f64 {
    assert_eq!(u.len(), v.len(), "paired samples must have equal length");
    let n = u.len();
    if n == 0 {
        return 0.0;
    }
    let (cu, ru) = encode_labels(u);
    let (cv, rv) = encode_labels(v);
    if ru <= 1 || rv <= 1 {
        return 0.0;
    }

    let mut row = vec![0u64; ru];
    let mut col = vec![0u64; rv];
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    for (&a, &b) in cu.iter().zip(&cv) {
        row[a] += 1;
        col[b] += 1;
        *joint.entry((a, b)).or_insert(0) += 1;
    }

    let n = n as u64;
    let mut terms: Vec<f64> = joint
        .iter()
        .map(|(&(a, b), &nij)| {
            // integer numerator/denominator keep independent cells exactly at ln 1 = 0
            let ratio = (n as u128 * nij as u128) as f64 / (row[a] as u128 * col[b] as u128) as f64;
            nij as f64 / n as f64 * ratio.ln()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    let total: f64 = terms.iter().sum();
    total.max(0.0)
}
