//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's own helpers for the quantity being checked.

#![allow(dead_code)]

use std::collections::{HashMap, VecDeque};

/// Brute-force plug-in MI straight from the contingency table, in nats.
pub fn plugin_oracle(table: &[Vec<u64>]) -> f64 {
    let n: u64 = table.iter().flatten().sum();
    let n = n as f64;
    let rows: Vec<f64> = table.iter().map(|r| r.iter().sum::<u64>() as f64).collect();
    let cols: Vec<f64> = (0..table[0].len())
        .map(|j| table.iter().map(|r| r[j]).sum::<u64>() as f64)
        .collect();
    let mut total = 0.0;
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let p = c as f64 / n;
            total += p * (p / ((rows[i] / n) * (cols[j] / n))).ln();
        }
    }
    total
}

/// Expand a contingency table into paired label vectors.
pub fn expand_table(table: &[Vec<u64>]) -> (Vec<usize>, Vec<usize>) {
    let mut u = Vec::new();
    let mut v = Vec::new();
    for (i, row) in table.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            for _ in 0..c {
                u.push(i);
                v.push(j);
            }
        }
    }
    (u, v)
}

/// Composite Simpson integration of f over [a, b] with `panels` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    assert!(panels.is_multiple_of(2));
    let h = (b - a) / panels as f64;
    let mut s = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + h * i as f64);
    }
    s * h / 3.0
}

/// Disparity significance by direct quadrature of its defining integral.
pub fn disparity_quadrature(p: f64, k: usize) -> f64 {
    let km1 = (k - 1) as f64;
    1.0 - km1 * simpson(|x| (1.0 - x).powi(k as i32 - 2), 0.0, p, 10_000)
}

/// BFS labelling of the nodes touched by `edges`, numbered in order of each
/// component's smallest node. Returns (count, labels).
pub fn bfs_components(n: usize, edges: &[(usize, usize)]) -> (usize, Vec<Option<usize>>) {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut labels = vec![None; n];
    let mut count = 0;
    for start in 0..n {
        if adj[start].is_empty() || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(count);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if labels[y].is_none() {
                    labels[y] = Some(count);
                    queue.push_back(y);
                }
            }
        }
        count += 1;
    }
    (count, labels)
}

/// Adjusted Rand index between two labelings of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len());
    let pairs = |x: f64| x * (x - 1.0) / 2.0;
    let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
    let mut left: HashMap<usize, f64> = HashMap::new();
    let mut right: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1.0;
        *left.entry(x).or_default() += 1.0;
        *right.entry(y).or_default() += 1.0;
    }
    let index: f64 = joint.values().map(|&c| pairs(c)).sum();
    let sa: f64 = left.values().map(|&c| pairs(c)).sum();
    let sb: f64 = right.values().map(|&c| pairs(c)).sum();
    let expected = sa * sb / pairs(a.len() as f64);
    let max = 0.5 * (sa + sb);
    if max == expected {
        return 1.0;
    }
    (index - expected) / (max - expected)
}

/// Product-Gaussian KDE at one point by a plain loop over the data.
pub fn kde_2d_point(x: &[f64], y: &[f64], hx: f64, hy: f64, gx: f64, gy: f64) -> f64 {
    let mut s = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        let zx = (gx - a) / hx;
        let zy = (gy - b) / hy;
        s += (-0.5 * (zx * zx + zy * zy)).exp();
    }
    s / (x.len() as f64 * 2.0 * std::f64::consts::PI * hx * hy)
}

/// Trapezoid rule over a uniform or non-uniform grid.
pub fn trapezoid(grid: &[f64], f: &[f64]) -> f64 {
    grid.windows(2)
        .zip(f.windows(2))
        .map(|(g, v)| (g[1] - g[0]) * (v[0] + v[1]) / 2.0)
        .sum()
}
