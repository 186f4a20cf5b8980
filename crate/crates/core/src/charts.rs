//! Record-level chart payloads for backbone edges.
//!
//! Two discrete features get a co-occurrence heatmap, a mixed pair gets a
//! ridgeline of per-category densities, and two continuous features get a 2D
//! kernel density grid with a scatter overlay. Densities use Gaussian kernels
//! with Silverman bandwidths.

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{FeatureColumn, FeatureKind, FeatureTable};
use crate::mi::{pairwise_complete, sample_std};

pub const DEFAULT_GRID_1D: usize = 200;
pub const DEFAULT_GRID_2D: usize = 64;
pub const DEFAULT_MAX_SCATTER_POINTS: usize = 2000;
/// Token used for categories folded together by the category cap.
pub const OTHER_CATEGORY_TOKEN: &str = "⟂OTHER⟂";

/// Grid margin beyond the data, in bandwidths.
const PAD_BANDWIDTHS: f64 = 4.0;
const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

#[derive(Debug, Error, PartialEq)]
pub enum ChartError {
    #[error("bandwidth needs at least two non-identical values")]
    DegenerateInput,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChartType {
    Heatmap,
    Ridgeline,
    DensityScatter,
}

pub fn chart_type_for(a: FeatureKind, b: FeatureKind) -> ChartType {
    match (a, b) {
        (FeatureKind::Discrete, FeatureKind::Discrete) => ChartType::Heatmap,
        (FeatureKind::Continuous, FeatureKind::Continuous) => ChartType::DensityScatter,
        _ => ChartType::Ridgeline,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeatmapPayload {
    pub x_categories: Vec<String>,
    pub y_categories: Vec<String>,
    /// `counts[x][y]`.
    pub counts: Vec<Vec<u64>>,
    pub n_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RidgelinePayload {
    pub categories: Vec<String>,
    pub counts: Vec<usize>,
    pub grid: Vec<f64>,
    /// Density per category over `grid`; `None` for point-mass rows.
    pub densities: Vec<Option<Vec<f64>>>,
    pub bandwidths: Vec<Option<f64>>,
    /// Location of rows too degenerate for a density.
    pub point_masses: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityScatterPayload {
    pub grid_x: Vec<f64>,
    pub grid_y: Vec<f64>,
    /// `density[iy][ix]`.
    pub density: Vec<Vec<f64>>,
    pub bandwidth_x: f64,
    pub bandwidth_y: f64,
    pub points: Vec<[f64; 2]>,
    pub n_total: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmptyChart {
    pub empty: bool,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ChartPayload {
    Heatmap(HeatmapPayload),
    Ridgeline(RidgelinePayload),
    DensityScatter(DensityScatterPayload),
    Empty(EmptyChart),
}

impl ChartPayload {
    pub fn empty(reason: impl Into<String>) -> Self {
        ChartPayload::Empty(EmptyChart {
            empty: true,
            reason: reason.into(),
        })
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, ChartPayload::Empty(_))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartSpec {
    /// Key in the charts artifact, not repeated inside the entry.
    #[serde(skip)]
    pub chart_id: String,
    #[serde(rename = "type")]
    pub chart_type: ChartType,
    pub x_feature: String,
    pub y_feature: String,
    pub payload: ChartPayload,
}

pub fn chart_id(a: usize, b: usize) -> String {
    format!("{}_{}", a.min(b), a.max(b))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartConfig {
    pub grid_1d: usize,
    pub grid_2d: usize,
    pub max_scatter_points: usize,
    /// Keep the N most frequent categories and fold the rest into one.
    pub max_categories: Option<usize>,
    pub seed: u64,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            grid_1d: DEFAULT_GRID_1D,
            grid_2d: DEFAULT_GRID_2D,
            max_scatter_points: DEFAULT_MAX_SCATTER_POINTS,
            max_categories: None,
            seed: 0,
        }
    }
}

/// Quartiles as medians of the lower and upper halves (the median itself
/// excluded for odd counts). `sorted` must be ascending and non-empty.
pub fn quartiles(sorted: &[f64]) -> (f64, f64) {
    let n = sorted.len();
    let half = n / 2;
    if half == 0 {
        return (sorted[0], sorted[0]);
    }
    let median = |s: &[f64]| {
        let m = s.len() / 2;
        if s.len().is_multiple_of(2) {
            (s[m - 1] + s[m]) / 2.0
        } else {
            s[m]
        }
    };
    (median(&sorted[..half]), median(&sorted[n - half..]))
}

/// h = 0.9 · min(σ, IQR / 1.34) · n^(−1/5), using σ alone when the IQR is 0.
pub fn silverman_bandwidth(values: &[f64]) -> Result<f64, ChartError> {
    let n = values.len();
    if n < 2 {
        return Err(ChartError::DegenerateInput);
    }
    let sd = sample_std(values);
    if sd == 0.0 || !sd.is_finite() {
        return Err(ChartError::DegenerateInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let (q1, q3) = quartiles(&sorted);
    let iqr = q3 - q1;
    let spread = if iqr > 0.0 { sd.min(iqr / 1.34) } else { sd };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// Gaussian KDE of `data` evaluated at each grid point.
pub fn kde_1d(data: &[f64], bandwidth: f64, grid: &[f64]) -> Vec<f64> {
    let norm = INV_SQRT_2PI / (data.len() as f64 * bandwidth);
    grid.iter()
        .map(|&g| {
            data.iter()
                .map(|&x| {
                    let z = (g - x) / bandwidth;
                    (-0.5 * z * z).exp()
                })
                .sum::<f64>()
                * norm
        })
        .collect()
}

fn kernel_matrix(data: &[f64], bandwidth: f64, grid: &[f64]) -> Vec<Vec<f64>> {
    grid.iter()
        .map(|&g| {
            data.iter()
                .map(|&x| {
                    let z = (g - x) / bandwidth;
                    INV_SQRT_2PI / bandwidth * (-0.5 * z * z).exp()
                })
                .collect()
        })
        .collect()
}

/// Product-Gaussian KDE on a grid, `out[iy][ix]`. Kernel values are tabulated
/// once per axis, so the cost is one multiply-add per (cell, point).
pub fn kde_2d(x: &[f64], y: &[f64], bw: (f64, f64), grid_x: &[f64], grid_y: &[f64]) -> Vec<Vec<f64>> {
    let n = x.len() as f64;
    let kx = kernel_matrix(x, bw.0, grid_x);
    let ky = kernel_matrix(y, bw.1, grid_y);
    ky.iter()
        .map(|row_y| {
            kx.iter()
                .map(|row_x| row_x.iter().zip(row_y).map(|(a, b)| a * b).sum::<f64>() / n)
                .collect()
        })
        .collect()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

/// Grid covering `[lo − 4H, hi + 4H]` where H is the largest bandwidth in
/// play, floored so that the grid step never exceeds it.
struct PaddedGrid {
    points: Vec<f64>,
    step: f64,
}

fn padded_grid(lo: f64, hi: f64, largest_bandwidth: f64, size: usize) -> PaddedGrid {
    let range = hi - lo;
    let floor = range / (size as f64 - 1.0 - 2.0 * PAD_BANDWIDTHS);
    let h = largest_bandwidth.max(floor);
    let points = linspace(lo - PAD_BANDWIDTHS * h, hi + PAD_BANDWIDTHS * h, size);
    let step = points[1] - points[0];
    PaddedGrid { points, step }
}

/// Categories sorted by descending count, then lexicographically.
fn ranked_categories(tokens: &[String]) -> Vec<(String, usize)> {
    let mut counts: HashMap<&str, usize> = HashMap::new();
    for t in tokens {
        *counts.entry(t).or_insert(0) += 1;
    }
    let mut ranked: Vec<(String, usize)> = counts.into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

/// Fold categories past the first `cap` into the OTHER token.
fn apply_category_cap(tokens: Vec<String>, cap: Option<usize>) -> Vec<String> {
    let Some(cap) = cap else { return tokens };
    let ranked = ranked_categories(&tokens);
    if ranked.len() <= cap {
        return tokens;
    }
    let keep: std::collections::HashSet<String> = ranked.into_iter().take(cap).map(|(k, _)| k).collect();
    tokens
        .into_iter()
        .map(|t| if keep.contains(&t) { t } else { OTHER_CATEGORY_TOKEN.to_string() })
        .collect()
}

pub fn heatmap_payload(u: &[String], v: &[String], config: &ChartConfig) -> ChartPayload {
    if u.is_empty() {
        return ChartPayload::empty("no overlapping records");
    }
    let u = apply_category_cap(u.to_vec(), config.max_categories);
    let v = apply_category_cap(v.to_vec(), config.max_categories);
    let xs: Vec<String> = ranked_categories(&u).into_iter().map(|(k, _)| k).collect();
    let ys: Vec<String> = ranked_categories(&v).into_iter().map(|(k, _)| k).collect();
    let xi: HashMap<&str, usize> = xs.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
    let yi: HashMap<&str, usize> = ys.iter().enumerate().map(|(i, k)| (k.as_str(), i)).collect();
    let mut counts = vec![vec![0u64; ys.len()]; xs.len()];
    for (a, b) in u.iter().zip(&v) {
        counts[xi[a.as_str()]][yi[b.as_str()]] += 1;
    }
    ChartPayload::Heatmap(HeatmapPayload {
        x_categories: xs,
        y_categories: ys,
        counts,
        n_total: u.len(),
    })
}

pub fn ridgeline_payload(labels: &[String], values: &[f64], config: &ChartConfig) -> ChartPayload {
    if labels.is_empty() {
        return ChartPayload::empty("no overlapping records");
    }
    let labels = apply_category_cap(labels.to_vec(), config.max_categories);
    let ranked = ranked_categories(&labels);
    let mut groups: HashMap<&str, Vec<f64>> = HashMap::new();
    for (l, &v) in labels.iter().zip(values) {
        groups.entry(l.as_str()).or_default().push(v);
    }
    let raw_bw: Vec<Option<f64>> = ranked
        .iter()
        .map(|(k, _)| silverman_bandwidth(&groups[k.as_str()]).ok())
        .collect();
    if raw_bw.iter().all(Option::is_none) {
        return ChartPayload::empty("no category has two distinct values");
    }
    let global = silverman_bandwidth(values).expect("some category has spread");
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let largest = raw_bw.iter().flatten().copied().fold(global, f64::max);
    let grid = padded_grid(lo, hi, largest, config.grid_1d);

    let mut densities = Vec::with_capacity(ranked.len());
    let mut bandwidths = Vec::with_capacity(ranked.len());
    let mut point_masses = Vec::with_capacity(ranked.len());
    for ((k, _), bw) in ranked.iter().zip(&raw_bw) {
        let data = &groups[k.as_str()];
        match bw {
            Some(h) => {
                let h = h.max(grid.step);
                densities.push(Some(kde_1d(data, h, &grid.points)));
                bandwidths.push(Some(h));
                point_masses.push(None);
            }
            None => {
                densities.push(None);
                bandwidths.push(None);
                point_masses.push(Some(data[0]));
            }
        }
    }
    ChartPayload::Ridgeline(RidgelinePayload {
        categories: ranked.iter().map(|(k, _)| k.clone()).collect(),
        counts: ranked.iter().map(|(_, c)| *c).collect(),
        grid: grid.points,
        densities,
        bandwidths,
        point_masses,
    })
}

pub fn density_scatter_payload(x: &[f64], y: &[f64], config: &ChartConfig) -> ChartPayload {
    if x.len() < 2 {
        return ChartPayload::empty("fewer than two overlapping records");
    }
    let (Ok(hx), Ok(hy)) = (silverman_bandwidth(x), silverman_bandwidth(y)) else {
        return ChartPayload::empty("constant axis");
    };
    let axis = |data: &[f64], h: f64| {
        let lo = data.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = data.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let grid = padded_grid(lo, hi, h, config.grid_2d);
        let h = h.max(grid.step);
        (grid.points, h)
    };
    let (grid_x, hx) = axis(x, hx);
    let (grid_y, hy) = axis(y, hy);
    let density = kde_2d(x, y, (hx, hy), &grid_x, &grid_y);

    let n = x.len();
    let points = if n <= config.max_scatter_points {
        x.iter().zip(y).map(|(&a, &b)| [a, b]).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let mut idx = rand::seq::index::sample(&mut rng, n, config.max_scatter_points).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|i| [x[i], y[i]]).collect()
    };
    ChartPayload::DensityScatter(DensityScatterPayload {
        grid_x,
        grid_y,
        density,
        bandwidth_x: hx,
        bandwidth_y: hy,
        points,
        n_total: n,
    })
}

fn tokens(cells: &[&crate::ingest::Cell]) -> Vec<String> {
    cells.iter().map(|c| c.token().expect("non-null")).collect()
}

/// Chart for the pair of columns `(a, b)` of `table`, oriented so that the
/// lower index is the x feature (for ridgelines the continuous side is x).
pub fn chart_for_pair(table: &FeatureTable, a: usize, b: usize, config: &ChartConfig) -> ChartSpec {
    let (a, b) = (a.min(b), a.max(b));
    let (cu, cv): (&FeatureColumn, &FeatureColumn) = (&table.features[a], &table.features[b]);
    let sample = pairwise_complete(cu, cv);
    let chart_type = chart_type_for(cu.kind, cv.kind);
    let (x_feature, y_feature, payload) = match chart_type {
        ChartType::Heatmap => (
            cu.name.clone(),
            cv.name.clone(),
            heatmap_payload(&tokens(&sample.u), &tokens(&sample.v), config),
        ),
        ChartType::DensityScatter => (
            cu.name.clone(),
            cv.name.clone(),
            density_scatter_payload(&sample.u_numbers(), &sample.v_numbers(), config),
        ),
        ChartType::Ridgeline => {
            if cu.kind == FeatureKind::Discrete {
                (
                    cv.name.clone(),
                    cu.name.clone(),
                    ridgeline_payload(&tokens(&sample.u), &sample.v_numbers(), config),
                )
            } else {
                (
                    cu.name.clone(),
                    cv.name.clone(),
                    ridgeline_payload(&tokens(&sample.v), &sample.u_numbers(), config),
                )
            }
        }
    };
    ChartSpec {
        chart_id: chart_id(a, b),
        chart_type,
        x_feature,
        y_feature,
        payload,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn chart_types() {
        use FeatureKind::*;
        assert_eq!(chart_type_for(Discrete, Discrete), ChartType::Heatmap);
        assert_eq!(chart_type_for(Discrete, Continuous), ChartType::Ridgeline);
        assert_eq!(chart_type_for(Continuous, Discrete), ChartType::Ridgeline);
        assert_eq!(chart_type_for(Continuous, Continuous), ChartType::DensityScatter);
    }

    #[test]
    fn silverman_two_points() {
        let h = silverman_bandwidth(&[0.0, 1.0]).unwrap();
        let expected = 0.9 * (0.5f64).sqrt().min(1.0 / 1.34) * 2f64.powf(-0.2);
        assert!((h - expected).abs() < 1e-15);
        assert!((h - 0.5539).abs() < 5e-4);
    }

    #[test]
    fn silverman_degenerate() {
        assert_eq!(silverman_bandwidth(&[3.0, 3.0, 3.0]), Err(ChartError::DegenerateInput));
        assert_eq!(silverman_bandwidth(&[3.0]), Err(ChartError::DegenerateInput));
    }

    #[test]
    fn silverman_zero_iqr_uses_std() {
        let data = [0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 5.0];
        let h = silverman_bandwidth(&data).unwrap();
        assert!((h - 0.9 * sample_std(&data) * 8f64.powf(-0.2)).abs() < 1e-15);
    }

    #[test]
    fn heatmap_tabulation() {
        let p = heatmap_payload(&s(&["a", "a", "b"]), &s(&["x", "y", "x"]), &ChartConfig::default());
        let ChartPayload::Heatmap(h) = p else { panic!() };
        assert_eq!(h.x_categories, s(&["a", "b"]));
        assert_eq!(h.y_categories, s(&["x", "y"]));
        assert_eq!(h.counts, vec![vec![1, 1], vec![1, 0]]);
        assert!(heatmap_payload(&[], &[], &ChartConfig::default()).is_empty());
    }

    #[test]
    fn heatmap_category_cap() {
        let cfg = ChartConfig {
            max_categories: Some(2),
            ..ChartConfig::default()
        };
        let u = s(&["a", "a", "a", "b", "b", "c", "d"]);
        let v = s(&["x"; 7]);
        let ChartPayload::Heatmap(h) = heatmap_payload(&u, &v, &cfg) else { panic!() };
        assert_eq!(h.x_categories, s(&["a", "b", OTHER_CATEGORY_TOKEN]));
        assert_eq!(h.counts, vec![vec![3], vec![2], vec![2]]);
    }

    #[test]
    fn ridgeline_point_mass_row() {
        let labels = s(&["a", "a", "a", "a", "b"]);
        let values = [0.0, 1.0, 2.0, 1.5, 7.0];
        let ChartPayload::Ridgeline(r) = ridgeline_payload(&labels, &values, &ChartConfig::default()) else {
            panic!()
        };
        assert_eq!(r.categories, s(&["a", "b"]));
        assert_eq!(r.counts, vec![4, 1]);
        assert!(r.densities[0].is_some());
        assert_eq!(r.densities[1], None);
        assert_eq!(r.point_masses[1], Some(7.0));
        assert_eq!(r.grid.len(), DEFAULT_GRID_1D);
    }

    #[test]
    fn ridgeline_all_degenerate_is_empty() {
        let p = ridgeline_payload(&s(&["a", "b"]), &[1.0, 2.0], &ChartConfig::default());
        assert!(p.is_empty());
    }

    #[test]
    fn density_scatter_constant_axis_is_empty() {
        let p = density_scatter_payload(&[1.0, 2.0, 3.0], &[5.0, 5.0, 5.0], &ChartConfig::default());
        assert!(p.is_empty());
    }

    #[test]
    fn chart_ids_are_ordered() {
        assert_eq!(chart_id(3, 0), "0_3");
        assert_eq!(chart_id(0, 3), "0_3");
    }
}
