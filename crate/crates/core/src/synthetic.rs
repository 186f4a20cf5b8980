//! Seeded synthetic datasets with known dependence structure, used by the
//! demo page, the bundled sample CSV, and the test suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `n` draws of a standard bivariate Gaussian with correlation `rho`.
pub fn bivariate_gaussian(n: usize, rho: f64, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c = (1.0 - rho * rho).sqrt();
    (0..n)
        .map(|_| {
            let a: f64 = rng.sample(StandardNormal);
            let b: f64 = rng.sample(StandardNormal);
            (a, rho * a + c * b)
        })
        .unzip()
}

/// MI of a bivariate Gaussian, −½ ln(1 − ρ²).
pub fn gaussian_mi(rho: f64) -> f64 {
    0.5 * (1.0 / (1.0 - rho * rho)).ln()
}

/// Labels "A"/"B" with `per_label` points each, drawn from N(mean_a, σ) and
/// N(mean_b, σ).
pub fn two_clusters(per_label: usize, mean_a: f64, mean_b: f64, sigma: f64, seed: u64) -> (Vec<&'static str>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels = Vec::with_capacity(2 * per_label);
    let mut values = Vec::with_capacity(2 * per_label);
    for (label, mean) in [("A", mean_a), ("B", mean_b)] {
        for _ in 0..per_label {
            let z: f64 = rng.sample(StandardNormal);
            labels.push(label);
            values.push(mean + sigma * z);
        }
    }
    (labels, values)
}

/// Labels drawn independently of standard normal values.
pub fn independent_labels(n: usize, seed: u64) -> (Vec<&'static str>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let label = if rng.random_bool(0.5) { "A" } else { "B" };
            (label, rng.sample::<f64, _>(StandardNormal))
        })
        .unzip()
}

/// A generated table plus the planted grouping of its columns.
#[derive(Debug, Clone)]
pub struct PlantedDataset {
    pub csv: String,
    pub names: Vec<String>,
    /// Block index per column; `None` for independent noise columns.
    pub blocks: Vec<Option<usize>>,
}

/// Mixed-type table with `n_blocks` groups of five dependent features and
/// `n_noise` independent ones, about 3% of cells missing.
///
/// Each block is a hub and four spokes. The spokes carry independent fair
/// bits: `flag` (`yes`/`no`), `bit` (0/1), `tag` (`u`/`v`) and `grade`
/// (`lo`/`hi`). The hub is continuous and encodes all four bits, so every
/// spoke depends strongly on the hub and barely on anything else. Noise columns alternate between continuous Gaussians and five-level
/// tokens.
pub fn planted_blocks(n_records: usize, n_blocks: usize, n_noise: usize, seed: u64) -> PlantedDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut names = Vec::new();
    let mut blocks = Vec::new();
    for b in 0..n_blocks {
        for suffix in ["hub", "flag", "bit", "tag", "grade"] {
            names.push(format!("b{b}_{suffix}"));
            blocks.push(Some(b));
        }
    }
    for i in 0..n_noise {
        names.push(format!("noise{i}"));
        blocks.push(None);
    }

    let mut csv = names.join(",");
    csv.push('\n');
    let tokens = ["p", "q", "r", "s", "t"];
    for _ in 0..n_records {
        let mut row: Vec<String> = Vec::with_capacity(names.len());
        for _ in 0..n_blocks {
            let bits: [bool; 4] = std::array::from_fn(|_| rng.random_bool(0.5));
            let code: u32 = bits.iter().enumerate().map(|(j, &b)| (b as u32) << j).sum();
            let e: f64 = rng.sample(StandardNormal);
            row.push(format!("{:.6}", code as f64 + 0.1 * e));
            row.push(if bits[0] { "yes" } else { "no" }.to_string());
            row.push((bits[1] as u8).to_string());
            row.push(if bits[2] { "u" } else { "v" }.to_string());
            row.push(if bits[3] { "hi" } else { "lo" }.to_string());
        }
        for i in 0..n_noise {
            if i % 2 == 0 {
                row.push(format!("{:.6}", rng.sample::<f64, _>(StandardNormal)));
            } else {
                row.push(tokens[rng.random_range(0..tokens.len())].to_string());
            }
        }
        for cell in row.iter_mut() {
            if rng.random_bool(0.03) {
                cell.clear();
            }
        }
        csv.push_str(&row.join(","));
        csv.push('\n');
    }
    PlantedDataset { csv, names, blocks }
}
