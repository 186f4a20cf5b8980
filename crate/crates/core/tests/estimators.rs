use featnet_core::charts::{kde_1d, ridgeline_payload, silverman_bandwidth, density_scatter_payload, ChartConfig, ChartPayload};
use featnet_core::mi::digamma;
use featnet_core::mi::{mi_continuous_continuous, mi_discrete_continuous, MiFlag};
use featnet_core::synthetic::{bivariate_gaussian, two_clusters};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

#[test]
fn digamma_matches_reference() {
    let mut x = 1e-6;
    while x < 1e6 {
        let want = statrs::function::gamma::digamma(x);
        let got = digamma(x).unwrap();
        assert!((got - want).abs() <= 1e-10 * want.abs().max(1.0), "x={x}: {got} vs {want}");
        x *= 1.37;
    }
    for n in 1..200 {
        let want = statrs::function::gamma::digamma(n as f64);
        assert!((digamma(n as f64).unwrap() - want).abs() < 1e-12);
    }
    assert!(digamma(0.0).is_err());
    assert!(digamma(-2.0).is_err());
}

#[test]
fn ksg_rejects_small_and_constant_samples() {
    let r = mi_continuous_continuous(&[1.0, 2.0, 3.0], &[3.0, 1.0, 2.0], 3, 0);
    assert_eq!((r.value, r.flag), (0.0, Some(MiFlag::InsufficientSample)));
    let x: Vec<f64> = (0..50).map(f64::from).collect();
    let r = mi_continuous_continuous(&x, &[4.0; 50], 3, 0);
    assert_eq!((r.value, r.flag), (0.0, Some(MiFlag::ConstantFeature)));
}

#[test]
fn ksg_grows_with_dependence() {
    let values: Vec<f64> = [0.2, 0.4, 0.6, 0.8, 0.95]
        .iter()
        .map(|&rho| {
            let (x, y) = bivariate_gaussian(1500, rho, 3);
            mi_continuous_continuous(&x, &y, 3, 3).value
        })
        .collect();
    assert!(values.windows(2).all(|w| w[0] < w[1]), "{values:?}");
}

#[test]
fn ross_drops_small_labels() {
    let (mut labels, mut values) = two_clusters(100, 0.0, 10.0, 1.0, 1);
    // two points of a third label: fewer than k + 1, excluded
    labels.extend(["C", "C"]);
    values.extend([5.0, 5.1]);
    let with_rare = mi_discrete_continuous(&labels, &values, 3, 1).value;
    let without = mi_discrete_continuous(&labels[..200], &values[..200], 3, 1).value;
    assert_eq!(with_rare, without);

    let r = mi_discrete_continuous(&["a", "a", "b", "b"], &[1.0, 2.0, 3.0, 4.0], 3, 0);
    assert_eq!((r.value, r.flag), (0.0, Some(MiFlag::InsufficientSample)));
}

fn normal_sample(n: usize, mean: f64, sd: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| mean + sd * rng.sample::<f64, _>(StandardNormal)).collect()
}

#[test]
fn silverman_on_standard_normal() {
    let h = silverman_bandwidth(&normal_sample(1000, 0.0, 1.0, 2)).unwrap();
    let expected = 0.9 * 1000f64.powf(-0.2);
    assert!((h - expected).abs() < 0.02, "{h} vs {expected}");
    assert!(silverman_bandwidth(&[3.0; 10]).is_err());
    assert!(silverman_bandwidth(&[1.0]).is_err());
}

#[test]
fn kde_1d_peaks_at_the_mean() {
    let data = normal_sample(500, 2.0, 0.5, 4);
    let h = silverman_bandwidth(&data).unwrap();
    let grid: Vec<f64> = (0..401).map(|i| i as f64 * 0.01).collect();
    let d = kde_1d(&data, h, &grid);
    let argmax = (0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
    assert!((grid[argmax] - 2.0).abs() < 0.15);
}

#[test]
fn ridgeline_rows_peak_at_their_means() {
    let (labels, values) = two_clusters(3000, -3.0, 4.0, 1.0, 6);
    let labels: Vec<String> = labels.into_iter().map(String::from).collect();
    let ChartPayload::Ridgeline(r) = ridgeline_payload(&labels, &values, &ChartConfig::default()) else {
        panic!("expected a ridgeline");
    };
    assert_eq!(r.categories, vec!["A", "B"]);
    assert_eq!(r.counts, vec![3000, 3000]);
    for (row, mean) in [-3.0, 4.0].into_iter().enumerate() {
        let d = r.densities[row].as_ref().unwrap();
        let group = &values[row * 3000..(row + 1) * 3000];
        assert_eq!(d, &kde_1d(group, r.bandwidths[row].unwrap(), &r.grid));
        // a Gaussian KDE's mean is the sample mean
        let weighted: Vec<f64> = r.grid.iter().zip(d).map(|(x, f)| x * f).collect();
        let kde_mean: f64 = r.grid.windows(2).zip(weighted.windows(2)).map(|(g, w)| (g[1] - g[0]) * (w[0] + w[1]) / 2.0).sum();
        let sample_mean = group.iter().sum::<f64>() / group.len() as f64;
        assert!((kde_mean - sample_mean).abs() < 1e-3, "{kde_mean} vs {sample_mean}");
        let argmax = (0..d.len()).max_by(|&a, &b| d[a].total_cmp(&d[b])).unwrap();
        assert!((r.grid[argmax] - mean).abs() < 0.5, "mode {} vs {mean}", r.grid[argmax]);
    }
}

#[test]
fn ridgeline_point_mass_rows() {
    let labels: Vec<String> = ["a", "a", "a", "b", "b", "c"].iter().map(|s| s.to_string()).collect();
    let values = [1.0, 2.0, 3.0, 7.0, 7.0, 9.0];
    let ChartPayload::Ridgeline(r) = ridgeline_payload(&labels, &values, &ChartConfig::default()) else {
        panic!("expected a ridgeline");
    };
    assert!(r.densities[0].is_some());
    assert_eq!(r.point_masses, vec![None, Some(7.0), Some(9.0)]);
    assert_eq!(r.bandwidths[1], None);
}

#[test]
fn density_argmax_near_the_mean() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let x: Vec<f64> = (0..800).map(|_| 5.0 + rng.sample::<f64, _>(StandardNormal)).collect();
    let y: Vec<f64> = (0..800).map(|_| -2.0 + 3.0 * rng.sample::<f64, _>(StandardNormal)).collect();
    let ChartPayload::DensityScatter(d) = density_scatter_payload(&x, &y, &ChartConfig::default()) else {
        panic!("expected a density scatter");
    };
    let (mut best, mut at) = (f64::MIN, (0, 0));
    for (iy, row) in d.density.iter().enumerate() {
        for (ix, &v) in row.iter().enumerate() {
            if v > best {
                best = v;
                at = (ix, iy);
            }
        }
    }
    assert!((d.grid_x[at.0] - 5.0).abs() < 0.5);
    assert!((d.grid_y[at.1] + 2.0).abs() < 1.5);
    assert_eq!(d.points.len(), 800);
}

#[test]
fn scatter_subsample_is_seeded_and_capped() {
    let (x, y) = bivariate_gaussian(3000, 0.3, 1);
    let cfg = ChartConfig { max_scatter_points: 500, seed: 4, ..ChartConfig::default() };
    let a = density_scatter_payload(&x, &y, &cfg);
    let b = density_scatter_payload(&x, &y, &cfg);
    assert_eq!(a, b);
    let ChartPayload::DensityScatter(d) = a else { panic!() };
    assert_eq!((d.points.len(), d.n_total), (500, 3000));
}
