//! Mutual information between two feature columns.
//!
//! The estimator is chosen by the pair's kinds: plug-in for two discrete
//! columns, KSG for two continuous ones, Ross for a mixed pair. All values
//! are in nats and clamped at zero.

mod digamma;
mod ksg;
mod plugin;
mod ross;

use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ingest::{Cell, FeatureColumn, FeatureKind};

pub use digamma::{digamma, DigammaDomainError};
pub use ksg::{ksg_neighborhoods, ksg_raw, KsgPoint};
pub use plugin::{encode_labels, plugin_mi};
pub use ross::{ross_neighborhoods, ross_raw, RossPoint};

/// Default neighbour count for the k-NN estimators.
pub const DEFAULT_K: usize = 3;

/// Jitter amplitude relative to the sample standard deviation.
pub const JITTER_SCALE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Estimator {
    PluginDd,
    KsgCc,
    RossDc,
}

impl Estimator {
    pub fn for_kinds(a: FeatureKind, b: FeatureKind) -> Estimator {
        match (a, b) {
            (FeatureKind::Discrete, FeatureKind::Discrete) => Estimator::PluginDd,
            (FeatureKind::Continuous, FeatureKind::Continuous) => Estimator::KsgCc,
            _ => Estimator::RossDc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiFlag {
    /// Too few records (or too few per label) for the neighbour count.
    InsufficientSample,
    /// One side has no spread.
    ConstantFeature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiResult {
    pub value: f64,
    pub estimator: Estimator,
    pub n_used: usize,
    pub flag: Option<MiFlag>,
}

impl MiResult {
    fn zero(estimator: Estimator, n_used: usize, flag: Option<MiFlag>) -> Self {
        MiResult {
            value: 0.0,
            estimator,
            n_used,
            flag,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiConfig {
    pub k: usize,
    pub seed: u64,
}

impl Default for MiConfig {
    fn default() -> Self {
        MiConfig {
            k: DEFAULT_K,
            seed: 0,
        }
    }
}

/// Rows where both columns carry a usable value, in record order.
#[derive(Debug, Clone, PartialEq)]
pub struct PairSample<'a> {
    pub rows: Vec<usize>,
    pub u: Vec<&'a Cell>,
    pub v: Vec<&'a Cell>,
}

impl<'a> PairSample<'a> {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn u_numbers(&self) -> Vec<f64> {
        numbers(&self.u)
    }

    pub fn v_numbers(&self) -> Vec<f64> {
        numbers(&self.v)
    }
}

fn numbers(cells: &[&Cell]) -> Vec<f64> {
    cells
        .iter()
        .map(|c| c.as_number().expect("continuous cell"))
        .collect()
}

fn usable(cell: &Cell, kind: FeatureKind) -> bool {
    match kind {
        FeatureKind::Continuous => matches!(cell, Cell::Number(_)),
        FeatureKind::Discrete => !cell.is_null(),
    }
}

/// Restrict two columns to the records where both are non-null.
pub fn pairwise_complete<'a>(u: &'a FeatureColumn, v: &'a FeatureColumn) -> PairSample<'a> {
    assert_eq!(u.len(), v.len(), "columns from different tables");
    let mut sample = PairSample {
        rows: Vec::new(),
        u: Vec::new(),
        v: Vec::new(),
    };
    for (row, (a, b)) in u.values.iter().zip(&v.values).enumerate() {
        if usable(a, u.kind) && usable(b, v.kind) {
            sample.rows.push(row);
            sample.u.push(a);
            sample.v.push(b);
        }
    }
    sample
}

/// Hashable category identity of a cell; numbers compare by value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LabelKey<'a> {
    Num(u64),
    Tok(&'a str),
}

pub fn label_key(cell: &Cell) -> LabelKey<'_> {
    match cell {
        Cell::Number(x) => LabelKey::Num((*x + 0.0).to_bits()),
        Cell::Token(t) => LabelKey::Tok(t),
        Cell::Null => panic!("null cell in a pairwise-complete sample"),
    }
}

pub(crate) fn sample_std(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    let ss: f64 = values.iter().map(|v| (v - mean) * (v - mean)).sum();
    (ss / (n - 1) as f64).sqrt()
}

fn is_constant(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[0] == w[1])
}

/// Add uniform noise of amplitude `JITTER_SCALE · std` in place, drawn from
/// a generator keyed by `(seed, stream)` so each row gets a fixed offset.
pub fn jitter(values: &mut [f64], seed: u64, stream: u64) {
    let amplitude = JITTER_SCALE * sample_std(values);
    if amplitude == 0.0 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    for v in values.iter_mut() {
        *v += amplitude * rng.random_range(-1.0..=1.0);
    }
}

/// Plug-in estimate over two label arrays.
pub fn mi_discrete_discrete<A: Hash + Eq, B: Hash + Eq>(u: &[A], v: &[B]) -> MiResult {
    let n = u.len();
    MiResult {
        value: plugin_mi(u, v),
        estimator: Estimator::PluginDd,
        n_used: n,
        flag: None,
    }
}

/// KSG estimate with seeded duplicate-breaking jitter.
pub fn mi_continuous_continuous(x: &[f64], y: &[f64], k: usize, seed: u64) -> MiResult {
    assert_eq!(x.len(), y.len());
    let n = x.len();
    let est = Estimator::KsgCc;
    if n == 0 {
        return MiResult::zero(est, 0, None);
    }
    if is_constant(x) || is_constant(y) {
        return MiResult::zero(est, n, Some(MiFlag::ConstantFeature));
    }
    if k == 0 || n <= k {
        return MiResult::zero(est, n, Some(MiFlag::InsufficientSample));
    }
    let mut x = x.to_vec();
    let mut y = y.to_vec();
    jitter(&mut x, seed, 0);
    jitter(&mut y, seed, 1);
    let raw = ksg_raw(&x, &y, k).expect("n > k checked");
    MiResult {
        value: raw.max(0.0),
        estimator: est,
        n_used: n,
        flag: None,
    }
}

/// Ross estimate for a label array paired with continuous values.
pub fn mi_discrete_continuous<L: Hash + Eq>(labels: &[L], values: &[f64], k: usize, seed: u64) -> MiResult {
    assert_eq!(labels.len(), values.len());
    let n = labels.len();
    let est = Estimator::RossDc;
    if n == 0 {
        return MiResult::zero(est, 0, None);
    }
    let (codes, n_labels) = encode_labels(labels);
    if n_labels <= 1 || is_constant(values) {
        return MiResult::zero(est, n, Some(MiFlag::ConstantFeature));
    }
    let mut values = values.to_vec();
    jitter(&mut values, seed, 1);
    match ross_raw(&codes, &values, k) {
        Some(raw) => MiResult {
            value: raw.max(0.0),
            estimator: est,
            n_used: n,
            flag: None,
        },
        None => MiResult::zero(est, n, Some(MiFlag::InsufficientSample)),
    }
}

/// MI between two classified columns over their pairwise-complete records.
///
/// The pair is put in name order before estimation, which makes the result
/// exactly symmetric in its arguments.
pub fn mutual_information(u: &FeatureColumn, v: &FeatureColumn, config: &MiConfig) -> MiResult {
    let (u, v) = if u.name <= v.name { (u, v) } else { (v, u) };
    let sample = pairwise_complete(u, v);
    match Estimator::for_kinds(u.kind, v.kind) {
        Estimator::PluginDd => {
            let a: Vec<_> = sample.u.iter().map(|c| label_key(c)).collect();
            let b: Vec<_> = sample.v.iter().map(|c| label_key(c)).collect();
            mi_discrete_discrete(&a, &b)
        }
        Estimator::KsgCc => mi_continuous_continuous(
            &sample.u_numbers(),
            &sample.v_numbers(),
            config.k,
            config.seed,
        ),
        Estimator::RossDc => {
            let (labels, values) = if u.kind == FeatureKind::Discrete {
                (&sample.u, sample.v_numbers())
            } else {
                (&sample.v, sample.u_numbers())
            };
            let labels: Vec<_> = labels.iter().map(|c| label_key(c)).collect();
            mi_discrete_continuous(&labels, &values, config.k, config.seed)
        }
    }
}
