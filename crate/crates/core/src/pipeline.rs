//! End-to-end run: ingest, classify, null policy, pairwise MI, backbone,
//! layout, charts, and the three JSON artifacts.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::backbone::{
    build_edge_list, score_edges, sparsify, sweep_alpha, BackboneError, BackboneGraph, WeightMatrix,
    WeightedFeatureGraph,
};
use crate::charts::{chart_for_pair, ChartConfig, ChartSpec, DEFAULT_MAX_SCATTER_POINTS};
use crate::export::{export_charts, export_graph, to_canonical_json, ExportError, GraphArtifact, GraphParams};
use crate::ingest::{
    apply_null_policy, load_table, read_table, FeatureKind, FeatureTable, IngestError, LoadOptions,
    NullPolicy, DEFAULT_DISCRETE_THRESHOLD,
};
use crate::layout::{fruchterman_reingold, LayoutPositions, DEFAULT_ITERATIONS};
use crate::mi::{mutual_information, Estimator, MiConfig, MiFlag, MiResult, DEFAULT_K};

pub const GRAPH_FILE: &str = "graph.json";
pub const CHARTS_FILE: &str = "charts.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{0} must be positive")]
    NotPositive(&'static str),
    #[error("discrete threshold must be at least 2, got {0}")]
    ThresholdTooSmall(usize),
    #[error("alpha override {0} is outside [0, 1]")]
    AlphaOutOfRange(f64),
    #[error("delimiter {0:?} must be a single ASCII character")]
    Delimiter(char),
    #[error("null policy override names unknown feature {0:?}")]
    UnknownFeature(String),
    #[error("null policy {policy} cannot apply to {kind} feature {feature:?}")]
    IncompatibleOverride {
        feature: String,
        kind: FeatureKind,
        policy: NullPolicy,
    },
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("feature network: {0}")]
    Graph(#[from] BackboneError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("writing {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl PipelineError {
    /// Process exit status: 1 for input problems, 2 for configuration.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            _ => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            PipelineError::Ingest(e) => e.code(),
            PipelineError::Config(_) => "config",
            PipelineError::Graph(_) => "graph",
            PipelineError::Export(_) => "export",
            PipelineError::Io { .. } => "io",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub input_path: PathBuf,
    pub output_dir: PathBuf,
    pub discrete_threshold: usize,
    pub k_neighbors: usize,
    /// Fixed threshold; skips the sweep.
    pub alpha_override: Option<f64>,
    pub null_policy: NullPolicy,
    pub null_policy_overrides: BTreeMap<String, NullPolicy>,
    pub seed: u64,
    pub layout_iterations: usize,
    pub max_scatter_points: usize,
    pub max_categories: Option<usize>,
    pub delimiter: char,
    pub emit_charts: bool,
    /// Adds per-stage wall times to the manifest (which then varies run to run).
    pub record_timings: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            input_path: PathBuf::new(),
            output_dir: PathBuf::from("."),
            discrete_threshold: DEFAULT_DISCRETE_THRESHOLD,
            k_neighbors: DEFAULT_K,
            alpha_override: None,
            null_policy: NullPolicy::DropPairwise,
            null_policy_overrides: BTreeMap::new(),
            seed: 0,
            layout_iterations: DEFAULT_ITERATIONS,
            max_scatter_points: DEFAULT_MAX_SCATTER_POINTS,
            max_categories: None,
            delimiter: ',',
            emit_charts: true,
            record_timings: false,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.discrete_threshold < 2 {
            return Err(ConfigError::ThresholdTooSmall(self.discrete_threshold));
        }
        if self.k_neighbors == 0 {
            return Err(ConfigError::NotPositive("k-neighbors"));
        }
        if self.layout_iterations == 0 {
            return Err(ConfigError::NotPositive("layout-iterations"));
        }
        if self.max_scatter_points == 0 {
            return Err(ConfigError::NotPositive("max-scatter-points"));
        }
        if self.max_categories == Some(0) {
            return Err(ConfigError::NotPositive("max-categories"));
        }
        if !self.delimiter.is_ascii() {
            return Err(ConfigError::Delimiter(self.delimiter));
        }
        if let Some(a) = self.alpha_override {
            if !(0.0..=1.0).contains(&a) {
                return Err(ConfigError::AlphaOutOfRange(a));
            }
        }
        Ok(())
    }

    fn load_options(&self) -> LoadOptions {
        LoadOptions {
            delimiter: self.delimiter as u8,
            ..LoadOptions::default()
        }
    }

    fn mi_config(&self) -> MiConfig {
        MiConfig {
            k: self.k_neighbors,
            seed: self.seed,
        }
    }

    fn chart_config(&self) -> ChartConfig {
        ChartConfig {
            max_scatter_points: self.max_scatter_points,
            max_categories: self.max_categories,
            seed: self.seed,
            ..ChartConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Warning {
    pub kind: String,
    pub features: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSummary {
    pub name: String,
    pub kind: FeatureKind,
    pub n_unique: usize,
    pub n_null: usize,
    pub all_null: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: PipelineConfig,
    pub n_features: usize,
    pub n_records: usize,
    /// All feature pairs, (n² − n) / 2.
    pub n_edges_full: usize,
    /// Pairs with positive MI.
    pub n_edges_positive: usize,
    pub n_edges_retained: usize,
    pub alpha_chosen: f64,
    pub alpha_from_sweep: bool,
    pub n_components: usize,
    pub n_charts: usize,
    pub estimator_counts: BTreeMap<String, usize>,
    pub features: Vec<FeatureSummary>,
    pub warnings: Vec<Warning>,
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

/// Everything a run computes, before serialization.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub table: FeatureTable,
    /// Upper-triangle pair results in (i, j) order.
    pub pair_results: Vec<((usize, usize), MiResult)>,
    pub weights: WeightMatrix,
    pub scored: WeightedFeatureGraph,
    pub backbone: BackboneGraph,
    pub layout: LayoutPositions,
    pub charts: Vec<ChartSpec>,
    pub manifest: RunManifest,
}

/// Serialized artifacts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifacts {
    pub graph: String,
    /// `None` when charts are disabled.
    pub charts: Option<String>,
    pub manifest: String,
}

struct Stopwatch {
    enabled: bool,
    #[cfg(not(target_arch = "wasm32"))]
    last: Option<std::time::Instant>,
    laps: BTreeMap<String, f64>,
}

impl Stopwatch {
    fn new(enabled: bool) -> Self {
        Stopwatch {
            enabled,
            #[cfg(not(target_arch = "wasm32"))]
            last: enabled.then(std::time::Instant::now),
            laps: BTreeMap::new(),
        }
    }

    fn lap(&mut self, stage: &str) {
        if !self.enabled {
            return;
        }
        #[cfg(not(target_arch = "wasm32"))]
        {
            let now = std::time::Instant::now();
            if let Some(last) = self.last.replace(now) {
                self.laps
                    .insert(stage.to_string(), (now - last).as_secs_f64() * 1000.0);
            }
        }
        #[cfg(target_arch = "wasm32")]
        let _ = stage;
    }

    fn finish(self) -> Option<BTreeMap<String, f64>> {
        self.enabled.then_some(self.laps)
    }
}

/// Classify columns and apply null policies.
///
/// The run-wide policy only touches columns it is defined for; explicit
/// per-feature overrides must be compatible or the run is rejected.
pub fn prepare_table(
    mut table: FeatureTable,
    config: &PipelineConfig,
    warnings: &mut Vec<Warning>,
) -> Result<FeatureTable, PipelineError> {
    for name in config.null_policy_overrides.keys() {
        if table.column(name).is_none() {
            return Err(ConfigError::UnknownFeature(name.clone()).into());
        }
    }
    table.classify(config.discrete_threshold);
    for col in &mut table.features {
        if col.all_null {
            warnings.push(Warning {
                kind: "all-null".into(),
                features: vec![col.name.clone()],
            });
        }
        let policy = match config.null_policy_overrides.get(&col.name) {
            Some(&p) if !p.applies_to(col.kind) => {
                return Err(ConfigError::IncompatibleOverride {
                    feature: col.name.clone(),
                    kind: col.kind,
                    policy: p,
                }
                .into())
            }
            Some(&p) => p,
            None if config.null_policy.applies_to(col.kind) => config.null_policy,
            None => NullPolicy::DropPairwise,
        };
        match apply_null_policy(col, policy) {
            Ok(filled) => *col = filled,
            Err(IngestError::AllNull(_)) if !config.null_policy_overrides.contains_key(&col.name) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(table)
}

fn pair_mi(table: &FeatureTable, pairs: &[(usize, usize)], cfg: &MiConfig) -> Vec<MiResult> {
    let one = |&(i, j): &(usize, usize)| mutual_information(&table.features[i], &table.features[j], cfg);
    #[cfg(feature = "parallel")]
    {
        pairs.par_iter().map(one).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        pairs.iter().map(one).collect()
    }
}

fn edge_charts(table: &FeatureTable, backbone: &BackboneGraph, cfg: &ChartConfig) -> Vec<ChartSpec> {
    let one = |e: &crate::backbone::MiEdge| chart_for_pair(table, e.u, e.v, cfg);
    #[cfg(feature = "parallel")]
    let mut charts: Vec<ChartSpec> = backbone.base.edges.par_iter().map(one).collect();
    #[cfg(not(feature = "parallel"))]
    let mut charts: Vec<ChartSpec> = backbone.base.edges.iter().map(one).collect();
    charts.sort_by(|a, b| a.chart_id.cmp(&b.chart_id));
    charts
}

/// Run every stage on an already-loaded table.
pub fn run_on_table(table: FeatureTable, config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    config.validate()?;
    let mut clock = Stopwatch::new(config.record_timings);
    let mut warnings = Vec::new();
    let table = prepare_table(table, config, &mut warnings)?;
    let n = table.n_features();
    if n < 2 {
        return Err(BackboneError::TooFewNodes(n).into());
    }
    clock.lap("ingest");

    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let results = pair_mi(&table, &pairs, &config.mi_config());
    let mut weights = WeightMatrix::zeros(n);
    let mut estimator_counts: BTreeMap<String, usize> = BTreeMap::new();
    for (&(i, j), r) in pairs.iter().zip(&results) {
        weights.set(i, j, r.value);
        let tag = match r.estimator {
            Estimator::PluginDd => "plugin-dd",
            Estimator::KsgCc => "ksg-cc",
            Estimator::RossDc => "ross-dc",
        };
        *estimator_counts.entry(tag.to_string()).or_insert(0) += 1;
        if let Some(flag) = r.flag {
            warnings.push(Warning {
                kind: match flag {
                    MiFlag::InsufficientSample => "insufficient-sample".into(),
                    MiFlag::ConstantFeature => "constant-feature".into(),
                },
                features: vec![table.features[i].name.clone(), table.features[j].name.clone()],
            });
        }
    }
    clock.lap("mutual_information");

    let scored = score_edges(&build_edge_list(&weights)?);
    let backbone = match config.alpha_override {
        Some(a) => sparsify(&scored, a),
        None => sweep_alpha(&scored),
    };
    clock.lap("backbone");

    let layout = fruchterman_reingold(&backbone, config.layout_iterations, config.seed);
    clock.lap("layout");

    let charts = if config.emit_charts {
        edge_charts(&table, &backbone, &config.chart_config())
    } else {
        Vec::new()
    };
    clock.lap("charts");

    let features = table
        .features
        .iter()
        .map(|c| FeatureSummary {
            name: c.name.clone(),
            kind: c.kind,
            n_unique: c.n_unique,
            n_null: c.null_count(),
            all_null: c.all_null,
        })
        .collect();
    let manifest = RunManifest {
        config: config.clone(),
        n_features: n,
        n_records: table.n_records,
        n_edges_full: pairs.len(),
        n_edges_positive: scored.edges.len(),
        n_edges_retained: backbone.base.edges.len(),
        alpha_chosen: backbone.alpha_chosen,
        alpha_from_sweep: config.alpha_override.is_none(),
        n_components: backbone.n_components,
        n_charts: charts.len(),
        estimator_counts,
        features,
        warnings,
        timings_ms: clock.finish(),
    };

    Ok(PipelineRun {
        table,
        pair_results: pairs.into_iter().zip(results).collect(),
        weights,
        scored,
        backbone,
        layout,
        charts,
        manifest,
    })
}

impl PipelineRun {
    pub fn graph_artifact(&self) -> GraphArtifact {
        export_graph(
            &self.backbone,
            &self.layout,
            &self.table,
            GraphParams {
                discrete_threshold: self.manifest.config.discrete_threshold,
                k_neighbors: self.manifest.config.k_neighbors,
                seed: self.manifest.config.seed,
                with_charts: self.manifest.config.emit_charts,
            },
        )
    }

    pub fn artifacts(&self) -> Result<Artifacts, ExportError> {
        let graph = to_canonical_json(&self.graph_artifact(), false)?;
        let charts = if self.manifest.config.emit_charts {
            Some(to_canonical_json(&export_charts(&self.charts)?, false)?)
        } else {
            None
        };
        let manifest = to_canonical_json(&self.manifest, true)?;
        Ok(Artifacts {
            graph,
            charts,
            manifest,
        })
    }
}

/// Run from CSV text held in memory.
pub fn run_on_text(text: &str, config: &PipelineConfig) -> Result<PipelineRun, PipelineError> {
    config.validate()?;
    let table = read_table(text.as_bytes(), &config.load_options())?;
    run_on_table(table, config)
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), PipelineError> {
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|source| PipelineError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Load `config.input_path`, run, and write the artifacts into `config.output_dir`.
pub fn run_pipeline(config: &PipelineConfig) -> Result<(PipelineRun, Artifacts), PipelineError> {
    config.validate()?;
    let table = load_table(&config.input_path, &config.load_options())?;
    let run = run_on_table(table, config)?;
    let artifacts = run.artifacts()?;
    std::fs::create_dir_all(&config.output_dir).map_err(|source| PipelineError::Io {
        path: config.output_dir.display().to_string(),
        source,
    })?;
    write(&config.output_dir, GRAPH_FILE, &artifacts.graph)?;
    if let Some(charts) = &artifacts.charts {
        write(&config.output_dir, CHARTS_FILE, charts)?;
    }
    write(&config.output_dir, MANIFEST_FILE, &artifacts.manifest)?;
    Ok((run, artifacts))
}
