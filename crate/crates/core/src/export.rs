//! Graph and chart artifacts consumed by the explorer.
//!
//! Output is canonical: object keys sorted, floats rounded to 9 significant
//! digits, one trailing newline. Identical inputs give identical bytes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::backbone::BackboneGraph;
use crate::charts::{chart_id, ChartSpec};
use crate::ingest::{FeatureKind, FeatureTable};
use crate::layout::LayoutPositions;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("duplicate chart id {0:?}")]
    DuplicateChartId(String),
    #[error("edge ({0}, {1}) references chart {2:?} which is missing")]
    MissingChart(usize, usize, String),
    #[error("malformed artifact: {0}")]
    Json(#[from] serde_json::Error),
}

/// Significant digits kept for every float in an artifact.
pub const FLOAT_DIGITS: usize = 9;

pub fn round_significant(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{:.*e}", FLOAT_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

fn canonicalize(value: &mut Value) {
    match value {
        Value::Number(n) if !(n.is_i64() || n.is_u64()) => {
            let x = n.as_f64().expect("float");
            *value = serde_json::Number::from_f64(round_significant(x)).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(canonicalize),
        Value::Object(map) => map.values_mut().for_each(canonicalize),
        _ => {}
    }
}

/// Canonical JSON text for any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T, pretty: bool) -> Result<String, ExportError> {
    let mut v = serde_json::to_value(value)?;
    canonicalize(&mut v);
    let mut text = if pretty {
        serde_json::to_string_pretty(&v)?
    } else {
        serde_json::to_string(&v)?
    };
    text.push('\n');
    Ok(text)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub n_features: usize,
    pub n_records: usize,
    pub alpha: f64,
    pub n_components: usize,
    pub discrete_threshold: usize,
    pub k_neighbors: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub name: String,
    pub kind: FeatureKind,
    pub degree: usize,
    pub x: f64,
    pub y: f64,
    pub component: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub source: usize,
    pub target: usize,
    pub weight: f64,
    pub alpha: f64,
    /// Chart id, absent when charts were not generated.
    pub chart: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphArtifact {
    pub meta: GraphMeta,
    pub nodes: Vec<GraphNode>,
    pub edges: Vec<GraphEdge>,
}

/// Parameters echoed into the graph metadata.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    pub discrete_threshold: usize,
    pub k_neighbors: usize,
    pub seed: u64,
    pub with_charts: bool,
}

pub fn export_graph(
    backbone: &BackboneGraph,
    layout: &LayoutPositions,
    table: &FeatureTable,
    params: GraphParams,
) -> GraphArtifact {
    let nodes = table
        .features
        .iter()
        .enumerate()
        .map(|(id, col)| GraphNode {
            id,
            name: col.name.clone(),
            kind: col.kind,
            degree: backbone.base.degrees[id],
            x: layout.coords[id][0],
            y: layout.coords[id][1],
            component: backbone.component_id[id],
        })
        .collect();
    let edges = backbone
        .base
        .edges
        .iter()
        .map(|e| GraphEdge {
            source: e.u,
            target: e.v,
            weight: e.weight,
            alpha: e.alpha,
            chart: params.with_charts.then(|| chart_id(e.u, e.v)),
        })
        .collect();
    GraphArtifact {
        meta: GraphMeta {
            n_features: table.n_features(),
            n_records: table.n_records,
            alpha: backbone.alpha_chosen,
            n_components: backbone.n_components,
            discrete_threshold: params.discrete_threshold,
            k_neighbors: params.k_neighbors,
            seed: params.seed,
        },
        nodes,
        edges,
    }
}

/// Charts keyed by chart id.
pub fn export_charts(specs: &[ChartSpec]) -> Result<BTreeMap<String, ChartSpec>, ExportError> {
    let mut out = BTreeMap::new();
    for spec in specs {
        if out.insert(spec.chart_id.clone(), spec.clone()).is_some() {
            return Err(ExportError::DuplicateChartId(spec.chart_id.clone()));
        }
    }
    Ok(out)
}

pub fn parse_graph(text: &str) -> Result<GraphArtifact, ExportError> {
    Ok(serde_json::from_str(text)?)
}

/// Parse a charts artifact, restoring each spec's id from its key.
pub fn parse_charts(text: &str) -> Result<BTreeMap<String, ChartSpec>, ExportError> {
    let mut map: BTreeMap<String, ChartSpec> = serde_json::from_str(text)?;
    for (id, spec) in map.iter_mut() {
        spec.chart_id = id.clone();
    }
    Ok(map)
}

/// Every edge's chart exists and every chart belongs to an edge.
pub fn check_cross_references(
    graph: &GraphArtifact,
    charts: &BTreeMap<String, ChartSpec>,
) -> Result<(), ExportError> {
    for e in &graph.edges {
        let id = e.chart.clone().unwrap_or_default();
        if !charts.contains_key(&id) {
            return Err(ExportError::MissingChart(e.source, e.target, id));
        }
    }
    let referenced: std::collections::BTreeSet<&str> =
        graph.edges.iter().filter_map(|e| e.chart.as_deref()).collect();
    if let Some(orphan) = charts.keys().find(|k| !referenced.contains(k.as_str())) {
        return Err(ExportError::MissingChart(0, 0, orphan.clone()));
    }
    Ok(())
}
