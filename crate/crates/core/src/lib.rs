//! Mutual-information feature networks for exploratory analysis of mixed
//! tabular data.
//!
//! A run loads a delimited table, classifies each column as discrete or
//! continuous, scores every pair of columns by mutual information, keeps the
//! statistically significant edges with a disparity-filter backbone, lays the
//! network out, and emits a record-level chart for each kept edge.
//!
//! ```no_run
//! use featnet_core::pipeline::{run_pipeline, PipelineConfig};
//!
//! let config = PipelineConfig {
//!     input_path: "data.csv".into(),
//!     output_dir: "out".into(),
//!     ..PipelineConfig::default()
//! };
//! let (run, _artifacts) = run_pipeline(&config).unwrap();
//! println!("{} components", run.backbone.n_components);
//! ```

pub mod backbone;
pub mod charts;
pub mod export;
pub mod ingest;
pub mod layout;
pub mod mi;
pub mod pipeline;
pub mod synthetic;

pub use backbone::{BackboneGraph, MiEdge, WeightMatrix, WeightedFeatureGraph};
pub use charts::{ChartSpec, ChartType};
pub use ingest::{Cell, FeatureColumn, FeatureKind, FeatureTable, NullPolicy};
pub use layout::LayoutPositions;
pub use mi::{MiConfig, MiResult};
pub use pipeline::{PipelineConfig, PipelineRun, RunManifest};
