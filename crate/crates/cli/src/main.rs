//! `featnet`: build a mutual-information feature network from a CSV file
//! and write graph.json, charts.json and manifest.json.
//!
//! Exit status is 0 on success, 1 for input errors and 2 for bad
//! configuration. Failures print one JSON object on stderr.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use featnet_core::ingest::{NullPolicy, DEFAULT_DISCRETE_THRESHOLD};
use featnet_core::pipeline::{run_pipeline, PipelineConfig, PipelineError};
use serde_json::json;

#[derive(Debug, Parser)]
#[command(name = "featnet", version, about = "Mutual-information feature network for a CSV table")]
struct Args {
    /// Input table with a header row.
    #[arg(long)]
    input: PathBuf,

    /// Directory for graph.json, charts.json and manifest.json.
    #[arg(long, default_value = ".")]
    output_dir: PathBuf,

    /// Columns with fewer distinct values than this are discrete.
    #[arg(long, default_value_t = DEFAULT_DISCRETE_THRESHOLD)]
    discrete_threshold: usize,

    /// Neighbour count for the k-NN estimators.
    #[arg(long, default_value_t = 3)]
    k_neighbors: usize,

    /// Fixed significance threshold; skips the component sweep.
    #[arg(long)]
    alpha: Option<f64>,

    /// drop-pairwise, null-category, fill-min or fill-median.
    #[arg(long, default_value = "drop-pairwise")]
    null_policy: NullPolicy,

    /// Per-feature policy, NAME=POLICY. Repeatable.
    #[arg(long = "null-policy-override", value_parser = parse_override)]
    null_policy_overrides: Vec<(String, NullPolicy)>,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = 100)]
    layout_iterations: usize,

    /// Points kept in each density-scatter overlay.
    #[arg(long, default_value_t = 2000)]
    max_scatter_points: usize,

    /// Fold categories beyond the N most frequent into one in charts.
    #[arg(long)]
    max_categories: Option<usize>,

    /// Field separator: a single character, or `tab`.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    delimiter: char,

    /// Skip chart generation.
    #[arg(long)]
    no_charts: bool,

    /// Record per-stage wall times in the manifest.
    #[arg(long)]
    timings: bool,
}

fn parse_override(raw: &str) -> Result<(String, NullPolicy), String> {
    let (name, policy) = raw
        .rsplit_once('=')
        .ok_or_else(|| format!("expected NAME=POLICY, got {raw:?}"))?;
    if name.is_empty() {
        return Err("feature name is empty".into());
    }
    Ok((name.to_string(), policy.parse()?))
}

fn parse_delimiter(raw: &str) -> Result<char, String> {
    match raw {
        "tab" | "\\t" | "\t" => Ok('\t'),
        _ => {
            let mut chars = raw.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(format!("delimiter must be one character, got {raw:?}")),
            }
        }
    }
}

impl Args {
    fn into_config(self) -> PipelineConfig {
        PipelineConfig {
            input_path: self.input,
            output_dir: self.output_dir,
            discrete_threshold: self.discrete_threshold,
            k_neighbors: self.k_neighbors,
            alpha_override: self.alpha,
            null_policy: self.null_policy,
            null_policy_overrides: self.null_policy_overrides.into_iter().collect::<BTreeMap<_, _>>(),
            seed: self.seed,
            layout_iterations: self.layout_iterations,
            max_scatter_points: self.max_scatter_points,
            max_categories: self.max_categories,
            delimiter: self.delimiter,
            emit_charts: !self.no_charts,
            record_timings: self.timings,
        }
    }
}

fn fail(kind: &str, message: String, code: u8) -> ExitCode {
    eprintln!("{}", json!({ "error": kind, "message": message }));
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(args) => args,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or_default().trim_start_matches("error: ");
            return fail("config", first.to_string(), 2);
        }
    };
    let config = args.into_config();
    match run_pipeline(&config) {
        Ok((run, _)) => {
            let m = &run.manifest;
            println!(
                "{}",
                json!({
                    "output_dir": config.output_dir.display().to_string(),
                    "n_features": m.n_features,
                    "n_records": m.n_records,
                    "n_edges_retained": m.n_edges_retained,
                    "n_components": m.n_components,
                    "alpha": m.alpha_chosen,
                })
            );
            ExitCode::SUCCESS
        }
        Err(e) => report(&e),
    }
}

fn report(e: &PipelineError) -> ExitCode {
    fail(e.kind(), e.to_string(), e.exit_code() as u8)
}
