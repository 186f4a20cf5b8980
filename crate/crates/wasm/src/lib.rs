//! Browser bindings for the demo page in `www/`.
//!
//! Three operations are exposed: a KSG estimate on a seeded bivariate
//! Gaussian, a backbone that can be re-cut at any significance threshold,
//! and the record-level chart behind any feature pair. The logic lives in
//! [`session`] so it can be tested natively; the `#[wasm_bindgen]` layer only
//! converts errors.

use wasm_bindgen::prelude::*;

pub mod session {
    use featnet_core::backbone::{sparsify, sweep_curve, BackboneGraph};
    use featnet_core::charts::{chart_for_pair, ChartConfig};
    use featnet_core::export::{export_graph, to_canonical_json, GraphParams};
    use featnet_core::layout::fruchterman_reingold;
    use featnet_core::mi::mi_continuous_continuous;
    use featnet_core::pipeline::{run_on_text, PipelineConfig, PipelineRun};
    use featnet_core::synthetic::{bivariate_gaussian, gaussian_mi};
    use serde_json::json;

    /// Points returned for plotting by [`gaussian_demo`].
    const DEMO_POINTS: usize = 600;

    /// KSG estimate against the analytic value, plus a sample of the points.
    pub fn gaussian_demo(rho: f64, n: usize, k: usize, seed: u64) -> Result<String, String> {
        if !(rho > -1.0 && rho < 1.0) {
            return Err(format!("rho must lie in (-1, 1), got {rho}"));
        }
        if n <= k || k == 0 {
            return Err(format!("need 0 < k < n, got k={k}, n={n}"));
        }
        let (x, y) = bivariate_gaussian(n, rho, seed);
        let estimate = mi_continuous_continuous(&x, &y, k, seed).value;
        let stride = n.div_ceil(DEMO_POINTS);
        let points: Vec<[f64; 2]> = x.iter().zip(&y).step_by(stride).map(|(&a, &b)| [a, b]).collect();
        let out = json!({
            "rho": rho,
            "n": n,
            "k": k,
            "estimate": estimate,
            "analytic": gaussian_mi(rho),
            "points": points,
        });
        to_canonical_json(&out, false).map_err(|e| e.to_string())
    }

    /// One uploaded table with its MI weights computed once.
    pub struct Session {
        run: PipelineRun,
    }

    impl Session {
        pub fn new(csv: &str, discrete_threshold: usize, k: usize, seed: u64) -> Result<Session, String> {
            let config = PipelineConfig {
                discrete_threshold,
                k_neighbors: k,
                seed,
                emit_charts: false,
                ..PipelineConfig::default()
            };
            let run = run_on_text(csv, &config).map_err(|e| e.to_string())?;
            Ok(Session { run })
        }

        fn backbone(&self, alpha: Option<f64>) -> Result<BackboneGraph, String> {
            match alpha {
                None => Ok(self.run.backbone.clone()),
                Some(a) if (0.0..=1.0).contains(&a) => Ok(sparsify(&self.run.scored, a)),
                Some(a) => Err(format!("alpha must lie in [0, 1], got {a}")),
            }
        }

        /// Graph artifact at `alpha`, or at the sweep's choice when `None`.
        pub fn graph_json(&self, alpha: Option<f64>) -> Result<String, String> {
            let config = &self.run.manifest.config;
            let graph = self.backbone(alpha)?;
            let layout = fruchterman_reingold(&graph, config.layout_iterations, config.seed);
            let params = GraphParams {
                discrete_threshold: config.discrete_threshold,
                k_neighbors: config.k_neighbors,
                seed: config.seed,
                with_charts: true,
            };
            to_canonical_json(&export_graph(&graph, &layout, &self.run.table, params), false).map_err(|e| e.to_string())
        }

        /// Component count at every candidate threshold.
        pub fn sweep_json(&self) -> Result<String, String> {
            let out = json!({
                "chosen": self.run.backbone.alpha_chosen,
                "curve": sweep_curve(&self.run.scored),
            });
            to_canonical_json(&out, false).map_err(|e| e.to_string())
        }

        /// Chart for features `u` and `v`, in the charts-artifact entry format.
        pub fn chart_json(&self, u: usize, v: usize) -> Result<String, String> {
            let n = self.run.table.n_features();
            if u >= n || v >= n || u == v {
                return Err(format!("no feature pair ({u}, {v}) among {n} features"));
            }
            let config = ChartConfig {
                seed: self.run.manifest.config.seed,
                ..ChartConfig::default()
            };
            let spec = chart_for_pair(&self.run.table, u, v, &config);
            let weight = self.run.weights.get(u, v);
            let out = json!({ "id": spec.chart_id, "weight": weight, "chart": spec });
            to_canonical_json(&out, false).map_err(|e| e.to_string())
        }
    }
}

fn js_err(message: String) -> JsError {
    JsError::new(&message)
}

#[wasm_bindgen]
pub fn gaussian_mi_demo(rho: f64, n: usize, k: usize, seed: u32) -> Result<String, JsError> {
    session::gaussian_demo(rho, n, k, seed as u64).map_err(js_err)
}

/// Sample table bundled into the page.
#[wasm_bindgen]
pub fn sample_csv(records: usize, seed: u32) -> String {
    featnet_core::synthetic::planted_blocks(records, 4, 4, seed as u64).csv
}

#[wasm_bindgen]
pub struct Explorer {
    inner: session::Session,
}

#[wasm_bindgen]
impl Explorer {
    #[wasm_bindgen(constructor)]
    pub fn new(csv: &str, discrete_threshold: usize, k: usize, seed: u32) -> Result<Explorer, JsError> {
        let inner = session::Session::new(csv, discrete_threshold, k, seed as u64).map_err(js_err)?;
        Ok(Explorer { inner })
    }

    /// Graph JSON; pass `undefined` for the swept threshold.
    pub fn graph_json(&self, alpha: Option<f64>) -> Result<String, JsError> {
        self.inner.graph_json(alpha).map_err(js_err)
    }

    pub fn sweep_json(&self) -> Result<String, JsError> {
        self.inner.sweep_json().map_err(js_err)
    }

    pub fn chart_json(&self, u: usize, v: usize) -> Result<String, JsError> {
        self.inner.chart_json(u, v).map_err(js_err)
    }
}
