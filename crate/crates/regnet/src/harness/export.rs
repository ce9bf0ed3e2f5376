//! Plain-text result writers: CSV series and the summary JSON document.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use crate::attack::AttackRecord;
use crate::spectral::{MeanEsd, SpectralReport};

use super::config::ExperimentConfig;
use super::trial::{MonteCarloSummary, TrialResult};

/// Probe series of one trial: `action_units,lambda2,d_min,d_max,edges,connected`.
pub fn trial_csv(trial: &TrialResult) -> String {
    let mut s = String::from("action_units,lambda2,d_min,d_max,edges,connected\n");
    for r in &trial.series {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            r.action_units, r.lambda2, r.d_min, r.d_max, r.edges, r.connected
        );
    }
    s
}

/// Attack time series: `step,n,edges,d_min,d_max,lambda2,connected,action_units`.
pub fn attack_csv(records: &[AttackRecord]) -> String {
    let mut s = String::from("step,n,edges,d_min,d_max,lambda2,connected,action_units\n");
    for r in records {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            r.step, r.n, r.edges, r.d_min, r.d_max, r.lambda2, r.connected, r.action_units
        );
    }
    s
}

/// Mean spectral histogram: `bin_left,bin_right,density` rows and the
/// excluded count as a trailing comment.
pub fn esd_csv(mean: &MeanEsd) -> String {
    let mut s = String::from("bin_left,bin_right,density\n");
    for b in 0..mean.densities.len() {
        let _ = writeln!(
            s,
            "{},{},{}",
            mean.bin_edges[b],
            mean.bin_edges[b + 1],
            mean.densities[b]
        );
    }
    let _ = writeln!(s, "# excluded_count={}", mean.mean_excluded);
    s
}

/// Reference density curve sampled at 401 evenly spaced points of [-2, 2].
pub fn density_curve_csv<F: Fn(f64) -> f64>(density: F) -> String {
    let mut s = String::from("x,density\n");
    for t in 0..=400 {
        let x = -2.0 + 4.0 * t as f64 / 400.0;
        let _ = writeln!(s, "{},{}", x, density(x));
    }
    s
}

/// Laplacian spectrum: `index,eigenvalue` rows.
pub fn spectrum_csv(report: &SpectralReport) -> String {
    let mut s = String::from("index,eigenvalue\n");
    for (idx, ev) in report.eigenvalues.iter().enumerate() {
        let _ = writeln!(s, "{idx},{ev}");
    }
    s
}

/// Summary document: `{config_echo, per_seed, aggregate}` plus any
/// scenario-specific extras.
pub fn summary_json(
    cfg: &ExperimentConfig,
    summary: &MonteCarloSummary,
    extras: Option<(&str, serde_json::Value)>,
) -> serde_json::Value {
    let mut doc = json!({
        "config_echo": cfg.to_flat_map(),
        "per_seed": summary.per_seed,
        "aggregate": summary.aggregate,
    });
    if let Some((key, value)) = extras {
        doc.as_object_mut()
            .expect("object")
            .insert(key.to_string(), value);
    }
    doc
}

/// Generic `{config_echo, <key>: payload}` document for scenarios without a
/// Monte-Carlo aggregate.
pub fn scenario_json<T: Serialize>(
    cfg: &ExperimentConfig,
    key: &str,
    payload: &T,
) -> serde_json::Value {
    json!({
        "config_echo": cfg.to_flat_map(),
        key: payload,
    })
}
