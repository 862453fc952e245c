// SPDX-License-Identifier: Apache-2.0

//! Result files: `manifest.json`, `records.csv`, `summary.json`.

use std::fs;
use std::io;
use std::path::Path;

use kinflow::complexity::{fit_records, InstanceRecord, LinearFit};
use serde_json::{json, Map, Number, Value};

use crate::config::ExperimentConfig;
use crate::scenario::{Detail, Outcome, Row};

pub const CSV_FORMAT_VERSION: u32 = 1;

pub const CSV_COLUMNS: [&str; 11] = [
    "scenario",
    "N",
    "seed",
    "t_measured",
    "bound_eps",
    "bound_region",
    "bound_total",
    "converged",
    "path_length",
    "path_bound",
    "invariant_max_residual",
];

/// 17 significant digits, so every value parses back to the same bits.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(format_float).unwrap_or_default()
}

pub fn csv_header() -> String {
    CSV_COLUMNS.join(",")
}

pub fn csv_row(r: &Row) -> String {
    [
        r.scenario.name().to_string(),
        r.n.to_string(),
        r.seed.to_string(),
        opt(r.t_measured),
        opt(r.bound_eps),
        opt(r.bound_region),
        opt(r.bound_total),
        r.converged.map(|c| c.to_string()).unwrap_or_default(),
        opt(r.path_length),
        opt(r.path_bound),
        format_float(r.invariant_max_residual),
    ]
    .join(",")
}

/// Rewrites every non-integer JSON number with 17 significant digits.
pub fn with_full_precision(v: Value) -> Value {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => match n.as_f64() {
            Some(f) if f.is_finite() => Value::Number(
                format_float(f)
                    .parse::<Number>()
                    .expect("valid JSON number"),
            ),
            _ => Value::Null,
        },
        Value::Array(a) => Value::Array(a.into_iter().map(with_full_precision).collect()),
        Value::Object(o) => Value::Object(
            o.into_iter()
                .map(|(k, v)| (k, with_full_precision(v)))
                .collect(),
        ),
        other => other,
    }
}

/// Non-finite values have no JSON number form; they are written as strings.
fn float(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(format_float(v))
    }
}

fn fit_json(fit: Option<LinearFit>) -> Value {
    match fit {
        Some(f) => json!({
            "slope": f.slope,
            "intercept": f.intercept,
            "r_squared": f.r_squared,
            "points": f.points,
        }),
        None => Value::Null,
    }
}

pub fn replay_command(o: &Outcome) -> String {
    format!(
        "kinflow replay {} {} {}",
        o.row.scenario, o.row.n, o.row.seed
    )
}

pub fn manifest(cfg: &ExperimentConfig, threads: usize) -> Value {
    with_full_precision(json!({
        "tool": "kinflow",
        "version": env!("CARGO_PKG_VERSION"),
        "scenario": cfg.scenario.name(),
        "seed": cfg.seed,
        "threads": threads,
        "csv_format_version": CSV_FORMAT_VERSION,
        "csv_columns": CSV_COLUMNS,
        "instance_seed": "splitmix64(splitmix64(splitmix64(seed) ^ N) ^ index)",
        "config": serde_json::to_value(cfg).expect("config serializes"),
    }))
}

pub fn summary(cfg: &ExperimentConfig, outcomes: &[Outcome]) -> Value {
    let mut s = Map::new();
    s.insert("scenario".into(), json!(cfg.scenario.name()));
    s.insert("instances".into(), json!(outcomes.len()));
    let failures: Vec<Value> = outcomes
        .iter()
        .filter_map(|o| {
            o.failure.as_ref().map(|reason| {
                json!({ "N": o.row.n, "seed": o.row.seed, "reason": reason, "replay": replay_command(o) })
            })
        })
        .collect();
    s.insert("invariant_failures".into(), json!(failures.len()));
    s.insert("failures".into(), Value::Array(failures));
    let max_residual = outcomes
        .iter()
        .map(|o| o.row.invariant_max_residual)
        .fold(0.0, f64::max);
    s.insert("max_invariant_residual".into(), float(max_residual));

    let mut records = Vec::new();
    let (mut time_v, mut path_v, mut resampled) = (0usize, 0usize, 0usize);
    let mut non_convergent = Vec::new();
    let (mut obs_dev, mut gate_dev) = (None::<f64>, None::<f64>);
    let mut ascent = Vec::new();
    for o in outcomes {
        match &o.detail {
            Detail::Study {
                resamples,
                pathological,
                time_violation,
                path_violation,
            } => {
                time_v += usize::from(*time_violation);
                path_v += usize::from(*path_violation);
                resampled += resamples;
                if o.row.converged == Some(false) {
                    non_convergent.push(
                        json!({ "N": o.row.n, "seed": o.row.seed, "pathological": pathological }),
                    );
                }
                records.push(InstanceRecord {
                    n: o.row.n,
                    index: 0,
                    seed: o.row.seed,
                    resamples: *resamples,
                    t_measured: o.row.t_measured.unwrap_or(f64::NAN),
                    bound_eps: o.row.bound_eps.unwrap_or(f64::NAN),
                    bound_region: o.row.bound_region,
                    bound_total: o.row.bound_total.unwrap_or(f64::NAN),
                    converged: o.row.converged == Some(true),
                    path_length: o.row.path_length,
                    path_bound: o.row.path_bound,
                    invariant_max_residual: o.row.invariant_max_residual,
                });
            }
            Detail::Analytic {
                observable_deviation,
                gate_deviation,
            } => {
                obs_dev = Some(obs_dev.unwrap_or(0.0).max(*observable_deviation));
                gate_dev = Some(gate_dev.unwrap_or(0.0).max(*gate_deviation));
            }
            Detail::Control {
                iterations,
                final_phi,
                final_distance,
                termination,
            } => ascent.push(json!({
                "N": o.row.n,
                "seed": o.row.seed,
                "iterations": iterations,
                "final_phi": final_phi,
                "final_distance": final_distance,
                "termination": termination,
            })),
            Detail::Error(_) => {}
        }
    }
    if !records.is_empty() {
        let (fit_tc, fit_path) = fit_records(&records);
        s.insert(
            "converged".into(),
            json!(records.iter().filter(|r| r.converged).count()),
        );
        s.insert("non_convergent".into(), Value::Array(non_convergent));
        s.insert("time_bound_violations".into(), json!(time_v));
        s.insert("path_bound_violations".into(), json!(path_v));
        s.insert("resampled".into(), json!(resampled));
        s.insert("fit_tc_vs_ln_n".into(), fit_json(fit_tc));
        s.insert("fit_ln_path_vs_ln_n".into(), fit_json(fit_path));
    } else {
        s.insert("time_bound_violations".into(), json!(0));
        s.insert("path_bound_violations".into(), json!(0));
    }
    if let (Some(a), Some(b)) = (obs_dev, gate_dev) {
        s.insert("max_observable_deviation".into(), float(a));
        s.insert("max_gate_deviation".into(), float(b));
        s.insert("max_analytic_deviation".into(), float(a.max(b)));
    }
    if !ascent.is_empty() {
        s.insert("ascent".into(), Value::Array(ascent));
    }
    with_full_precision(Value::Object(s))
}

fn pretty(v: &Value) -> String {
    let mut text = serde_json::to_string_pretty(v).expect("JSON serializes");
    text.push('\n');
    text
}

/// All files are written from the calling thread after every instance is done.
pub fn write_all(
    dir: &Path,
    manifest: &Value,
    outcomes: &[Outcome],
    summary: &Value,
) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("manifest.json"), pretty(manifest))?;
    let mut csv = csv_header();
    csv.push('\n');
    for o in outcomes {
        csv.push_str(&csv_row(&o.row));
        csv.push('\n');
    }
    fs::write(dir.join("records.csv"), csv)?;
    fs::write(dir.join("summary.json"), pretty(summary))
}
