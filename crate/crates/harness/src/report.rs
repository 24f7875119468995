//! Per-trial rows and order-independent aggregates.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use redaction::domain::{rational_to_f64, GuaranteeMode, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};
use crate::experiment::TrialResult;

pub const SCHEMA_VERSION: u32 = 1;

/// Fixed column order of `trials.csv`.
pub const COLUMNS: [&str; 23] = [
    "schema_version",
    "trial",
    "seed",
    "epsilon",
    "lambda",
    "tau",
    "n",
    "m",
    "err_test",
    "rej_test",
    "rej_train",
    "rej_z",
    "false_rej",
    "delta_ham",
    "honest_rej",
    "selected_error",
    "iterations",
    "iteration_bound",
    "err_q_exact",
    "rej_p_exact",
    "mode",
    "denoise_exact",
    "lb_event",
];

fn rate(r: &Rational) -> String {
    format!("{:.9}", rational_to_f64(r))
}

fn opt<T>(v: &Option<T>, f: impl Fn(&T) -> String) -> String {
    v.as_ref().map(f).unwrap_or_default()
}

impl TrialResult {
    pub fn record(&self) -> Vec<String> {
        vec![
            SCHEMA_VERSION.to_string(),
            self.trial.to_string(),
            self.seed.to_string(),
            format!("{}", self.epsilon),
            rate(&self.lambda),
            opt(&self.tau, |t| format!("{t}")),
            self.n.to_string(),
            self.m.to_string(),
            rate(&self.err_test),
            rate(&self.rej_test),
            rate(&self.rej_train),
            opt(&self.rej_z, rate),
            opt(&self.false_rej, rate),
            opt(&self.delta_ham, rate),
            opt(&self.honest_rej, rate),
            rate(&self.selected_error),
            opt(&self.iterations, usize::to_string),
            opt(&self.iteration_bound, usize::to_string),
            opt(&self.err_q_exact, rate),
            opt(&self.rej_p_exact, rate),
            match self.mode {
                GuaranteeMode::Guarantee => "guarantee".into(),
                GuaranteeMode::Exploratory => "exploratory".into(),
            },
            opt(&self.denoise_exact, bool::to_string),
            opt(&self.lb_event, bool::to_string),
        ]
    }

    /// The record as a JSON object keyed by column name; empty cells map to
    /// `null`.
    pub fn json(&self) -> serde_json::Value {
        let obj = COLUMNS
            .iter()
            .zip(self.record())
            .map(|(k, v)| {
                let val = if v.is_empty() {
                    serde_json::Value::Null
                } else if let Ok(x) = v.parse::<f64>() {
                    serde_json::json!(x)
                } else {
                    serde_json::Value::String(v)
                };
                (k.to_string(), val)
            })
            .collect();
        serde_json::Value::Object(obj)
    }
}

pub fn write_csv(rows: &[TrialResult], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| HarnessError::Io("trials.csv".into(), e.to_string());
    w.write_record(COLUMNS).map_err(io)?;
    for r in rows {
        w.write_record(r.record()).map_err(io)?;
    }
    w.flush()
        .map_err(|e| HarnessError::Io("trials.csv".into(), e.to_string()))
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Aggregate {
    pub count: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub q50: f64,
    pub q90: f64,
}

impl Aggregate {
    /// Sorts first, so the result does not depend on trial order.
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let q = |p: f64| v[((p * (v.len() - 1) as f64).round() as usize).min(v.len() - 1)];
        Some(Aggregate {
            count: v.len(),
            mean: v.iter().sum::<f64>() / v.len() as f64,
            min: v[0],
            max: v[v.len() - 1],
            q50: q(0.5),
            q90: q(0.9),
        })
    }
}

/// Aggregates of every numeric column, keyed by column name.
pub fn aggregate(rows: &[TrialResult]) -> BTreeMap<String, Aggregate> {
    type Column = (&'static str, fn(&TrialResult) -> Option<f64>);
    let cols: [Column; 12] = [
        ("err_test", |r| Some(rational_to_f64(&r.err_test))),
        ("rej_test", |r| Some(rational_to_f64(&r.rej_test))),
        ("rej_train", |r| Some(rational_to_f64(&r.rej_train))),
        ("rej_z", |r| r.rej_z.as_ref().map(rational_to_f64)),
        ("false_rej", |r| r.false_rej.as_ref().map(rational_to_f64)),
        ("delta_ham", |r| r.delta_ham.as_ref().map(rational_to_f64)),
        ("honest_rej", |r| r.honest_rej.as_ref().map(rational_to_f64)),
        ("selected_error", |r| Some(rational_to_f64(&r.selected_error))),
        ("iterations", |r| r.iterations.map(|t| t as f64)),
        ("err_q_exact", |r| r.err_q_exact.as_ref().map(rational_to_f64)),
        ("rej_p_exact", |r| r.rej_p_exact.as_ref().map(rational_to_f64)),
        ("err_q_plus_rej_p", |r| {
            Some(rational_to_f64(r.err_q_exact.as_ref()?) + rational_to_f64(r.rej_p_exact.as_ref()?))
        }),
    ];
    cols.iter()
        .filter_map(|(name, get)| Aggregate::of(rows.iter().filter_map(get)).map(|a| (name.to_string(), a)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub measured: String,
    pub target: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, measured: impl Into<String>, target: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if pass { Status::Pass } else { Status::Fail },
            measured: measured.into(),
            target: target.into(),
        }
    }

    pub fn not_applicable(name: &str, why: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: Status::NotApplicable,
            measured: String::new(),
            target: why.into(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Summary {
    pub schema_version: u32,
    pub command: String,
    pub trials: usize,
    pub epsilon: Vec<f64>,
    pub aggregates: BTreeMap<String, Aggregate>,
    /// Per-grid-value aggregates for sweeps, keyed by the grid value.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<serde_json::Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<Check>,
    pub passed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Writes `trials.csv` (or `trials.json`) and `summary.json` into `dir`.
pub fn write_outputs(dir: &Path, rows: &[TrialResult], summary: &Summary, format: Format) -> Result<()> {
    let io = |p: &Path, e: std::io::Error| HarnessError::Io(p.display().to_string(), e.to_string());
    std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    match format {
        Format::Csv => {
            let path = dir.join("trials.csv");
            let f = std::fs::File::create(&path).map_err(|e| io(&path, e))?;
            write_csv(rows, std::io::BufWriter::new(f))?;
        }
        Format::Json => {
            let path = dir.join("trials.json");
            let v: Vec<_> = rows.iter().map(TrialResult::json).collect();
            let text = serde_json::to_string_pretty(&v).expect("rows serialize");
            std::fs::write(&path, text + "\n").map_err(|e| io(&path, e))?;
        }
    }
    let path = dir.join("summary.json");
    let text = serde_json::to_string_pretty(summary).expect("summary serializes");
    std::fs::write(&path, text + "\n").map_err(|e| io(&path, e))
}
