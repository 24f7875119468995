//! Grids over `ε` and over the distinguisher threshold `τ`.

use rayon::prelude::*;
use redaction::domain::{rational_from_f64, rational_to_f64};
use redaction::rejectron::recommended_epsilon_transductive;
use serde_json::json;

use crate::config::{Algorithm, EpsilonSpec, ExperimentConfig};
use crate::error::{ConfigError, HarnessError, Result};
use crate::experiment::{generate, learn, measure, resolve_epsilon, run_trials, TrialResult};
use crate::report::{aggregate, Aggregate, Summary};

fn mean_of(rows: &[&TrialResult], get: impl Fn(&TrialResult) -> Option<f64>) -> Option<f64> {
    Aggregate::of(rows.iter().filter_map(|r| get(r))).map(|a| a.mean)
}

/// One block of trials per grid value. Rows whose value equals the
/// transductive recommendation are flagged `balanced`.
pub fn sweep_epsilon(cfg: &ExperimentConfig, grid: &[EpsilonSpec]) -> Result<(Vec<TrialResult>, Summary)> {
    let balanced = cfg
        .vc_d()
        .ok()
        .and_then(|d| recommended_epsilon_transductive(d, cfg.n, cfg.delta).ok());
    let mut all = Vec::new();
    let mut rows = Vec::new();
    let mut eps_used = Vec::new();
    for spec in grid {
        let mut c = cfg.clone();
        c.epsilon = *spec;
        let eps = resolve_epsilon(&c)?;
        let trials = run_trials(&c, eps)?;
        let eps_exact = rational_from_f64(eps)?;
        let refs: Vec<&TrialResult> = trials.iter().collect();
        let realizable = trials.iter().all(|t| t.realizable) && cfg.base.is_none();
        let within = realizable.then(|| trials.iter().all(|t| t.err_test <= eps_exact));
        rows.push(json!({
            "epsilon": eps,
            "balanced": balanced.is_some_and(|b| b == eps),
            "err_test_mean": mean_of(&refs, |t| Some(rational_to_f64(&t.err_test))),
            "err_test_max": trials.iter().map(|t| rational_to_f64(&t.err_test)).fold(0.0, f64::max),
            "rej_test_mean": mean_of(&refs, |t| Some(rational_to_f64(&t.rej_test))),
            "rej_z_mean": mean_of(&refs, |t| t.rej_z.as_ref().map(rational_to_f64)),
            "iterations_max": trials.iter().filter_map(|t| t.iterations).max(),
            "err_within_epsilon": within,
        }));
        eps_used.push(eps);
        all.extend(trials);
    }
    let passed = rows.iter().all(|r| r["err_within_epsilon"] != json!(false));
    let summary = Summary {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "sweep-epsilon".into(),
        trials: cfg.trials,
        epsilon: eps_used,
        aggregates: aggregate(&all),
        rows,
        checks: vec![],
        passed,
    };
    Ok((all, summary))
}

/// Scores every trial once and thresholds at each `τ` in ascending order.
pub fn sweep_threshold_trials(cfg: &ExperimentConfig, taus: &[f64]) -> Result<Vec<Vec<TrialResult>>> {
    if !matches!(cfg.algorithm, Algorithm::Distinguisher { .. }) {
        return Err(HarnessError::Config(ConfigError {
            field: "algorithm".into(),
            reason: "sweep-threshold needs the distinguisher".into(),
        }));
    }
    let mut taus = taus.to_vec();
    taus.sort_by(f64::total_cmp);
    let eps = resolve_epsilon(cfg).unwrap_or(0.0);
    (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let data = generate(cfg, t)?;
            let learner = learn(cfg, &data, eps)?;
            taus.iter()
                .map(|&tau| measure(cfg, t, &data, &learner, eps, Some(tau)))
                .collect()
        })
        .collect()
}

pub fn sweep_threshold(cfg: &ExperimentConfig, taus: &[f64]) -> Result<(Vec<TrialResult>, Summary)> {
    let per_trial = sweep_threshold_trials(cfg, taus)?;
    let all: Vec<TrialResult> = per_trial.iter().flatten().cloned().collect();
    let mut grid = taus.to_vec();
    grid.sort_by(f64::total_cmp);
    let rows = grid
        .iter()
        .enumerate()
        .map(|(k, &tau)| {
            let at: Vec<&TrialResult> = per_trial.iter().map(|v| &v[k]).collect();
            json!({
                "tau": if tau.is_finite() { json!(tau) } else { json!(tau.to_string()) },
                "rej_p_half_mean": mean_of(&at, |t| t.honest_rej.as_ref().map(rational_to_f64)),
                "rej_q_mean": mean_of(&at, |t| Some(rational_to_f64(&t.rej_test))),
                "rej_train_mean": mean_of(&at, |t| Some(rational_to_f64(&t.rej_train))),
                "selected_error_mean": mean_of(&at, |t| Some(rational_to_f64(&t.selected_error))),
                "err_q_mean": mean_of(&at, |t| Some(rational_to_f64(&t.err_test))),
            })
        })
        .collect();
    let summary = Summary {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "sweep-threshold".into(),
        trials: cfg.trials,
        epsilon: vec![],
        aggregates: aggregate(&all),
        rows,
        checks: vec![],
        passed: true,
    };
    Ok((all, summary))
}
