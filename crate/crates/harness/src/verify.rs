//! Bound checks on the trials of one config.

use redaction::domain::{rational_from_f64, rational_int, rational_to_f64, Rational};

use crate::config::{Algorithm, AutoEpsilon, EpsilonSpec, ExperimentConfig, LambdaKeyword, LambdaSpec, TestScenario};
use crate::error::Result;
use crate::experiment::{resolve_epsilon, run_trials, TrialResult};
use crate::report::{aggregate, Check, Status, Summary};

/// Allowed empirical violation fraction for a bound that fails with
/// probability `delta`: `δ + 2√(δ(1-δ)/trials) + 0.02`.
pub fn mc_slack(delta: f64, trials: usize) -> f64 {
    delta + 2.0 * (delta * (1.0 - delta) / trials as f64).sqrt() + 0.02
}

fn violation_check(name: &str, violations: usize, trials: usize, delta: f64) -> Check {
    let frac = violations as f64 / trials as f64;
    let allowed = mc_slack(delta, trials);
    Check::new(
        name,
        frac <= allowed,
        format!("{violations}/{trials} = {frac:.4}"),
        format!("<= {allowed:.4}"),
    )
}

fn all_check(name: &str, trials: &[TrialResult], ok: impl Fn(&TrialResult) -> bool, target: &str) -> Check {
    let bad = trials.iter().filter(|t| !ok(t)).count();
    Check::new(name, bad == 0, format!("{bad} violating of {}", trials.len()), target)
}

/// Whether `z` in this scenario is an iid draw that the test set was built
/// from, so that the transductive rejection bound speaks about it.
fn z_is_iid_source(s: &TestScenario) -> bool {
    matches!(
        s,
        TestScenario::IidQ { distribution: None } | TestScenario::Spammer { .. }
    )
}

pub fn checks(cfg: &ExperimentConfig, trials: &[TrialResult], epsilon: f64) -> Result<Vec<Check>> {
    let committee = matches!(cfg.algorithm, Algorithm::Rejectron | Algorithm::Urejectron);
    let eps = rational_from_f64(epsilon)?;
    let mut out = Vec::new();
    // Denoised runs count as realizable exactly when the relabeling is exact.
    let realizable_runs: Vec<TrialResult> = trials
        .iter()
        .filter(|t| {
            if cfg.denoise.is_some() {
                t.denoise_exact == Some(true)
            } else {
                t.realizable
            }
        })
        .cloned()
        .collect();
    let realizable = cfg.base.is_none() && committee && realizable_runs.len() == trials.len();
    let certain = |name: &str| Check::not_applicable(name, "needs realizable labels and h = ERM");

    if !committee {
        out.push(Check::not_applicable("certain_error", "score-based selection"));
    } else if cfg.base.is_none() && (realizable || cfg.denoise.is_some()) && !realizable_runs.is_empty() {
        out.push(all_check(
            "certain_error",
            &realizable_runs,
            |t| t.err_test <= eps,
            "err_test <= epsilon in every trial",
        ));
    } else {
        out.push(certain("certain_error"));
    }

    let default_lambda = matches!(cfg.lambda, LambdaSpec::Keyword(LambdaKeyword::Default));
    if committee
        && default_lambda
        && cfg.base.is_none()
        && (realizable || cfg.denoise.is_some())
        && !realizable_runs.is_empty()
    {
        out.push(all_check(
            "zero_train_rejection",
            &realizable_runs,
            |t| t.rej_train == rational_int(0),
            "rej_train = 0 in every trial",
        ));
    } else {
        out.push(certain("zero_train_rejection"));
    }

    if committee {
        out.push(all_check(
            "train_rejection_le_inv_lambda",
            trials,
            |t| t.rej_train <= Rational::from_integer(1.into()) / &t.lambda,
            "rej_train <= 1/lambda in every trial",
        ));
        out.push(all_check(
            "iteration_bound",
            trials,
            |t| match (t.iterations, t.iteration_bound) {
                (Some(it), Some(b)) => it <= b,
                _ => true,
            },
            "T <= floor(1/epsilon) in every trial",
        ));
    } else {
        out.push(Check::not_applicable(
            "train_rejection_le_inv_lambda",
            "score-based selection",
        ));
        out.push(Check::not_applicable("iteration_bound", "score-based selection"));
    }

    let auto = match cfg.epsilon {
        EpsilonSpec::Auto(a) => Some(a),
        EpsilonSpec::Value(_) => None,
    };
    if auto == Some(AutoEpsilon::Transductive) && committee && realizable && z_is_iid_source(&cfg.test_scenario) {
        let bad = trials
            .iter()
            .filter(|t| t.rej_z.as_ref().is_some_and(|r| *r > eps))
            .count();
        out.push(violation_check("transductive_rej_z", bad, trials.len(), cfg.delta));
    } else {
        out.push(Check::not_applicable(
            "transductive_rej_z",
            "needs epsilon = auto-transductive, realizable labels and z iid from the training distribution",
        ));
    }

    let exact_pq = trials
        .iter()
        .all(|t| t.err_q_exact.is_some() && t.rej_p_exact.is_some());
    if auto == Some(AutoEpsilon::Pq) && committee && realizable && exact_pq {
        let two = rational_int(2) * &eps;
        let bad = trials
            .iter()
            .filter(|t| {
                t.err_q_exact.as_ref().is_some_and(|e| *e > two) || t.rej_p_exact.as_ref().is_some_and(|r| *r > eps)
            })
            .count();
        out.push(violation_check("pq_guarantee", bad, trials.len(), cfg.delta));
    } else {
        out.push(Check::not_applicable(
            "pq_guarantee",
            "needs epsilon = auto-pq, realizable labels and discrete P and Q",
        ));
    }

    if cfg.denoise.is_some() {
        let exact = trials.iter().filter(|t| t.denoise_exact == Some(true)).count();
        let need = 1.0 - 2.0 * cfg.delta;
        let frac = exact as f64 / trials.len() as f64;
        out.push(Check::new(
            "denoise_exact",
            frac >= need,
            format!("{exact}/{} = {frac:.4}", trials.len()),
            format!(">= {need:.4}"),
        ));
    } else {
        out.push(Check::not_applicable("denoise_exact", "no denoising stage"));
    }
    Ok(out)
}

pub fn verify_bounds(cfg: &ExperimentConfig) -> Result<(Vec<TrialResult>, Summary)> {
    let epsilon = resolve_epsilon(cfg)?;
    let trials = run_trials(cfg, epsilon)?;
    let checks = checks(cfg, &trials, epsilon)?;
    let passed = checks.iter().all(|c| c.status != Status::Fail);
    let summary = Summary {
        schema_version: crate::report::SCHEMA_VERSION,
        command: "verify".into(),
        trials: cfg.trials,
        epsilon: vec![epsilon],
        aggregates: aggregate(&trials),
        rows: vec![],
        checks,
        passed,
    };
    Ok((trials, summary))
}

/// `mean(rej_P + err_Q)` (PQ) or `mean(rej_z + err_x̃)` (transductive)
/// against `√(d / min(m, n))`.
pub fn lower_bound_summary(cfg: &ExperimentConfig, trials: &[TrialResult]) -> serde_json::Value {
    let d = match cfg.test_scenario {
        TestScenario::LowerBoundPq { d } | TestScenario::LowerBoundTrans { d } => d,
        _ => cfg.vc_d().unwrap_or(1),
    };
    let vals: Vec<f64> = trials
        .iter()
        .filter_map(|t| match (&t.err_q_exact, &t.rej_p_exact, &t.rej_z) {
            (Some(e), Some(r), _) => Some(rational_to_f64(e) + rational_to_f64(r)),
            (_, _, Some(rz)) => Some(rational_to_f64(rz) + rational_to_f64(&t.err_test)),
            _ => None,
        })
        .collect();
    let mean = vals.iter().sum::<f64>() / vals.len().max(1) as f64;
    let rate = (d as f64 / cfg.n.min(cfg.m).max(1) as f64).sqrt();
    let events = trials.iter().filter(|t| t.lb_event == Some(true)).count();
    serde_json::json!({
        "d": d,
        "n": cfg.n,
        "m": cfg.m,
        "measured_mean": mean,
        "sqrt_d_over_n": rate,
        "ratio": mean / rate,
        "adversary_events": trials.iter().any(|t| t.lb_event.is_some()).then_some(events),
    })
}
