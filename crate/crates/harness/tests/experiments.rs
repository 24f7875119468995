use std::io::Write as _;

use redaction::domain::{rational, rational_int, rational_to_f64};
use redaction::rejectron::recommended_epsilon_transductive;
use redaction_harness::config::{EpsilonSpec, ExperimentConfig};
use redaction_harness::error::HarnessError;
use redaction_harness::experiment::{resolve_epsilon, run_trial, run_trials};
use redaction_harness::report::{aggregate, write_csv, Status};
use redaction_harness::sweep::{sweep_epsilon, sweep_threshold};
use redaction_harness::verify::verify_bounds;

fn dataset(rows: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(f, "role,x1,label").unwrap();
    f.write_all(rows.as_bytes()).unwrap();
    f
}

fn custom_config(path: &std::path::Path, extra: &str) -> ExperimentConfig {
    let text = format!(
        r#"{{
            "concept_class": {{"kind": "interval"}},
            "train_distribution": {{"kind": "uniform1d", "lo": 0, "hi": 5}},
            "target": {{"kind": "fixed", "concept": {{"Interval": {{"a": 2, "b": 3}}}}}},
            "test_scenario": {{"kind": "custom", "path": {path:?}}},
            "algorithm": {{"kind": "rejectron"}},
            "n": 4, "m": 3, "epsilon": 0.1
            {extra}
        }}"#,
        path = path.display().to_string()
    );
    ExperimentConfig::from_json(&text).unwrap()
}

#[test]
fn interval_worked_instance_as_config() {
    let f = dataset(
        "train,1,0\ntrain,2,1\ntrain,3,1\ntrain,4,0\ntest,1.5,\ntest,2.5,\ntest,3.8,\ntruth,1.5,0\ntruth,2.5,1\ntruth,3.8,0\n",
    );
    let cfg = custom_config(f.path(), r#", "lambda": 5, "base": {"Interval": {"a": 2, "b": 3}}"#);
    let t = run_trial(&cfg, 0, 0.1).unwrap();
    assert_eq!(t.rej_test, rational(2, 3));
    assert_eq!(t.err_test, rational_int(0));
    assert_eq!(t.rej_train, rational_int(0));
}

#[test]
fn test_equal_to_train_collapses() {
    let f = dataset("train,1,0\ntrain,2,1\ntrain,3,1\ntrain,4,0\ntest,1,\ntest,2,\ntest,3,\ntest,4,\n");
    let mut cfg = custom_config(f.path(), "");
    cfg.m = 4;
    let t = run_trial(&cfg, 0, 0.1).unwrap();
    assert_eq!(t.err_test, rational_int(0));
    assert_eq!(t.rej_test, rational_int(0));
    assert_eq!(t.iterations, Some(0));
}

fn spammer_config(trials: usize) -> ExperimentConfig {
    ExperimentConfig::from_json(&format!(
        r#"{{
            "concept_class": {{"kind": "threshold"}},
            "train_distribution": {{"kind": "uniform1d", "lo": 0, "hi": 1}},
            "target": {{"kind": "random_threshold", "lo": 0.2, "hi": 0.8}},
            "test_scenario": {{"kind": "spammer", "pool_size": 100, "mix_fraction": 0.5,
                               "pool": {{"kind": "uniform1d", "lo": -1, "hi": 2}}}},
            "algorithm": {{"kind": "rejectron"}},
            "n": 40, "m": 40, "epsilon": 0.1, "trials": {trials}, "seed": 7
        }}"#
    ))
    .unwrap()
}

#[test]
fn rerun_gives_identical_csv() {
    let cfg = spammer_config(20);
    let csv = |cfg: &ExperimentConfig| {
        let mut buf = Vec::new();
        write_csv(&run_trials(cfg, 0.1).unwrap(), &mut buf).unwrap();
        buf
    };
    let a = csv(&cfg);
    assert_eq!(a, csv(&cfg));
    let header = String::from_utf8(a).unwrap();
    assert!(header.starts_with("schema_version,trial,seed,"));

    let mut other = cfg.clone();
    other.seed = 8;
    assert_ne!(csv(&cfg), csv(&other));
}

#[test]
fn aggregates_ignore_trial_order_and_match_rows() {
    let rows = run_trials(&spammer_config(30), 0.1).unwrap();
    let mut shuffled = rows.clone();
    shuffled.reverse();
    shuffled.rotate_left(7);
    assert_eq!(aggregate(&rows), aggregate(&shuffled));

    let agg = aggregate(&rows);
    let mean = rows.iter().map(|r| rational_to_f64(&r.rej_test)).sum::<f64>() / rows.len() as f64;
    assert!((agg["rej_test"].mean - mean).abs() < 1e-12);
    let max = rows.iter().map(|r| rational_to_f64(&r.err_test)).fold(0.0, f64::max);
    assert_eq!(agg["err_test"].max, max);
}

#[test]
fn single_trial_is_independent_of_batch() {
    let cfg = spammer_config(10);
    let batch = run_trials(&cfg, 0.1).unwrap();
    assert_eq!(batch[6], run_trial(&cfg, 6, 0.1).unwrap());
}

#[test]
fn mislabeled_training_reports_not_applicable() {
    let f = dataset("train,1,1\ntrain,2,0\ntrain,3,1\ntrain,4,0\ntest,1.5,\ntest,2.5,\ntest,3.5,\ntest,4.5,\n");
    let mut cfg = custom_config(f.path(), "");
    cfg.m = 4;
    let (_, s) = verify_bounds(&cfg).unwrap();
    let status = |name: &str| s.checks.iter().find(|c| c.name == name).unwrap().status;
    assert_eq!(status("certain_error"), Status::NotApplicable);
    assert_eq!(status("train_rejection_le_inv_lambda"), Status::Pass);
    assert!(s.passed);
}

#[test]
fn realizable_suite_passes_verify() {
    let mut cfg = spammer_config(50);
    cfg.epsilon = EpsilonSpec::Auto(redaction_harness::config::AutoEpsilon::Transductive);
    cfg.test_scenario = redaction_harness::config::TestScenario::Spammer {
        pool: None,
        pool_size: 100,
        mix_fraction: 0.5,
    };
    let (_, s) = verify_bounds(&cfg).unwrap();
    assert!(s.passed, "{:?}", s.checks);
    for name in [
        "certain_error",
        "zero_train_rejection",
        "iteration_bound",
        "transductive_rej_z",
    ] {
        assert_eq!(
            s.checks.iter().find(|c| c.name == name).unwrap().status,
            Status::Pass,
            "{name}"
        );
    }
}

#[test]
fn delta_one_drops_confidence_term() {
    let mut cfg = spammer_config(1);
    cfg.epsilon = EpsilonSpec::Auto(redaction_harness::config::AutoEpsilon::Transductive);
    cfg.delta = 1.0;
    let eps = resolve_epsilon(&cfg).unwrap();
    assert_eq!(eps, recommended_epsilon_transductive(1, 40, 1.0).unwrap());
    assert!((eps - (2.0 / 40.0 * 80f64.log2()).sqrt()).abs() < 1e-12);
}

#[test]
fn epsilon_sweep_rows() {
    let cfg = spammer_config(5);
    let (_, s) = sweep_epsilon(&cfg, &[EpsilonSpec::Value(1.0)]).unwrap();
    assert_eq!(s.rows.len(), 1);
    assert!(s.rows[0]["iterations_max"].as_u64().unwrap() <= 1);

    let auto = EpsilonSpec::Auto(redaction_harness::config::AutoEpsilon::Transductive);
    let (_, s) = sweep_epsilon(&cfg, &[EpsilonSpec::Value(0.05), auto, EpsilonSpec::Value(0.5)]).unwrap();
    let flags: Vec<bool> = s.rows.iter().map(|r| r["balanced"].as_bool().unwrap()).collect();
    assert_eq!(flags, [false, true, false]);
    assert!(s
        .rows
        .iter()
        .all(|r| r["err_within_epsilon"] == serde_json::json!(true)));
    assert!(s.passed);
}

#[test]
fn threshold_sweep_is_monotone() {
    let cfg = ExperimentConfig::from_json(
        r#"{
            "concept_class": {"kind": "threshold"},
            "train_distribution": {"kind": "uniform1d", "lo": 0, "hi": 1},
            "target": {"kind": "fixed", "concept": {"Threshold": {"theta": 0.5}}},
            "base": {"Threshold": {"theta": 0.55}},
            "test_scenario": {"kind": "spammer", "pool_size": 50, "mix_fraction": 0.5},
            "algorithm": {"kind": "distinguisher", "tau": 0.5},
            "n": 100, "m": 100, "trials": 5, "seed": 3
        }"#,
    )
    .unwrap();
    let grid = [0.8, f64::NEG_INFINITY, 0.2, 0.5, 1.0];
    let (_, s) = sweep_threshold(&cfg, &grid).unwrap();
    assert_eq!(s.rows.len(), grid.len());
    assert_eq!(s.rows[0]["rej_q_mean"], serde_json::json!(0.0));
    assert_eq!(s.rows[0]["rej_p_half_mean"], serde_json::json!(0.0));
    for key in ["rej_q_mean", "rej_p_half_mean", "rej_train_mean"] {
        let col: Vec<f64> = s.rows.iter().map(|r| r[key].as_f64().unwrap()).collect();
        assert!(col.windows(2).all(|w| w[0] <= w[1]), "{key}: {col:?}");
    }
}

#[test]
fn unknown_keys_and_bad_fields_are_rejected() {
    let good = serde_json::to_value(spammer_config(1)).unwrap();
    let mut extra = good.clone();
    extra["color"] = serde_json::json!("red");
    assert!(matches!(
        ExperimentConfig::from_json(&extra.to_string()),
        Err(HarnessError::Parse(_))
    ));

    let mut nested = good.clone();
    nested["test_scenario"]["mixx"] = serde_json::json!(0.5);
    assert!(ExperimentConfig::from_json(&nested.to_string()).is_err());

    let mut zero = good.clone();
    zero["trials"] = serde_json::json!(0);
    match ExperimentConfig::from_json(&zero.to_string()) {
        Err(HarnessError::Config(e)) => assert_eq!(e.field, "trials"),
        other => panic!("{other:?}"),
    }

    let mut mix = good;
    mix["test_scenario"]["mix_fraction"] = serde_json::json!(1.5);
    match ExperimentConfig::from_json(&mix.to_string()) {
        Err(HarnessError::Config(e)) => assert_eq!(e.field, "test_scenario.mix_fraction"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn config_round_trips_through_json() {
    let cfg = spammer_config(3);
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(ExperimentConfig::from_json(&text).unwrap(), cfg);
}
