//! The shipped example configs parse and run.

use std::path::Path;

use redaction_harness::config::ExperimentConfig;
use redaction_harness::report::Status;
use redaction_harness::verify::verify_bounds;

#[test]
fn example_configs_run() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_none_or(|e| e != "json") {
            continue;
        }
        let mut cfg = ExperimentConfig::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        cfg.trials = 3;
        let (rows, s) = verify_bounds(&cfg).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(rows.len(), 3);
        assert!(
            s.checks.iter().all(|c| c.status != Status::Fail),
            "{}: {:?}",
            path.display(),
            s.checks
        );
        seen += 1;
    }
    assert!(seen >= 5);
}
