//! Runs the twelve acceptance criteria and prints one line per criterion.
//! Built with `harness = false` so the lines show up without `--nocapture`.

use std::process::ExitCode;

fn main() -> ExitCode {
    let seed = std::env::var("ACCEPTANCE_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let results = match redaction_harness::criteria::run_all(seed) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("acceptance suite aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    for r in &results {
        println!("{r}");
    }
    let passed = results.iter().filter(|r| r.passed).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
