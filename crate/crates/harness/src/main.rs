use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use redaction_harness::config::{EpsilonSpec, ExperimentConfig, TestScenario};
use redaction_harness::criteria;
use redaction_harness::error::{ConfigError, HarnessError, Result};
use redaction_harness::experiment::{resolve_epsilon, run_trials};
use redaction_harness::report::{aggregate, write_outputs, Format, Summary, SCHEMA_VERSION};
use redaction_harness::sweep::{sweep_epsilon, sweep_threshold};
use redaction_harness::verify::{lower_bound_summary, verify_bounds};

#[derive(Parser)]
#[command(
    name = "redaction",
    version,
    about = "Selective classification under covariate shift"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config trial count.
    #[arg(long)]
    trials: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured trials.
    Run(Common),
    /// Run one block of trials per epsilon value.
    SweepEpsilon {
        #[command(flatten)]
        common: Common,
        /// Comma-separated values; `auto-transductive`, `auto-pq` and
        /// `auto-massart` are accepted.
        #[arg(long, default_value = "0.05,0.1,0.2,0.3,0.5,auto-transductive")]
        grid: String,
    },
    /// Sweep the distinguisher threshold.
    SweepThreshold {
        #[command(flatten)]
        common: Common,
        /// Comma-separated values; `-inf` is accepted.
        #[arg(
            long,
            allow_hyphen_values = true,
            default_value = "-inf,0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1"
        )]
        grid: String,
    },
    /// Check the bounds for one config, or run the acceptance criteria when
    /// no config is given.
    Verify(Common),
    /// Run a lower-bound scenario and compare with `sqrt(d/n)`.
    Lowerbound(Common),
}

fn usage(field: &str, reason: impl Into<String>) -> HarnessError {
    HarnessError::Config(ConfigError {
        field: field.into(),
        reason: reason.into(),
    })
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let path = common
        .config
        .as_ref()
        .ok_or_else(|| usage("--config", "required for this command"))?;
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(t) = common.trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_epsilon_grid(grid: &str) -> Result<Vec<EpsilonSpec>> {
    grid.split(',')
        .map(|s| {
            let s = s.trim();
            serde_json::from_str::<EpsilonSpec>(s)
                .or_else(|_| serde_json::from_value::<EpsilonSpec>(serde_json::Value::String(s.into())))
                .map_err(|_| usage("--grid", format!("`{s}` is neither a number nor an auto keyword")))
        })
        .collect()
}

fn parse_tau_grid(grid: &str) -> Result<Vec<f64>> {
    grid.split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|t| !t.is_nan())
                .ok_or_else(|| usage("--grid", format!("`{s}` is not a threshold")))
        })
        .collect()
}

fn summary(
    command: &str,
    cfg: &ExperimentConfig,
    eps: f64,
    rows: &[redaction_harness::experiment::TrialResult],
) -> Summary {
    Summary {
        schema_version: SCHEMA_VERSION,
        command: command.into(),
        trials: cfg.trials,
        epsilon: vec![eps],
        aggregates: aggregate(rows),
        rows: vec![],
        checks: vec![],
        passed: true,
    }
}

fn print_summary(out: &Path, s: &Summary) {
    for c in &s.checks {
        println!("{:<32} {:?} {} (target {})", c.name, c.status, c.measured, c.target);
    }
    println!("wrote {}", out.display());
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(c) => {
            let cfg = load(&c)?;
            let eps = resolve_epsilon(&cfg)?;
            let rows = run_trials(&cfg, eps)?;
            let s = summary("run", &cfg, eps, &rows);
            write_outputs(&c.out, &rows, &s, c.format)?;
            print_summary(&c.out, &s);
        }
        Command::SweepEpsilon { common, grid } => {
            let cfg = load(&common)?;
            let (rows, s) = sweep_epsilon(&cfg, &parse_epsilon_grid(&grid)?)?;
            write_outputs(&common.out, &rows, &s, common.format)?;
            print_summary(&common.out, &s);
            if !s.passed {
                return Ok(ExitCode::from(2));
            }
        }
        Command::SweepThreshold { common, grid } => {
            let cfg = load(&common)?;
            let (rows, s) = sweep_threshold(&cfg, &parse_tau_grid(&grid)?)?;
            write_outputs(&common.out, &rows, &s, common.format)?;
            print_summary(&common.out, &s);
        }
        Command::Verify(c) if c.config.is_none() => {
            let results = criteria::run_all(c.seed.unwrap_or(0))?;
            for r in &results {
                println!("{r}");
            }
            let passed = results.iter().filter(|r| r.passed).count();
            println!("{passed}/{} criteria passed", results.len());
            if passed != results.len() {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Verify(c) => {
            let cfg = load(&c)?;
            let (rows, s) = verify_bounds(&cfg)?;
            write_outputs(&c.out, &rows, &s, c.format)?;
            print_summary(&c.out, &s);
            if !s.passed {
                return Ok(ExitCode::from(2));
            }
        }
        Command::Lowerbound(c) => {
            let cfg = load(&c)?;
            if !matches!(
                cfg.test_scenario,
                TestScenario::LowerBoundPq { .. } | TestScenario::LowerBoundTrans { .. }
            ) {
                return Err(usage(
                    "test_scenario",
                    "lowerbound needs lower_bound_pq or lower_bound_trans",
                ));
            }
            let eps = resolve_epsilon(&cfg)?;
            let rows = run_trials(&cfg, eps)?;
            let mut s = summary("lowerbound", &cfg, eps, &rows);
            s.rows = vec![lower_bound_summary(&cfg, &rows)];
            write_outputs(&c.out, &rows, &s, c.format)?;
            println!("{}", serde_json::to_string_pretty(&s.rows[0]).expect("json value"));
            println!("wrote {}", c.out.display());
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
