//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage or input validation error, 2 runtime or
//! solver failure.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use log::info;

use crate::controller::plan_step;
use crate::games::gne_solve;
use crate::scenario::io::{self, RunManifest};
use crate::scenario::{self as sc, ConfigError, ParsedFile};
use crate::simulator::{run_scenario, trace_resilience, BaselinePolicy, ScenarioConfig};

pub const OUT_DIR_ENV: &str = "RESCON_OUT_DIR";

pub const TRACE_FILE: &str = "trace.jsonl";
pub const REPORT_FILE: &str = "report.json";
pub const MANIFEST_FILE: &str = "manifest.json";
pub const GNE_STATE_FILE: &str = "gne_state.json";
pub const RESIDUALS_FILE: &str = "residuals.jsonl";

#[derive(Debug, Parser)]
#[command(
    name = "rescon",
    version,
    about = "Resilient connectivity control and cross-layer defense games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a scenario; writes the trace, resilience report and manifest.
    Simulate {
        scenario: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
    },
    /// Print the plans of the first steps as JSON lines, agents moving to
    /// each plan's targets.
    Plan {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1)]
        steps: usize,
    },
    /// Solve the coupled takeover and trust games.
    Gne {
        params: PathBuf,
        #[arg(long, env = OUT_DIR_ENV, default_value = "out")]
        out: PathBuf,
    },
    /// Recompute the resilience report of a trace.
    Metrics {
        trace: PathBuf,
        /// Event onset step.
        #[arg(long)]
        t2: usize,
        /// `pre-event` or a fixed baseline value.
        #[arg(long, default_value = "pre-event")]
        baseline: String,
        /// Recovery level as a fraction of the baseline.
        #[arg(long, default_value_t = crate::simulator::metrics::DEFAULT_RECOVERY_FRACTION)]
        phi: f64,
    },
    /// Parse and validate a scenario or game-parameter file.
    Validate { file: PathBuf },
}

enum Failure {
    Input(String),
    Runtime(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.messages().join("\n"))
    }
}

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

/// Runs the tool on `argv` (program name first) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Simulate { scenario, out } => simulate(&scenario, &out),
        Command::Plan { scenario, steps } => plan(&scenario, steps),
        Command::Gne { params, out } => gne(&params, &out),
        Command::Metrics {
            trace,
            t2,
            baseline,
            phi,
        } => metrics(&trace, t2, &baseline, phi),
        Command::Validate { file } => validate(&file),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn create_dir(out: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(out).map_err(|e| Failure::Runtime(format!("{}: {e}", out.display())))
}

fn simulate(path: &Path, out: &Path) -> Result<(), Failure> {
    let cfg = sc::parse_scenario(path)?;
    let start = Instant::now();
    let trace = run_scenario(&cfg).map_err(runtime)?;
    create_dir(out)?;
    let trace_path = out.join(TRACE_FILE);
    io::emit_trace(&trace, &trace_path).map_err(runtime)?;
    let mut outputs = vec![trace_path];
    match cfg.onset() {
        Some(onset) => {
            let report =
                trace_resilience(&trace, cfg.baseline_policy, onset, cfg.recovery_fraction)
                    .map_err(runtime)?;
            let report_path = out.join(REPORT_FILE);
            io::write_json(&report, &report_path).map_err(runtime)?;
            outputs.push(report_path);
        }
        None => info!("no events and no metrics.onset: skipping the resilience report"),
    }
    write_manifest(out, "simulate", &cfg, start, outputs)
}

fn write_manifest(
    out: &Path,
    command: &str,
    cfg: &ScenarioConfig,
    start: Instant,
    outputs: Vec<PathBuf>,
) -> Result<(), Failure> {
    let m = RunManifest::new(
        command,
        io::config_hash(cfg),
        cfg.rng_seed,
        start.elapsed(),
        outputs,
    );
    io::write_json(&m, &out.join(MANIFEST_FILE)).map_err(runtime)
}

fn plan(path: &Path, steps: usize) -> Result<(), Failure> {
    let cfg = sc::parse_scenario(path)?;
    let link = cfg.link_model();
    let mut positions = cfg.initial_positions();
    let mut stdout = std::io::stdout().lock();
    for step in 0..steps {
        let opts = crate::controller::ControlOptions {
            anticipated_budget: cfg.budget_at(step),
            ..cfg.opts.clone()
        };
        let result = plan_step(&positions, &link, &opts).map_err(runtime)?;
        use std::io::Write;
        stdout
            .write_all(&io::to_exact_json(&result))
            .map_err(runtime)?;
        stdout.write_all(b"\n").map_err(runtime)?;
        positions = result.targets;
    }
    Ok(())
}

fn gne(path: &Path, out: &Path) -> Result<(), Failure> {
    let params = sc::parse_gne_params(path)?;
    let start = Instant::now();
    let state = gne_solve(&params).map_err(runtime)?;
    create_dir(out)?;
    let state_path = out.join(GNE_STATE_FILE);
    let residuals_path = out.join(RESIDUALS_FILE);
    io::write_json(&state, &state_path).map_err(runtime)?;
    io::write_json_lines(&state.trajectory, &residuals_path).map_err(runtime)?;
    let m = RunManifest::new(
        "gne",
        io::hash_of(&params),
        0,
        start.elapsed(),
        vec![state_path, residuals_path],
    );
    io::write_json(&m, &out.join(MANIFEST_FILE)).map_err(runtime)?;
    if state.converged {
        Ok(())
    } else {
        Err(Failure::Runtime(format!(
            "no convergence after {} iterations (residual {:e}); trajectory written",
            state.iterations, state.residual
        )))
    }
}

fn parse_baseline(s: &str) -> Result<BaselinePolicy, Failure> {
    match s {
        "pre-event" | "pre_event" => Ok(BaselinePolicy::PreEvent),
        v => v.parse().map(BaselinePolicy::Fixed).map_err(|_| {
            Failure::Input(format!(
                "--baseline: expected pre-event or a number, got {v}"
            ))
        }),
    }
}

fn metrics(path: &Path, t2: usize, baseline: &str, phi: f64) -> Result<(), Failure> {
    let policy = parse_baseline(baseline)?;
    let trace = io::parse_trace(path).map_err(|e| Failure::Input(e.to_string()))?;
    let report =
        trace_resilience(&trace, policy, t2, phi).map_err(|e| Failure::Input(e.to_string()))?;
    let mut bytes = io::to_exact_json(&report);
    bytes.push(b'\n');
    use std::io::Write;
    std::io::stdout().write_all(&bytes).map_err(runtime)
}

fn validate(path: &Path) -> Result<(), Failure> {
    match sc::parse_any(path)? {
        ParsedFile::Scenario(cfg) => println!(
            "ok: scenario with {} agents, {} steps, {} events",
            cfg.agents.len(),
            cfg.steps,
            cfg.events.len()
        ),
        ParsedFile::Gne(_) => println!("ok: coupled-game parameters"),
    }
    Ok(())
}
