//! `katolab`: runs one experiment per invocation and writes its artifacts.
//!
//! Exit status: 0 on success, 2 when an estimate check disagrees with the
//! expectation, 1 on errors (with an error JSON on stdout).

mod config;
mod output;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};
use serde_json::json;

use config::{Command, ExperimentConfig, SCHEMA_VERSION};
use output::{config_hash, Artifacts};
use run::ConfigError;

#[derive(Parser)]
#[command(name = "katolab", version, about = "Numerical laboratory for Kato's fixed-point method")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Clone)]
struct RunArgs {
    /// JSON configuration; defaults are used when absent.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Caps the worker threads.
    #[arg(long)]
    threads: Option<usize>,
    /// Run a negative control: waive scaling identities and expect the check to fail.
    #[arg(long)]
    expect_failure: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Picard iteration for the mild equation.
    Solve(RunArgs),
    /// Smallness threshold along a direction against the predicted bound.
    Threshold(RunArgs),
    /// Semigroup decay exponent on the torus.
    VerifyDecay(RunArgs),
    /// Hardy–Littlewood boundedness under the extension protocol.
    VerifyHl(RunArgs),
    /// Admissibility conditions under dimension doubling.
    VerifyAdmissibility(RunArgs),
    /// Interpolation norm equivalences on random diagonal models.
    VerifyInterp(RunArgs),
    /// Norms of a field in a list of spaces.
    Norms(RunArgs),
    /// Reports the range checks and scaling identities of a configuration.
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        expect_failure: bool,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Solve(_) => "solve",
            Cmd::Threshold(_) => "threshold",
            Cmd::VerifyDecay(_) => "verify-decay",
            Cmd::VerifyHl(_) => "verify-hl",
            Cmd::VerifyAdmissibility(_) => "verify-admissibility",
            Cmd::VerifyInterp(_) => "verify-interp",
            Cmd::Norms(_) => "norms",
            Cmd::Validate { .. } => "validate",
        }
    }
}

fn load(path: Option<&PathBuf>, name: &str) -> anyhow::Result<ExperimentConfig> {
    let Some(path) = path else {
        return Ok(ExperimentConfig {
            schema_version: SCHEMA_VERSION,
            seed: 0,
            expect_failure: false,
            command: Command::default_for(name)?,
        });
    };
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let cfg = config::parse(&text).map_err(|e| ConfigError(format!("{e:#}")))?;
    if name != "validate" && cfg.command.name() != name {
        return Err(ConfigError(format!(
            "configuration is for {}, not {name}",
            cfg.command.name()
        ))
        .into());
    }
    Ok(cfg)
}

fn error_json(err: &anyhow::Error) -> serde_json::Value {
    let kind = if err.downcast_ref::<ConfigError>().is_some() {
        "config"
    } else {
        "runtime"
    };
    json!({
        "error": {
            "kind": kind,
            "message": format!("{err:#}"),
        }
    })
}

fn run_experiment(args: &RunArgs, name: &str) -> anyhow::Result<i32> {
    let mut cfg = load(args.config.as_ref(), name)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.expect_failure |= args.expect_failure;
    if let Some(k) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build_global()
            .context("cannot configure the worker pool")?;
    }
    let mut art = Artifacts::create(&args.out, config_hash(&cfg)?)?;
    let outcome = match run::execute(&cfg, &mut art) {
        Ok(o) => o,
        Err(e) => {
            let _ = art.write_bytes("error.json", format!("{:#}\n", error_json(&e)).as_bytes());
            return Err(e);
        }
    };
    let code = run::exit_code(&cfg, &outcome);
    let check = match outcome.passed {
        None => "none",
        Some(true) => "pass",
        Some(false) => "fail",
    };
    let summary = json!({
        "command": name,
        "seed": cfg.seed,
        "expect_failure": cfg.expect_failure,
        "check": check,
        "exit_code": code,
        "result": outcome.result,
    });
    art.finish(&cfg, summary.clone())?;
    println!("{}", serde_json::to_string(&json!({ "command": name, "check": check, "exit_code": code }))?);
    Ok(code)
}

fn validate_only(path: &PathBuf, expect_failure: bool) -> anyhow::Result<i32> {
    let mut cfg = load(Some(path), "validate")?;
    cfg.expect_failure |= expect_failure;
    let diagnostics = run::validate(&cfg);
    let valid = diagnostics
        .iter()
        .all(|d| d.ok || (d.waivable && cfg.expect_failure));
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "command": cfg.command.name(),
            "valid": valid,
            "diagnostics": diagnostics,
        }))?
    );
    Ok(if valid { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let name = cli.command.name();
    let result = match &cli.command {
        Cmd::Validate { config, expect_failure } => validate_only(config, *expect_failure),
        Cmd::Solve(a)
        | Cmd::Threshold(a)
        | Cmd::VerifyDecay(a)
        | Cmd::VerifyHl(a)
        | Cmd::VerifyAdmissibility(a)
        | Cmd::VerifyInterp(a)
        | Cmd::Norms(a) => run_experiment(a, name),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            println!("{}", error_json(&e));
            ExitCode::from(1)
        }
    }
}
