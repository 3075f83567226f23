//! `vi3`: classify regularized visible–invisible two-folds, evaluate their
//! slow divergence integral and search for canard limit cycles.

mod commands;
mod config;
mod output;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use vi3_core::verify::SuiteId;

use commands::{Ctx, Status};
use config::{InvalidInput, RunConfig};
use output::{Format, OutDir};

#[derive(Parser)]
#[command(name = "vi3", version, about = "Half-maps, slow divergence integrals and canard cycles of PWL two-folds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Golden parameter set, e.g. `saddle.3`.
    #[arg(long, global = true, value_name = "ID")]
    case: Option<String>,
    /// Override one configuration key; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE", allow_hyphen_values = true)]
    set: Vec<String>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Directory for report files and SVG plots.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    epsilon: Option<f64>,
    #[arg(long = "lambda-tilde", global = true, allow_hyphen_values = true)]
    lambda_tilde: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Regime, x*, SDI domain, contact geometry and predicted case.
    Classify,
    /// Sample the slow divergence integral, find its zeros and check the
    /// predicted case (exit 1 on mismatch).
    Sdi,
    /// SVG of the half-map graph, the contact curve and auxiliary orbits.
    Portrait,
    /// Run the verification suites (exit 1 if any fails).
    Verify {
        /// Run only these suites; repeatable.
        #[arg(long = "suite", value_name = "NAME")]
        suites: Vec<SuiteId>,
    },
    /// Sweep the unfolding parameter and locate limit cycles of the
    /// regularized system.
    Cycles,
    /// Crosscheck the SDI prediction along a line in parameter space.
    Sweep,
}

fn build_config(c: &Common) -> anyhow::Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &c.config {
        cfg.load(p)?;
    }
    if let Some(case) = &c.case {
        cfg.set("case", case)?;
    }
    for kv in &c.set {
        let (k, v) = kv
            .split_once('=')
            .ok_or_else(|| config::invalid(format!("--set expects KEY=VALUE, got `{kv}`")))?;
        cfg.set(k.trim(), v.trim())?;
    }
    if let Some(s) = c.seed {
        cfg.seed = s;
    }
    if let Some(t) = c.theta {
        cfg.theta = Some(t);
    }
    if let Some(e) = c.epsilon {
        cfg.epsilon = e;
    }
    if let Some(l) = c.lambda_tilde {
        cfg.lambda_tilde = l;
    }
    if !(cfg.epsilon > 0.0 && cfg.epsilon < 1.0) {
        return Err(config::invalid(format!("epsilon = {} must lie in (0, 1)", cfg.epsilon)));
    }
    Ok(cfg)
}

fn run(cli: Cli) -> anyhow::Result<Status> {
    let cfg = build_config(&cli.common)?;
    if let Some(n) = cli.common.jobs {
        if n == 0 {
            return Err(config::invalid("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let out = OutDir::new(cli.common.out.clone().or_else(|| cfg.output_dir.clone()))?;
    let ctx = Ctx { cfg, format: cli.common.format, out };
    match &cli.command {
        Command::Classify => commands::classify(&ctx),
        Command::Sdi => commands::sdi(&ctx),
        Command::Portrait => commands::portrait(&ctx),
        Command::Verify { suites } => commands::verify(&ctx, suites),
        Command::Cycles => commands::cycles(&ctx),
        Command::Sweep => commands::sweep(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InvalidInput>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
