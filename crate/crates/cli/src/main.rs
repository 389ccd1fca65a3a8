//! `secres`: scans and tables for the secular 2g+h resonance model.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Context;
use clap::Parser;
use sha2::{Digest, Sha256};

use secres::{Error, Model, ModelParams, PhysicalConstants};

#[derive(Parser)]
#[command(name = "secres", version, about = "Secular Earth–Moon–satellite resonance tables")]
struct Cli {
    /// Constants file with `name = value` lines.
    #[arg(long, global = true, env = "SECRES_CONFIG")]
    config: Option<PathBuf>,

    /// Emit JSON instead of CSV.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for grid scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Write files into this directory instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: commands::Command,
}

/// Failures sorted by exit status.
enum Failure {
    Config(anyhow::Error),
    Numerical(anyhow::Error),
}

impl Failure {
    fn classify(err: anyhow::Error) -> Self {
        match err.downcast_ref::<Error>() {
            Some(Error::InvalidParameter { .. } | Error::Config { .. }) => Failure::Config(err),
            _ => Failure::Numerical(err),
        }
    }
}

fn load_model(path: Option<&PathBuf>) -> anyhow::Result<(Model, String)> {
    let mut physical = PhysicalConstants::default();
    let mut hasher = Sha256::new();
    if let Some(path) = path {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        hasher.update(text.as_bytes());
        physical
            .apply_config(&text)
            .with_context(|| format!("in config {}", path.display()))?;
    }
    let params = ModelParams::new(physical)?;
    let hash: String = hasher.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok((Model::new(params), hash))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let started = Instant::now();
    let (model, hash) = load_model(cli.config.as_ref()).map_err(Failure::Config)?;
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")
            .map_err(Failure::Config)?;
    }
    let name = cli.command.name();
    let report = cli.command.run(&model, hash).map_err(Failure::classify)?;
    output::emit(&report, name, cli.out.as_deref(), cli.json, started.elapsed()).map_err(Failure::Numerical)?;
    if report.failures > 0 {
        return Err(Failure::Numerical(anyhow::anyhow!(
            "{} row(s) failed; see the status column",
            report.failures
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("secres: configuration error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(e)) => {
            eprintln!("secres: {e:#}");
            ExitCode::from(3)
        }
    }
}
