use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use liouville_defect::cli::{exit_code, execute, RunConfig};

#[derive(Parser)]
#[command(version, about = "Liouville defect simulation and verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file of `key = value` lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override one key, e.g. `--set dx=0.01`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Random seed, overriding the configured one.
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Evolve the configured initial data.
    Simulate,
    /// Zero-curvature, gauge covariance and defect gauge checks.
    VerifyGauge,
    /// Drift of the defect-modified charges under refinement.
    VerifyCharges,
    /// Curvature of the hatted connections on the two patches.
    VerifyAppendixA,
    /// Gauss parameters of the defect gauge element.
    VerifyAppendixB,
    /// Generate a partner solution and check its relations.
    Backlund,
    /// Transition functions and quotient over a circle around the defect.
    BundleReport,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::VerifyGauge => "verify-gauge",
            Command::VerifyCharges => "verify-charges",
            Command::VerifyAppendixA => "verify-appendix-a",
            Command::VerifyAppendixB => "verify-appendix-b",
            Command::Backlund => "backlund",
            Command::BundleReport => "bundle-report",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let run = || {
        let mut cfg = RunConfig::default();
        if let Some(p) = &cli.config {
            cfg.load(p)?;
        }
        for s in &cli.set {
            cfg.set_override(s)?;
        }
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        execute(cli.command.name(), &cfg, &cli.out)
    };
    match run() {
        Ok(outcome) => {
            print!("{}", outcome.summary());
            ExitCode::from(if outcome.pass() { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e) as u8)
        }
    }
}
