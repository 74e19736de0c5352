//! Configuration, subcommand runners and JSON reporting behind the
//! `liouville-defect` binary.
//!
//! Every runner takes a validated [`RunConfig`] and an output directory,
//! returns an [`Outcome`] listing its pass/fail checks and leaves a
//! `<command>.json` report in that directory.

pub mod commands;
pub mod config;
pub mod report;
pub mod setup;

use std::fs;
use std::path::Path;

pub use config::{BoundaryMode, CouplingMode, InitialData, RunConfig};
pub use report::{Check, Outcome};

use crate::error::{Error, Result};

/// Subcommand names accepted by [`execute`].
pub const COMMANDS: [&str; 7] = [
    "simulate",
    "verify-gauge",
    "verify-charges",
    "verify-appendix-a",
    "verify-appendix-b",
    "backlund",
    "bundle-report",
];

/// Process exit code for an error: 2 for bad input or configuration,
/// 3 for a run that blew up, 1 otherwise.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config { .. }
        | Error::InvalidInput(_)
        | Error::OutOfRange { .. }
        | Error::Io(_)
        | Error::Domain(..)
        | Error::DivisionByZero(_)
        | Error::GridTooSmall { .. }
        | Error::OracleRejected { .. }
        | Error::Precondition(_) => 2,
        Error::Blowup { .. } | Error::IntegrationDiverged { .. } | Error::Interpolation(_) => 3,
        _ => 1,
    }
}

/// Validates `cfg`, runs `command` and writes `<command>.json` under `out`.
pub fn execute(command: &str, cfg: &RunConfig, out: &Path) -> Result<Outcome> {
    cfg.validate()?;
    fs::create_dir_all(out)?;
    let outcome = match command {
        "simulate" => return commands::simulate(cfg, out),
        "verify-gauge" => commands::verify_gauge(cfg, out),
        "verify-charges" => commands::verify_charges(cfg, out),
        "verify-appendix-a" => commands::verify_appendix_a(cfg, out),
        "verify-appendix-b" => commands::verify_appendix_b(cfg, out),
        "backlund" => commands::backlund(cfg, out),
        "bundle-report" => commands::bundle_report(cfg, out),
        other => return Err(Error::InvalidInput(format!("unknown command `{other}`"))),
    }?;
    report::write_json(&out.join(format!("{command}.json")), &outcome.to_json(cfg))?;
    Ok(outcome)
}
