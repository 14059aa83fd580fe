//! Batch driver for the walk error-correction simulator: table checks, error
//! sweeps, operator identities and logical gates, with JSON and CSV reports.

pub mod config;
pub mod context;
pub mod gates;
pub mod identities;
pub mod report;
pub mod sweep;
pub mod tables;

use config::{Command, ExperimentConfig};
use context::Context;
use qwec::error::Result;
use report::Report;

/// A finished command: the JSON report, plus the CSV for sweeps.
pub struct Outcome {
    pub report: Report,
    pub csv: Option<String>,
}

pub fn run(cfg: &ExperimentConfig, ctx: &Context) -> Result<Outcome> {
    Ok(match cfg.command {
        Command::VerifyTables => Outcome { report: tables::verify_tables(cfg, ctx)?, csv: None },
        Command::ErrorSweep => {
            let (report, csv) = sweep::error_sweep(cfg, ctx)?;
            Outcome { report, csv: Some(csv) }
        }
        Command::VerifyIdentities => Outcome { report: identities::verify_identities(cfg, ctx)?, csv: None },
        Command::LogicalGates => Outcome { report: gates::logical_gates(cfg, ctx)?, csv: None },
    })
}
