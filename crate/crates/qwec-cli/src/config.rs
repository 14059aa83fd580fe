use qwec::error_model::Family;
use qwec::pauli::{P0, P2, P4};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    VerifyTables,
    ErrorSweep,
    VerifyIdentities,
    LogicalGates,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::VerifyTables => "verify-tables",
            Command::ErrorSweep => "error-sweep",
            Command::VerifyIdentities => "verify-identities",
            Command::LogicalGates => "logical-gates",
        }
    }
}

/// A data particle named on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target(pub usize);

impl FromStr for Target {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "P0" => Ok(Target(P0)),
            "P2" => Ok(Target(P2)),
            "P4" => Ok(Target(P4)),
            _ => Err(format!("target must be P0, P2 or P4, got {s:?}")),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub seed: u64,
    pub trials: usize,
    /// None runs every family in turn
    pub family: Option<Family>,
    /// None cycles over P0, P2, P4
    pub target: Option<Target>,
    pub out: Option<PathBuf>,
    pub tolerance: Option<f64>,
    pub monte_carlo: bool,
    pub words: Vec<String>,
    /// test mode: stabilizer index to corrupt in verify-tables
    pub corrupt_generator: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            seed: 0,
            trials: 200,
            family: None,
            target: None,
            out: None,
            tolerance: None,
            monte_carlo: false,
            words: Vec::new(),
            corrupt_generator: None,
        }
    }

    pub fn families(&self) -> Vec<Family> {
        match self.family {
            None => vec![Family::Coin, Family::Shift, Family::Pauli],
            Some(f) => vec![f],
        }
    }

    /// The report's copy of the config. The output path is left out so that
    /// the same run written to two places gives the same bytes.
    pub fn echo(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("out");
        }
        v
    }
}
