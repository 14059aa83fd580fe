use clap::{CommandFactory, Parser, Subcommand};
use qwec::error_model::Family;
use qwec_cli::config::{Command, ExperimentConfig, Target};
use qwec_cli::context::Context;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "qwec", version, about = "Quantum-walk error correction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 200)]
    trials: usize,
    /// coin, shift or pauli; all three in turn when omitted
    #[arg(long, global = true)]
    family: Option<Family>,
    /// P0, P2 or P4; cycles over all three when omitted
    #[arg(long, global = true)]
    target: Option<Target>,
    /// report path; for error-sweep the CSV, with the JSON next to it
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// directory used when --out is not given
    #[arg(long, global = true, env = "QWEC_OUT_DIR", hide_env_values = true)]
    out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// sample measurement outcomes instead of summing over branches
    #[arg(long, global = true)]
    monte_carlo: bool,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Check the code tables against the walk
    VerifyTables {
        /// multiply s_i by (X_c)_P0 before checking (test mode)
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..6))]
        corrupt_generator: Option<u8>,
    },
    /// Inject random errors and report the corrected fidelity
    ErrorSweep,
    /// Check the compiled operators against their closed forms
    VerifyIdentities,
    /// Run gate words on encoded states and compare with 2x2 matrices
    LogicalGates {
        /// gate word such as "S H T", may be repeated
        #[arg(long = "word")]
        words: Vec<String>,
    },
}

fn config_of(cli: &Cli) -> ExperimentConfig {
    let (command, corrupt, words) = match &cli.command {
        Sub::VerifyTables { corrupt_generator } => (Command::VerifyTables, corrupt_generator.map(usize::from), vec![]),
        Sub::ErrorSweep => (Command::ErrorSweep, None, vec![]),
        Sub::VerifyIdentities => (Command::VerifyIdentities, None, vec![]),
        Sub::LogicalGates { words } => (Command::LogicalGates, None, words.clone()),
    };
    let mut cfg = ExperimentConfig::new(command);
    cfg.seed = cli.seed;
    cfg.trials = cli.trials;
    cfg.family = cli.family;
    cfg.target = cli.target;
    cfg.tolerance = cli.tolerance;
    cfg.monte_carlo = cli.monte_carlo;
    cfg.words = words;
    cfg.corrupt_generator = corrupt;
    cfg.out = cli
        .out
        .clone()
        .or_else(|| cli.out_dir.as_ref().map(|d| d.join(command.name()).with_extension(if command == Command::ErrorSweep { "csv" } else { "json" })));
    cfg
}

/// (json path, csv path) for the run.
fn output_paths(cfg: &ExperimentConfig) -> (Option<PathBuf>, Option<PathBuf>) {
    let Some(out) = &cfg.out else { return (None, None) };
    if cfg.command != Command::ErrorSweep {
        return (Some(out.clone()), None);
    }
    if out.extension().is_some_and(|e| e == "json") {
        (Some(out.clone()), Some(out.with_extension("csv")))
    } else {
        (Some(out.with_extension("json")), Some(out.clone()))
    }
}

fn write(path: &Path, text: &str) -> std::io::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = config_of(&cli);
    for w in &cfg.words {
        if let Err(e) = qwec_cli::gates::parse_word(w) {
            Cli::command().error(clap::error::ErrorKind::InvalidValue, e.to_string()).exit();
        }
    }
    let out = Context::new().and_then(|ctx| qwec_cli::run(&cfg, &ctx));
    let out = match out {
        Ok(o) => o,
        Err(e) => {
            eprintln!("qwec: {e}");
            return ExitCode::from(1);
        }
    };
    let json = out.report.to_json();
    print!("{json}");
    let (jp, cp) = output_paths(&cfg);
    let written = jp
        .map(|p| write(&p, &json))
        .transpose()
        .and_then(|_| cp.zip(out.csv.as_ref()).map(|(p, c)| write(&p, c)).transpose());
    if let Err(e) = written {
        eprintln!("qwec: {e}");
        return ExitCode::from(1);
    }
    if out.report.summary.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
