//! `ccilab` — reproducible experiments on network-model interface strips.
//!
//! Every run is described by one JSON config; identical configs produce
//! byte-identical reports.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CmdError, Format};
use config::ExperimentConfig;

#[derive(Parser)]
#[command(
    name = "ccilab",
    version,
    about = "Interface-strip network-model laboratory: flux spectra, projection indices, windings, bands, transport"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Path to the experiment JSON config.
    #[arg(long)]
    config: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Progress notes on standard error.
    #[arg(long)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Flux observable spectra over the configured cut list.
    Flux(Common),
    /// Flux index against the cut-sum and winding routes.
    Index(Common),
    /// Exact and phase-unwrapped determinant windings.
    Winding(Common),
    /// Eigenphase curves and circle-coverage certificate.
    Bands(Common),
    /// Orbit Gram matrix of the modified-model wandering vector.
    ShiftWitness(Common),
    /// Evolve a basis ket and record transport diagnostics.
    Evolve(Common),
    /// Full invariant suite with a pass/fail summary.
    Check(Common),
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Flux(c)
            | Command::Index(c)
            | Command::Winding(c)
            | Command::Bands(c)
            | Command::ShiftWitness(c)
            | Command::Evolve(c)
            | Command::Check(c) => c,
        }
    }
}

fn load_config(common: &Common) -> Result<ExperimentConfig, CmdError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| CmdError::config(format!("cannot read {}: {e}", common.config.display())))?;
    ExperimentConfig::parse(&text).map_err(CmdError::config)
}

fn emit(common: &Common, report: &str) -> Result<(), CmdError> {
    match &common.out {
        Some(path) => std::fs::write(path, report)
            .map_err(|e| CmdError::runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(report.as_bytes()) {
                Ok(()) => Ok(()),
                // a closed pipe (e.g. `| head`) is not an error
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(CmdError::runtime(format!("cannot write report: {e}"))),
            }
        }
    }
}

fn dispatch(command: &Command) -> Result<ExitCode, CmdError> {
    let common = command.common();
    let cfg = load_config(common)?;
    if common.verbose {
        eprintln!(
            "ccilab: interface [{}, {}], seed {}, strip width {}",
            cfg.model.n_left,
            cfg.model.n_right,
            cfg.model.seed,
            (ccilab_core::lattice::StripSpec::new(cfg.model.n_left, cfg.model.n_right)
                .map(|s| s.width())
                .unwrap_or(0))
        );
    }
    let report = match command {
        Command::Flux(_) => commands::run_flux(&cfg, common.format)?,
        Command::Index(_) => commands::run_index(&cfg, common.format)?,
        Command::Winding(_) => commands::run_winding(&cfg, common.format)?,
        Command::Bands(_) => commands::run_bands(&cfg, common.format)?,
        Command::ShiftWitness(_) => commands::run_shift_witness(&cfg, common.format)?,
        Command::Evolve(_) => commands::run_evolve(&cfg, common.format)?,
        Command::Check(_) => {
            let (report, passed) = commands::run_check(&cfg, common.format)?;
            emit(common, &report)?;
            return Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            });
        }
    };
    emit(common, &report)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli.command) {
        Ok(code) => code,
        Err(e) => {
            let doc = serde_json::json!({ "error": { "kind": e.kind, "message": e.message } });
            eprintln!("{doc}");
            if e.kind == "config" {
                ExitCode::from(1)
            } else {
                ExitCode::from(2)
            }
        }
    }
}
