//! Batch command-line front end.
//!
//! Every command reads one TOML run configuration, writes its artifacts into
//! the output directory through temp-file-then-rename, and finishes with a
//! `manifest.json` carrying the configuration echo and output checksums.
//! Exit codes: 0 success, 2 input or validation error, 3 numerical failure,
//! 4 invariant failure on emitted artifacts.

mod commands;
mod config;
mod manifest;

pub use config::{
    ConstituentConfig, CondexConfig, ContourConfig, CurrentsConfig, DependenceConfig, FitMarginalConfig, FormConfig,
    LimitStateConfig, NaiveComboConfig, ReliabilityConfig, RunConfig,
};
pub use manifest::{sha256_hex, OutputFile, RunManifest, MANIFEST_FILE};

use crate::error::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use manifest::OutputSink;
use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_INVARIANT: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandId {
    FitMarginal,
    Condex,
    Contour,
    Form,
    Reliability,
    Currents,
    NaiveCombo,
}

impl CommandId {
    pub fn name(self) -> &'static str {
        match self {
            CommandId::FitMarginal => "fit-marginal",
            CommandId::Condex => "condex",
            CommandId::Contour => "contour",
            CommandId::Form => "form",
            CommandId::Reliability => "reliability",
            CommandId::Currents => "currents",
            CommandId::NaiveCombo => "naive-combo",
        }
    }
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
    /// Overrides the configuration seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Progress messages on stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a semi-parametric marginal to a timestamp,value series.
    FitMarginal(CommonArgs),
    /// Fit and simulate the conditional extremes model for a variable pair.
    Condex(CommonArgs),
    /// Inverse-FORM environmental contours of the Hs/Tp model.
    Contour(CommonArgs),
    /// FORM reliability index for a configured limit state.
    Form(CommonArgs),
    /// Failure probability from load and resistance distributions.
    Reliability(CommonArgs),
    /// Multi-depth current processing and profile conditional extremes.
    Currents(CommonArgs),
    /// Componentwise return values and their joint exceedance rate.
    NaiveCombo(CommonArgs),
}

#[derive(Debug, Parser)]
#[command(name = "metjoint", version, about = "Joint extremes of metocean variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => EXIT_INVARIANT,
        e if e.is_input_error() => EXIT_INPUT,
        _ => EXIT_NUMERICAL,
    }
}

/// Run one command against an already loaded configuration.
pub fn run_command(cmd: CommandId, cfg: &RunConfig, out_dir: &Path, verbose: bool) -> Result<RunManifest> {
    let started = Instant::now();
    let log = |m: &str| {
        if verbose {
            eprintln!("[{}] {m}", cmd.name());
        }
    };
    let mut sink = OutputSink::new(out_dir)?;
    match cmd {
        CommandId::FitMarginal => commands::fit_marginal(cfg, &mut sink, &log),
        CommandId::Condex => commands::condex(cfg, &mut sink, &log),
        CommandId::Contour => commands::contour(cfg, &mut sink, &log),
        CommandId::Form => commands::form(cfg, &mut sink, &log),
        CommandId::Reliability => commands::reliability(cfg, &mut sink, &log),
        CommandId::Currents => commands::currents(cfg, &mut sink, &log),
        CommandId::NaiveCombo => commands::naive_combo(cfg, &mut sink, &log),
    }?;
    let dir = sink.dir().to_path_buf();
    let manifest = RunManifest {
        command: cmd.name().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        outputs: sink.into_files(),
        duration_seconds: started.elapsed().as_secs_f64(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    crate::io::write_atomic(&dir.join(MANIFEST_FILE), text.as_bytes())?;
    Ok(manifest)
}

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (cmd, a) = match cli.command {
        Command::FitMarginal(a) => (CommandId::FitMarginal, a),
        Command::Condex(a) => (CommandId::Condex, a),
        Command::Contour(a) => (CommandId::Contour, a),
        Command::Form(a) => (CommandId::Form, a),
        Command::Reliability(a) => (CommandId::Reliability, a),
        Command::Currents(a) => (CommandId::Currents, a),
        Command::NaiveCombo(a) => (CommandId::NaiveCombo, a),
    };
    let result = RunConfig::load(&a.config).and_then(|mut cfg| {
        if a.seed.is_some() {
            cfg.seed = a.seed;
        }
        run_command(cmd, &cfg, &a.out, a.verbose)
    });
    match result {
        Ok(m) => {
            if a.verbose {
                eprintln!("[{}] wrote {} files in {:.3} s", cmd.name(), m.outputs.len() + 1, m.duration_seconds);
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("metjoint {}: {e}", cmd.name());
            exit_code(&e)
        }
    }
}
