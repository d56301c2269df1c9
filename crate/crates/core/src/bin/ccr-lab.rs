use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ccr_core::sweep::{
    read_records, report, run_sweep, write_csv, write_json, Experiment, OutputFormat, SweepConfig,
};
use ccr_core::CcrError;

#[derive(Parser)]
#[command(name = "ccr-lab", version, about = "Finite-dimensional CCR defect sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep and write one record per measured defect.
    Run {
        #[arg(long)]
        experiment: Option<String>,
        /// Flat key = value file; built-in grids are used when omitted.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Summarize a CSV or JSON record file.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
    },
}

const USAGE: u8 = 2;
const REFUSAL: u8 = 3;

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("ccr-lab: {msg}");
    ExitCode::from(code)
}

fn error_code(e: &CcrError) -> u8 {
    match e {
        CcrError::ResourceCap { .. } => REFUSAL,
        _ => USAGE,
    }
}

fn run(
    experiment: Option<String>,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    format: Option<String>,
    seed: Option<u64>,
) -> Result<ExitCode, (u8, String)> {
    let usage = |e: CcrError| (error_code(&e), e.to_string());
    let mut cfg = match &config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| (USAGE, format!("{}: {e}", path.display())))?;
            SweepConfig::parse(&text).map_err(usage)?
        }
        None => SweepConfig::default(),
    };
    if let Some(e) = experiment {
        cfg.experiment = e.parse::<Experiment>().map_err(usage)?;
    }
    if let Some(f) = format {
        cfg.format = f.parse::<OutputFormat>().map_err(usage)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(o) = out {
        cfg.out = Some(o.to_string_lossy().into_owned());
    }

    let (records, status) = run_sweep(&cfg).map_err(usage)?;
    let mut buf = Vec::new();
    match cfg.format {
        OutputFormat::Csv => write_csv(&records, &mut buf),
        OutputFormat::Json => write_json(&records, &mut buf),
    }
    .map_err(usage)?;
    match &cfg.out {
        Some(path) => fs::write(path, &buf).map_err(|e| (USAGE, format!("{path}: {e}")))?,
        None => io::stdout().write_all(&buf).map_err(|e| (USAGE, e.to_string()))?,
    }
    eprintln!("{} records, exit status {}", records.len(), status.exit_code());
    Ok(ExitCode::from(status.exit_code() as u8))
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run {
            experiment,
            config,
            out,
            format,
            seed,
        } => run(experiment, config, out, format, seed).unwrap_or_else(|(code, msg)| fail(code, msg)),
        Command::Report { input } => {
            let text = match fs::read_to_string(&input) {
                Ok(t) => t,
                Err(e) => return fail(USAGE, format!("{}: {e}", input.display())),
            };
            match read_records(&text) {
                Ok(records) if records.is_empty() => fail(USAGE, "no records in input"),
                Ok(records) => {
                    print!("{}", report(&records));
                    ExitCode::SUCCESS
                }
                Err(e) => fail(USAGE, e),
            }
        }
    }
}
