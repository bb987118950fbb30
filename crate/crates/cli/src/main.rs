use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nbhood::timing::TimingMode;

mod mm1;
mod scenario;
mod timing;

#[derive(Parser, Debug)]
#[command(
    name = "nbhood",
    version,
    about = "Serverless neighborhood simulator and timing model"
)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Master seed for every random stream
    #[arg(long, global = true, default_value_t = nbhood::DEFAULT_SEED)]
    pub seed: u64,
    /// Monte Carlo trials per hops-array shape
    #[arg(long, global = true, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Leader-ring accounting
    #[arg(long, global = true, default_value = "table_consistent", value_parser = parse_mode)]
    pub mode: TimingMode,
    /// Write output here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Output format; each subcommand has its own default
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    PlotData,
    Table,
}

fn parse_mode(s: &str) -> Result<TimingMode, String> {
    s.parse().map_err(|e: nbhood::timing::TimingError| e.to_string())
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Hops-array timing model
    #[command(subcommand)]
    Timing(timing::TimingCommand),
    /// M/M/1 queue metrics, or the naive broadcast load
    Mm1(mm1::Mm1Args),
    /// Scripted simulation runs
    #[command(subcommand)]
    Scenario(scenario::ScenarioCommand),
}

/// A failure with the exit code it maps to.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

/// What a subcommand produced: text to emit and whether it counts as a
/// pass.
pub struct Output {
    pub text: String,
    pub ok: bool,
}

fn emit(run: &RunConfig, text: &str) -> Result<(), Failure> {
    match &run.out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(1, format!("{}: {e}", path.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::new(1, format!("stdout: {e}")))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Timing(c) => timing::run(c, &cli.run),
        Command::Mm1(a) => mm1::run(a, &cli.run),
        Command::Scenario(c) => scenario::run(c, &cli.run),
    };
    match result.and_then(|out| emit(&cli.run, &out.text).map(|_| out.ok)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
