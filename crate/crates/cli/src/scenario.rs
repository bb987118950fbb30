use std::path::PathBuf;

use clap::Subcommand;
use nbhood::scenario::{parse_scenario, run_scenario, ScenarioError};

use crate::{Failure, Output, RunConfig};

#[derive(Subcommand, Debug)]
pub enum ScenarioCommand {
    /// Run a script and check its `expect` lines
    Run { file: PathBuf },
}

pub fn run(cmd: &ScenarioCommand, cfg: &RunConfig) -> Result<Output, Failure> {
    let ScenarioCommand::Run { file } = cmd;
    let text = std::fs::read_to_string(file).map_err(|e| Failure::new(1, format!("{}: {e}", file.display())))?;
    let sc = parse_scenario(&text).map_err(|e| match e {
        ScenarioError::Parse { line, message } => Failure::new(1, format!("{}:{line}: {message}", file.display())),
    })?;
    let report = run_scenario(&sc, cfg.seed);
    Ok(Output {
        text: report.render(),
        ok: report.passed(),
    })
}
