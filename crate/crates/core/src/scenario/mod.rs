//! Scripted runs of the instance life cycle on the event engine.
//!
//! A script schedules downloads, failures, elections, commits and update
//! rounds at fixed virtual times; `expect` lines are then checked against
//! the resulting trace. See `scenarios/` at the repository root for
//! complete examples.

mod script;
mod trace;
mod world;

use std::fmt::Write;

pub use script::{parse_scenario, Directive, DirectiveKind, Expectation, Quantifier, Scenario, ScenarioParams, Step};
pub use trace::{check, ExpectationOutcome, TraceLine};
pub use world::{Msg, World};

use crate::simcore::{Engine, EventTrace, RunSummary, VirtualTime};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ScenarioError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioReport {
    pub trace: EventTrace<TraceLine>,
    pub outcomes: Vec<ExpectationOutcome>,
    pub summary: RunSummary,
    /// Final `(neighborhood, members)` listing.
    pub neighborhoods: Vec<(String, Vec<String>)>,
}

impl ScenarioReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    /// Trace, final neighborhoods, then one PASS/FAIL line per expectation.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in self.trace.iter() {
            writeln!(out, "{:>6}  {}", e.at.units(), e.record).unwrap();
        }
        if self.trace.truncated {
            out.push_str("(stopped at horizon)\n");
        }
        out.push('\n');
        for (name, members) in &self.neighborhoods {
            writeln!(out, "{name}: {}", members.join(" ")).unwrap();
        }
        if !self.outcomes.is_empty() {
            out.push('\n');
        }
        for o in &self.outcomes {
            let verdict = if o.passed { "PASS" } else { "FAIL" };
            write!(out, "{verdict} line {}: {}", o.line, o.text).unwrap();
            if !o.detail.is_empty() {
                write!(out, " ({})", o.detail).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Runs `scenario` to its horizon and hands back the final world.
pub fn simulate(scenario: &Scenario, seed: u64) -> (World, RunSummary) {
    let mut engine: Engine<Msg> = Engine::new(seed);
    let mut world = World::new(scenario.clone());
    world.schedule_directives(&mut engine);
    let summary = engine.run(&mut world, Some(VirtualTime(scenario.params.horizon)));
    world.trace.truncated = summary.truncated;
    (world, summary)
}

/// Runs `scenario` to its horizon and checks its expectations.
pub fn run_scenario(scenario: &Scenario, seed: u64) -> ScenarioReport {
    let (world, summary) = simulate(scenario, seed);
    let outcomes = scenario.expectations.iter().map(|e| check(&world.trace, e)).collect();
    let neighborhoods = world
        .neighborhoods()
        .into_iter()
        .map(|(n, m)| (n, m.into_iter().map(|a| scenario.label(a)).collect()))
        .collect();
    ScenarioReport {
        trace: world.trace,
        outcomes,
        summary,
        neighborhoods,
    }
}
