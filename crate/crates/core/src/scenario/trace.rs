use std::fmt;

use super::script::{Expectation, Quantifier, Step};
use crate::simcore::EventTrace;

/// One trace record: a kind, positional participants and named fields.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub kind: String,
    pub args: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl TraceLine {
    pub fn field(&self, key: &str) -> Option<&str> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Same kind, `step.args` a prefix of ours, and every field equal.
    pub fn matches(&self, step: &Step) -> bool {
        self.kind == step.kind
            && step.args.len() <= self.args.len()
            && step.args.iter().zip(&self.args).all(|(a, b)| a == b)
            && step.fields.iter().all(|(k, v)| self.field(k) == Some(v.as_str()))
    }
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.kind)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        for (k, v) in &self.fields {
            write!(f, " {k}={v}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpectationOutcome {
    pub line: usize,
    pub text: String,
    pub passed: bool,
    pub detail: String,
}

/// Checks one expectation against a trace.
pub fn check(trace: &EventTrace<TraceLine>, e: &Expectation) -> ExpectationOutcome {
    let (passed, detail) = match e.quantifier {
        Quantifier::Sequence => {
            let mut entries = trace.iter();
            let mut missing = None;
            for step in &e.steps {
                if !entries.any(|t| t.record.matches(step)) {
                    missing = Some(step);
                    break;
                }
            }
            match missing {
                None => (true, String::new()),
                Some(s) => (false, format!("no `{s}` in order")),
            }
        }
        Quantifier::Never => {
            let hit = trace.iter().find(|t| t.record.matches(&e.steps[0]));
            match hit {
                None => (true, String::new()),
                Some(t) => (false, format!("found at t={}", t.at)),
            }
        }
        Quantifier::Once => {
            let n = trace.iter().filter(|t| t.record.matches(&e.steps[0])).count();
            (
                n == 1,
                if n == 1 {
                    String::new()
                } else {
                    format!("occurred {n} times")
                },
            )
        }
    };
    ExpectationOutcome {
        line: e.line,
        text: e.to_string(),
        passed,
        detail,
    }
}
