use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::ScenarioError;
use crate::topology::NodeAddress;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DirectiveKind {
    Download,
    Up,
    Down,
    Send,
    Subdivide,
    Elect,
    Commit,
    Round,
    Refresh,
    Attr,
}

impl DirectiveKind {
    fn allowed_keys(self) -> &'static [&'static str] {
        match self {
            DirectiveKind::Download => &["domain", "name", "uptime", "capacity", "metric"],
            DirectiveKind::Up | DirectiveKind::Down | DirectiveKind::Elect => &[],
            DirectiveKind::Send => &["to", "value"],
            DirectiveKind::Subdivide => &["critical_mass"],
            DirectiveKind::Commit => &["key", "value", "timeout"],
            DirectiveKind::Round => &["cluster_size"],
            DirectiveKind::Refresh => &["span"],
            DirectiveKind::Attr => &["key", "value", "scope", "class"],
        }
    }

    fn required_keys(self) -> &'static [&'static str] {
        match self {
            DirectiveKind::Send => &["to"],
            DirectiveKind::Commit => &["key", "value"],
            DirectiveKind::Attr => &["key", "value"],
            _ => &[],
        }
    }
}

impl FromStr for DirectiveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "download" => DirectiveKind::Download,
            "up" => DirectiveKind::Up,
            "down" => DirectiveKind::Down,
            "send" => DirectiveKind::Send,
            "subdivide" => DirectiveKind::Subdivide,
            "elect" => DirectiveKind::Elect,
            "commit" => DirectiveKind::Commit,
            "round" => DirectiveKind::Round,
            "refresh" => DirectiveKind::Refresh,
            "attr" => DirectiveKind::Attr,
            _ => return Err(format!("unknown event {s:?}")),
        })
    }
}

/// One timed line of a script.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Directive {
    pub line: usize,
    pub at: u64,
    pub kind: DirectiveKind,
    pub addr: NodeAddress,
    /// Remaining `key=value` options; addresses in `to=` are resolved.
    pub opts: BTreeMap<String, String>,
}

impl Directive {
    pub fn opt(&self, key: &str) -> Option<&str> {
        self.opts.get(key).map(String::as_str)
    }
}

/// Run-wide knobs set with `set key=value`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioParams {
    pub critical_mass: usize,
    pub cluster_size: usize,
    pub intro_timeout: u64,
    pub commit_timeout: u64,
    pub beacon_period: u64,
    pub beacon_ttl: u64,
    pub horizon: u64,
    pub min_clients: usize,
    pub min_uptime: f64,
    pub excerpt_cap: usize,
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            critical_mass: 256,
            cluster_size: 5,
            // ten moderate-class update periods
            intro_timeout: 500,
            commit_timeout: 100,
            beacon_period: 20,
            beacon_ttl: 50,
            horizon: 10_000,
            min_clients: 100,
            min_uptime: 0.9,
            excerpt_cap: crate::discovery::EXCERPT_CAP,
        }
    }
}

impl ScenarioParams {
    fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("{key}: cannot parse {v:?}"))
        }
        match key {
            "critical_mass" => self.critical_mass = num(key, value)?,
            "cluster_size" => self.cluster_size = num(key, value)?,
            "intro_timeout" => self.intro_timeout = num(key, value)?,
            "commit_timeout" => self.commit_timeout = num(key, value)?,
            "beacon_period" => self.beacon_period = num(key, value)?,
            "beacon_ttl" => self.beacon_ttl = num(key, value)?,
            "horizon" => self.horizon = num(key, value)?,
            "min_clients" => self.min_clients = num(key, value)?,
            "min_uptime" => self.min_uptime = num(key, value)?,
            "excerpt_cap" => self.excerpt_cap = num(key, value)?,
            _ => return Err(format!("unknown parameter {key:?}")),
        }
        if self.cluster_size == 0 || self.beacon_period == 0 {
            return Err(format!("{key} must be positive"));
        }
        Ok(())
    }
}

/// One `kind arg... key=value...` pattern inside an `expect` line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub kind: String,
    pub args: Vec<String>,
    pub fields: Vec<(String, String)>,
}

impl fmt::Display for Step {
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

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Quantifier {
    /// The steps occur in this order (other records may come between).
    Sequence,
    /// The single step never occurs.
    Never,
    /// The single step occurs exactly once.
    Once,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Expectation {
    pub line: usize,
    pub quantifier: Quantifier,
    pub steps: Vec<Step>,
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.quantifier {
            Quantifier::Sequence => {}
            Quantifier::Never => f.write_str("not ")?,
            Quantifier::Once => f.write_str("once ")?,
        }
        for (i, s) in self.steps.iter().enumerate() {
            if i > 0 {
                f.write_str(" then ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A parsed scenario script.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub directives: Vec<Directive>,
    pub expectations: Vec<Expectation>,
    /// `name=` aliases given on downloads.
    pub names: BTreeMap<String, NodeAddress>,
}

impl Scenario {
    /// Display form of an address: its alias if it has one.
    pub fn label(&self, a: NodeAddress) -> String {
        self.names
            .iter()
            .find(|(_, &v)| v == a)
            .map_or_else(|| a.to_string(), |(k, _)| k.clone())
    }
}

fn resolve(names: &BTreeMap<String, NodeAddress>, token: &str) -> Result<NodeAddress, String> {
    if let Some(&a) = names.get(token) {
        return Ok(a);
    }
    token
        .parse()
        .map_err(|_| format!("{token:?} is neither an address nor a known name"))
}

fn split_kv(token: &str) -> Option<(&str, &str)> {
    token.split_once('=').filter(|(k, _)| !k.is_empty())
}

/// Parses a script. `#` starts a comment; blank lines are ignored.
///
/// ```text
/// set critical_mass=8
/// at=0  event=download addr=10.0.0.10 domain=isp-a name=I1
/// at=40 event=down addr=I1
/// expect connect I2 I1 then queued I3 I1
/// ```
pub fn parse_scenario(text: &str) -> Result<Scenario, ScenarioError> {
    let mut sc = Scenario::default();
    let mut raw_expects: Vec<(usize, Vec<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| ScenarioError::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens[0] {
            "set" => {
                if tokens.len() < 2 {
                    return Err(err("`set` needs key=value".into()));
                }
                for t in &tokens[1..] {
                    let (k, v) = split_kv(t).ok_or_else(|| err(format!("expected key=value, got {t:?}")))?;
                    sc.params.set(k, v).map_err(err)?;
                }
            }
            "expect" => raw_expects.push((line_no, tokens[1..].iter().map(|s| s.to_string()).collect())),
            _ => {
                let d = parse_directive(&tokens, line_no, &mut sc.names).map_err(err)?;
                if let Some(prev) = sc.directives.last() {
                    if d.at < prev.at {
                        return Err(err(format!("at={} goes back in time (previous at={})", d.at, prev.at)));
                    }
                }
                sc.directives.push(d);
            }
        }
    }
    for (line, tokens) in raw_expects {
        let e = parse_expectation(&tokens, line, &sc).map_err(|message| ScenarioError::Parse { line, message })?;
        sc.expectations.push(e);
    }
    Ok(sc)
}

fn parse_directive(
    tokens: &[&str],
    line: usize,
    names: &mut BTreeMap<String, NodeAddress>,
) -> Result<Directive, String> {
    let mut kv = BTreeMap::new();
    for t in tokens {
        let (k, v) = split_kv(t).ok_or_else(|| format!("expected key=value, got {t:?}"))?;
        if kv.insert(k.to_string(), v.to_string()).is_some() {
            return Err(format!("duplicate key {k:?}"));
        }
    }
    let at = kv
        .remove("at")
        .ok_or("missing at=")?
        .parse::<u64>()
        .map_err(|_| "at= must be a non-negative integer".to_string())?;
    let kind: DirectiveKind = kv.remove("event").ok_or("missing event=")?.parse()?;
    let addr_token = kv.remove("addr").ok_or("missing addr=")?;
    let addr = match (kind, kv.get("name")) {
        (DirectiveKind::Download, Some(name)) => {
            let a: NodeAddress = addr_token
                .parse()
                .map_err(|_| format!("download needs a dotted-quad addr, got {addr_token:?}"))?;
            if name.parse::<NodeAddress>().is_ok() {
                return Err(format!("name {name:?} looks like an address"));
            }
            if let Some(&prev) = names.get(name) {
                if prev != a {
                    return Err(format!("name {name:?} already bound to {prev}"));
                }
            }
            names.insert(name.clone(), a);
            a
        }
        _ => resolve(names, &addr_token)?,
    };
    for k in kv.keys() {
        if !kind.allowed_keys().contains(&k.as_str()) {
            return Err(format!("unexpected key {k:?} for this event"));
        }
    }
    for k in kind.required_keys() {
        if !kv.contains_key(*k) {
            return Err(format!("missing {k}="));
        }
    }
    if let Some(to) = kv.get("to") {
        let resolved = resolve(names, to)?;
        kv.insert("to".into(), resolved.to_string());
    }
    Ok(Directive {
        line,
        at,
        kind,
        addr,
        opts: kv,
    })
}

fn parse_expectation(tokens: &[String], line: usize, sc: &Scenario) -> Result<Expectation, String> {
    let (quantifier, rest) = match tokens.first().map(String::as_str) {
        Some("not") => (Quantifier::Never, &tokens[1..]),
        Some("once") => (Quantifier::Once, &tokens[1..]),
        _ => (Quantifier::Sequence, tokens),
    };
    let mut steps = Vec::new();
    for chunk in rest.split(|t| t == "then") {
        let (kind, tail) = chunk.split_first().ok_or("empty expectation step")?;
        let mut step = Step {
            kind: kind.clone(),
            args: Vec::new(),
            fields: Vec::new(),
        };
        for t in tail {
            match split_kv(t) {
                Some((k, v)) => step.fields.push((k.to_string(), v.to_string())),
                None => step.args.push(match resolve(&sc.names, t) {
                    Ok(a) => sc.label(a),
                    Err(_) => t.clone(),
                }),
            }
        }
        steps.push(step);
    }
    if quantifier != Quantifier::Sequence && steps.len() != 1 {
        return Err("`not` and `once` take a single step".into());
    }
    Ok(Expectation {
        line,
        quantifier,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_directives_names_and_expectations() {
        let text = "\
# two instances
set critical_mass=8 beacon_ttl=30
at=0 event=download addr=10.0.0.10 domain=isp name=I1
at=5 event=send addr=10.0.0.10 to=I1 value=hello   # trailing comment
expect connect I2 I1 then queued 10.0.0.10 I1
expect once committed I1 acks=4
";
        let sc = parse_scenario(text).unwrap();
        assert_eq!(sc.params.critical_mass, 8);
        assert_eq!(sc.params.beacon_ttl, 30);
        assert_eq!(sc.directives.len(), 2);
        assert_eq!(sc.directives[1].opt("to"), Some("10.0.0.10"));
        assert_eq!(sc.directives[1].line, 4);
        assert_eq!(sc.expectations[0].steps[1].args, ["I1", "I1"]);
        assert_eq!(sc.expectations[0].steps[0].args, ["I2", "I1"]);
        assert_eq!(sc.expectations[1].quantifier, Quantifier::Once);
        assert_eq!(
            sc.expectations[1].steps[0].fields,
            [("acks".to_string(), "4".to_string())]
        );
        assert_eq!(sc.expectations[0].to_string(), "connect I2 I1 then queued I1 I1");
    }

    #[test]
    fn errors_name_the_line() {
        let cases = [
            ("at=0 event=download addr=10.0.0.1\nat=x event=up addr=10.0.0.1", 2),
            ("at=0 event=fly addr=10.0.0.1", 1),
            ("\n\nat=0 event=up addr=I9", 3),
            ("at=0 event=up addr=10.0.0.1 bogus=1", 1),
            ("at=5 event=up addr=10.0.0.1\nat=4 event=up addr=10.0.0.1", 2),
            ("set nothing=1", 1),
            ("at=0 event=send addr=10.0.0.1", 1),
            ("expect not a then b", 1),
            ("at=0 event=up", 1),
        ];
        for (text, line) in cases {
            match parse_scenario(text) {
                Err(ScenarioError::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }
}
