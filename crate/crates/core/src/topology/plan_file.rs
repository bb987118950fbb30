use super::{NodeAddress, NodeRecord, TopologyError};

/// Parses an address-plan roster: one `address domain uptime capacity metric`
/// record per line. Blank lines and `#` comments are ignored.
pub fn parse_address_plan(text: &str) -> Result<Vec<NodeRecord>, TopologyError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| TopologyError::Parse { line: line_no, message };
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [address, domain, uptime, capacity, metric] = fields[..] else {
            return Err(err(format!("expected 5 fields, found {}", fields.len())));
        };
        let number = |name: &str, v: &str| -> Result<f64, TopologyError> {
            v.parse::<f64>().map_err(|_| err(format!("bad {name} {v:?}")))
        };
        let rec = NodeRecord {
            address: address.parse::<NodeAddress>().map_err(|e| err(e.to_string()))?,
            domain: domain.to_string(),
            uptime_fraction: number("uptime", uptime)?,
            link_capacity_bps: number("capacity", capacity)?,
            active: true,
            metric: number("metric", metric)?,
        };
        rec.validate().map_err(|e| err(e.to_string()))?;
        out.push(rec);
    }
    Ok(out)
}
