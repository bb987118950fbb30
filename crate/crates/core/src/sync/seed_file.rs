use std::collections::BTreeMap;

use super::attribute::{AttributeList, Scope, UpdateClass};
use super::SyncError;
use crate::topology::NodeAddress;

/// Parses attribute seeds, one `owner key scope class value` entry per
/// line. The value runs to the end of the line. Repeating an
/// `(owner, key)` pair bumps its version.
pub fn parse_attribute_seeds(text: &str) -> Result<BTreeMap<NodeAddress, AttributeList>, SyncError> {
    let mut out: BTreeMap<NodeAddress, AttributeList> = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| SyncError::Parse { line: idx + 1, message };
        let mut parts = line.splitn(5, char::is_whitespace);
        let (Some(owner), Some(key), Some(scope), Some(class), Some(value)) =
            (parts.next(), parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(err("expected `owner key scope class value`".into()));
        };
        let owner: NodeAddress = owner
            .parse()
            .map_err(|e: crate::topology::AddressParseError| err(e.to_string()))?;
        let scope: Scope = scope.parse().map_err(|e: SyncError| err(e.to_string()))?;
        let class: UpdateClass = class.parse().map_err(|e: SyncError| err(e.to_string()))?;
        out.entry(owner)
            .or_default()
            .set_local(owner, key, scope, class, value.trim().as_bytes())
            .map_err(|e| err(e.to_string()))?;
    }
    Ok(out)
}
