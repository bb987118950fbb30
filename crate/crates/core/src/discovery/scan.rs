use std::collections::BTreeMap;

use crate::topology::{AddressRange, NodeAddress};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScanOutcome {
    pub probes: Vec<NodeAddress>,
    pub found: Vec<NodeAddress>,
}

/// Probes up to `budget` addresses of `range` for live instances in
/// `domain`, ascending from `start` and wrapping to the start of the range.
/// A `start` outside the range begins at the first address.
///
/// `live` maps each running instance to its domain.
pub fn neighborhood_scan(
    domain: &str,
    range: AddressRange,
    budget: u64,
    start: NodeAddress,
    live: &BTreeMap<NodeAddress, String>,
) -> ScanOutcome {
    let mut out = ScanOutcome::default();
    if range.is_empty() {
        return out;
    }
    let len = range.len();
    let offset = if range.contains(start) {
        u64::from(start.0 - range.first.0)
    } else {
        0
    };
    for i in 0..budget.min(len) {
        let a = NodeAddress(range.first.0 + ((offset + i) % len) as u32);
        out.probes.push(a);
        if live.get(&a).is_some_and(|d| d == domain) {
            out.found.push(a);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::RandomStream;

    fn live(addrs: &[u32]) -> BTreeMap<NodeAddress, String> {
        addrs.iter().map(|&a| (NodeAddress(a), "isp".to_string())).collect()
    }

    fn range(a: u32, b: u32) -> AddressRange {
        AddressRange::new(NodeAddress(a), NodeAddress(b))
    }

    #[test]
    fn exhaustive_probe_finds_target() {
        let out = neighborhood_scan("isp", range(100, 120), 100, NodeAddress(110), &live(&[105, 200]));
        assert_eq!(out.found, [NodeAddress(105)]);
        assert_eq!(out.probes.len(), 21);
        assert_eq!(out.probes[0], NodeAddress(110));
        assert_eq!(out.probes[11], NodeAddress(100));
    }

    #[test]
    fn outside_range_or_other_domain_not_found() {
        let out = neighborhood_scan("isp", range(100, 120), 1000, NodeAddress(100), &live(&[200]));
        assert!(out.found.is_empty());
        let mut other = live(&[101]);
        other.insert(NodeAddress(101), "elsewhere".into());
        assert!(neighborhood_scan("isp", range(100, 120), 50, NodeAddress(100), &other)
            .found
            .is_empty());
    }

    #[test]
    fn probes_never_exceed_budget() {
        let mut s = RandomStream::derive(8, "scan");
        for _ in 0..500 {
            let first = s.uniform(0, 1000) as u32;
            let r = range(first, first + s.uniform(0, 300) as u32);
            let budget = s.uniform(0, 400);
            let start = NodeAddress(s.uniform(0, 1400) as u32);
            let out = neighborhood_scan("isp", r, budget, start, &live(&[first, first + 7]));
            assert!(out.probes.len() as u64 <= budget);
            assert!(out.probes.iter().all(|&a| r.contains(a)));
            let mut uniq = out.probes.clone();
            uniq.sort();
            uniq.dedup();
            assert_eq!(uniq.len(), out.probes.len());
        }
    }
}
