use std::cmp::Ordering;

use super::{NeighborhoodMap, NodeAddress, NodeRecord};
use crate::simcore::VirtualTime;

/// Gates a member must pass before it may serve as the neighborhood router.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RouterCriteria {
    /// Minimum number of active members in the neighborhood.
    pub min_clients: usize,
    pub min_uptime_fraction: f64,
    pub min_capacity_bps: f64,
}

impl Default for RouterCriteria {
    fn default() -> Self {
        RouterCriteria {
            min_clients: 100,
            min_uptime_fraction: 0.9,
            min_capacity_bps: 128_000.0,
        }
    }
}

/// Suitability of a router candidate: uptime first, then link capacity,
/// then closeness (lower metric is better).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RouterScore {
    pub uptime_fraction: f64,
    pub capacity_bps: f64,
    pub metric: f64,
}

impl RouterScore {
    pub fn of(rec: &NodeRecord) -> RouterScore {
        RouterScore {
            uptime_fraction: rec.uptime_fraction,
            capacity_bps: rec.link_capacity_bps,
            metric: rec.metric,
        }
    }

    pub fn total_cmp(&self, other: &RouterScore) -> Ordering {
        self.uptime_fraction
            .total_cmp(&other.uptime_fraction)
            .then(self.capacity_bps.total_cmp(&other.capacity_bps))
            .then(other.metric.total_cmp(&self.metric))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Eligibility {
    pub eligible: bool,
    pub score: RouterScore,
}

pub fn router_eligibility(rec: &NodeRecord, map: &NeighborhoodMap, c: &RouterCriteria) -> Eligibility {
    let eligible = rec.active
        && map.active_count() >= c.min_clients
        && rec.uptime_fraction >= c.min_uptime_fraction
        && rec.link_capacity_bps >= c.min_capacity_bps;
    Eligibility {
        eligible,
        score: RouterScore::of(rec),
    }
}

/// Eligible members in succession order: best score first, ties broken by
/// the lower address.
pub fn router_candidates(map: &NeighborhoodMap, c: &RouterCriteria) -> Vec<NodeAddress> {
    let mut eligible: Vec<(RouterScore, NodeAddress)> = map
        .members()
        .iter()
        .filter_map(|r| {
            let e = router_eligibility(r, map, c);
            e.eligible.then_some((e.score, r.address))
        })
        .collect();
    eligible.sort_by(|(sa, aa), (sb, ab)| sb.total_cmp(sa).then(aa.cmp(ab)));
    eligible.into_iter().map(|(_, a)| a).collect()
}

/// The best eligible member, or `None` when members must self-manage.
pub fn elect_router(map: &NeighborhoodMap, c: &RouterCriteria) -> Option<NodeAddress> {
    router_candidates(map, c).into_iter().next()
}

/// The candidate that takes over after `failed` stops beaconing.
pub fn next_in_line(map: &NeighborhoodMap, c: &RouterCriteria, failed: NodeAddress) -> Option<NodeAddress> {
    router_candidates(map, c).into_iter().find(|&a| a != failed)
}

/// Watches the router's liveness beacon. The router counts as present while
/// its latest beacon is no older than `ttl`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BeaconMonitor {
    pub ttl: VirtualTime,
    last_seen: Option<VirtualTime>,
}

impl BeaconMonitor {
    pub fn new(ttl: VirtualTime) -> BeaconMonitor {
        BeaconMonitor { ttl, last_seen: None }
    }

    pub fn observe(&mut self, now: VirtualTime) {
        self.last_seen = Some(self.last_seen.map_or(now, |t| t.max(now)));
    }

    pub fn last_seen(&self) -> Option<VirtualTime> {
        self.last_seen
    }

    /// True once a beacon was seen and has since aged past the ttl.
    pub fn expired(&self, now: VirtualTime) -> bool {
        self.last_seen.is_some_and(|t| now.saturating_sub(t) > self.ttl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simcore::RandomStream;

    fn roster(n: u32) -> NeighborhoodMap {
        NeighborhoodMap::from_records((0..n).map(|i| {
            let mut r = NodeRecord::new(NodeAddress(1000 + i));
            r.uptime_fraction = 0.5;
            r
        }))
        .unwrap()
    }

    fn perfect(a: u32) -> NodeRecord {
        let mut r = NodeRecord::new(NodeAddress(a));
        r.uptime_fraction = 1.0;
        r.link_capacity_bps = 1e6;
        r.metric = 0.0;
        r
    }

    #[test]
    fn size_gate() {
        let mut small = roster(49);
        small.insert(perfect(1)).unwrap();
        let e = router_eligibility(&perfect(1), &small, &RouterCriteria::default());
        assert!(!e.eligible);
        assert_eq!(elect_router(&small, &RouterCriteria::default()), None);

        let mut big = roster(199);
        big.insert(perfect(1)).unwrap();
        assert!(router_eligibility(&perfect(1), &big, &RouterCriteria::default()).eligible);
        assert_eq!(elect_router(&big, &RouterCriteria::default()), Some(NodeAddress(1)));
    }

    #[test]
    fn bottlenecked_node_rejected() {
        let mut map = roster(200);
        let mut slow = perfect(1);
        slow.link_capacity_bps = 56_000.0;
        map.insert(slow.clone()).unwrap();
        assert!(!router_eligibility(&slow, &map, &RouterCriteria::default()).eligible);
    }

    #[test]
    fn election_matches_brute_force() {
        let c = RouterCriteria {
            min_clients: 3,
            ..RouterCriteria::default()
        };
        let mut s = RandomStream::derive(5, "rosters");
        for _ in 0..300 {
            let n = s.uniform(1, 12) as u32;
            let recs: Vec<NodeRecord> = (0..n)
                .map(|i| {
                    let mut r = NodeRecord::new(NodeAddress(i * 3 + s.uniform(0, 2) as u32));
                    // coarse values so ties actually happen
                    r.uptime_fraction = [0.8, 0.9, 0.95, 1.0][s.uniform(0, 3) as usize];
                    r.link_capacity_bps = [64e3, 128e3, 1e6][s.uniform(0, 2) as usize];
                    r.metric = s.uniform(0, 2) as f64;
                    r.active = s.uniform(0, 5) > 0;
                    r
                })
                .collect();
            let map = NeighborhoodMap::from_records(recs).unwrap();
            let got = elect_router(&map, &c);

            let mut best: Option<&NodeRecord> = None;
            for r in map.members() {
                if !router_eligibility(r, &map, &c).eligible {
                    continue;
                }
                best = match best {
                    None => Some(r),
                    Some(b) => {
                        let key = |x: &NodeRecord| (x.uptime_fraction, x.link_capacity_bps, -x.metric);
                        let (kr, kb) = (key(r), key(b));
                        if kr > kb || (kr == kb && r.address < b.address) {
                            Some(r)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            assert_eq!(got, best.map(|r| r.address));
            if let Some(g) = got {
                assert!(router_eligibility(map.get(g).unwrap(), &map, &c).eligible);
            }
        }
    }

    #[test]
    fn failover_order() {
        let c = RouterCriteria {
            min_clients: 1,
            ..RouterCriteria::default()
        };
        let mut a = perfect(30);
        a.metric = 5.0;
        let b = perfect(20);
        let d = perfect(10);
        let map = NeighborhoodMap::from_records([a, b, d]).unwrap();
        assert_eq!(
            router_candidates(&map, &c),
            [NodeAddress(10), NodeAddress(20), NodeAddress(30)]
        );
        assert_eq!(next_in_line(&map, &c, NodeAddress(10)), Some(NodeAddress(20)));
        let lone = NeighborhoodMap::from_records([perfect(1)]).unwrap();
        assert_eq!(elect_router(&lone, &c), Some(NodeAddress(1)));
        assert_eq!(next_in_line(&lone, &c, NodeAddress(1)), None);
    }

    #[test]
    fn beacon_expiry() {
        let mut m = BeaconMonitor::new(VirtualTime(20));
        assert!(!m.expired(VirtualTime(1000)));
        m.observe(VirtualTime(100));
        assert!(!m.expired(VirtualTime(120)));
        assert!(m.expired(VirtualTime(121)));
        m.observe(VirtualTime(90));
        assert_eq!(m.last_seen(), Some(VirtualTime(100)));
    }
}
