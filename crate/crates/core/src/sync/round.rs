use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::attribute::{merge_lists, AttributeList};
use super::SyncError;
use crate::simcore::{DelaySource, VirtualTime};
use crate::topology::{ClusterPlan, NodeAddress};

/// The four message passes of a neighborhood-wide update, in order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Phase {
    /// Each cluster's leader starts a chain up the cluster, every member
    /// appending its entries.
    IntraForward,
    /// The highest member walks the cluster-finalized list back down.
    IntraReverse,
    /// Leaders repeat forward and reverse among themselves, starting from the
    /// lowest leader.
    LeaderRing,
    /// Each leader walks the neighborhood-finalized list up its cluster.
    Redistribute,
    Done,
}

impl Phase {
    fn next(self) -> Phase {
        match self {
            Phase::IntraForward => Phase::IntraReverse,
            Phase::IntraReverse => Phase::LeaderRing,
            Phase::LeaderRing => Phase::Redistribute,
            Phase::Redistribute | Phase::Done => Phase::Done,
        }
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One message sent during a round.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hop {
    pub phase: Phase,
    pub from: NodeAddress,
    pub to: NodeAddress,
    pub sent_at: VirtualTime,
    pub arrived_at: VirtualTime,
}

// A token walking a fixed path; `pos` indexes the current holder.
#[derive(Clone, Debug)]
struct Chain {
    path: Vec<NodeAddress>,
    pos: usize,
    clock: VirtualTime,
    carried: AttributeList,
    finished: bool,
}

/// A neighborhood-wide attribute update in progress.
///
/// The per-cluster chains of a phase run concurrently in simulated time:
/// each chain keeps its own clock and a phase ends when its slowest chain
/// does. [`UpdateRound::step`] delivers one message at a time, rotating over
/// the chains that still have hops left.
#[derive(Clone, Debug)]
pub struct UpdateRound {
    plan: ClusterPlan,
    phase: Phase,
    lists: BTreeMap<NodeAddress, AttributeList>,
    down: BTreeSet<NodeAddress>,
    stale: BTreeSet<NodeAddress>,
    chains: Vec<Chain>,
    cursor: usize,
    phase_start: VirtualTime,
    phase_ends: Vec<(Phase, VirtualTime)>,
    hops: Vec<Hop>,
    /// Member holding each cluster's result after the intra passes.
    cluster_heads: Vec<NodeAddress>,
    final_list: Option<AttributeList>,
}

/// Starts a round at virtual time zero.
pub fn start_round(plan: &ClusterPlan, lists: &BTreeMap<NodeAddress, AttributeList>) -> Result<UpdateRound, SyncError> {
    UpdateRound::start(plan, lists, VirtualTime::ZERO)
}

impl UpdateRound {
    pub fn start(
        plan: &ClusterPlan,
        lists: &BTreeMap<NodeAddress, AttributeList>,
        at: VirtualTime,
    ) -> Result<UpdateRound, SyncError> {
        let mut own = BTreeMap::new();
        for &m in plan.members() {
            let list = lists.get(&m).ok_or(SyncError::MissingList(m))?;
            own.insert(m, list.clone());
        }
        let mut round = UpdateRound {
            plan: plan.clone(),
            phase: Phase::IntraForward,
            lists: own,
            down: BTreeSet::new(),
            stale: BTreeSet::new(),
            chains: Vec::new(),
            cursor: 0,
            phase_start: at,
            phase_ends: Vec::new(),
            hops: Vec::new(),
            cluster_heads: Vec::new(),
            final_list: None,
        };
        round.enter_phase();
        Ok(round)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn plan(&self) -> &ClusterPlan {
        &self.plan
    }

    pub fn hops(&self) -> &[Hop] {
        &self.hops
    }

    pub fn message_count(&self) -> usize {
        self.hops.len()
    }

    pub fn list_of(&self, a: NodeAddress) -> Option<&AttributeList> {
        self.lists.get(&a)
    }

    pub fn lists(&self) -> &BTreeMap<NodeAddress, AttributeList> {
        &self.lists
    }

    /// Members skipped because they were down when a hop targeted them.
    pub fn stale(&self) -> &BTreeSet<NodeAddress> {
        &self.stale
    }

    pub fn final_list(&self) -> Option<&AttributeList> {
        self.final_list.as_ref()
    }

    /// Virtual time at which each completed phase ended.
    pub fn phase_ends(&self) -> &[(Phase, VirtualTime)] {
        &self.phase_ends
    }

    /// Total simulated duration once the round is done.
    pub fn finished_at(&self) -> Option<VirtualTime> {
        (self.phase == Phase::Done).then_some(self.phase_start)
    }

    /// Marks a member as gone. Hops aimed at it are skipped from now on.
    pub fn mark_down(&mut self, a: NodeAddress) {
        self.down.insert(a);
    }

    fn live(&self, a: NodeAddress) -> bool {
        !self.down.contains(&a)
    }

    fn chain(&self, path: Vec<NodeAddress>, carried: AttributeList) -> Chain {
        Chain {
            finished: path.len() < 2,
            path,
            pos: 0,
            clock: self.phase_start,
            carried,
        }
    }

    fn enter_phase(&mut self) {
        self.cursor = 0;
        let clusters: Vec<Vec<NodeAddress>> = self
            .plan
            .clusters()
            .iter()
            .map(|c| c.iter().copied().filter(|&m| self.live(m)).collect::<Vec<_>>())
            .collect();
        self.chains = match self.phase {
            Phase::IntraForward => clusters
                .into_iter()
                .filter(|c| !c.is_empty())
                .map(|c| {
                    let start = self.lists[&c[0]].clone();
                    self.chain(c, start)
                })
                .collect(),
            Phase::IntraReverse => {
                // Walk back down from whoever ended the forward pass.
                let mut chains = Vec::new();
                for fwd in std::mem::take(&mut self.chains) {
                    let mut path: Vec<NodeAddress> = fwd.path[..=fwd.pos].to_vec();
                    path.reverse();
                    chains.push(self.chain(path, fwd.carried));
                }
                chains
            }
            Phase::LeaderRing => {
                let prev = std::mem::take(&mut self.chains);
                self.cluster_heads = prev.iter().map(|c| c.path[c.pos]).collect();
                let heads = self.cluster_heads.clone();
                if heads.is_empty() {
                    Vec::new()
                } else {
                    let mut path = heads.clone();
                    path.extend(heads.iter().rev().skip(1));
                    let start = self.lists[&heads[0]].clone();
                    vec![self.chain(path, start)]
                }
            }
            Phase::Redistribute => {
                let ring = std::mem::take(&mut self.chains);
                let finalized = ring.first().map(|c| c.carried.clone()).unwrap_or_default();
                self.final_list = Some(finalized.clone());
                let heads = self.cluster_heads.clone();
                heads
                    .iter()
                    .map(|&h| {
                        let mut path = vec![h];
                        let cluster =
                            &self.plan.clusters()[crate::topology::cluster_of(h, &self.plan).expect("member")];
                        path.extend(cluster.iter().copied().filter(|&m| m > h && self.live(m)));
                        self.chain(path, finalized.clone())
                    })
                    .collect()
            }
            Phase::Done => Vec::new(),
        };
    }

    fn finish_phase(&mut self) {
        let end = self.chains.iter().map(|c| c.clock).max().unwrap_or(self.phase_start);
        self.phase_ends.push((self.phase, end));
        self.phase_start = end;
        self.phase = self.phase.next();
        self.enter_phase();
    }

    /// Delivers the next message of the round.
    ///
    /// Returns the hop taken, or `None` when the round has just reached
    /// `Done` with no further messages.
    pub fn step<D: DelaySource>(&mut self, delays: &mut D) -> Result<Option<Hop>, SyncError> {
        if self.phase == Phase::Done {
            return Err(SyncError::RoundFinished);
        }
        loop {
            let n = self.chains.len();
            let pick = (0..n)
                .map(|i| (self.cursor + i) % n)
                .find(|&i| !self.chains[i].finished);
            let Some(idx) = pick else {
                self.finish_phase();
                if self.phase == Phase::Done {
                    return Ok(None);
                }
                continue;
            };
            self.cursor = (idx + 1) % n;
            if let Some(hop) = self.advance(idx, delays) {
                return Ok(Some(hop));
            }
        }
    }

    // Moves chain `idx` forward by one message, skipping down targets.
    fn advance<D: DelaySource>(&mut self, idx: usize, delays: &mut D) -> Option<Hop> {
        let phase = self.phase;
        let chain = &self.chains[idx];
        let from = chain.path[chain.pos];
        let mut next = chain.pos + 1;
        while next < chain.path.len() && (!self.live(chain.path[next]) || chain.path[next] == from) {
            if chain.path[next] != from {
                self.stale.insert(chain.path[next]);
            }
            next += 1;
        }
        if next >= chain.path.len() {
            self.chains[idx].finished = true;
            return None;
        }
        let to = self.chains[idx].path[next];
        let sent_at = self.chains[idx].clock;
        let arrived_at = sent_at + delays.delay_from(from);

        let receiver = self.lists.get(&to).cloned().unwrap_or_default();
        let chain = &mut self.chains[idx];
        let merged = merge_lists(&receiver, &chain.carried);
        chain.carried = merged.clone();
        chain.pos = next;
        chain.clock = arrived_at;
        chain.finished = next + 1 >= chain.path.len();
        self.lists.insert(to, merged);

        let hop = Hop {
            phase,
            from,
            to,
            sent_at,
            arrived_at,
        };
        self.hops.push(hop);
        Some(hop)
    }

    /// Steps until `Done`.
    pub fn run<D: DelaySource>(&mut self, delays: &mut D) -> VirtualTime {
        while self.phase != Phase::Done {
            self.step(delays).expect("not done");
        }
        self.phase_start
    }

    /// True when every member that was never skipped holds the same list.
    pub fn converged(&self) -> bool {
        let mut lists = self
            .lists
            .iter()
            .filter(|(a, _)| self.live(**a) && !self.stale.contains(*a))
            .map(|(_, l)| l);
        match lists.next() {
            None => true,
            Some(first) => lists.all(|l| l == first),
        }
    }
}

/// Messages a failure-free round sends: `2(n_j − 1)` per cluster for the
/// intra passes, `2(N − 1)` around the leaders, `n_j − 1` per cluster to
/// redistribute. Reduces to `N·2(n−1) + 2(N−1) + N·(n−1)` for equal sizes.
pub fn expected_messages(plan: &ClusterPlan) -> usize {
    let n_clusters = plan.cluster_count();
    let intra: usize = plan.clusters().iter().map(|c| c.len() - 1).sum();
    3 * intra + 2 * (n_clusters - 1)
}
