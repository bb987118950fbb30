use std::collections::BTreeMap;

use crate::simcore::VirtualTime;
use crate::topology::NodeAddress;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingIntro {
    pub id: u64,
    pub sender: NodeAddress,
    pub target: NodeAddress,
    pub payload: String,
    pub deadline: VirtualTime,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Resolution {
    Delivered(VirtualTime),
    Expired(VirtualTime),
}

/// Sender-side buffer for messages whose target was offline. Each record
/// leaves the queue exactly once, through [`release`](Self::release) or
/// [`expire`](Self::expire).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntroductionQueue {
    pending: BTreeMap<u64, PendingIntro>,
    resolved: BTreeMap<u64, Resolution>,
    next_id: u64,
}

impl IntroductionQueue {
    pub fn new() -> IntroductionQueue {
        IntroductionQueue::default()
    }

    pub fn enqueue(&mut self, sender: NodeAddress, target: NodeAddress, payload: &str, deadline: VirtualTime) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        self.pending.insert(
            id,
            PendingIntro {
                id,
                sender,
                target,
                payload: payload.to_string(),
                deadline,
            },
        );
        id
    }

    pub fn pending(&self) -> impl Iterator<Item = &PendingIntro> {
        self.pending.values()
    }

    pub fn pending_count(&self) -> usize {
        self.pending.len()
    }

    pub fn resolution(&self, id: u64) -> Option<Resolution> {
        self.resolved.get(&id).copied()
    }

    pub fn resolutions(&self) -> &BTreeMap<u64, Resolution> {
        &self.resolved
    }

    /// Takes every unexpired record that `ready` accepts, in id order.
    pub fn release<F>(&mut self, now: VirtualTime, mut ready: F) -> Vec<PendingIntro>
    where
        F: FnMut(&PendingIntro) -> bool,
    {
        let ids: Vec<u64> = self
            .pending
            .values()
            .filter(|p| now < p.deadline && ready(p))
            .map(|p| p.id)
            .collect();
        self.take(&ids, Resolution::Delivered(now))
    }

    /// Drops the record if its deadline has been reached.
    pub fn expire(&mut self, id: u64, now: VirtualTime) -> Option<PendingIntro> {
        match self.pending.get(&id) {
            Some(p) if now >= p.deadline => self.take(&[id], Resolution::Expired(now)).pop(),
            _ => None,
        }
    }

    fn take(&mut self, ids: &[u64], how: Resolution) -> Vec<PendingIntro> {
        ids.iter()
            .filter_map(|id| {
                let p = self.pending.remove(id)?;
                let previous = self.resolved.insert(*id, how);
                debug_assert!(previous.is_none(), "intro {id} resolved twice");
                Some(p)
            })
            .collect()
    }
}
