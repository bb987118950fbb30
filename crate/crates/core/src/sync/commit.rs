use std::collections::BTreeSet;

use super::SyncError;
use crate::simcore::VirtualTime;
use crate::topology::NodeAddress;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommitState {
    Pending,
    /// Every member still considered active returned a receipt, or the
    /// deadline passed and the silent ones were written off.
    Committed {
        at: VirtualTime,
        acked: BTreeSet<NodeAddress>,
        absentees: BTreeSet<NodeAddress>,
    },
    /// The proposer itself dropped out before resolution.
    Expired {
        at: VirtualTime,
    },
}

impl CommitState {
    pub fn is_resolved(&self) -> bool {
        !matches!(self, CommitState::Pending)
    }
}

/// A proposed attribute change waiting for receipts from its group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PendingCommit {
    pub key: String,
    pub value: Vec<u8>,
    pub proposer: NodeAddress,
    members: BTreeSet<NodeAddress>,
    acks: BTreeSet<NodeAddress>,
    offline: BTreeSet<NodeAddress>,
    pub deadline: VirtualTime,
    state: CommitState,
}

/// Opens a commit; the proposer's own receipt is implicit.
pub fn propose_commit<I>(
    proposer: NodeAddress,
    group: I,
    key: &str,
    value: impl Into<Vec<u8>>,
    now: VirtualTime,
    timeout: VirtualTime,
) -> Result<PendingCommit, SyncError>
where
    I: IntoIterator<Item = NodeAddress>,
{
    let members: BTreeSet<NodeAddress> = group.into_iter().collect();
    if !members.contains(&proposer) {
        return Err(SyncError::ProposerNotInGroup(proposer));
    }
    let mut commit = PendingCommit {
        key: key.to_string(),
        value: value.into(),
        proposer,
        members,
        acks: BTreeSet::from([proposer]),
        offline: BTreeSet::new(),
        deadline: now + timeout,
        state: CommitState::Pending,
    };
    commit.try_resolve(now);
    Ok(commit)
}

impl PendingCommit {
    pub fn state(&self) -> &CommitState {
        &self.state
    }

    pub fn members(&self) -> &BTreeSet<NodeAddress> {
        &self.members
    }

    pub fn acks(&self) -> &BTreeSet<NodeAddress> {
        &self.acks
    }

    pub fn is_committed(&self) -> bool {
        matches!(self.state, CommitState::Committed { .. })
    }

    /// Records a receipt. Duplicates are harmless; acks after resolution
    /// are ignored.
    pub fn ack(&mut self, from: NodeAddress, now: VirtualTime) -> Result<&CommitState, SyncError> {
        if !self.members.contains(&from) {
            return Err(SyncError::NotInGroup(from));
        }
        if !self.state.is_resolved() {
            self.acks.insert(from);
            self.offline.remove(&from);
            self.try_resolve(now);
        }
        Ok(&self.state)
    }

    /// The member is known to have gone offline; it no longer holds the
    /// commit back.
    pub fn member_down(&mut self, a: NodeAddress, now: VirtualTime) {
        if self.state.is_resolved() || !self.members.contains(&a) {
            return;
        }
        if a == self.proposer {
            self.state = CommitState::Expired { at: now };
            return;
        }
        self.offline.insert(a);
        self.try_resolve(now);
    }

    /// The member is back and its receipt is required again.
    pub fn member_up(&mut self, a: NodeAddress) {
        if !self.state.is_resolved() {
            self.offline.remove(&a);
        }
    }

    /// Applies the deadline: once reached, members that never acked are
    /// flagged absent and the commit finalizes over the rest.
    pub fn tick(&mut self, now: VirtualTime) -> &CommitState {
        if !self.state.is_resolved() && now >= self.deadline {
            self.state = CommitState::Committed {
                at: now,
                acked: self.acks.clone(),
                absentees: self.members.difference(&self.acks).copied().collect(),
            };
        }
        &self.state
    }

    fn try_resolve(&mut self, now: VirtualTime) {
        if self.state.is_resolved() {
            return;
        }
        if now >= self.deadline {
            self.tick(now);
            return;
        }
        let outstanding = self
            .members
            .iter()
            .any(|m| !self.acks.contains(m) && !self.offline.contains(m));
        if !outstanding {
            self.state = CommitState::Committed {
                at: now,
                acked: self.acks.clone(),
                absentees: self.members.difference(&self.acks).copied().collect(),
            };
        }
    }
}
