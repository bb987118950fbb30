//! Scoped attributes and the hierarchical update protocol that keeps them
//! consistent across a neighborhood.
//!
//! A round runs in four passes over a [`ClusterPlan`](crate::topology::ClusterPlan):
//! up and back down each cluster, forward and back around the cluster
//! leaders, then once more up each cluster with the neighborhood-wide list.
//! Changes that need referential integrity go through a [`PendingCommit`]
//! that waits for receipts from the target group, bounded by a timeout.

mod attribute;
mod commit;
mod lookup;
mod period;
mod round;
mod seed_file;

pub use attribute::{merge_lists, AttributeEntry, AttributeKey, AttributeList, Scope, UpdateClass};
pub use commit::{propose_commit, CommitState, PendingCommit};
pub use lookup::{lookup_by_attribute, LookupResult, NeighborhoodView, Overlay, RoutedConnection};
pub use period::{update_period, PeriodPolicy};
pub use round::{expected_messages, start_round, Hop, Phase, UpdateRound};
pub use seed_file::parse_attribute_seeds;

use crate::topology::NodeAddress;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SyncError {
    #[error("member {0} has no attribute list")]
    MissingList(NodeAddress),
    #[error("round already finished")]
    RoundFinished,
    #[error("attribute {key:?} of {owner} cannot change scope")]
    ScopeChange { key: String, owner: NodeAddress },
    #[error("proposer {0} is not in the target group")]
    ProposerNotInGroup(NodeAddress),
    #[error("receipt from non-member {0}")]
    NotInGroup(NodeAddress),
    #[error("no network metrics supplied")]
    NoMetrics,
    #[error("unknown neighborhood {0:?}")]
    UnknownNeighborhood(String),
    #[error("unrecognized {0}")]
    BadToken(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
