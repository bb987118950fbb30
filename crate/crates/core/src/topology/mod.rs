//! Overlay identity and structure: addresses, neighborhood maps, cluster
//! plans, subdivision and router election.

mod address;
mod cluster;
mod map;
mod plan_file;
mod router;

pub use address::{AddressParseError, AddressRange, NodeAddress};
pub use cluster::{cluster_of, form_clusters, subdivide, subdivide_until, ClusterPlan};
pub use map::{NeighborhoodMap, NodeRecord};
pub use plan_file::parse_address_plan;
pub use router::{
    elect_router, next_in_line, router_candidates, router_eligibility, BeaconMonitor, Eligibility, RouterCriteria,
    RouterScore,
};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TopologyError {
    #[error("no active instances in the neighborhood")]
    NoActiveInstances,
    #[error("cluster size must be at least 1")]
    InvalidClusterSize,
    #[error("{0} is not a member")]
    NotAMember(NodeAddress),
    #[error("duplicate address {0}")]
    DuplicateAddress(NodeAddress),
    #[error("record for {0} has out-of-range fields")]
    InvalidRecord(NodeAddress),
    #[error("{members} members do not exceed critical mass {critical_mass}")]
    NoSplit { members: usize, critical_mass: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}
