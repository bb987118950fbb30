use super::{NeighborhoodMap, NodeAddress, TopologyError};

/// Partition of a neighborhood's active members into contiguous clusters of
/// the sorted address list.
///
/// Every member can compute the same plan from its own copy of the map, so
/// no messages are needed to agree on cluster membership or leaders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPlan {
    cluster_size: usize,
    members: Vec<NodeAddress>,
    clusters: Vec<Vec<NodeAddress>>,
}

impl ClusterPlan {
    /// Builds a plan from addresses in any order. Duplicates are rejected.
    pub fn from_addresses<I>(addresses: I, cluster_size: usize) -> Result<ClusterPlan, TopologyError>
    where
        I: IntoIterator<Item = NodeAddress>,
    {
        if cluster_size == 0 {
            return Err(TopologyError::InvalidClusterSize);
        }
        let mut members: Vec<NodeAddress> = addresses.into_iter().collect();
        if members.is_empty() {
            return Err(TopologyError::NoActiveInstances);
        }
        members.sort_unstable();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(TopologyError::DuplicateAddress(w[0]));
        }
        let clusters = members.chunks(cluster_size).map(<[_]>::to_vec).collect();
        Ok(ClusterPlan {
            cluster_size,
            members,
            clusters,
        })
    }

    pub fn cluster_size(&self) -> usize {
        self.cluster_size
    }

    /// All planned members, ascending.
    pub fn members(&self) -> &[NodeAddress] {
        &self.members
    }

    pub fn clusters(&self) -> &[Vec<NodeAddress>] {
        &self.clusters
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters.len()
    }

    /// The lowest address of each cluster, in cluster order.
    pub fn leaders(&self) -> Vec<NodeAddress> {
        self.clusters.iter().map(|c| c[0]).collect()
    }

    pub fn head_leader(&self) -> NodeAddress {
        self.members[0]
    }
}

/// Chunks the map's active members into clusters of `cluster_size`.
pub fn form_clusters(map: &NeighborhoodMap, cluster_size: usize) -> Result<ClusterPlan, TopologyError> {
    ClusterPlan::from_addresses(map.active_members().map(|r| r.address), cluster_size)
}

/// Index of the cluster holding `a`, derived from its rank in the sorted
/// member list.
pub fn cluster_of(a: NodeAddress, plan: &ClusterPlan) -> Result<usize, TopologyError> {
    plan.members
        .binary_search(&a)
        .map(|rank| rank / plan.cluster_size)
        .map_err(|_| TopologyError::NotAMember(a))
}

/// Splits a neighborhood whose membership exceeds `critical_mass` at the
/// midpoint of its sorted address list. The lower half takes the extra
/// member when the count is odd.
pub fn subdivide(
    map: &NeighborhoodMap,
    critical_mass: usize,
) -> Result<(NeighborhoodMap, NeighborhoodMap), TopologyError> {
    let n = map.len();
    if n <= critical_mass {
        return Err(TopologyError::NoSplit {
            members: n,
            critical_mass,
        });
    }
    let mid = n.div_ceil(2);
    let (lo, hi) = map.members().split_at(mid);
    let version = map.version() + 1;
    let routers = map.remote_routers().to_vec();
    Ok((
        NeighborhoodMap::from_parts(lo.to_vec(), routers.clone(), version),
        NeighborhoodMap::from_parts(hi.to_vec(), routers, version),
    ))
}

/// Keeps subdividing until every neighborhood is at or below `critical_mass`.
pub fn subdivide_until(map: &NeighborhoodMap, critical_mass: usize) -> Vec<NeighborhoodMap> {
    let mut done = Vec::new();
    let mut work = vec![map.clone()];
    while let Some(m) = work.pop() {
        match subdivide(&m, critical_mass) {
            Ok((lo, hi)) => {
                work.push(hi);
                work.push(lo);
            }
            Err(_) => done.push(m),
        }
    }
    done
}
