use super::{NodeAddress, TopologyError};

/// What the neighborhood knows about one member.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeRecord {
    pub address: NodeAddress,
    pub domain: String,
    pub uptime_fraction: f64,
    pub link_capacity_bps: f64,
    pub active: bool,
    /// Network distance from the neighborhood router, in whatever unit the
    /// caller measures. Opaque here.
    pub metric: f64,
}

impl NodeRecord {
    pub fn new(address: NodeAddress) -> NodeRecord {
        NodeRecord {
            address,
            domain: String::new(),
            uptime_fraction: 1.0,
            link_capacity_bps: 128_000.0,
            active: true,
            metric: 0.0,
        }
    }

    pub fn with_domain(mut self, domain: impl Into<String>) -> NodeRecord {
        self.domain = domain.into();
        self
    }

    pub fn validate(&self) -> Result<(), TopologyError> {
        let ok = (0.0..=1.0).contains(&self.uptime_fraction)
            && self.link_capacity_bps > 0.0
            && self.metric >= 0.0
            && self.metric.is_finite();
        if ok {
            Ok(())
        } else {
            Err(TopologyError::InvalidRecord(self.address))
        }
    }
}

/// A neighborhood's membership view: members sorted by address, the routers
/// of other neighborhoods, and a version bumped on every mutation.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct NeighborhoodMap {
    members: Vec<NodeRecord>,
    remote_routers: Vec<NodeAddress>,
    version: u64,
}

impl NeighborhoodMap {
    pub fn new() -> NeighborhoodMap {
        NeighborhoodMap::default()
    }

    /// Builds a map from records in any order. Duplicate addresses and
    /// out-of-range fields are rejected.
    pub fn from_records<I>(records: I) -> Result<NeighborhoodMap, TopologyError>
    where
        I: IntoIterator<Item = NodeRecord>,
    {
        let mut members: Vec<NodeRecord> = records.into_iter().collect();
        for r in &members {
            r.validate()?;
        }
        members.sort_by_key(|r| r.address);
        if let Some(w) = members.windows(2).find(|w| w[0].address == w[1].address) {
            return Err(TopologyError::DuplicateAddress(w[0].address));
        }
        Ok(NeighborhoodMap {
            members,
            remote_routers: Vec::new(),
            version: 0,
        })
    }

    pub fn members(&self) -> &[NodeRecord] {
        &self.members
    }

    pub fn addresses(&self) -> impl Iterator<Item = NodeAddress> + '_ {
        self.members.iter().map(|r| r.address)
    }

    pub fn active_members(&self) -> impl Iterator<Item = &NodeRecord> {
        self.members.iter().filter(|r| r.active)
    }

    pub fn active_count(&self) -> usize {
        self.active_members().count()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    pub fn remote_routers(&self) -> &[NodeAddress] {
        &self.remote_routers
    }

    fn position(&self, a: NodeAddress) -> Result<usize, usize> {
        self.members.binary_search_by_key(&a, |r| r.address)
    }

    pub fn get(&self, a: NodeAddress) -> Option<&NodeRecord> {
        self.position(a).ok().map(|i| &self.members[i])
    }

    pub fn contains(&self, a: NodeAddress) -> bool {
        self.position(a).is_ok()
    }

    pub fn insert(&mut self, record: NodeRecord) -> Result<(), TopologyError> {
        record.validate()?;
        match self.position(record.address) {
            Ok(_) => Err(TopologyError::DuplicateAddress(record.address)),
            Err(i) => {
                self.members.insert(i, record);
                self.version += 1;
                Ok(())
            }
        }
    }

    pub fn remove(&mut self, a: NodeAddress) -> Option<NodeRecord> {
        let i = self.position(a).ok()?;
        self.version += 1;
        Some(self.members.remove(i))
    }

    pub fn set_active(&mut self, a: NodeAddress, active: bool) -> Result<(), TopologyError> {
        let i = self.position(a).map_err(|_| TopologyError::NotAMember(a))?;
        self.members[i].active = active;
        self.version += 1;
        Ok(())
    }

    /// Adds a router of another neighborhood; returns false if known already.
    pub fn add_remote_router(&mut self, router: NodeAddress) -> bool {
        match self.remote_routers.binary_search(&router) {
            Ok(_) => false,
            Err(i) => {
                self.remote_routers.insert(i, router);
                self.version += 1;
                true
            }
        }
    }

    pub fn remove_remote_router(&mut self, router: NodeAddress) -> bool {
        match self.remote_routers.binary_search(&router) {
            Ok(i) => {
                self.remote_routers.remove(i);
                self.version += 1;
                true
            }
            Err(_) => false,
        }
    }

    pub(crate) fn from_parts(members: Vec<NodeRecord>, remote_routers: Vec<NodeAddress>, version: u64) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0].address < w[1].address));
        NeighborhoodMap {
            members,
            remote_routers,
            version,
        }
    }
}
