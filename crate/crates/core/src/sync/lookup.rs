use super::attribute::AttributeList;
use super::SyncError;
use crate::topology::{NeighborhoodMap, NodeAddress};

/// One neighborhood as seen by the lookup machinery: its map, its router
/// (if it has one yet) and its finalized attribute list.
#[derive(Clone, Debug, PartialEq)]
pub struct NeighborhoodView {
    pub id: String,
    pub map: NeighborhoodMap,
    pub router: Option<NodeAddress>,
    pub finalized: AttributeList,
}

/// A set of neighborhoods joined through their routers.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Overlay {
    pub neighborhoods: Vec<NeighborhoodView>,
}

impl Overlay {
    pub fn get(&self, id: &str) -> Option<&NeighborhoodView> {
        self.neighborhoods.iter().find(|n| n.id == id)
    }

    /// Makes every router known to every other neighborhood's map.
    pub fn link_routers(&mut self) {
        let routers: Vec<(String, NodeAddress)> = self
            .neighborhoods
            .iter()
            .filter_map(|n| n.router.map(|r| (n.id.clone(), r)))
            .collect();
        for n in &mut self.neighborhoods {
            for (id, r) in &routers {
                if *id != n.id {
                    n.map.add_remote_router(*r);
                }
            }
        }
    }
}

/// Connection set up through the two neighborhoods' routers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoutedConnection {
    pub origin_router: NodeAddress,
    pub remote_router: NodeAddress,
    pub target: NodeAddress,
    pub neighborhood: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LookupResult {
    /// `(instance, neighborhood id)` pairs, local first, then remote in
    /// overlay order.
    pub matches: Vec<(NodeAddress, String)>,
    pub routed: Vec<RoutedConnection>,
    /// Some neighborhood could not be reached, so matches may be missing.
    pub partial: bool,
}

/// Finds every instance advertising `(key, value)`.
///
/// Local matches come from the origin's own finalized list in any scope.
/// Remote neighborhoods are reached only via the origin's router and only
/// when their router appears in the origin map; local-scope entries never
/// leave their neighborhood.
pub fn lookup_by_attribute(
    overlay: &Overlay,
    key: &str,
    value: &[u8],
    origin: &str,
) -> Result<LookupResult, SyncError> {
    let home = overlay
        .get(origin)
        .ok_or_else(|| SyncError::UnknownNeighborhood(origin.to_string()))?;
    let mut out = LookupResult::default();
    for e in home.finalized.matching(key, value) {
        out.matches.push((e.owner, home.id.clone()));
    }
    for remote in overlay.neighborhoods.iter().filter(|n| n.id != origin) {
        let path = match (home.router, remote.router) {
            (Some(mine), Some(theirs)) if home.map.remote_routers().contains(&theirs) => (mine, theirs),
            _ => {
                out.partial = true;
                continue;
            }
        };
        for e in remote
            .finalized
            .matching(key, value)
            .filter(|e| e.scope.crosses_neighborhoods())
        {
            out.matches.push((e.owner, remote.id.clone()));
            out.routed.push(RoutedConnection {
                origin_router: path.0,
                remote_router: path.1,
                target: e.owner,
                neighborhood: remote.id.clone(),
            });
        }
    }
    Ok(out)
}
