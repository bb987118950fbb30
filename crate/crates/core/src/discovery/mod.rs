//! How an instance finds its neighbors: the download site's registry and
//! the excerpt it encodes into each copy, nearest-first bootstrap with a
//! search-engine fallback, queued introductions for offline targets, and
//! the router's periodic sweep of the search engine.

mod bootstrap;
mod directory;
mod intro;
mod registry;
mod scan;

pub use bootstrap::{bootstrap, BootstrapAttempt, JoinOutcome};
pub use directory::{Advert, SearchEngineDirectory};
pub use intro::{IntroductionQueue, PendingIntro, Resolution};
pub use registry::{DirectoryExcerpt, DownloadRecord, DownloadRegistry, EXCERPT_CAP};
pub use scan::{neighborhood_scan, ScanOutcome};

use crate::topology::{AddressRange, NeighborhoodMap, NodeAddress, NodeRecord};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum DiscoveryError {
    #[error("{0} is not in the neighborhood map it is refreshing")]
    RouterNotInMap(NodeAddress),
}

/// Pulls advertised clients within `span` into the router's map and
/// removes their adverts. Returns the addresses added.
pub fn router_refresh(
    router: NodeAddress,
    map: &mut NeighborhoodMap,
    directory: &mut SearchEngineDirectory,
    span: AddressRange,
) -> Result<Vec<NodeAddress>, DiscoveryError> {
    if !map.contains(router) {
        return Err(DiscoveryError::RouterNotInMap(router));
    }
    let mut added = Vec::new();
    for a in directory.clients_in(span) {
        if a == router {
            continue;
        }
        if !map.contains(a) {
            let domain = directory.get(a).map(|v| v.domain.clone()).unwrap_or_default();
            map.insert(NodeRecord::new(a).with_domain(domain))
                .expect("absent address inserts cleanly");
            added.push(a);
        }
        directory.deregister(a);
    }
    Ok(added)
}
