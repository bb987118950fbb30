use std::collections::BTreeMap;

use crate::topology::{AddressRange, NodeAddress};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Advert {
    pub domain: String,
    pub is_router: bool,
}

/// The search engine unconnected instances and routers advertise in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchEngineDirectory {
    adverts: BTreeMap<NodeAddress, Advert>,
}

impl SearchEngineDirectory {
    pub fn new() -> SearchEngineDirectory {
        SearchEngineDirectory::default()
    }

    /// Adds or replaces an advert. A router advert is never downgraded.
    pub fn advertise(&mut self, address: NodeAddress, domain: &str, is_router: bool) {
        let e = self.adverts.entry(address).or_insert_with(|| Advert {
            domain: domain.to_string(),
            is_router,
        });
        e.domain = domain.to_string();
        e.is_router |= is_router;
    }

    /// Removes a client's advert once it has been mapped. Routers stay
    /// listed; returns whether anything was removed.
    pub fn deregister(&mut self, address: NodeAddress) -> bool {
        match self.adverts.get(&address) {
            Some(a) if !a.is_router => {
                self.adverts.remove(&address);
                true
            }
            _ => false,
        }
    }

    pub fn get(&self, address: NodeAddress) -> Option<&Advert> {
        self.adverts.get(&address)
    }

    pub fn len(&self) -> usize {
        self.adverts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adverts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeAddress, &Advert)> {
        self.adverts.iter().map(|(a, v)| (*a, v))
    }

    /// Advertised entries other than `address`, nearest first.
    pub fn nearest_to(&self, address: NodeAddress) -> Vec<NodeAddress> {
        let mut v: Vec<NodeAddress> = self.adverts.keys().copied().filter(|&a| a != address).collect();
        v.sort_by_key(|a| (a.distance(address), *a));
        v
    }

    /// Non-router adverts inside `span`.
    pub fn clients_in(&self, span: AddressRange) -> Vec<NodeAddress> {
        self.adverts
            .range(span.first..=span.last)
            .filter(|(_, v)| !v.is_router)
            .map(|(a, _)| *a)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routers_stay_listed() {
        let mut d = SearchEngineDirectory::new();
        d.advertise(NodeAddress(5), "a", true);
        d.advertise(NodeAddress(6), "a", false);
        d.advertise(NodeAddress(5), "a", false);
        assert!(d.get(NodeAddress(5)).unwrap().is_router);
        assert!(!d.deregister(NodeAddress(5)));
        assert!(d.deregister(NodeAddress(6)));
        assert!(!d.deregister(NodeAddress(6)));
        assert_eq!(d.len(), 1);
    }

    #[test]
    fn span_and_nearest() {
        let mut d = SearchEngineDirectory::new();
        for (a, r) in [(10, false), (20, true), (30, false), (90, false)] {
            d.advertise(NodeAddress(a), "a", r);
        }
        let span = AddressRange::new(NodeAddress(0), NodeAddress(50));
        assert_eq!(d.clients_in(span), [NodeAddress(10), NodeAddress(30)]);
        assert_eq!(
            d.nearest_to(NodeAddress(25)),
            [NodeAddress(20), NodeAddress(30), NodeAddress(10), NodeAddress(90)]
        );
    }
}
