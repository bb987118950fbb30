use std::fmt;
use std::net::Ipv4Addr;
use std::str::FromStr;

/// 32-bit overlay address, ordered by integer value and written as a
/// dotted quad.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeAddress(pub u32);

impl NodeAddress {
    pub fn from_octets(a: u8, b: u8, c: u8, d: u8) -> NodeAddress {
        NodeAddress(u32::from(Ipv4Addr::new(a, b, c, d)))
    }

    /// Absolute difference of the integer values, the stand-in for
    /// ISP-range proximity.
    pub fn distance(self, other: NodeAddress) -> u32 {
        self.0.abs_diff(other.0)
    }
}

impl fmt::Display for NodeAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Ipv4Addr::from(self.0).fmt(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("invalid dotted-quad address {0:?}")]
pub struct AddressParseError(pub String);

impl FromStr for NodeAddress {
    type Err = AddressParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Ipv4Addr>()
            .map(|ip| NodeAddress(u32::from(ip)))
            .map_err(|_| AddressParseError(s.to_string()))
    }
}

/// Inclusive address range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddressRange {
    pub first: NodeAddress,
    pub last: NodeAddress,
}

impl AddressRange {
    pub fn new(first: NodeAddress, last: NodeAddress) -> AddressRange {
        assert!(first <= last, "empty range {first}..={last}");
        AddressRange { first, last }
    }

    pub fn contains(&self, a: NodeAddress) -> bool {
        self.first <= a && a <= self.last
    }

    pub fn len(&self) -> u64 {
        u64::from(self.last.0 - self.first.0) + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parse_and_render() {
        let a: NodeAddress = "10.0.0.1".parse().unwrap();
        assert_eq!(a, NodeAddress::from_octets(10, 0, 0, 1));
        assert_eq!(a.0, 0x0a00_0001);
        assert_eq!(a.to_string(), "10.0.0.1");
        assert!("10.0.0".parse::<NodeAddress>().is_err());
        assert!("10.0.0.256".parse::<NodeAddress>().is_err());
    }

    #[test]
    fn ordering_is_numeric() {
        let lo: NodeAddress = "9.255.255.255".parse().unwrap();
        let hi: NodeAddress = "10.0.0.0".parse().unwrap();
        assert!(lo < hi);
        assert_eq!(lo.distance(hi), 1);
    }

    #[test]
    fn range_len() {
        let r = AddressRange::new(NodeAddress(10), NodeAddress(19));
        assert_eq!(r.len(), 10);
        assert!(r.contains(NodeAddress(19)));
        assert!(!r.contains(NodeAddress(20)));
    }

    proptest! {
        #[test]
        fn dotted_quad_round_trips(v in any::<u32>()) {
            let a = NodeAddress(v);
            prop_assert_eq!(a.to_string().parse::<NodeAddress>().unwrap(), a);
        }
    }
}
