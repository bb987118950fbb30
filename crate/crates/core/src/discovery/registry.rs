use crate::simcore::VirtualTime;
use crate::topology::NodeAddress;

/// Default number of neighbors encoded into each downloaded copy.
pub const EXCERPT_CAP: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownloadRecord {
    pub address: NodeAddress,
    pub domain: String,
    pub at: VirtualTime,
}

/// Nearest earlier downloaders, closest first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DirectoryExcerpt {
    pub entries: Vec<(NodeAddress, String)>,
}

impl DirectoryExcerpt {
    /// The `cap` records nearest to `address`, by absolute address
    /// difference with ties going to the lower address.
    pub fn nearest<'a, I>(records: I, address: NodeAddress, cap: usize) -> DirectoryExcerpt
    where
        I: IntoIterator<Item = &'a DownloadRecord>,
    {
        let mut all: Vec<&DownloadRecord> = records.into_iter().filter(|r| r.address != address).collect();
        all.sort_by_key(|r| (r.address.distance(address), r.address));
        all.dedup_by_key(|r| r.address);
        DirectoryExcerpt {
            entries: all
                .into_iter()
                .take(cap)
                .map(|r| (r.address, r.domain.clone()))
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn addresses(&self) -> impl Iterator<Item = NodeAddress> + '_ {
        self.entries.iter().map(|(a, _)| *a)
    }
}

/// The download site's log of who fetched a copy and when.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DownloadRegistry {
    records: Vec<DownloadRecord>,
    cap: usize,
}

impl Default for DownloadRegistry {
    fn default() -> Self {
        DownloadRegistry::new(EXCERPT_CAP)
    }
}

impl DownloadRegistry {
    pub fn new(cap: usize) -> DownloadRegistry {
        DownloadRegistry {
            records: Vec::new(),
            cap,
        }
    }

    pub fn records(&self) -> &[DownloadRecord] {
        &self.records
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// Logs a download and returns the excerpt encoded into that copy.
    ///
    /// # Panics
    ///
    /// If `at` is earlier than the previous download.
    pub fn register_download(&mut self, address: NodeAddress, domain: &str, at: VirtualTime) -> DirectoryExcerpt {
        if let Some(last) = self.records.last() {
            assert!(
                at >= last.at,
                "download at {at} precedes the previous one at {}",
                last.at
            );
        }
        let excerpt = DirectoryExcerpt::nearest(&self.records, address, self.cap);
        self.records.push(DownloadRecord {
            address,
            domain: domain.to_string(),
            at,
        });
        excerpt
    }
}
