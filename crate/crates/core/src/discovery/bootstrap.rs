use super::directory::SearchEngineDirectory;
use super::registry::DirectoryExcerpt;
use crate::topology::NodeAddress;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum JoinOutcome {
    /// Joined through an excerpt entry.
    Connected { via: NodeAddress, failed: Vec<NodeAddress> },
    /// Every excerpt entry failed; a search-engine advert answered.
    ViaDirectory { via: NodeAddress, failed: Vec<NodeAddress> },
    /// Nobody answered. The instance advertises itself and waits.
    Isolated { failed: Vec<NodeAddress> },
}

/// Where a joining instance is in its list of connection attempts.
///
/// Targets are tried nearest first: excerpt entries, then search-engine
/// adverts. The caller reports each attempt's result and asks for the next
/// target until one answers or the list runs out.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BootstrapAttempt {
    pub instance: NodeAddress,
    excerpt: Vec<NodeAddress>,
    directory: Option<Vec<NodeAddress>>,
    cursor: usize,
    failed: Vec<NodeAddress>,
    outcome: Option<JoinOutcome>,
}

impl BootstrapAttempt {
    pub fn new(instance: NodeAddress, excerpt: &DirectoryExcerpt) -> BootstrapAttempt {
        let mut targets: Vec<NodeAddress> = excerpt.addresses().filter(|&a| a != instance).collect();
        targets.sort_by_key(|a| (a.distance(instance), *a));
        targets.dedup();
        BootstrapAttempt {
            instance,
            excerpt: targets,
            directory: None,
            cursor: 0,
            failed: Vec::new(),
            outcome: None,
        }
    }

    pub fn failed(&self) -> &[NodeAddress] {
        &self.failed
    }

    pub fn outcome(&self) -> Option<&JoinOutcome> {
        self.outcome.as_ref()
    }

    pub fn in_directory_phase(&self) -> bool {
        self.directory.is_some()
    }

    /// The next address to try. Once the excerpt is exhausted the directory
    /// is consulted once; `None` means the instance is isolated.
    pub fn next_target(&mut self, directory: &SearchEngineDirectory) -> Option<NodeAddress> {
        if self.outcome.is_some() {
            return None;
        }
        loop {
            let list = self.directory.as_ref().unwrap_or(&self.excerpt);
            if let Some(&t) = list.get(self.cursor) {
                self.cursor += 1;
                if self.failed.contains(&t) {
                    continue;
                }
                return Some(t);
            }
            if self.directory.is_some() {
                self.outcome = Some(JoinOutcome::Isolated {
                    failed: self.failed.clone(),
                });
                return None;
            }
            self.directory = Some(directory.nearest_to(self.instance));
            self.cursor = 0;
        }
    }

    pub fn record_failure(&mut self, target: NodeAddress) {
        if !self.failed.contains(&target) {
            self.failed.push(target);
        }
    }

    pub fn record_success(&mut self, via: NodeAddress) -> &JoinOutcome {
        let failed = self.failed.clone();
        self.outcome.insert(if self.directory.is_some() {
            JoinOutcome::ViaDirectory { via, failed }
        } else {
            JoinOutcome::Connected { via, failed }
        })
    }
}

/// Runs a whole bootstrap against a fixed liveness snapshot.
pub fn bootstrap<F>(
    instance: NodeAddress,
    excerpt: &DirectoryExcerpt,
    directory: &SearchEngineDirectory,
    mut is_live: F,
) -> JoinOutcome
where
    F: FnMut(NodeAddress) -> bool,
{
    let mut attempt = BootstrapAttempt::new(instance, excerpt);
    while let Some(t) = attempt.next_target(directory) {
        if is_live(t) {
            return attempt.record_success(t).clone();
        }
        attempt.record_failure(t);
    }
    attempt.outcome.expect("exhausted attempts are isolated")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn excerpt(addrs: &[u32]) -> DirectoryExcerpt {
        DirectoryExcerpt {
            entries: addrs.iter().map(|&a| (NodeAddress(a), "d".to_string())).collect(),
        }
    }

    #[test]
    fn nearest_live_wins() {
        let d = SearchEngineDirectory::new();
        let out = bootstrap(NodeAddress(12), &excerpt(&[40, 10, 30]), &d, |a| a != NodeAddress(10));
        assert_eq!(
            out,
            JoinOutcome::Connected {
                via: NodeAddress(30),
                failed: vec![NodeAddress(10)]
            }
        );
    }

    #[test]
    fn falls_back_to_directory_then_isolation() {
        let mut d = SearchEngineDirectory::new();
        d.advertise(NodeAddress(99), "d", true);
        let out = bootstrap(NodeAddress(12), &excerpt(&[10]), &d, |a| a == NodeAddress(99));
        assert_eq!(
            out,
            JoinOutcome::ViaDirectory {
                via: NodeAddress(99),
                failed: vec![NodeAddress(10)]
            }
        );
        let out = bootstrap(
            NodeAddress(12),
            &DirectoryExcerpt::default(),
            &SearchEngineDirectory::new(),
            |_| true,
        );
        assert_eq!(out, JoinOutcome::Isolated { failed: vec![] });
    }

    #[test]
    fn directory_does_not_retry_failed_excerpt_entries() {
        let mut d = SearchEngineDirectory::new();
        d.advertise(NodeAddress(10), "d", false);
        let mut tried = Vec::new();
        let out = bootstrap(NodeAddress(12), &excerpt(&[10]), &d, |a| {
            tried.push(a);
            false
        });
        assert_eq!(tried, [NodeAddress(10)]);
        assert!(matches!(out, JoinOutcome::Isolated { .. }));
    }
}
