use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use super::SyncError;
use crate::topology::NodeAddress;

/// Who gets to see an attribute.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    /// Advertised within a named group of instances.
    Group(String),
    /// Advertised within the owner's neighborhood only.
    Local,
    /// Visible across all neighborhoods.
    Global,
}

impl Scope {
    pub fn crosses_neighborhoods(&self) -> bool {
        !matches!(self, Scope::Local)
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Group(g) => write!(f, "group:{g}"),
            Scope::Local => f.write_str("local"),
            Scope::Global => f.write_str("global"),
        }
    }
}

impl FromStr for Scope {
    type Err = SyncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "local" => Ok(Scope::Local),
            "global" => Ok(Scope::Global),
            _ => match s.strip_prefix("group:") {
                Some(g) if !g.is_empty() => Ok(Scope::Group(g.to_string())),
                _ => Err(SyncError::BadToken(format!("scope {s:?}"))),
            },
        }
    }
}

/// How often the owner wants an attribute refreshed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum UpdateClass {
    Aggressive,
    Moderate,
    Light,
}

impl UpdateClass {
    pub const ALL: [UpdateClass; 3] = [UpdateClass::Aggressive, UpdateClass::Moderate, UpdateClass::Light];
}

impl fmt::Display for UpdateClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateClass::Aggressive => "aggressive",
            UpdateClass::Moderate => "moderate",
            UpdateClass::Light => "light",
        })
    }
}

impl FromStr for UpdateClass {
    type Err = SyncError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "aggressive" => Ok(UpdateClass::Aggressive),
            "moderate" => Ok(UpdateClass::Moderate),
            "light" => Ok(UpdateClass::Light),
            _ => Err(SyncError::BadToken(format!("update class {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AttributeEntry {
    pub key: String,
    pub scope: Scope,
    pub value: Vec<u8>,
    pub version: u64,
    pub owner: NodeAddress,
    pub update_class: UpdateClass,
}

impl AttributeEntry {
    pub fn new(owner: NodeAddress, key: impl Into<String>, scope: Scope, value: impl Into<Vec<u8>>) -> Self {
        AttributeEntry {
            key: key.into(),
            scope,
            value: value.into(),
            version: 1,
            owner,
            update_class: UpdateClass::Moderate,
        }
    }

    pub fn with_version(mut self, version: u64) -> Self {
        self.version = version;
        self
    }

    pub fn with_class(mut self, class: UpdateClass) -> Self {
        self.update_class = class;
        self
    }

    /// `true` if `self` should replace `other` for the same `(key, owner)`.
    /// Higher version wins; exact ties fall back to a total order on the
    /// remaining fields so merging stays commutative.
    fn beats(&self, other: &AttributeEntry) -> bool {
        let rank = |e: &AttributeEntry| {
            (
                std::cmp::Reverse(e.version),
                e.owner,
                e.value.clone(),
                e.scope.clone(),
                e.update_class,
            )
        };
        rank(self) < rank(other)
    }
}

pub type AttributeKey = (String, NodeAddress);

/// At most one entry per `(key, owner)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AttributeList {
    entries: BTreeMap<AttributeKey, AttributeEntry>,
}

impl AttributeList {
    pub fn new() -> AttributeList {
        AttributeList::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str, owner: NodeAddress) -> Option<&AttributeEntry> {
        self.entries.get(&(key.to_string(), owner))
    }

    pub fn iter(&self) -> impl Iterator<Item = &AttributeEntry> {
        self.entries.values()
    }

    /// Accepts an entry received from elsewhere.
    ///
    /// Returns `Ok(true)` if it replaced or added an entry. A scope change
    /// for an existing `(key, owner)` is refused.
    pub fn accept(&mut self, entry: AttributeEntry) -> Result<bool, SyncError> {
        let k = (entry.key.clone(), entry.owner);
        match self.entries.get(&k) {
            Some(cur) if cur.scope != entry.scope => Err(SyncError::ScopeChange {
                key: entry.key,
                owner: entry.owner,
            }),
            Some(cur) if !entry.beats(cur) => Ok(false),
            _ => {
                self.entries.insert(k, entry);
                Ok(true)
            }
        }
    }

    /// The owner's own change: bumps the version past whatever is held.
    pub fn set_local(
        &mut self,
        owner: NodeAddress,
        key: &str,
        scope: Scope,
        class: UpdateClass,
        value: impl Into<Vec<u8>>,
    ) -> Result<&AttributeEntry, SyncError> {
        let version = self.get(key, owner).map_or(1, |e| e.version + 1);
        let entry = AttributeEntry::new(owner, key, scope, value)
            .with_version(version)
            .with_class(class);
        self.accept(entry)?;
        Ok(self.get(key, owner).expect("just inserted"))
    }

    /// Entries carrying exactly `(key, value)`.
    pub fn matching<'a>(&'a self, key: &'a str, value: &'a [u8]) -> impl Iterator<Item = &'a AttributeEntry> + 'a {
        self.entries.values().filter(move |e| e.key == key && e.value == value)
    }
}

impl FromIterator<AttributeEntry> for AttributeList {
    fn from_iter<T: IntoIterator<Item = AttributeEntry>>(iter: T) -> Self {
        let mut out = AttributeList::new();
        for e in iter {
            let k = (e.key.clone(), e.owner);
            match out.entries.get(&k) {
                Some(cur) if !e.beats(cur) => {}
                _ => {
                    out.entries.insert(k, e);
                }
            }
        }
        out
    }
}

/// Union over `(key, owner)`; on conflict the higher version survives.
pub fn merge_lists(a: &AttributeList, b: &AttributeList) -> AttributeList {
    let mut out = a.clone();
    for (k, e) in &b.entries {
        match out.entries.get(k) {
            Some(cur) if !e.beats(cur) => {}
            _ => {
                out.entries.insert(k.clone(), e.clone());
            }
        }
    }
    out
}
