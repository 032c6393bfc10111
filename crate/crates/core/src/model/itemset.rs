use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest checkset whose subset lattice we are willing to enumerate.
pub const MAX_LATTICE_ITEMS: usize = 20;

/// An item identifier.
///
/// Ids are non-empty tokens without whitespace or any of `: , ; =`, and
/// they may not start with `#` or `!` (those introduce comment and side-data
/// lines in the text formats). Ordering is byte order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Item(Arc<str>);

impl Item {
    pub fn new(id: &str) -> Result<Self> {
        let bad = id.is_empty()
            || id == "-"
            || id.starts_with('#')
            || id.starts_with('!')
            || id
                .chars()
                .any(|c| c.is_whitespace() || matches!(c, ':' | ',' | ';' | '='));
        if bad {
            return Err(Error::InvalidItem(id.to_string()));
        }
        Ok(Item(Arc::from(id)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl FromStr for Item {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Item::new(s)
    }
}

/// A set of items kept in strictly ascending order.
///
/// `Ord` is the canonical itemset order: shorter sets first, then
/// lexicographic on the sorted items.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Itemset(Vec<Item>);

impl Itemset {
    /// Builds a non-empty itemset; duplicates are rejected.
    pub fn new<I: IntoIterator<Item = Item>>(items: I) -> Result<Self> {
        let mut items: Vec<Item> = items.into_iter().collect();
        if items.is_empty() {
            return Err(Error::InvalidItemset("empty itemset".into()));
        }
        items.sort();
        if let Some(w) = items.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidItemset(format!("duplicate item {}", w[0])));
        }
        Ok(Itemset(items))
    }

    /// The explicitly empty itemset.
    pub fn empty() -> Self {
        Itemset(Vec::new())
    }

    pub fn singleton(item: Item) -> Self {
        Itemset(vec![item])
    }

    /// Parses a comma-joined itemset such as `A,B,C`.
    pub fn parse(s: &str) -> Result<Self> {
        let items = s
            .split(',')
            .map(|tok| Item::new(tok.trim()))
            .collect::<Result<Vec<_>>>()?;
        Itemset::new(items)
    }

    pub fn items(&self) -> &[Item] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: &Item) -> bool {
        self.0.binary_search(item).is_ok()
    }

    pub fn is_subset_of(&self, other: &Itemset) -> bool {
        self.0.iter().all(|i| other.contains(i))
    }

    /// Union of two itemsets.
    pub fn union(&self, other: &Itemset) -> Itemset {
        let mut items: Vec<Item> = self.0.iter().chain(other.0.iter()).cloned().collect();
        items.sort();
        items.dedup();
        Itemset(items)
    }

    /// Itemset with one extra item appended (the item must sort last).
    pub(crate) fn extended(&self, item: Item) -> Itemset {
        debug_assert!(self.0.last().is_none_or(|last| *last < item));
        let mut items = self.0.clone();
        items.push(item);
        Itemset(items)
    }

    /// The subset selected by bit `k` of `mask` for item `k`.
    pub fn subset_by_mask(&self, mask: u32) -> Itemset {
        Itemset(
            self.0
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, item)| item.clone())
                .collect(),
        )
    }

    /// All non-empty subsets, in canonical order.
    ///
    /// Fails with [`Error::GuardExceeded`] above [`MAX_LATTICE_ITEMS`] items.
    pub fn non_empty_subsets(&self) -> Result<Vec<Itemset>> {
        self.check_lattice_size()?;
        let mut subsets: Vec<Itemset> = (1u32..(1u32 << self.len()))
            .map(|mask| self.subset_by_mask(mask))
            .collect();
        subsets.sort();
        Ok(subsets)
    }

    pub(crate) fn check_lattice_size(&self) -> Result<()> {
        if self.len() > MAX_LATTICE_ITEMS {
            return Err(Error::GuardExceeded(format!(
                "checkset {} has {} items; the subset lattice is limited to {}",
                self,
                self.len(),
                MAX_LATTICE_ITEMS
            )));
        }
        Ok(())
    }
}

impl Ord for Itemset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Itemset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, item) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            f.write_str(item.as_str())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Itemset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{self}}}")
    }
}

impl FromStr for Itemset {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Itemset::parse(s)
    }
}
