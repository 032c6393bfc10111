use std::collections::BTreeSet;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use super::itemset::{Item, Itemset};
use crate::error::{Error, Result};

/// Dense index of an item in a database's item universe.
pub(crate) type ItemId = u32;

/// One uncertain transaction: items with their existence probabilities.
///
/// Entries are sorted by item id; probabilities lie in (0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct Transaction {
    entries: Vec<(ItemId, f64)>,
}

impl Transaction {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Existence probability of an item; 0 when absent.
    pub(crate) fn prob(&self, id: Option<ItemId>) -> f64 {
        match id {
            Some(id) => self
                .entries
                .binary_search_by_key(&id, |&(k, _)| k)
                .map(|pos| self.entries[pos].1)
                .unwrap_or(0.0),
            None => 0.0,
        }
    }

    /// Product of the item probabilities of a resolved itemset.
    pub(crate) fn itemset_prob(&self, ids: &[Option<ItemId>]) -> f64 {
        let mut p = 1.0;
        for &id in ids {
            p *= self.prob(id);
            if p == 0.0 {
                break;
            }
        }
        p
    }
}

/// A database of uncertain transactions.
///
/// Immutable after construction. Iteration through [`UncertainDatabase::scan`]
/// is counted so that single-pass algorithms can be audited.
pub struct UncertainDatabase {
    universe: Vec<Item>,
    transactions: Vec<Transaction>,
    scans: AtomicUsize,
}

impl UncertainDatabase {
    /// Builds a database from per-transaction `(item, probability)` records.
    ///
    /// Probabilities must lie in [0, 1]; zero entries are dropped. An item
    /// may appear at most once per transaction.
    pub fn from_records<R, I>(records: R) -> Result<Self>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator<Item = (Item, f64)>,
    {
        let records: Vec<Vec<(Item, f64)>> = records
            .into_iter()
            .map(|r| r.into_iter().collect())
            .collect();
        for (k, rec) in records.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for (item, p) in rec {
                if !seen.insert(item) {
                    return Err(Error::parse(
                        k + 1,
                        format!("duplicate item {item} in transaction"),
                    ));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::ProbabilityRange(*p));
                }
            }
        }
        let universe: Vec<Item> = records
            .iter()
            .flat_map(|r| r.iter().filter(|(_, p)| *p > 0.0).map(|(i, _)| i.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let transactions = records
            .into_iter()
            .map(|rec| {
                let mut entries: Vec<(ItemId, f64)> = rec
                    .into_iter()
                    .filter(|(_, p)| *p > 0.0)
                    .map(|(item, p)| {
                        let id = universe.binary_search(&item).expect("item in universe");
                        (id as ItemId, p)
                    })
                    .collect();
                entries.sort_by_key(|&(id, _)| id);
                Transaction { entries }
            })
            .collect();
        Ok(UncertainDatabase {
            universe,
            transactions,
            scans: AtomicUsize::new(0),
        })
    }

    pub fn empty() -> Self {
        UncertainDatabase {
            universe: Vec::new(),
            transactions: Vec::new(),
            scans: AtomicUsize::new(0),
        }
    }

    /// Number of transactions `n`.
    pub fn len(&self) -> usize {
        self.transactions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transactions.is_empty()
    }

    /// Items occurring anywhere in the database, sorted.
    pub fn universe(&self) -> &[Item] {
        &self.universe
    }

    pub(crate) fn item_id(&self, item: &Item) -> Option<ItemId> {
        self.universe.binary_search(item).ok().map(|k| k as ItemId)
    }

    pub(crate) fn item(&self, id: ItemId) -> &Item {
        &self.universe[id as usize]
    }

    /// Resolves an itemset against the universe; unknown items map to `None`.
    pub(crate) fn resolve(&self, x: &Itemset) -> Vec<Option<ItemId>> {
        x.items().iter().map(|i| self.item_id(i)).collect()
    }

    /// Transaction `i`, 1-based.
    pub fn transaction(&self, i: usize) -> Result<&Transaction> {
        if i == 0 || i > self.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            });
        }
        Ok(&self.transactions[i - 1])
    }

    /// Starts a full pass over the transactions and records it.
    pub fn scan(&self) -> std::slice::Iter<'_, Transaction> {
        self.scans.fetch_add(1, Ordering::Relaxed);
        self.transactions.iter()
    }

    /// Number of passes started since construction or the last reset.
    pub fn scan_count(&self) -> usize {
        self.scans.load(Ordering::Relaxed)
    }

    pub fn reset_scan_count(&self) {
        self.scans.store(0, Ordering::Relaxed);
    }

    /// The `(item, probability)` pairs of each transaction, item-sorted.
    pub fn records(&self) -> impl Iterator<Item = Vec<(&Item, f64)>> + '_ {
        self.transactions.iter().map(move |t| {
            t.entries
                .iter()
                .map(|&(id, p)| (self.item(id), p))
                .collect()
        })
    }

    /// True when every stored probability is exactly 1.
    pub fn is_deterministic(&self) -> bool {
        self.transactions
            .iter()
            .all(|t| t.entries.iter().all(|&(_, p)| p == 1.0))
    }

    /// Number of item instances whose probability is strictly below 1.
    pub fn uncertain_instances(&self) -> usize {
        self.transactions
            .iter()
            .map(|t| t.entries.iter().filter(|&&(_, p)| p < 1.0).count())
            .sum()
    }

    /// The database formed by the first `k` transactions.
    pub fn prefix(&self, k: usize) -> UncertainDatabase {
        let k = k.min(self.len());
        UncertainDatabase::from_records(self.records().take(k).map(|rec| {
            rec.into_iter()
                .map(|(i, p)| (i.clone(), p))
                .collect::<Vec<_>>()
        }))
        .expect("prefix of a valid database is valid")
    }

    /// Applies `f` to every stored probability; entries mapped to 0 are dropped.
    pub(crate) fn map_probabilities(&self, mut f: impl FnMut(&Item, f64) -> f64) -> Self {
        let transactions = self
            .transactions
            .iter()
            .map(|t| Transaction {
                entries: t
                    .entries
                    .iter()
                    .map(|&(id, p)| (id, f(&self.universe[id as usize], p)))
                    .filter(|&(_, p)| p > 0.0)
                    .collect(),
            })
            .collect();
        UncertainDatabase {
            universe: self.universe.clone(),
            transactions,
            scans: AtomicUsize::new(0),
        }
    }
}

impl Clone for UncertainDatabase {
    fn clone(&self) -> Self {
        UncertainDatabase {
            universe: self.universe.clone(),
            transactions: self.transactions.clone(),
            scans: AtomicUsize::new(0),
        }
    }
}

impl PartialEq for UncertainDatabase {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.transactions == other.transactions
    }
}

impl fmt::Debug for UncertainDatabase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for rec in self.records() {
            list.entry(&rec);
        }
        list.finish()
    }
}

/// Probability that transaction `i` (1-based) contains every item of `x`.
pub fn itemset_txn_prob(db: &UncertainDatabase, i: usize, x: &Itemset) -> Result<f64> {
    let t = db.transaction(i)?;
    Ok(t.itemset_prob(&db.resolve(x)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn item(s: &str) -> Item {
        Item::new(s).unwrap()
    }

    fn two_txn_db() -> UncertainDatabase {
        UncertainDatabase::from_records(vec![
            vec![(item("A"), 0.5), (item("B"), 0.6)],
            vec![(item("A"), 0.4), (item("B"), 0.5)],
        ])
        .unwrap()
    }

    #[test]
    fn itemset_txn_prob_examples() {
        let db = two_txn_db();
        let ab = Itemset::parse("A,B").unwrap();
        assert!((itemset_txn_prob(&db, 1, &ab).unwrap() - 0.30).abs() < 1e-15);
        let c = Itemset::parse("C").unwrap();
        assert_eq!(itemset_txn_prob(&db, 2, &c).unwrap(), 0.0);
        assert!(matches!(
            itemset_txn_prob(&db, 3, &ab),
            Err(Error::IndexOutOfRange { index: 3, len: 2 })
        ));
        assert!(itemset_txn_prob(&db, 0, &ab).is_err());
    }

    #[test]
    fn zero_probabilities_are_dropped() {
        let db = UncertainDatabase::from_records(vec![vec![(item("A"), 0.0), (item("B"), 1.0)]])
            .unwrap();
        assert_eq!(db.universe(), &[item("B")]);
        assert_eq!(db.transaction(1).unwrap().len(), 1);
    }

    #[test]
    fn rejects_bad_records() {
        assert!(UncertainDatabase::from_records(vec![vec![(item("A"), 1.5)]]).is_err());
        assert!(UncertainDatabase::from_records(vec![vec![(item("A"), -0.1)]]).is_err());
        assert!(
            UncertainDatabase::from_records(vec![vec![(item("A"), 0.5), (item("A"), 0.2)]])
                .is_err()
        );
    }

    #[test]
    fn scan_counter_counts_passes() {
        let db = two_txn_db();
        assert_eq!(db.scan_count(), 0);
        let n = db.scan().count();
        assert_eq!(n, 2);
        db.scan().for_each(drop);
        assert_eq!(db.scan_count(), 2);
        db.reset_scan_count();
        assert_eq!(db.scan_count(), 0);
    }

    #[test]
    fn prefix_keeps_first_transactions() {
        let db = two_txn_db();
        let p = db.prefix(1);
        assert_eq!(p.len(), 1);
        assert_eq!(p.transaction(1).unwrap(), db.transaction(1).unwrap());
    }
}
