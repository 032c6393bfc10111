use crate::error::{Error, Result};
use crate::model::{Item, Itemset, UncertainDatabase};

/// Enumeration refuses databases with more uncertain item instances.
pub const MAX_WORLD_INSTANCES: usize = 24;

/// One deterministic instantiation of an uncertain database.
#[derive(Debug, Clone, PartialEq)]
pub struct PossibleWorld {
    transactions: Vec<Vec<Item>>,
    probability: f64,
}

impl PossibleWorld {
    pub fn probability(&self) -> f64 {
        self.probability
    }

    /// The items present in each transaction, sorted.
    pub fn transactions(&self) -> &[Vec<Item>] {
        &self.transactions
    }

    /// Number of transactions containing every item of `x`.
    pub fn support(&self, x: &Itemset) -> usize {
        self.transactions
            .iter()
            .filter(|t| x.items().iter().all(|i| t.binary_search(i).is_ok()))
            .count()
    }
}

/// Calls `f` on every possible world of `db`.
///
/// Instances with probability 1 are always present; the remaining `m`
/// instances give `2^m` worlds.
pub fn visit_worlds(db: &UncertainDatabase, mut f: impl FnMut(&PossibleWorld)) -> Result<()> {
    let m = db.uncertain_instances();
    if m > MAX_WORLD_INSTANCES {
        return Err(Error::GuardExceeded(format!(
            "{m} uncertain instances; enumeration is limited to {MAX_WORLD_INSTANCES}"
        )));
    }
    let records: Vec<Vec<(Item, f64)>> = db
        .records()
        .map(|r| r.into_iter().map(|(i, p)| (i.clone(), p)).collect())
        .collect();
    for mask in 0u64..(1u64 << m) {
        let mut bit = 0;
        let mut probability = 1.0;
        let mut transactions = Vec::with_capacity(records.len());
        for rec in &records {
            let mut present = Vec::with_capacity(rec.len());
            for (item, p) in rec {
                if *p >= 1.0 {
                    present.push(item.clone());
                    continue;
                }
                if mask & (1 << bit) != 0 {
                    probability *= p;
                    present.push(item.clone());
                } else {
                    probability *= 1.0 - p;
                }
                bit += 1;
            }
            transactions.push(present);
        }
        f(&PossibleWorld {
            transactions,
            probability,
        });
    }
    Ok(())
}

/// All possible worlds of `db` with their probabilities.
pub fn enumerate_worlds(db: &UncertainDatabase) -> Result<Vec<PossibleWorld>> {
    let mut worlds = Vec::new();
    visit_worlds(db, |w| worlds.push(w.clone()))?;
    Ok(worlds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_synthetic, parse_database};

    #[test]
    fn two_txn_example_has_16_worlds() {
        let db = parse_database(b"A:0.5 B:0.6\nA:0.4 B:0.5").unwrap();
        let worlds = enumerate_worlds(&db).unwrap();
        assert_eq!(worlds.len(), 16);
        let total: f64 = worlds.iter().map(|w| w.probability()).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_database_has_one_world() {
        let db = parse_database(b"A:1 B:1\nC:1").unwrap();
        let worlds = enumerate_worlds(&db).unwrap();
        assert_eq!(worlds.len(), 1);
        assert_eq!(worlds[0].probability(), 1.0);
        assert_eq!(worlds[0].support(&Itemset::parse("A,B").unwrap()), 1);
    }

    #[test]
    fn single_instance() {
        let db = parse_database(b"A:0.25").unwrap();
        let mut probs: Vec<f64> = enumerate_worlds(&db)
            .unwrap()
            .iter()
            .map(|w| w.probability())
            .collect();
        probs.sort_by(f64::total_cmp);
        assert_eq!(probs, [0.25, 0.75]);
    }

    #[test]
    fn guard() {
        let db = generate_synthetic(5, 5, 1.0, (0.2, 0.8), 1).unwrap();
        assert!(matches!(enumerate_worlds(&db), Err(Error::GuardExceeded(_))));
    }
}
