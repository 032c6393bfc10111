#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ufv_core::{Itemset, UncertainDatabase};

pub const LETTERS: [&str; 5] = ["A", "B", "C", "D", "E"];

/// Every possible world of a small database, enumerated directly.
pub struct Oracle {
    pub n: usize,
    worlds: Vec<(Vec<BTreeSet<String>>, f64)>,
}

impl Oracle {
    pub fn new(db: &UncertainDatabase) -> Self {
        let records: Vec<Vec<(String, f64)>> = db
            .records()
            .map(|r| r.into_iter().map(|(i, p)| (i.as_str().to_string(), p)).collect())
            .collect();
        let uncertain: Vec<(usize, usize)> = records
            .iter()
            .enumerate()
            .flat_map(|(t, r)| {
                r.iter()
                    .enumerate()
                    .filter(|(_, (_, p))| *p < 1.0)
                    .map(move |(k, _)| (t, k))
            })
            .collect();
        assert!(uncertain.len() <= 24, "oracle guard");
        let mut worlds = Vec::with_capacity(1 << uncertain.len());
        for mask in 0u64..(1u64 << uncertain.len()) {
            let mut prob = 1.0;
            let mut present: Vec<BTreeSet<String>> = records
                .iter()
                .map(|r| {
                    r.iter()
                        .filter(|(_, p)| *p == 1.0)
                        .map(|(i, _)| i.clone())
                        .collect()
                })
                .collect();
            for (bit, &(t, k)) in uncertain.iter().enumerate() {
                let (item, p) = &records[t][k];
                if mask & (1 << bit) != 0 {
                    prob *= p;
                    present[t].insert(item.clone());
                } else {
                    prob *= 1.0 - p;
                }
            }
            worlds.push((present, prob));
        }
        Oracle {
            n: records.len(),
            worlds,
        }
    }

    pub fn world_count(&self) -> usize {
        self.worlds.len()
    }

    pub fn total_probability(&self) -> f64 {
        self.worlds.iter().map(|(_, p)| p).sum()
    }

    fn support(world: &[BTreeSet<String>], items: &[String]) -> usize {
        world
            .iter()
            .filter(|t| items.iter().all(|i| t.contains(i)))
            .count()
    }

    /// `Pr[sup(X) = k]` for `k = 0..=n`.
    pub fn distribution(&self, x: &Itemset) -> Vec<f64> {
        let items = names(x);
        let mut dist = vec![0.0; self.n + 1];
        for (w, p) in &self.worlds {
            dist[Self::support(w, &items)] += p;
        }
        dist
    }

    pub fn tail(&self, x: &Itemset, delta: u64) -> f64 {
        self.distribution(x)
            .iter()
            .enumerate()
            .filter(|(k, _)| *k as u64 >= delta)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn p_less(&self, x: &Itemset, delta: u64) -> f64 {
        1.0 - self.tail(x, delta)
    }

    pub fn mean(&self, x: &Itemset) -> f64 {
        self.distribution(x)
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    pub fn variance(&self, x: &Itemset) -> f64 {
        let m = self.mean(x);
        self.distribution(x)
            .iter()
            .enumerate()
            .map(|(k, p)| (k as f64 - m).powi(2) * p)
            .sum()
    }

    /// Probability that the singleton supports of `x` satisfy `pred`.
    pub fn singletons<F: Fn(&[usize]) -> bool>(&self, x: &Itemset, pred: F) -> f64 {
        let items = names(x);
        self.worlds
            .iter()
            .filter(|(w, _)| {
                let sups: Vec<usize> = items
                    .iter()
                    .map(|i| Self::support(w, std::slice::from_ref(i)))
                    .collect();
                pred(&sups)
            })
            .map(|(_, p)| p)
            .sum()
    }

    pub fn joint_box(&self, x: &Itemset, delta: u64) -> f64 {
        self.singletons(x, |s| s.iter().all(|&c| (c as u64) < delta))
    }

    pub fn lambda(&self, x: &Itemset, delta: u64) -> f64 {
        self.singletons(x, |s| s.iter().all(|&c| c > 0 && (c as u64) < delta))
    }

    pub fn joint_tail(&self, x: &Itemset, delta: u64) -> f64 {
        self.singletons(x, |s| s.iter().all(|&c| c as u64 >= delta))
    }

    pub fn all_zero(&self, x: &Itemset) -> f64 {
        self.singletons(x, |s| s.iter().all(|&c| c == 0))
    }

    /// `Pr[some z ∈ X has sup(z) ≥ δ]`.
    pub fn any_tail(&self, x: &Itemset, delta: u64) -> f64 {
        self.singletons(x, |s| s.iter().any(|&c| c as u64 >= delta))
    }
}

pub fn names(x: &Itemset) -> Vec<String> {
    x.items().iter().map(|i| i.as_str().to_string()).collect()
}

pub fn set(s: &str) -> Itemset {
    Itemset::parse(s).unwrap()
}

/// All non-empty itemsets over the first `k` letters.
pub fn lattice(k: usize) -> Vec<Itemset> {
    (1u32..(1 << k))
        .map(|m| {
            let items: Vec<&str> = (0..k).filter(|b| m & (1 << b) != 0).map(|b| LETTERS[b]).collect();
            set(&items.join(","))
        })
        .collect()
}

/// A small random database over `A..` with at most `max_uncertain`
/// uncertain item instances. About a fifth of the instances are certain.
pub fn small_db(rng: &mut ChaCha8Rng, max_txns: usize, n_items: usize, max_uncertain: usize) -> UncertainDatabase {
    loop {
        let n = rng.random_range(1..=max_txns);
        let mut records = Vec::new();
        for _ in 0..n {
            let mut rec = Vec::new();
            for item in &LETTERS[..n_items] {
                if rng.random_bool(0.6) {
                    let p = if rng.random_bool(0.2) {
                        1.0
                    } else {
                        rng.random_range(0.05..0.95)
                    };
                    rec.push((ufv_core::Item::new(item).unwrap(), p));
                }
            }
            records.push(rec);
        }
        let db = UncertainDatabase::from_records(records).unwrap();
        if db.uncertain_instances() <= max_uncertain {
            return db;
        }
    }
}

/// A random database of up to `max_txns` transactions, with 0/1
/// probabilities when `deterministic`.
pub fn random_db(rng: &mut ChaCha8Rng, max_txns: usize, n_items: usize, deterministic: bool) -> UncertainDatabase {
    let n = rng.random_range(1..=max_txns);
    let density = rng.random_range(0.3..0.9);
    let mut records = Vec::with_capacity(n);
    for _ in 0..n {
        let mut rec = Vec::new();
        for item in &LETTERS[..n_items] {
            if rng.random_bool(density) {
                let p = if deterministic {
                    1.0
                } else {
                    rng.random_range(0.01..=1.0)
                };
                rec.push((ufv_core::Item::new(item).unwrap(), p));
            }
        }
        records.push(rec);
    }
    UncertainDatabase::from_records(records).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Direct brute-force supports (deterministic counting) of every itemset.
pub fn brute_supports(db: &UncertainDatabase, sets: &[Itemset]) -> BTreeMap<Itemset, u64> {
    let txns: Vec<BTreeSet<String>> = db
        .records()
        .map(|r| r.into_iter().map(|(i, _)| i.as_str().to_string()).collect())
        .collect();
    sets.iter()
        .map(|x| {
            let items = names(x);
            let c = txns.iter().filter(|t| items.iter().all(|i| t.contains(i))).count();
            (x.clone(), c as u64)
        })
        .collect()
}

/// Direct expected supports.
pub fn brute_esup(db: &UncertainDatabase, x: &Itemset) -> f64 {
    let items = names(x);
    db.records()
        .map(|r| {
            let m: BTreeMap<&str, f64> = r.iter().map(|(i, p)| (i.as_str(), *p)).collect();
            items.iter().map(|i| m.get(i.as_str()).copied().unwrap_or(0.0)).product::<f64>()
        })
        .sum()
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}
