//! Level-wise Apriori mining under all four frequentness semantics.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::normal::{normal_approx_frequentness, NormalModel};
use super::query::{MiningMode, MiningQuery};
use super::support::{itemset_probs, tail_via_p_less};
use crate::error::Result;
use crate::model::{Itemset, UncertainDatabase};
use crate::numeric::compensated_sum;

/// The mode-dependent statistic recorded for a mined itemset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinedValue {
    Sup(u64),
    Esup(f64),
    Pcnt(f64),
    Approx { esup: f64, variance: f64, apcnt: f64 },
}

/// Frequent itemsets with their statistics, keyed in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningResult {
    query: MiningQuery,
    entries: BTreeMap<Itemset, MinedValue>,
}

impl MiningResult {
    pub fn query(&self) -> &MiningQuery {
        &self.query
    }

    pub fn get(&self, x: &Itemset) -> Option<&MinedValue> {
        self.entries.get(x)
    }

    pub fn contains(&self, x: &Itemset) -> bool {
        self.entries.contains_key(x)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Itemset, &MinedValue)> {
        self.entries.iter()
    }

    pub fn itemsets(&self) -> impl Iterator<Item = &Itemset> {
        self.entries.keys()
    }
}

/// Computes the mode's statistic for `x`, whether or not it is frequent.
pub(crate) fn evaluate(db: &UncertainDatabase, query: &MiningQuery, x: &Itemset) -> Result<MinedValue> {
    let q = itemset_probs(db, x);
    Ok(match query.mode {
        MiningMode::Deterministic => MinedValue::Sup(q.iter().filter(|&&p| p > 0.0).count() as u64),
        MiningMode::Expected => MinedValue::Esup(compensated_sum(q)),
        MiningMode::Pws => MinedValue::Pcnt(tail_via_p_less(&q, query.delta)),
        MiningMode::Approx => {
            let model = NormalModel {
                mean: compensated_sum(q.iter().copied()),
                variance: compensated_sum(q.iter().map(|&q| q * (1.0 - q))),
            };
            MinedValue::Approx {
                esup: model.mean,
                variance: model.variance,
                apcnt: normal_approx_frequentness(model, query.delta)?,
            }
        }
    })
}

fn is_frequent(query: &MiningQuery, n_txns: usize, value: &MinedValue) -> bool {
    match *value {
        MinedValue::Sup(s) => s >= query.delta,
        MinedValue::Esup(e) => {
            let threshold = query.min_esup(n_txns);
            e >= threshold - 1e-9 * threshold.max(1.0)
        }
        MinedValue::Pcnt(p) => p >= query.pft.unwrap_or(1.0),
        MinedValue::Approx { apcnt, .. } => apcnt >= query.pft.unwrap_or(1.0),
    }
}

/// Joins frequent `k`-itemsets sharing a `(k-1)`-prefix and keeps the
/// candidates whose every `k`-subset is frequent.
fn next_candidates(level: &[Itemset], frequent: &BTreeSet<Itemset>) -> Vec<Itemset> {
    let mut out = Vec::new();
    for (a_idx, a) in level.iter().enumerate() {
        let k = a.len();
        for b in &level[a_idx + 1..] {
            if a.items()[..k - 1] != b.items()[..k - 1] {
                // Level is in canonical order, so prefix groups are contiguous.
                break;
            }
            let cand = a.extended(b.items()[k - 1].clone());
            let all_subsets_frequent = (0..cand.len()).all(|skip| {
                let mask = ((1u32 << cand.len()) - 1) & !(1 << skip);
                frequent.contains(&cand.subset_by_mask(mask))
            });
            if all_subsets_frequent {
                out.push(cand);
            }
        }
    }
    out
}

/// Mines all frequent itemsets of `db` under `query`.
///
/// Candidates of one level are evaluated in parallel; the result does not
/// depend on scheduling.
pub fn mine(db: &UncertainDatabase, query: &MiningQuery) -> Result<MiningResult> {
    let n = db.len();
    let mut entries = BTreeMap::new();
    let mut frequent = BTreeSet::new();
    let mut candidates: Vec<Itemset> = db
        .universe()
        .iter()
        .map(|i| Itemset::singleton(i.clone()))
        .collect();
    while !candidates.is_empty() {
        let evaluated: Vec<(Itemset, MinedValue)> = candidates
            .into_par_iter()
            .map(|x| evaluate(db, query, &x).map(|v| (x, v)))
            .collect::<Result<Vec<_>>>()?;
        let mut level = Vec::new();
        for (x, v) in evaluated {
            if is_frequent(query, n, &v) {
                frequent.insert(x.clone());
                entries.insert(x.clone(), v);
                level.push(x);
            }
        }
        level.sort();
        candidates = next_candidates(&level, &frequent);
    }
    Ok(MiningResult {
        query: *query,
        entries,
    })
}

/// The itemsets of `sets` that have no proper superset in `sets`.
pub fn maximal_itemsets<'a, I>(sets: I) -> Vec<Itemset>
where
    I: IntoIterator<Item = &'a Itemset>,
{
    let mut all: Vec<&Itemset> = sets.into_iter().collect();
    all.sort();
    all.dedup();
    let mut maximal: Vec<Itemset> = Vec::new();
    // Largest first: a set is maximal iff no already-kept set contains it.
    for x in all.into_iter().rev() {
        if !maximal.iter().any(|m| x.is_subset_of(m)) {
            maximal.push(x.clone());
        }
    }
    maximal.sort();
    maximal
}

/// The maximal frequent itemsets of a mining result: the checksets.
pub fn maximal_checksets(result: &MiningResult) -> Vec<Itemset> {
    maximal_itemsets(result.itemsets())
}
