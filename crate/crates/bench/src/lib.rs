//! Fixtures shared by the benchmarks.

use ufv_core::model::generate_synthetic;
use ufv_core::prover::prove;
use ufv_core::{AdversaryModel, Itemset, MiningMode, MiningQuery, ProverResponse, UncertainDatabase};

/// Seeded synthetic database with probabilities in `[0.2, 0.8]`.
pub fn database(txns: usize, items: usize, density: f64, seed: u64) -> UncertainDatabase {
    generate_synthetic(txns, items, density, (0.2, 0.8), seed).expect("valid fixture parameters")
}

/// The first `k` items of the database's universe.
pub fn leading_items(db: &UncertainDatabase, k: usize) -> Itemset {
    Itemset::new(db.universe().iter().take(k).cloned()).expect("non-empty universe")
}

/// Honest response and its default checksets.
pub fn honest(db: &UncertainDatabase, mode: MiningMode, ratio: f64) -> (ProverResponse, Vec<Itemset>) {
    let pft = mode.needs_pft().then_some(0.3);
    let q = MiningQuery::new(mode, ratio, pft, db.len()).expect("valid query");
    let resp = prove(db, &q, None, &AdversaryModel::honest()).expect("honest proving succeeds");
    let checksets = resp.checksets();
    (resp, checksets)
}
