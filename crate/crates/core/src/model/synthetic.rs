use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::database::UncertainDatabase;
use super::itemset::Item;
use crate::error::{Error, Result};

/// Upper bound on generated item ids (`I0` .. `I935`).
pub const MAX_SYNTHETIC_ITEMS: usize = 26 * 36;

/// Generates a random uncertain database.
///
/// Every (transaction, item) pair is included independently with
/// probability `density`; included items get a probability drawn uniformly
/// from `prob_range`. Items are named `I0`, `I1`, ...
pub fn generate_synthetic(
    n_txns: usize,
    n_items: usize,
    density: f64,
    prob_range: (f64, f64),
    seed: u64,
) -> Result<UncertainDatabase> {
    let (lo, hi) = prob_range;
    if !(density > 0.0 && density <= 1.0) {
        return Err(Error::InvalidArgument(format!("density {density} outside (0, 1]")));
    }
    if !(lo > 0.0 && lo <= hi && hi <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "probability range [{lo}, {hi}] must satisfy 0 < lo <= hi <= 1"
        )));
    }
    if n_items > MAX_SYNTHETIC_ITEMS {
        return Err(Error::InvalidArgument(format!(
            "at most {MAX_SYNTHETIC_ITEMS} items, got {n_items}"
        )));
    }
    let items: Vec<Item> = (0..n_items)
        .map(|k| Item::new(&format!("I{k}")).expect("generated id is valid"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let records: Vec<Vec<(Item, f64)>> = (0..n_txns)
        .map(|_| {
            items
                .iter()
                .filter_map(|item| {
                    if rng.random::<f64>() >= density {
                        return None;
                    }
                    let p = if lo == hi {
                        lo
                    } else {
                        lo + (hi - lo) * rng.random::<f64>()
                    };
                    Some((item.clone(), p))
                })
                .collect()
        })
        .collect();
    UncertainDatabase::from_records(records)
}
