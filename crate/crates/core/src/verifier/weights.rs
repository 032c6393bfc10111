use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::checker::SchemeId;
use crate::error::{Error, Result};
use crate::model::{Item, UncertainDatabase, WeightAssignment};
use crate::numeric::derive_seed;

/// Upper end of replication weights.
pub const MAX_REPLICATION_WEIGHT: u64 = 1 << 20;
/// Range of scaling weights.
pub const SCALE_WEIGHT_RANGE: (f64, f64) = (0.1, 10.0);

/// Draws one private weight per item of the database's universe.
pub fn generate_weights(db: &UncertainDatabase, scheme: SchemeId, seed: u64) -> Result<WeightAssignment> {
    generate_weights_for(db.universe(), scheme, seed)
}

/// Draws one private weight per item, visiting items in sorted order.
///
/// Replication weights are integers uniform in `[1, 2^20]`; scaling weights
/// are reals uniform in `[0.1, 10)`.
pub fn generate_weights_for<'a, I>(items: I, scheme: SchemeId, seed: u64) -> Result<WeightAssignment>
where
    I: IntoIterator<Item = &'a Item>,
{
    let kind = scheme.weight_scheme().ok_or_else(|| Error::IncompatibleScheme {
        scheme: scheme.tag(),
        context: "weight generation".into(),
    })?;
    let items: BTreeSet<&Item> = items.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let weights = items.into_iter().map(|item| {
        let w = match scheme {
            SchemeId::DetWeighted => rng.random_range(1..=MAX_REPLICATION_WEIGHT) as f64,
            _ => rng.random_range(SCALE_WEIGHT_RANGE.0..SCALE_WEIGHT_RANGE.1),
        };
        (item.clone(), w)
    });
    WeightAssignment::from_weights(kind, seed, weights)
}

/// Weight draws for the two passes of approximate-result verification.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ApproxWeights {
    /// Weights for the pass over `T`.
    pub original: Option<WeightAssignment>,
    /// Independently drawn weights for the pass over `T²`.
    pub squared: Option<WeightAssignment>,
}

impl ApproxWeights {
    /// Draws both passes' weights from one seed through independent streams.
    /// Unweighted schemes get no weights.
    pub fn generate<'a, I>(items: I, scheme: SchemeId, seed: u64) -> Result<Self>
    where
        I: IntoIterator<Item = &'a Item> + Clone,
    {
        if !scheme.is_weighted() {
            return Ok(ApproxWeights::default());
        }
        Ok(ApproxWeights {
            original: Some(generate_weights_for(items.clone(), scheme, derive_seed(seed, 1))?),
            squared: Some(generate_weights_for(items, scheme, derive_seed(seed, 2))?),
        })
    }
}
