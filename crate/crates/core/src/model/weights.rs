use std::collections::BTreeMap;

use super::itemset::{Item, Itemset};
use crate::error::{Error, Result};

/// How a weight assignment defines the virtual transformed database.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WeightScheme {
    /// Each transaction is replicated by the product of its item weights.
    DetReplicate,
    /// Every probability is multiplied by the product of all item weights.
    ScaleGlobal,
    /// Every probability is multiplied by its own item's weight.
    ScalePerItem,
}

/// Private per-item weights held by the data owner.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightAssignment {
    scheme: WeightScheme,
    seed: u64,
    weights: BTreeMap<Item, f64>,
}

impl WeightAssignment {
    /// Wraps explicit weights. All must be positive and finite; replication
    /// weights must also be integers.
    pub fn from_weights<I>(scheme: WeightScheme, seed: u64, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Item, f64)>,
    {
        let weights: BTreeMap<Item, f64> = weights.into_iter().collect();
        for (item, &w) in &weights {
            if !(w.is_finite() && w > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "weight of {item} must be positive, got {w}"
                )));
            }
            if scheme == WeightScheme::DetReplicate && (w.fract() != 0.0 || w > 2f64.powi(53)) {
                return Err(Error::InvalidArgument(format!(
                    "replication weight of {item} must be a positive integer, got {w}"
                )));
            }
        }
        Ok(WeightAssignment {
            scheme,
            seed,
            weights,
        })
    }

    pub fn scheme(&self) -> WeightScheme {
        self.scheme
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn weight(&self, item: &Item) -> Option<f64> {
        self.weights.get(item).copied()
    }

    pub(crate) fn require(&self, item: &Item) -> Result<f64> {
        self.weight(item)
            .ok_or_else(|| Error::MissingWeight(item.to_string()))
    }

    /// Product of the weights of every item in `x`.
    pub fn product_over(&self, x: &Itemset) -> Result<f64> {
        x.items().iter().try_fold(1.0, |acc, i| Ok(acc * self.require(i)?))
    }

    /// `M`: the product of all weights in the assignment.
    pub fn global_product(&self) -> f64 {
        self.weights.values().product()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Item, f64)> {
        self.weights.iter().map(|(i, &w)| (i, w))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}
