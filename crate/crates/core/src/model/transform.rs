use super::database::UncertainDatabase;
use super::weights::{WeightAssignment, WeightScheme};
use crate::error::{Error, Result};

/// Squares every stored probability (the database `T²`).
pub fn squared_transform(db: &UncertainDatabase) -> UncertainDatabase {
    db.map_probabilities(|_, p| p * p)
}

/// Materializes the probability-scaled database `T'`.
///
/// Only used to cross-check the virtual formulas; verification never calls
/// it. Fails when a scaled probability would exceed 1.
pub fn scale_transform(db: &UncertainDatabase, w: &WeightAssignment) -> Result<UncertainDatabase> {
    let global = match w.scheme() {
        WeightScheme::ScaleGlobal => Some(w.global_product()),
        WeightScheme::ScalePerItem => None,
        WeightScheme::DetReplicate => {
            return Err(Error::InvalidArgument(
                "replication weights do not scale probabilities".into(),
            ))
        }
    };
    for item in db.universe() {
        w.require(item)?;
    }
    let mut overflow = None;
    let out = db.map_probabilities(|item, p| {
        let factor = global.unwrap_or_else(|| w.weight(item).expect("checked above"));
        let q = p * factor;
        if q > 1.0 && overflow.is_none() {
            overflow = Some(q);
        }
        q
    });
    match overflow {
        Some(q) => Err(Error::MaterializationOverflow(q)),
        None => Ok(out),
    }
}
