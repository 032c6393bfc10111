use super::support::itemset_probs;
use crate::error::{Error, Result};
use crate::model::{Itemset, UncertainDatabase};
use crate::numeric::{compensated_sum, normal_cdf};

/// Normal model of an itemset's support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalModel {
    pub mean: f64,
    pub variance: f64,
}

impl NormalModel {
    pub fn new(mean: f64, variance: f64) -> Self {
        NormalModel { mean, variance }
    }

    /// Mean and variance of `sup(X)` computed from the database.
    pub fn of_itemset(db: &UncertainDatabase, x: &Itemset) -> Self {
        let q = itemset_probs(db, x);
        NormalModel {
            mean: compensated_sum(q.iter().copied()),
            variance: compensated_sum(q.iter().map(|&q| q * (1.0 - q))),
        }
    }
}

/// `Pr[sup ≥ delta] ≈ Φ((mean − delta + 0.5) / √variance)`.
///
/// With zero variance the support is a point mass at `mean`.
pub fn normal_approx_frequentness(model: NormalModel, delta: u64) -> Result<f64> {
    if model.variance < 0.0 || model.variance.is_nan() {
        return Err(Error::NegativeVariance(model.variance));
    }
    let shifted = model.mean - delta as f64 + 0.5;
    if model.variance == 0.0 {
        return Ok(if shifted >= 0.0 { 1.0 } else { 0.0 });
    }
    Ok(normal_cdf(shifted / model.variance.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_anchor() {
        let p = normal_approx_frequentness(NormalModel::new(50.0, 25.0), 50).unwrap();
        assert!((p - 0.539_827_837_277_029).abs() < 1e-12);
    }

    #[test]
    fn midpoint_is_half() {
        let p = normal_approx_frequentness(NormalModel::new(6.5, 3.0), 7).unwrap();
        assert_eq!(p, 0.5);
    }

    #[test]
    fn degenerate_variance() {
        assert_eq!(normal_approx_frequentness(NormalModel::new(10.0, 0.0), 10).unwrap(), 1.0);
        assert_eq!(normal_approx_frequentness(NormalModel::new(9.0, 0.0), 10).unwrap(), 0.0);
    }

    #[test]
    fn increases_with_mean() {
        let lo = normal_approx_frequentness(NormalModel::new(4.0, 2.0), 5).unwrap();
        let hi = normal_approx_frequentness(NormalModel::new(6.0, 2.0), 5).unwrap();
        assert!(hi > lo);
    }

    #[test]
    fn negative_variance_is_an_error() {
        assert!(normal_approx_frequentness(NormalModel::new(1.0, -0.1), 1).is_err());
    }
}
