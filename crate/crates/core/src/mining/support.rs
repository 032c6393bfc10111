//! Support statistics of a single itemset: expected support, variance,
//! the exact Poisson-binomial support distribution and its left tail.

use crate::model::{Itemset, UncertainDatabase};
use crate::numeric::compensated_sum;

/// Per-transaction containment probabilities `q_i` of `x`.
pub(crate) fn itemset_probs(db: &UncertainDatabase, x: &Itemset) -> Vec<f64> {
    let ids = db.resolve(x);
    db.scan().map(|t| t.itemset_prob(&ids)).collect()
}

/// `esup(X) = Σ_i Π_{x∈X} p_i(x)`.
pub fn expected_support(db: &UncertainDatabase, x: &Itemset) -> f64 {
    compensated_sum(itemset_probs(db, x))
}

/// Variance of `sup(X)`: `Σ_i q_i (1 - q_i)`.
pub fn variance(db: &UncertainDatabase, x: &Itemset) -> f64 {
    compensated_sum(itemset_probs(db, x).into_iter().map(|q| q * (1.0 - q)))
}

/// Distribution of `sup(X)` over possible worlds; `probs()[k] = Pr[sup(X) = k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportDistribution {
    probs: Vec<f64>,
}

impl SupportDistribution {
    /// Poisson-binomial distribution of independent successes `q`.
    pub fn from_success_probs(q: &[f64]) -> Self {
        let mut probs = vec![0.0; q.len() + 1];
        probs[0] = 1.0;
        for (j, &qj) in q.iter().enumerate() {
            // After j transactions at most j successes are possible.
            for k in (1..=j + 1).rev() {
                probs[k] = probs[k] * (1.0 - qj) + probs[k - 1] * qj;
            }
            probs[0] *= 1.0 - qj;
        }
        SupportDistribution { probs }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `Pr[sup ≥ delta]`.
    pub fn tail(&self, delta: u64) -> f64 {
        let start = usize::try_from(delta).unwrap_or(usize::MAX);
        if start >= self.probs.len() {
            return 0.0;
        }
        compensated_sum(self.probs[start..].iter().copied())
    }

    pub fn mean(&self) -> f64 {
        compensated_sum(self.probs.iter().enumerate().map(|(k, p)| k as f64 * p))
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        compensated_sum(
            self.probs
                .iter()
                .enumerate()
                .map(|(k, p)| (k as f64 - mean).powi(2) * p),
        )
    }
}

/// Exact distribution of `sup(X)` by an O(n²) convolution.
pub fn support_distribution(db: &UncertainDatabase, x: &Itemset) -> SupportDistribution {
    SupportDistribution::from_success_probs(&itemset_probs(db, x))
}

/// Frequentness probability `Pr[sup(X) ≥ delta]`, summed from the full
/// support distribution.
pub fn frequentness_probability(db: &UncertainDatabase, x: &Itemset, delta: u64) -> f64 {
    support_distribution(db, x).tail(delta)
}

/// `P_{<delta, n}(X) = Pr[sup(X) < delta]` by the left-tail recurrence
/// `P_{<i,j} = P_{<i-1,j-1} q_j + P_{<i,j-1} (1 - q_j)`, with
/// `P_{<0,j} = 0` and `P_{<i,j} = 1` for `j < i`.
///
/// O(delta · n) time.
pub fn p_less_dp(db: &UncertainDatabase, x: &Itemset, delta: u64) -> f64 {
    p_less_from_probs(&itemset_probs(db, x), delta)
}

pub(crate) fn p_less_from_probs(q: &[f64], delta: u64) -> f64 {
    let n = q.len();
    if delta as u128 > n as u128 {
        return 1.0;
    }
    let delta = delta as usize;
    // column[i] = P_{<i, j} for the current j; column[0] stays 0.
    let mut column = vec![1.0; delta + 1];
    column[0] = 0.0;
    for &qj in q {
        for i in (1..=delta).rev() {
            column[i] = column[i - 1] * qj + column[i] * (1.0 - qj);
        }
        // The left tail never grows; stop before it turns subnormal.
        if column[delta] < 1e-300 {
            return 0.0;
        }
    }
    column[delta]
}

/// `Pr[sup(X) ≥ delta]` through the left-tail recurrence.
pub(crate) fn tail_via_p_less(q: &[f64], delta: u64) -> f64 {
    (1.0 - p_less_from_probs(q, delta)).max(0.0)
}
