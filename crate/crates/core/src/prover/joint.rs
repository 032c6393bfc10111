//! Joint support DP over the singletons of a checkset.
//!
//! Supports of distinct items are independent under the tuple model, but the
//! DP does not rely on it: it tracks the vector of per-item counts through
//! every transaction's inclusion patterns. Independence only backs the
//! factorized cross-checks.

use crate::error::{Error, Result};
use crate::mining::{itemset_probs, p_less_from_probs, tail_via_p_less};
use crate::model::{Item, Itemset, UncertainDatabase};
use crate::numeric::CompensatedSum;

/// Largest checkset handled by the joint DP.
pub const MAX_JOINT_ITEMS: usize = 4;
/// Largest number of DP states.
pub const MAX_JOINT_STATES: usize = 1 << 18;
/// DP masses below this are flushed to zero so no step runs on subnormals.
const FLUSH_BELOW: f64 = 1e-300;

/// Probabilities read off one run of the joint DP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JointBox {
    /// `Pr[every sup(z) < δ]`.
    pub box_prob: f64,
    /// `Pr[every 0 < sup(z) < δ]`.
    pub lambda: f64,
    /// `Pr[every sup(z) = 0]`.
    pub corner: f64,
}

impl JointBox {
    /// `ρ`: the box without its all-zero corner.
    pub fn rho(&self) -> f64 {
        self.box_prob - self.corner
    }
}

/// Runs the DP for `x` at threshold `delta`.
///
/// Counts per item range over `0..d` with `d = min(δ, n + 1)`; mass that
/// would push a count to `d` leaves the box and is dropped. Each transaction
/// step visits every state under each of the `2^|X|` inclusion patterns.
/// Dropped mass lands in a discard slot owned by its source state, so the
/// updates of one pattern never chain through a shared slot.
pub fn joint_box_stats(db: &UncertainDatabase, x: &Itemset, delta: u64) -> Result<JointBox> {
    if x.is_empty() {
        return Err(Error::InvalidItemset("joint DP needs a non-empty itemset".into()));
    }
    if delta == 0 {
        return Err(Error::InvalidArgument("delta must be at least 1".into()));
    }
    let k = x.len();
    if k > MAX_JOINT_ITEMS {
        return Err(Error::GuardExceeded(format!(
            "joint DP over {k} items exceeds the limit of {MAX_JOINT_ITEMS}"
        )));
    }
    let d = delta.min(db.len() as u64 + 1) as usize;
    let states = (d as u128).pow(k as u32);
    if states > MAX_JOINT_STATES as u128 {
        return Err(Error::GuardExceeded(format!(
            "joint DP needs {states} states, limit is {MAX_JOINT_STATES}"
        )));
    }
    let states = states as usize;
    let patterns = 1usize << k;
    let stride: Vec<usize> = (0..k).map(|z| d.pow(z as u32)).collect();
    let mut targets = vec![0u32; patterns * states];
    for m in 0..patterns {
        let offset: usize = (0..k).filter(|&z| m & (1 << z) != 0).map(|z| stride[z]).sum();
        for s in 0..states {
            let stays = (0..k).all(|z| m & (1 << z) == 0 || (s / stride[z]) % d + 1 < d);
            targets[m * states + s] = if stays { s + offset } else { states + s } as u32;
        }
    }

    let ids = db.resolve(x);
    // Slots `states..` are the discard area and are never read.
    let mut cur = vec![0.0; 2 * states];
    let mut next = vec![0.0; 2 * states];
    cur[0] = 1.0;
    let mut pattern = vec![0.0; patterns];
    for t in db.scan() {
        pattern[0] = 1.0;
        for (z, &id) in ids.iter().enumerate() {
            let pz = t.prob(id);
            let (lo, hi) = pattern[..2 << z].split_at_mut(1 << z);
            for (a, b) in lo.iter_mut().zip(hi) {
                *b = *a * pz;
                *a *= 1.0 - pz;
            }
        }
        next[..states].fill(0.0);
        for (row, &pm) in targets.chunks_exact(states).zip(&pattern) {
            for (&target, &mass) in row.iter().zip(&cur[..states]) {
                // SAFETY: every target is below `2 * states` by construction.
                unsafe { *next.get_unchecked_mut(target as usize) += mass * pm };
            }
        }
        for v in next[..states].iter_mut() {
            if *v < FLUSH_BELOW {
                *v = 0.0;
            }
        }
        std::mem::swap(&mut cur, &mut next);
    }

    let mut box_prob = CompensatedSum::new();
    let mut lambda = CompensatedSum::new();
    for (s, &mass) in cur[..states].iter().enumerate() {
        box_prob.add(mass);
        if (0..k).all(|z| (s / stride[z]) % d >= 1) {
            lambda.add(mass);
        }
    }
    Ok(JointBox {
        box_prob: box_prob.value(),
        lambda: lambda.value(),
        corner: cur[0],
    })
}

/// `Pr[⋀_{z∈X} sup(z) < δ]`.
pub fn joint_box_dp(db: &UncertainDatabase, x: &Itemset, delta: u64) -> Result<f64> {
    if delta > db.len() as u64 && !x.is_empty() && x.len() <= MAX_JOINT_ITEMS {
        return Ok(1.0);
    }
    Ok(joint_box_stats(db, x, delta)?.box_prob)
}

/// `λ = Pr[⋀_{z∈X} 0 < sup(z) < δ]`; exactly 0 when `δ = 1`.
pub fn lambda_value(db: &UncertainDatabase, x: &Itemset, delta: u64) -> Result<f64> {
    Ok(joint_box_stats(db, x, delta)?.lambda)
}

fn singleton_probs(db: &UncertainDatabase, item: &Item) -> Vec<f64> {
    itemset_probs(db, &Itemset::singleton(item.clone()))
}

/// Box probability as the product of per-item left tails.
pub fn joint_box_factorized(db: &UncertainDatabase, x: &Itemset, delta: u64) -> f64 {
    x.items()
        .iter()
        .map(|z| p_less_from_probs(&singleton_probs(db, z), delta))
        .product()
}

/// `Pr[sup(z) ≥ δ]` for one item.
pub(crate) fn singleton_tail(db: &UncertainDatabase, z: &Item, delta: u64) -> f64 {
    tail_via_p_less(&singleton_probs(db, z), delta)
}

/// `J(S) = Pr[⋀_{z∈S} sup(z) ≥ δ]`, the product of singleton tails.
pub fn joint_tail(db: &UncertainDatabase, s: &Itemset, delta: u64) -> Result<f64> {
    if s.is_empty() {
        return Err(Error::InvalidItemset("joint tail needs a non-empty itemset".into()));
    }
    Ok(s.items().iter().map(|z| singleton_tail(db, z, delta)).product())
}

/// `J(S)` by inclusion–exclusion over joint box probabilities:
/// `Σ_{T⊆S} (−1)^{|T|} box(T)` with `box(∅) = 1`.
pub fn joint_tail_via_boxes(db: &UncertainDatabase, s: &Itemset, delta: u64) -> Result<f64> {
    let mut total = CompensatedSum::new();
    total.add(1.0);
    for t in s.non_empty_subsets()? {
        let b = joint_box_dp(db, &t, delta)?;
        total.add(if t.len() % 2 == 1 { -b } else { b });
    }
    Ok(total.value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::all_zero_probability;
    use crate::model::parse_database;

    fn two_txn() -> UncertainDatabase {
        parse_database(b"A:0.5 B:0.6\nA:0.4 B:0.5").unwrap()
    }

    fn ab() -> Itemset {
        Itemset::parse("A,B").unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn box_examples() {
        let db = two_txn();
        assert!(close(joint_box_dp(&db, &ab(), 2).unwrap(), 0.56));
        assert!(close(joint_box_dp(&db, &ab(), 1).unwrap(), 0.06));
        assert_eq!(joint_box_dp(&db, &ab(), 3).unwrap(), 1.0);
        assert!(close(joint_box_factorized(&db, &ab(), 2), 0.56));
    }

    #[test]
    fn lambda_examples() {
        let db = two_txn();
        assert_eq!(lambda_value(&db, &ab(), 1).unwrap(), 0.0);
        assert!(close(lambda_value(&db, &ab(), 2).unwrap(), 0.25));
        let x = Itemset::parse("A,Z").unwrap();
        assert_eq!(lambda_value(&db, &x, 2).unwrap(), 0.0);
    }

    #[test]
    fn tail_examples() {
        let db = two_txn();
        assert!(close(joint_tail(&db, &ab(), 1).unwrap(), 0.56));
        assert!(close(joint_tail_via_boxes(&db, &ab(), 1).unwrap(), 0.56));
        assert!(close(joint_tail(&db, &Itemset::parse("A").unwrap(), 1).unwrap(), 0.7));
        assert_eq!(joint_tail(&db, &ab(), 3).unwrap(), 0.0);
    }

    #[test]
    fn box_contains_interior_and_corner() {
        let db = parse_database(b"A:0.5 B:0.6 C:0.9\nA:0.4 B:0.5\nC:0.3 A:0.7\nB:0.2").unwrap();
        let x = Itemset::parse("A,B,C").unwrap();
        for delta in 1..=5 {
            let j = joint_box_stats(&db, &x, delta).unwrap();
            assert!(close(j.corner, all_zero_probability(&db, &x)));
            assert!(j.lambda <= j.rho() + 1e-12);
            assert!(close(j.box_prob, joint_box_factorized(&db, &x, delta)));
        }
    }

    #[test]
    fn guards() {
        let db = two_txn();
        let x = Itemset::parse("A,B,C,D,E").unwrap();
        assert!(matches!(joint_box_stats(&db, &x, 2), Err(Error::GuardExceeded(_))));
        assert!(joint_box_stats(&db, &ab(), 0).is_err());
    }
}
