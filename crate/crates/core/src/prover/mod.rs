//! The simulated cloud: honest mining claims, possible-world side data, and
//! the tampering behaviors a dishonest prover may exhibit.

mod adversary;
mod claims_format;
mod joint;
mod response;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use adversary::{AdversaryKind, AdversaryModel};
pub use claims_format::{parse_claims, serialize_claims, CLAIMS_HEADER};
pub use joint::{
    joint_box_dp, joint_box_factorized, joint_box_stats, joint_tail, joint_tail_via_boxes,
    lambda_value, JointBox, MAX_JOINT_ITEMS, MAX_JOINT_STATES,
};
pub use response::{Claim, ClaimField, ProverResponse, SideData};

use crate::error::Result;
use crate::mining::{
    evaluate, maximal_checksets, mine, normal_approx_frequentness, MiningMode, MiningQuery,
    NormalModel,
};
use crate::model::{Item, Itemset, UncertainDatabase};

/// Runs the prover for `query` on `db` under the given behavior.
///
/// Claims cover every frequent itemset and every non-empty subset of every
/// checkset, frequent or not. With `checksets` absent the maximal frequent
/// itemsets of the prover's own mining run are used. In possible-world mode
/// each checkset also gets `λ`, `ρ` and its joint tails.
pub fn prove(
    db: &UncertainDatabase,
    query: &MiningQuery,
    checksets: Option<&[Itemset]>,
    adversary: &AdversaryModel,
) -> Result<ProverResponse> {
    let (mut resp, checksets) = match adversary.kind {
        AdversaryKind::Lazy => lazy_response(db, query, checksets, adversary.magnitude)?,
        _ => honest_response(db, query, checksets)?,
    };
    match adversary.kind {
        AdversaryKind::Honest | AdversaryKind::Lazy => {}
        AdversaryKind::RandomFault => random_fault(&mut resp, adversary),
        AdversaryKind::Stupid => stupid(&mut resp, &checksets, adversary.magnitude),
        AdversaryKind::Smart => smart(&mut resp, &checksets, adversary)?,
    }
    resp.adversary = Some(*adversary);
    Ok(resp)
}

fn honest_response(
    db: &UncertainDatabase,
    query: &MiningQuery,
    checksets: Option<&[Itemset]>,
) -> Result<(ProverResponse, Vec<Itemset>)> {
    let result = mine(db, query)?;
    let checksets = match checksets {
        Some(c) => c.to_vec(),
        None => maximal_checksets(&result),
    };
    let mut claims: BTreeMap<Itemset, Claim> =
        result.iter().map(|(x, &v)| (x.clone(), v.into())).collect();
    let mut missing = BTreeSet::new();
    for x in &checksets {
        for y in x.non_empty_subsets()? {
            if !claims.contains_key(&y) {
                missing.insert(y);
            }
        }
    }
    let extra = missing
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|y| evaluate(db, query, &y).map(|v| (y, Claim::from(v))))
        .collect::<Result<Vec<_>>>()?;
    claims.extend(extra);

    let side_data = if query.mode == MiningMode::Pws {
        checksets
            .par_iter()
            .map(|x| side_data_for(db, x, query.delta).map(|s| (x.clone(), s)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .collect()
    } else {
        BTreeMap::new()
    };
    let resp = ProverResponse {
        query: *query,
        claims,
        side_data,
        adversary: None,
    };
    Ok((resp, checksets))
}

/// `λ`, `ρ` and the joint tails of one checkset.
pub fn side_data_for(db: &UncertainDatabase, x: &Itemset, delta: u64) -> Result<SideData> {
    let stats = joint_box_stats(db, x, delta)?;
    let tails: BTreeMap<&Item, f64> = x
        .items()
        .iter()
        .map(|z| (z, joint::singleton_tail(db, z, delta)))
        .collect();
    let mut joint_tails = BTreeMap::new();
    for s in x.non_empty_subsets()? {
        if s.len() >= 2 {
            let j = s.items().iter().map(|z| tails[z]).product();
            joint_tails.insert(s, j);
        }
    }
    Ok(SideData {
        lambda: Some(stats.lambda),
        rho: Some(stats.rho()),
        joint_tails,
    })
}

/// Mines the first `ceil(magnitude · n)` transactions with the same ratio
/// and scales the additive statistics by `1 / magnitude`. Probabilities are
/// reported as computed on the prefix.
fn lazy_response(
    db: &UncertainDatabase,
    query: &MiningQuery,
    checksets: Option<&[Itemset]>,
    magnitude: f64,
) -> Result<(ProverResponse, Vec<Itemset>)> {
    let n = db.len();
    let k = (MiningQuery::delta_for(n, magnitude) as usize).min(n);
    let prefix = db.prefix(k);
    let prefix_query = MiningQuery::new(query.mode, query.min_sup_ratio, query.pft, k)?;
    let (mut resp, checksets) = honest_response(&prefix, &prefix_query, checksets)?;
    let factor = 1.0 / magnitude;
    for claim in resp.claims.values_mut() {
        for field in [ClaimField::Sup, ClaimField::Esup, ClaimField::Var] {
            if let Some(v) = claim.field_mut(field) {
                *v *= factor;
            }
        }
    }
    resp.query = *query;
    Ok((resp, checksets))
}

fn random_fault(resp: &mut ProverResponse, adversary: &AdversaryModel) {
    let mut rng = ChaCha8Rng::seed_from_u64(adversary.seed);
    let fields = ClaimField::for_mode(resp.query.mode);
    for claim in resp.claims.values_mut() {
        for &field in fields {
            let hit = rng.random_bool(0.5);
            let u: f64 = rng.random_range(-1.0..=1.0);
            if let (true, Some(v)) = (hit, claim.field_mut(field)) {
                *v += u * adversary.magnitude * v.abs();
            }
        }
    }
}

fn stupid(resp: &mut ProverResponse, checksets: &[Itemset], magnitude: f64) {
    let Some(largest) = checksets.iter().max() else {
        return;
    };
    let Ok(subsets) = largest.non_empty_subsets() else {
        return;
    };
    for y in subsets {
        if let Some(c) = resp.claims.get_mut(&y) {
            *c.primary_mut() += magnitude;
        }
    }
}

/// Adds `ε(Y) = Σ_{z∈Y} ε(z)` to every claim.
///
/// For any checkset with at least two items this shift cancels in the
/// unweighted inclusion–exclusion combination.
pub fn kernel_perturbation(
    claims: &BTreeMap<Itemset, f64>,
    eps: &BTreeMap<Item, f64>,
) -> BTreeMap<Itemset, f64> {
    claims
        .iter()
        .map(|(y, &v)| (y.clone(), v + item_shift(y, eps)))
        .collect()
}

fn item_shift(y: &Itemset, eps: &BTreeMap<Item, f64>) -> f64 {
    y.items().iter().filter_map(|z| eps.get(z)).sum()
}

/// Draws a seeded kernel perturbation and applies it.
///
/// Each item gets a non-positive shift bounded so that shifted claims stay
/// non-negative and anti-monotone; items forming a singleton checkset are
/// left alone because the unweighted check would expose them. Approximate
/// claims shift their variance by the same amount.
fn smart(resp: &mut ProverResponse, checksets: &[Itemset], adversary: &AdversaryModel) -> Result<()> {
    let max_len = checksets.iter().map(Itemset::len).max().unwrap_or(0);
    if max_len < 2 {
        return Ok(());
    }
    let singles: BTreeSet<&Item> = checksets
        .iter()
        .filter(|x| x.len() == 1)
        .flat_map(|x| x.items())
        .collect();
    let items: BTreeSet<&Item> = checksets.iter().flat_map(|x| x.items()).collect();
    let fraction = adversary.magnitude.min(1.0);
    let det = resp.query.mode == MiningMode::Deterministic;
    let mut rng = ChaCha8Rng::seed_from_u64(adversary.seed);
    let mut eps = BTreeMap::new();
    for z in items {
        let u = 1.0 - rng.random::<f64>();
        if singles.contains(z) {
            continue;
        }
        let floor = resp
            .claims
            .iter()
            .filter(|(y, _)| y.contains(z))
            .map(|(_, c)| match c {
                Claim::Approx { esup, variance, .. } => esup.min(*variance),
                c => c.primary(),
            })
            .fold(f64::INFINITY, f64::min);
        if !floor.is_finite() {
            continue;
        }
        let mut e = -u * fraction * floor.max(0.0) / max_len as f64;
        if det {
            e = e.trunc();
        }
        eps.insert(z.clone(), e);
    }
    let delta = resp.query.delta;
    for (y, claim) in resp.claims.iter_mut() {
        let shift = item_shift(y, &eps);
        *claim.primary_mut() += shift;
        // Moving the variance with esup keeps esup − var, the claim on T²,
        // unchanged.
        if let Claim::Approx {
            esup,
            variance,
            apcnt,
        } = claim
        {
            *variance += shift;
            *apcnt = normal_approx_frequentness(NormalModel::new(*esup, *variance), delta)?;
        }
    }
    Ok(())
}
