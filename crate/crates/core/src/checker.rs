//! Count checkers: the owner's one-scan aggregate over a checkset's
//! non-empty subsets, and the inclusion–exclusion combination of the
//! prover's per-subset claims that must reproduce it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{ItemId, Itemset, UncertainDatabase, WeightAssignment, WeightScheme};
use crate::numeric::{CompensatedSum, Tolerance};

/// Verification schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    DetBasic,
    DetWeighted,
    ExpBasic,
    ExpScheme1,
    ExpScheme2,
    PwsPaper,
    PwsExact,
    Approx,
}

impl SchemeId {
    pub const ALL: [SchemeId; 8] = [
        SchemeId::DetBasic,
        SchemeId::DetWeighted,
        SchemeId::ExpBasic,
        SchemeId::ExpScheme1,
        SchemeId::ExpScheme2,
        SchemeId::PwsPaper,
        SchemeId::PwsExact,
        SchemeId::Approx,
    ];

    pub fn tag(&self) -> &'static str {
        match self {
            SchemeId::DetBasic => "DET_BASIC",
            SchemeId::DetWeighted => "DET_WEIGHTED",
            SchemeId::ExpBasic => "EXP_BASIC",
            SchemeId::ExpScheme1 => "EXP_SCHEME1",
            SchemeId::ExpScheme2 => "EXP_SCHEME2",
            SchemeId::PwsPaper => "PWS_PAPER",
            SchemeId::PwsExact => "PWS_EXACT",
            SchemeId::Approx => "APPROX",
        }
    }

    pub fn is_weighted(&self) -> bool {
        self.weight_scheme().is_some()
    }

    /// The virtual transformation a weighted scheme relies on.
    pub fn weight_scheme(&self) -> Option<WeightScheme> {
        match self {
            SchemeId::DetWeighted => Some(WeightScheme::DetReplicate),
            SchemeId::ExpScheme1 => Some(WeightScheme::ScaleGlobal),
            SchemeId::ExpScheme2 => Some(WeightScheme::ScalePerItem),
            _ => None,
        }
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s:?}")))
    }
}

/// Which probabilities an owner-side scan reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbabilityView {
    Original,
    /// The virtual `T²`: every probability squared on the fly.
    Squared,
}

impl ProbabilityView {
    fn apply(self, p: f64) -> f64 {
        match self {
            ProbabilityView::Original => p,
            ProbabilityView::Squared => p * p,
        }
    }
}

/// One verification equation evaluated for one checkset.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckerReport {
    pub checkset: Itemset,
    /// Scheme tag, possibly qualified with a verification stage.
    pub label: String,
    pub owner_value: f64,
    pub claim_value: f64,
    /// `claim_value - owner_value`.
    pub residual: f64,
    /// Magnitude of the summed terms; the tolerance is relative to it.
    pub scale: f64,
    pub accepted: bool,
}

impl CheckerReport {
    pub fn new(
        checkset: Itemset,
        label: impl Into<String>,
        owner_value: f64,
        claim_value: f64,
        scale: f64,
        tolerance: &Tolerance,
    ) -> Self {
        let residual = claim_value - owner_value;
        let accepted = residual.is_finite() && tolerance.agrees(claim_value, owner_value, scale);
        CheckerReport {
            checkset,
            label: label.into(),
            owner_value,
            claim_value,
            residual,
            scale: scale.abs().max(owner_value.abs()).max(claim_value.abs()),
            accepted,
        }
    }
}

fn check_scan_args(scheme: SchemeId, w: Option<&WeightAssignment>) -> Result<()> {
    match scheme {
        SchemeId::DetBasic | SchemeId::ExpBasic if w.is_some() => Err(Error::InvalidArgument(
            format!("scheme {scheme} takes no weights"),
        )),
        SchemeId::DetBasic | SchemeId::ExpBasic => Ok(()),
        SchemeId::DetWeighted | SchemeId::ExpScheme1 | SchemeId::ExpScheme2 => match w {
            None => Err(Error::WeightsRequired(scheme.tag())),
            Some(_) => Ok(()),
        },
        _ => Err(Error::IncompatibleScheme {
            scheme: scheme.tag(),
            context: "a count-checker scan".into(),
        }),
    }
}

/// Per-item probability multipliers of a checkset under a scheme.
fn scan_factors(
    db: &UncertainDatabase,
    x: &Itemset,
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
) -> Result<Vec<(Option<ItemId>, f64)>> {
    let ids = db.resolve(x);
    let global = match (scheme, w) {
        (SchemeId::ExpScheme1, Some(w)) => Some(w.global_product()),
        _ => None,
    };
    ids.into_iter()
        .zip(x.items())
        .map(|(id, item)| {
            let factor = match (scheme, w) {
                (SchemeId::DetWeighted | SchemeId::ExpScheme2, Some(w)) => w.require(item)?,
                (SchemeId::ExpScheme1, Some(_)) => global.expect("set above"),
                _ => 1.0,
            };
            Ok((id, factor))
        })
        .collect()
}

/// Owner-side checker values of several checksets in one database pass.
///
/// * `DET_BASIC`: transactions intersecting `X`.
/// * `DET_WEIGHTED`: `Σ_t Π_{x∈t∩X} w_x` over transactions intersecting `X`
///   (the replicated database, never materialized).
/// * `EXP_BASIC`: `Σ_i (1 − Π_{x∈X} (1 − p_i(x)))`.
/// * `EXP_SCHEME1` / `EXP_SCHEME2`: as `EXP_BASIC` with `p_i(x)` replaced by
///   `M·p_i(x)` or `w_x·p_i(x)`.
pub fn checker_scan_batch(
    db: &UncertainDatabase,
    checksets: &[Itemset],
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
    view: ProbabilityView,
) -> Result<Vec<f64>> {
    check_scan_args(scheme, w)?;
    let factors = checksets
        .iter()
        .map(|x| scan_factors(db, x, scheme, w))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![CompensatedSum::new(); checksets.len()];
    for t in db.scan() {
        for (sum, fx) in sums.iter_mut().zip(&factors) {
            match scheme {
                SchemeId::DetBasic | SchemeId::DetWeighted => {
                    let mut hit = false;
                    let mut weight = 1.0;
                    for &(id, f) in fx {
                        if t.prob(id) > 0.0 {
                            hit = true;
                            weight *= f;
                        }
                    }
                    if hit {
                        sum.add(weight);
                    }
                }
                _ => {
                    let none = fx
                        .iter()
                        .map(|&(id, f)| 1.0 - f * view.apply(t.prob(id)))
                        .product::<f64>();
                    sum.add(1.0 - none);
                }
            }
        }
    }
    Ok(sums.iter().map(CompensatedSum::value).collect())
}

/// Owner-side checker value of one checkset.
pub fn checker_scan(
    db: &UncertainDatabase,
    x: &Itemset,
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
) -> Result<f64> {
    Ok(checker_scan_batch(db, std::slice::from_ref(x), scheme, w, ProbabilityView::Original)?[0])
}

fn exact_weight(w: f64) -> i128 {
    // Replication weights are validated integers below 2^53.
    w as i128
}

fn overflow(what: &str) -> Error {
    Error::GuardExceeded(format!("{what} overflows 128-bit integer arithmetic"))
}

/// Exact integer `DET_BASIC` / `DET_WEIGHTED` checker values in one pass.
///
/// Fails if a checkset item occurs with a probability below 1.
pub fn det_checker_exact_batch(
    db: &UncertainDatabase,
    checksets: &[Itemset],
    w: Option<&WeightAssignment>,
) -> Result<Vec<i128>> {
    let scheme = if w.is_some() {
        SchemeId::DetWeighted
    } else {
        SchemeId::DetBasic
    };
    let factors = checksets
        .iter()
        .map(|x| scan_factors(db, x, scheme, w))
        .collect::<Result<Vec<_>>>()?;
    let mut sums = vec![0i128; checksets.len()];
    for t in db.scan() {
        for (sum, fx) in sums.iter_mut().zip(&factors) {
            let mut hit = false;
            let mut weight: i128 = 1;
            for &(id, f) in fx {
                let p = t.prob(id);
                if p > 0.0 && p < 1.0 {
                    return Err(Error::NotDeterministic);
                }
                if p > 0.0 {
                    hit = true;
                    weight = weight
                        .checked_mul(exact_weight(f))
                        .ok_or_else(|| overflow("checker weight"))?;
                }
            }
            if hit {
                *sum = sum.checked_add(weight).ok_or_else(|| overflow("checker sum"))?;
            }
        }
    }
    Ok(sums)
}

/// `Π_i Π_{z∈X} (1 − p_i(z))`: probability that no item of `X` occurs.
pub fn all_zero_probability(db: &UncertainDatabase, x: &Itemset) -> f64 {
    all_zero_probability_batch(db, std::slice::from_ref(x))[0]
}

/// [`all_zero_probability`] for several checksets in one pass.
pub fn all_zero_probability_batch(db: &UncertainDatabase, checksets: &[Itemset]) -> Vec<f64> {
    let ids: Vec<Vec<Option<ItemId>>> = checksets.iter().map(|x| db.resolve(x)).collect();
    let mut products = vec![1.0; checksets.len()];
    for t in db.scan() {
        for (prod, ids) in products.iter_mut().zip(&ids) {
            for &id in ids {
                *prod *= 1.0 - t.prob(id);
            }
        }
    }
    products
}

/// Signed inclusion–exclusion sum plus the magnitude of its terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Combination {
    pub value: f64,
    pub scale: f64,
}

fn sign(size: usize) -> f64 {
    if size % 2 == 1 {
        1.0
    } else {
        -1.0
    }
}

/// Coefficient of `claim(Y)` in the scheme's combination for `Y ⊆ X`.
fn coefficient(
    y: &Itemset,
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
    global: f64,
) -> Result<f64> {
    let s = sign(y.len());
    Ok(match scheme {
        SchemeId::DetBasic
        | SchemeId::ExpBasic
        | SchemeId::PwsPaper
        | SchemeId::PwsExact
        | SchemeId::Approx => s,
        SchemeId::ExpScheme1 => s * global.powi(y.len() as i32),
        SchemeId::ExpScheme2 => s * w.expect("checked").product_over(y)?,
        SchemeId::DetWeighted => {
            // Σ_{∅≠Z⊆Y} (−1)^{|Y−Z|} Π_{z∈Z} w_z = Π_{y∈Y} (w_y − 1) − (−1)^{|Y|}
            let w = w.expect("checked");
            let prod = y
                .items()
                .iter()
                .try_fold(1.0, |acc, i| Ok::<_, Error>(acc * (w.require(i)? - 1.0)))?;
            prod + s
        }
    })
}

/// Inclusion–exclusion combination of `claims` over the non-empty subsets
/// of `x`, with the scheme's weighting. Every subset must have a claim.
pub fn incl_excl_terms(
    claims: &BTreeMap<Itemset, f64>,
    x: &Itemset,
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
) -> Result<Combination> {
    x.check_lattice_size()?;
    if scheme.is_weighted() && w.is_none() {
        return Err(Error::WeightsRequired(scheme.tag()));
    }
    let global = match (scheme, w) {
        (SchemeId::ExpScheme1, Some(w)) => {
            let m = w.global_product();
            if !m.powi(x.len() as i32).is_finite() || m == 0.0 {
                return Err(Error::GuardExceeded(format!(
                    "global weight product {m:e} to the power {} is not representable",
                    x.len()
                )));
            }
            m
        }
        _ => 1.0,
    };
    let mut value = CompensatedSum::new();
    let mut scale = CompensatedSum::new();
    for mask in 1u32..(1u32 << x.len()) {
        let y = x.subset_by_mask(mask);
        let claim = *claims
            .get(&y)
            .ok_or_else(|| Error::MissingClaim(y.to_string()))?;
        let term = coefficient(&y, scheme, w, global)? * claim;
        value.add(term);
        scale.add(term.abs());
    }
    Ok(Combination {
        value: value.value(),
        scale: scale.value(),
    })
}

/// Claim-side value of a checkset: the signed combination of subset claims.
pub fn incl_excl_combine(
    claims: &BTreeMap<Itemset, f64>,
    x: &Itemset,
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
) -> Result<f64> {
    Ok(incl_excl_terms(claims, x, scheme, w)?.value)
}

/// Exact integer combination for deterministic claims; weighted when `w`
/// is given.
pub fn incl_excl_combine_exact(
    claims: &BTreeMap<Itemset, i128>,
    x: &Itemset,
    w: Option<&WeightAssignment>,
) -> Result<i128> {
    x.check_lattice_size()?;
    let mut total: i128 = 0;
    for mask in 1u32..(1u32 << x.len()) {
        let y = x.subset_by_mask(mask);
        let claim = *claims
            .get(&y)
            .ok_or_else(|| Error::MissingClaim(y.to_string()))?;
        let odd = y.len() % 2 == 1;
        let coef: i128 = match w {
            None => {
                if odd {
                    1
                } else {
                    -1
                }
            }
            Some(w) => {
                let mut prod: i128 = 1;
                for item in y.items() {
                    let wi = exact_weight(w.require(item)?);
                    prod = prod
                        .checked_mul(wi - 1)
                        .ok_or_else(|| overflow("weighted coefficient"))?;
                }
                if odd {
                    prod + 1
                } else {
                    prod - 1
                }
            }
        };
        let term = coef
            .checked_mul(claim)
            .ok_or_else(|| overflow("weighted claim"))?;
        total = total.checked_add(term).ok_or_else(|| overflow("combination"))?;
    }
    Ok(total)
}

/// Range of admissible claim values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundsMode {
    /// Supports or expected supports, within `[0, n]`.
    Count { n: usize },
    /// Probabilities, within `[0, 1]`.
    Probability,
}

/// A claim that contradicts range or anti-monotonicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub itemset: Itemset,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "itemset={} {}", self.itemset, self.detail)
    }
}

const BOUNDS_SLACK: f64 = 1e-9;
/// Above this size only covering pairs `Y ⊂ Y ∪ {z}` are compared.
const ALL_PAIRS_LIMIT: usize = 12;

/// Screens the claims on `x`'s subsets for out-of-range values and for
/// pairs `Y ⊂ Z` with `claim(Z) > claim(Y) + 1e-9`.
///
/// Subsets without a claim are skipped here; the combination reports them.
pub fn consistency_bounds(
    claims: &BTreeMap<Itemset, f64>,
    x: &Itemset,
    mode: BoundsMode,
) -> Vec<Violation> {
    let mut out = Vec::new();
    if x.check_lattice_size().is_err() {
        out.push(Violation {
            itemset: x.clone(),
            detail: "checkset too large to screen".into(),
        });
        return out;
    }
    let full = (1u32 << x.len()) - 1;
    let values: Vec<Option<f64>> = (0..=full)
        .map(|mask| {
            if mask == 0 {
                None
            } else {
                claims.get(&x.subset_by_mask(mask)).copied()
            }
        })
        .collect();
    let upper = match mode {
        BoundsMode::Count { n } => n as f64,
        BoundsMode::Probability => 1.0,
    };
    for mask in 1..=full {
        let Some(v) = values[mask as usize] else {
            continue;
        };
        if !v.is_finite() || v < -BOUNDS_SLACK || v > upper + BOUNDS_SLACK * upper.max(1.0) {
            out.push(Violation {
                itemset: x.subset_by_mask(mask),
                detail: format!("claim {v} outside [0, {upper}]"),
            });
        }
    }
    for z_mask in 1..=full {
        let Some(vz) = values[z_mask as usize] else {
            continue;
        };
        let mut check = |y_mask: u32| {
            if let Some(vy) = values[y_mask as usize] {
                if vz > vy + BOUNDS_SLACK {
                    out.push(Violation {
                        itemset: x.subset_by_mask(z_mask),
                        detail: format!(
                            "claim {vz} exceeds claim {vy} of subset {}",
                            x.subset_by_mask(y_mask)
                        ),
                    });
                }
            }
        };
        if x.len() <= ALL_PAIRS_LIMIT {
            // Proper non-empty submasks of z_mask.
            let mut y = (z_mask - 1) & z_mask;
            while y != 0 {
                check(y);
                y = (y - 1) & z_mask;
            }
        } else {
            for k in 0..x.len() {
                let bit = 1u32 << k;
                if z_mask & bit != 0 && z_mask != bit {
                    check(z_mask & !bit);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{parse_database, Item};

    fn set(s: &str) -> Itemset {
        Itemset::parse(s).unwrap()
    }

    fn claims(pairs: &[(&str, f64)]) -> BTreeMap<Itemset, f64> {
        pairs.iter().map(|&(k, v)| (set(k), v)).collect()
    }

    fn weights(scheme: WeightScheme, pairs: &[(&str, f64)]) -> WeightAssignment {
        WeightAssignment::from_weights(
            scheme,
            0,
            pairs.iter().map(|&(k, v)| (Item::new(k).unwrap(), v)),
        )
        .unwrap()
    }

    fn five_txn() -> UncertainDatabase {
        parse_database(b"A:1 B:1 C:1\nA:1 B:1\nA:1 B:1 D:1\nC:1 D:1\nA:1 D:1").unwrap()
    }

    fn two_txn() -> UncertainDatabase {
        parse_database(b"A:0.5 B:0.6\nA:0.4 B:0.5").unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn det_basic_checker_and_tamper() {
        let db = five_txn();
        let bc = set("B,C");
        assert_eq!(checker_scan(&db, &bc, SchemeId::DetBasic, None).unwrap(), 4.0);
        let honest = claims(&[("B", 3.0), ("C", 2.0), ("B,C", 1.0)]);
        assert_eq!(incl_excl_combine(&honest, &bc, SchemeId::DetBasic, None).unwrap(), 4.0);
        let tampered = claims(&[("B", 3.0), ("C", 2.0), ("B,C", 2.0)]);
        assert_eq!(incl_excl_combine(&tampered, &bc, SchemeId::DetBasic, None).unwrap(), 3.0);
    }

    #[test]
    fn det_weighted_example() {
        let db = parse_database(b"A:1 B:1\nA:1\nB:1").unwrap();
        let w = weights(WeightScheme::DetReplicate, &[("A", 2.0), ("B", 3.0)]);
        let ab = set("A,B");
        assert_eq!(checker_scan(&db, &ab, SchemeId::DetWeighted, Some(&w)).unwrap(), 11.0);
        let honest = claims(&[("A", 2.0), ("B", 2.0), ("A,B", 1.0)]);
        assert_eq!(
            incl_excl_combine(&honest, &ab, SchemeId::DetWeighted, Some(&w)).unwrap(),
            11.0
        );
        let exact: BTreeMap<Itemset, i128> = honest.iter().map(|(k, &v)| (k.clone(), v as i128)).collect();
        assert_eq!(incl_excl_combine_exact(&exact, &ab, Some(&w)).unwrap(), 11);
        assert_eq!(det_checker_exact_batch(&db, &[ab], Some(&w)).unwrap(), vec![11]);
    }

    #[test]
    fn det_weighted_coefficient_closed_form_matches_double_sum() {
        let w = weights(
            WeightScheme::DetReplicate,
            &[("A", 2.0), ("B", 3.0), ("C", 7.0), ("D", 5.0)],
        );
        let x = set("A,B,C,D");
        for y in x.non_empty_subsets().unwrap() {
            // Σ_{∅≠Z⊆Y} (−1)^{|Y−Z|} Π_{z∈Z} w_z, written out literally.
            let mut direct = 0.0;
            for z in y.non_empty_subsets().unwrap() {
                let prod = w.product_over(&z).unwrap();
                let s = if (y.len() - z.len()) % 2 == 0 { 1.0 } else { -1.0 };
                direct += s * prod;
            }
            let closed = coefficient(&y, SchemeId::DetWeighted, Some(&w), 1.0).unwrap();
            assert_eq!(closed, direct, "{y}");
        }
    }

    #[test]
    fn expected_basic_example() {
        let db = two_txn();
        let ab = set("A,B");
        assert!(close(checker_scan(&db, &ab, SchemeId::ExpBasic, None).unwrap(), 1.5));
        let honest = claims(&[("A", 0.9), ("B", 1.1), ("A,B", 0.5)]);
        assert!(close(incl_excl_combine(&honest, &ab, SchemeId::ExpBasic, None).unwrap(), 1.5));
    }

    #[test]
    fn expected_scheme1_example() {
        let db = two_txn();
        let ab = set("A,B");
        let w = weights(WeightScheme::ScaleGlobal, &[("A", 0.4), ("B", 0.5)]);
        assert!(close(w.global_product(), 0.2));
        assert!(close(checker_scan(&db, &ab, SchemeId::ExpScheme1, Some(&w)).unwrap(), 0.38));
        let honest = claims(&[("A", 0.9), ("B", 1.1), ("A,B", 0.5)]);
        let c = incl_excl_combine(&honest, &ab, SchemeId::ExpScheme1, Some(&w)).unwrap();
        assert!(close(c, 0.18 + 0.22 - 0.02));
        assert!(close(c, 0.38));
    }

    #[test]
    fn expected_scheme2_example() {
        let db = two_txn();
        let ab = set("A,B");
        let w = weights(WeightScheme::ScalePerItem, &[("A", 0.4), ("B", 0.5)]);
        assert!(close(checker_scan(&db, &ab, SchemeId::ExpScheme2, Some(&w)).unwrap(), 0.81));
        let honest = claims(&[("A", 0.9), ("B", 1.1), ("A,B", 0.5)]);
        let c = incl_excl_combine(&honest, &ab, SchemeId::ExpScheme2, Some(&w)).unwrap();
        assert!(close(c, 0.36 + 0.55 - 0.10));
    }

    #[test]
    fn large_weights_still_satisfy_scheme1() {
        // M = 20 pushes scaled probabilities above 1; the identity still holds.
        let db = two_txn();
        let ab = set("A,B");
        let w = weights(WeightScheme::ScaleGlobal, &[("A", 4.0), ("B", 5.0)]);
        let scan = checker_scan(&db, &ab, SchemeId::ExpScheme1, Some(&w)).unwrap();
        let honest = claims(&[("A", 0.9), ("B", 1.1), ("A,B", 0.5)]);
        let c = incl_excl_combine(&honest, &ab, SchemeId::ExpScheme1, Some(&w)).unwrap();
        assert!((scan - c).abs() < 1e-9 * scan.abs());
    }

    #[test]
    fn all_zero_examples() {
        let db = two_txn();
        assert!(close(all_zero_probability(&db, &set("A,B")), 0.06));
        assert!(close(all_zero_probability(&db, &set("A")), 0.30));
        let det = five_txn();
        assert_eq!(all_zero_probability(&det, &set("C")), 0.0);
    }

    #[test]
    fn missing_claims_and_weights_are_errors() {
        let partial = claims(&[("A", 0.9), ("B", 1.1)]);
        assert!(matches!(
            incl_excl_combine(&partial, &set("A,B"), SchemeId::ExpBasic, None),
            Err(Error::MissingClaim(_))
        ));
        let full = claims(&[("A", 0.9), ("B", 1.1), ("A,B", 0.5)]);
        assert!(matches!(
            incl_excl_combine(&full, &set("A,B"), SchemeId::ExpScheme2, None),
            Err(Error::WeightsRequired(_))
        ));
        assert!(matches!(
            checker_scan(&two_txn(), &set("A,B"), SchemeId::ExpScheme1, None),
            Err(Error::WeightsRequired(_))
        ));
        let w = weights(WeightScheme::ScalePerItem, &[("A", 0.4)]);
        assert!(matches!(
            checker_scan(&two_txn(), &set("A,B"), SchemeId::ExpScheme2, Some(&w)),
            Err(Error::MissingWeight(_))
        ));
        assert!(checker_scan(&two_txn(), &set("A"), SchemeId::PwsExact, None).is_err());
    }

    #[test]
    fn oversized_checkset_is_rejected() {
        let x = Itemset::new((0..21).map(|k| Item::new(&format!("I{k}")).unwrap())).unwrap();
        assert!(matches!(
            incl_excl_combine(&BTreeMap::new(), &x, SchemeId::ExpBasic, None),
            Err(Error::GuardExceeded(_))
        ));
    }

    #[test]
    fn consistency_examples() {
        let honest = claims(&[("A", 0.7), ("B", 0.8), ("A,B", 0.44)]);
        assert!(consistency_bounds(&honest, &set("A,B"), BoundsMode::Probability).is_empty());
        let bad = claims(&[("A", 0.7), ("A,B", 0.9)]);
        let v = consistency_bounds(&bad, &set("A,B"), BoundsMode::Probability);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].itemset, set("A,B"));
        let range = claims(&[("A", 1.2)]);
        assert_eq!(consistency_bounds(&range, &set("A"), BoundsMode::Probability).len(), 1);
        let count = claims(&[("A", 3.0)]);
        assert_eq!(consistency_bounds(&count, &set("A"), BoundsMode::Count { n: 2 }).len(), 1);
        assert!(consistency_bounds(&count, &set("A"), BoundsMode::Count { n: 3 }).is_empty());
    }

    #[test]
    fn scheme_tags_round_trip() {
        for s in SchemeId::ALL {
            assert_eq!(s.tag().parse::<SchemeId>().unwrap(), s);
        }
    }

    #[test]
    fn squared_view_scans_squares() {
        let db = two_txn();
        let a = set("A");
        let v = checker_scan_batch(&db, &[a], SchemeId::ExpBasic, None, ProbabilityView::Squared)
            .unwrap();
        assert!(close(v[0], 0.25 + 0.16));
    }
}
