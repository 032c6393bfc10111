//! The data owner's side: private weights, one-scan checker values, and
//! accept/reject verdicts for every scheme.

mod weights;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::{self, Write as _};

pub use weights::{
    generate_weights, generate_weights_for, ApproxWeights, MAX_REPLICATION_WEIGHT,
    SCALE_WEIGHT_RANGE,
};

use crate::checker::{
    all_zero_probability_batch, checker_scan_batch, consistency_bounds, det_checker_exact_batch,
    incl_excl_combine_exact, incl_excl_terms, BoundsMode, CheckerReport, ProbabilityView,
    SchemeId, Violation,
};
use crate::error::{Error, Result};
use crate::mining::{normal_approx_frequentness, MiningMode, NormalModel};
use crate::model::{Item, Itemset, UncertainDatabase, WeightAssignment};
use crate::numeric::Tolerance;
use crate::prover::{ClaimField, ProverResponse};

/// Slack for probability-valued side conditions.
const SIDE_SLACK: f64 = 1e-9;
/// Largest admissible deviation of a returned approximate frequentness.
pub const APCNT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn as_str(&self) -> &'static str {
        match self {
            Decision::Accept => "ACCEPT",
            Decision::Reject => "REJECT",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of verifying one response.
#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub scheme: SchemeId,
    pub tolerance: Tolerance,
    pub checksets: Vec<Itemset>,
    pub reports: Vec<CheckerReport>,
    pub violations: Vec<Violation>,
}

impl Verdict {
    fn new(scheme: SchemeId, tolerance: Tolerance, checksets: &[Itemset]) -> Self {
        Verdict {
            scheme,
            tolerance,
            checksets: checksets.to_vec(),
            reports: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub fn decision(&self) -> Decision {
        if self.reports.iter().all(|r| r.accepted) && self.violations.is_empty() {
            Decision::Accept
        } else {
            Decision::Reject
        }
    }

    pub fn accepted(&self) -> bool {
        self.decision() == Decision::Accept
    }

    /// Checksets with a failed equation or a violation within their lattice.
    pub fn rejected_checksets(&self) -> Vec<&Itemset> {
        self.checksets
            .iter()
            .filter(|x| {
                self.reports
                    .iter()
                    .any(|r| !r.accepted && r.checkset.is_subset_of(x))
                    || self.violations.iter().any(|v| v.itemset.is_subset_of(x))
            })
            .collect()
    }

    /// Line-oriented report ending with a `RESULT` summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let decision = if r.accepted { "ACCEPT" } else { "REJECT" };
            let _ = writeln!(
                out,
                "checkset={} scheme={} owner={} claim={} residual={} decision={decision}",
                r.checkset, r.label, r.owner_value, r.claim_value, r.residual
            );
        }
        for v in &self.violations {
            let _ = writeln!(
                out,
                "checkset={} scheme={} decision=REJECT violation: {}",
                v.itemset, self.scheme, v.detail
            );
        }
        let _ = writeln!(
            out,
            "RESULT {} checked={} rejected={}",
            self.decision(),
            self.checksets.len(),
            self.rejected_checksets().len()
        );
        out
    }
}

fn require_mode(resp: &ProverResponse, mode: MiningMode, scheme: SchemeId) -> Result<()> {
    if resp.query.mode != mode {
        return Err(Error::IncompatibleScheme {
            scheme: scheme.tag(),
            context: format!("{} claims", resp.query.mode),
        });
    }
    Ok(())
}

fn missing(x: &Itemset, e: &Error) -> Violation {
    Violation {
        itemset: x.clone(),
        detail: e.to_string(),
    }
}

/// Deterministic verification with the basic checker, or the weighted
/// checker when `w` is given. Integer arithmetic is exact.
///
/// The checkset items must occur with probability 1 wherever they occur.
pub fn verify_deterministic(
    db: &UncertainDatabase,
    resp: &ProverResponse,
    checksets: &[Itemset],
    w: Option<&WeightAssignment>,
) -> Result<Verdict> {
    let scheme = if w.is_some() {
        SchemeId::DetWeighted
    } else {
        SchemeId::DetBasic
    };
    require_mode(resp, MiningMode::Deterministic, scheme)?;
    let mut verdict = Verdict::new(scheme, Tolerance::default(), checksets);
    let claims = resp.field_values(ClaimField::Sup)?;
    let mut exact = BTreeMap::new();
    for (y, &v) in &claims {
        if v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
            exact.insert(y.clone(), v as i128);
        } else if checksets.iter().any(|x| y.is_subset_of(x)) {
            verdict.violations.push(Violation {
                itemset: y.clone(),
                detail: format!("support claim {v} is not an integer"),
            });
        }
    }
    for x in checksets {
        verdict
            .violations
            .extend(consistency_bounds(&claims, x, BoundsMode::Count { n: db.len() }));
    }
    let owner = det_checker_exact_batch(db, checksets, w)?;
    for (x, &owner) in checksets.iter().zip(&owner) {
        let complete = x.non_empty_subsets()?.iter().all(|y| exact.contains_key(y));
        if complete {
            let claim = incl_excl_combine_exact(&exact, x, w)?;
            verdict.reports.push(CheckerReport {
                checkset: x.clone(),
                label: scheme.tag().into(),
                owner_value: owner as f64,
                claim_value: claim as f64,
                residual: (claim - owner) as f64,
                scale: owner.unsigned_abs().max(claim.unsigned_abs()) as f64,
                accepted: claim == owner,
            });
        } else {
            match incl_excl_terms(&claims, x, scheme, w) {
                Ok(c) => verdict.reports.push(CheckerReport {
                    checkset: x.clone(),
                    label: scheme.tag().into(),
                    owner_value: owner as f64,
                    claim_value: c.value,
                    residual: c.value - owner as f64,
                    scale: c.scale,
                    accepted: false,
                }),
                Err(e @ Error::MissingClaim(_)) => verdict.violations.push(missing(x, &e)),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(verdict)
}

/// Audits count-valued claims on `T` (or the virtual `T²`) with one scan.
#[allow(clippy::too_many_arguments)]
fn audit_counts(
    verdict: &mut Verdict,
    db: &UncertainDatabase,
    claims: &BTreeMap<Itemset, f64>,
    checksets: &[Itemset],
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
    view: ProbabilityView,
    label: &str,
) -> Result<()> {
    if !matches!(
        scheme,
        SchemeId::ExpBasic | SchemeId::ExpScheme1 | SchemeId::ExpScheme2
    ) {
        return Err(Error::IncompatibleScheme {
            scheme: scheme.tag(),
            context: "expected-support claims".into(),
        });
    }
    let w = if scheme.is_weighted() {
        Some(w.ok_or(Error::WeightsRequired(scheme.tag()))?)
    } else {
        None
    };
    for x in checksets {
        verdict
            .violations
            .extend(consistency_bounds(claims, x, BoundsMode::Count { n: db.len() }));
    }
    let owner = checker_scan_batch(db, checksets, scheme, w, view)?;
    for (x, &owner) in checksets.iter().zip(&owner) {
        match incl_excl_terms(claims, x, scheme, w) {
            Ok(c) => verdict.reports.push(CheckerReport::new(
                x.clone(),
                label,
                owner,
                c.value,
                c.scale,
                &verdict.tolerance,
            )),
            Err(e @ Error::MissingClaim(_)) => verdict.violations.push(missing(x, &e)),
            Err(e) => return Err(e),
        }
    }
    Ok(())
}

/// Expected-support verification with the basic or a weighted checker.
pub fn verify_expected(
    db: &UncertainDatabase,
    resp: &ProverResponse,
    checksets: &[Itemset],
    scheme: SchemeId,
    w: Option<&WeightAssignment>,
    tolerance: &Tolerance,
) -> Result<Verdict> {
    require_mode(resp, MiningMode::Expected, scheme)?;
    let mut verdict = Verdict::new(scheme, *tolerance, checksets);
    let claims = resp.field_values(ClaimField::Esup)?;
    audit_counts(
        &mut verdict,
        db,
        &claims,
        checksets,
        scheme,
        w,
        ProbabilityView::Original,
        scheme.tag(),
    )?;
    Ok(verdict)
}

fn side_value(x: &Itemset, what: &str, v: Option<f64>) -> Result<f64> {
    v.ok_or_else(|| Error::MissingSideData(format!("{what} for checkset {x}")))
}

fn probability_violation(x: &Itemset, what: &str, v: f64) -> Option<Violation> {
    (!(v.is_finite() && (-SIDE_SLACK..=1.0 + SIDE_SLACK).contains(&v))).then(|| Violation {
        itemset: x.clone(),
        detail: format!("{what} {v} outside [0, 1]"),
    })
}

/// Possible-world verification.
///
/// `PWS_PAPER` checks `Σ (−1)^{|Y|+1} pcnt(Y) = 1 − λ − Pr[all zero]`.
/// `PWS_EXACT` checks `Σ (−1)^{|S|+1} J(S) = 1 − ρ − Pr[all zero]` with
/// `J({z}) = pcnt(z)`, and screens pcnt, `J`, `λ` and `ρ` for consistency.
pub fn verify_pws(
    db: &UncertainDatabase,
    resp: &ProverResponse,
    checksets: &[Itemset],
    variant: SchemeId,
    tolerance: &Tolerance,
) -> Result<Verdict> {
    if !matches!(variant, SchemeId::PwsPaper | SchemeId::PwsExact) {
        return Err(Error::IncompatibleScheme {
            scheme: variant.tag(),
            context: "possible-world claims".into(),
        });
    }
    require_mode(resp, MiningMode::Pws, variant)?;
    let mut verdict = Verdict::new(variant, *tolerance, checksets);
    let pcnt = resp.field_values(ClaimField::Pcnt)?;
    let zero = all_zero_probability_batch(db, checksets);
    for (x, &zero) in checksets.iter().zip(&zero) {
        let side = resp.side_data.get(x);
        let combined = match variant {
            SchemeId::PwsPaper => {
                let lambda = side_value(x, "lambda", side.and_then(|s| s.lambda))?;
                incl_excl_terms(&pcnt, x, variant, None).map(|c| (c, 1.0 - lambda - zero))
            }
            _ => {
                let rho = side_value(x, "rho", side.and_then(|s| s.rho))?;
                let mut joint = BTreeMap::new();
                for s in x.non_empty_subsets()? {
                    let v = if s.len() == 1 {
                        match pcnt.get(&s) {
                            Some(&v) => v,
                            None => continue,
                        }
                    } else {
                        let tails = side.map(|sd| &sd.joint_tails);
                        side_value(x, &format!("joint tail {s}"), tails.and_then(|t| t.get(&s).copied()))?
                    };
                    joint.insert(s, v);
                }
                verdict.violations.extend(pws_exact_screen(
                    x,
                    &pcnt,
                    &joint,
                    side.and_then(|s| s.lambda),
                    rho,
                    zero,
                    resp.query.delta,
                ));
                incl_excl_terms(&joint, x, variant, None).map(|c| (c, 1.0 - rho - zero))
            }
        };
        match combined {
            Ok((c, owner)) => verdict.reports.push(CheckerReport::new(
                x.clone(),
                variant.tag(),
                owner,
                c.value,
                c.scale.max(1.0),
                tolerance,
            )),
            Err(e @ Error::MissingClaim(_)) => verdict.violations.push(missing(x, &e)),
            Err(e) => return Err(e),
        }
    }
    Ok(verdict)
}

fn pws_exact_screen(
    x: &Itemset,
    pcnt: &BTreeMap<Itemset, f64>,
    joint: &BTreeMap<Itemset, f64>,
    lambda: Option<f64>,
    rho: f64,
    zero: f64,
    delta: u64,
) -> Vec<Violation> {
    let mut out = consistency_bounds(pcnt, x, BoundsMode::Probability);
    out.extend(consistency_bounds(joint, x, BoundsMode::Probability));
    out.extend(probability_violation(x, "rho", rho));
    if rho + zero > 1.0 + SIDE_SLACK {
        out.push(Violation {
            itemset: x.clone(),
            detail: format!("rho {rho} plus all-zero probability {zero} exceeds 1"),
        });
    }
    if let Some(lambda) = lambda {
        out.extend(probability_violation(x, "lambda", lambda));
        if lambda > rho + SIDE_SLACK {
            out.push(Violation {
                itemset: x.clone(),
                detail: format!("lambda {lambda} exceeds rho {rho}"),
            });
        }
        if delta == 1 && lambda != 0.0 {
            out.push(Violation {
                itemset: x.clone(),
                detail: format!("lambda {lambda} must be 0 when delta is 1"),
            });
        }
    }
    // sup(S) ≤ sup(z) for every z ∈ S, so pcnt(S) ≤ J(S).
    for (s, &j) in joint.iter().filter(|(s, _)| s.len() >= 2) {
        if let Some(&p) = pcnt.get(s) {
            if p > j + SIDE_SLACK {
                out.push(Violation {
                    itemset: s.clone(),
                    detail: format!("pcnt {p} exceeds joint tail {j}"),
                });
            }
        }
    }
    out
}

/// Verification of approximate-mining claims.
///
/// The `esup` claims are audited on `T`; `esup − var`, the claimed expected
/// supports on `T²`, are audited on the virtual squared database with an
/// independent weight draw; returned approximate frequentness values must
/// match the Normal approximation of the verified statistics.
pub fn verify_approx(
    db: &UncertainDatabase,
    resp: &ProverResponse,
    checksets: &[Itemset],
    scheme: SchemeId,
    weights: &ApproxWeights,
    tolerance: &Tolerance,
) -> Result<Verdict> {
    require_mode(resp, MiningMode::Approx, scheme)?;
    let mut verdict = Verdict::new(scheme, *tolerance, checksets);
    let esup = resp.field_values(ClaimField::Esup)?;
    let var = resp.field_values(ClaimField::Var)?;
    audit_counts(
        &mut verdict,
        db,
        &esup,
        checksets,
        scheme,
        weights.original.as_ref(),
        ProbabilityView::Original,
        &format!("APPROX/T/{}", scheme.tag()),
    )?;
    let squared: BTreeMap<Itemset, f64> = esup
        .iter()
        .map(|(y, &e)| (y.clone(), e - var[y]))
        .collect();
    audit_counts(
        &mut verdict,
        db,
        &squared,
        checksets,
        scheme,
        weights.squared.as_ref(),
        ProbabilityView::Squared,
        &format!("APPROX/T2/{}", scheme.tag()),
    )?;
    let in_scope = |y: &Itemset| checksets.iter().any(|x| y.is_subset_of(x));
    for (y, claim) in resp.claims.iter().filter(|(y, _)| in_scope(y)) {
        let (e, v, a) = (
            claim.field(ClaimField::Esup).unwrap_or(f64::NAN),
            claim.field(ClaimField::Var).unwrap_or(f64::NAN),
            claim.field(ClaimField::Apcnt).unwrap_or(f64::NAN),
        );
        match normal_approx_frequentness(NormalModel::new(e, v), resp.query.delta) {
            Ok(expected) => {
                let residual = a - expected;
                verdict.reports.push(CheckerReport {
                    checkset: y.clone(),
                    label: "APPROX/apcnt".into(),
                    owner_value: expected,
                    claim_value: a,
                    residual,
                    scale: 1.0,
                    accepted: residual.abs() <= APCNT_TOLERANCE,
                });
            }
            Err(e) => verdict.violations.push(missing(y, &e)),
        }
        if v > e + SIDE_SLACK * e.abs().max(1.0) {
            verdict.violations.push(Violation {
                itemset: y.clone(),
                detail: format!("variance {v} exceeds expected support {e}"),
            });
        }
    }
    Ok(verdict)
}

/// Resolves a command-line scheme name for claims of the given mode.
///
/// `basic` picks the unweighted checker of the mode; tags such as
/// `EXP_SCHEME2` are accepted as well.
pub fn scheme_for(name: &str, mode: MiningMode) -> Result<SchemeId> {
    let scheme = match name.to_ascii_lowercase().as_str() {
        "basic" => match mode {
            MiningMode::Deterministic => SchemeId::DetBasic,
            MiningMode::Expected | MiningMode::Approx => SchemeId::ExpBasic,
            MiningMode::Pws => {
                return Err(Error::InvalidArgument(
                    "possible-world claims need pws-paper or pws-exact".into(),
                ))
            }
        },
        "det-weighted" => SchemeId::DetWeighted,
        "exp-basic" => SchemeId::ExpBasic,
        "exp-w1" => SchemeId::ExpScheme1,
        "exp-w2" => SchemeId::ExpScheme2,
        "pws-paper" => SchemeId::PwsPaper,
        "pws-exact" => SchemeId::PwsExact,
        "approx" => SchemeId::Approx,
        _ => name.parse()?,
    };
    check_compatible(scheme, mode)?;
    Ok(scheme)
}

fn check_compatible(scheme: SchemeId, mode: MiningMode) -> Result<()> {
    use SchemeId::*;
    let ok = match mode {
        MiningMode::Deterministic => matches!(scheme, DetBasic | DetWeighted),
        MiningMode::Expected => matches!(scheme, ExpBasic | ExpScheme1 | ExpScheme2),
        MiningMode::Pws => matches!(scheme, PwsPaper | PwsExact),
        MiningMode::Approx => matches!(scheme, ExpBasic | ExpScheme1 | ExpScheme2 | Approx),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::IncompatibleScheme {
            scheme: scheme.tag(),
            context: format!("{mode} claims"),
        })
    }
}

/// Label of a scheme as applied to claims of a mode.
pub fn scheme_label(scheme: SchemeId, mode: MiningMode) -> String {
    match (mode, scheme) {
        (MiningMode::Approx, SchemeId::Approx) => "APPROX".into(),
        (MiningMode::Approx, s) => format!("APPROX/{s}"),
        (_, s) => s.tag().into(),
    }
}

/// Verifies `resp` with `scheme`, drawing any private weights from `seed`.
///
/// Weights cover the database's items and every item of the checksets.
/// For approximate claims `scheme` names the checker used in both passes;
/// `APPROX` alone means `EXP_SCHEME2`.
pub fn verify(
    db: &UncertainDatabase,
    resp: &ProverResponse,
    checksets: &[Itemset],
    scheme: SchemeId,
    seed: u64,
    tolerance: &Tolerance,
) -> Result<Verdict> {
    let mode = resp.query.mode;
    check_compatible(scheme, mode)?;
    let items: BTreeSet<&Item> = db
        .universe()
        .iter()
        .chain(checksets.iter().flat_map(|x| x.items()))
        .collect();
    match mode {
        MiningMode::Deterministic => {
            let w = match scheme {
                SchemeId::DetWeighted => Some(generate_weights_for(items, scheme, seed)?),
                _ => None,
            };
            verify_deterministic(db, resp, checksets, w.as_ref())
        }
        MiningMode::Expected => {
            let w = match scheme.is_weighted() {
                true => Some(generate_weights_for(items, scheme, seed)?),
                false => None,
            };
            verify_expected(db, resp, checksets, scheme, w.as_ref(), tolerance)
        }
        MiningMode::Pws => verify_pws(db, resp, checksets, scheme, tolerance),
        MiningMode::Approx => {
            let inner = match scheme {
                SchemeId::Approx => SchemeId::ExpScheme2,
                s => s,
            };
            let weights = ApproxWeights::generate(items, inner, seed)?;
            let mut verdict = verify_approx(db, resp, checksets, inner, &weights, tolerance)?;
            verdict.scheme = SchemeId::Approx;
            Ok(verdict)
        }
    }
}
