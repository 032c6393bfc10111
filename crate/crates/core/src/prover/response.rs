use std::collections::BTreeMap;
use std::fmt;

use super::adversary::AdversaryModel;
use crate::error::{Error, Result};
use crate::mining::{maximal_itemsets, MinedValue, MiningMode, MiningQuery};
use crate::model::Itemset;

/// A claimed statistic for one itemset.
///
/// Supports are carried as reals so that tampered, non-integer claims can be
/// represented and rejected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Claim {
    Sup(f64),
    Esup(f64),
    Pcnt(f64),
    Approx { esup: f64, variance: f64, apcnt: f64 },
}

/// Named component of a claim.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClaimField {
    Sup,
    Esup,
    Pcnt,
    Var,
    Apcnt,
}

impl ClaimField {
    pub fn key(&self) -> &'static str {
        match self {
            ClaimField::Sup => "sup",
            ClaimField::Esup => "esup",
            ClaimField::Pcnt => "pcnt",
            ClaimField::Var => "var",
            ClaimField::Apcnt => "apcnt",
        }
    }

    /// Fields a claim of the given mode carries, in serialization order.
    pub fn for_mode(mode: MiningMode) -> &'static [ClaimField] {
        match mode {
            MiningMode::Deterministic => &[ClaimField::Sup],
            MiningMode::Expected => &[ClaimField::Esup],
            MiningMode::Pws => &[ClaimField::Pcnt],
            MiningMode::Approx => &[ClaimField::Esup, ClaimField::Var, ClaimField::Apcnt],
        }
    }
}

impl fmt::Display for ClaimField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl Claim {
    pub fn mode(&self) -> MiningMode {
        match self {
            Claim::Sup(_) => MiningMode::Deterministic,
            Claim::Esup(_) => MiningMode::Expected,
            Claim::Pcnt(_) => MiningMode::Pws,
            Claim::Approx { .. } => MiningMode::Approx,
        }
    }

    pub fn field(&self, field: ClaimField) -> Option<f64> {
        match (self, field) {
            (Claim::Sup(v), ClaimField::Sup) => Some(*v),
            (Claim::Esup(v), ClaimField::Esup) => Some(*v),
            (Claim::Pcnt(v), ClaimField::Pcnt) => Some(*v),
            (Claim::Approx { esup, .. }, ClaimField::Esup) => Some(*esup),
            (Claim::Approx { variance, .. }, ClaimField::Var) => Some(*variance),
            (Claim::Approx { apcnt, .. }, ClaimField::Apcnt) => Some(*apcnt),
            _ => None,
        }
    }

    pub(crate) fn field_mut(&mut self, field: ClaimField) -> Option<&mut f64> {
        match (self, field) {
            (Claim::Sup(v), ClaimField::Sup) => Some(v),
            (Claim::Esup(v), ClaimField::Esup) => Some(v),
            (Claim::Pcnt(v), ClaimField::Pcnt) => Some(v),
            (Claim::Approx { esup, .. }, ClaimField::Esup) => Some(esup),
            (Claim::Approx { variance, .. }, ClaimField::Var) => Some(variance),
            (Claim::Approx { apcnt, .. }, ClaimField::Apcnt) => Some(apcnt),
            _ => None,
        }
    }

    /// The value audited by the count checkers: sup, esup or pcnt.
    pub fn primary(&self) -> f64 {
        match *self {
            Claim::Sup(v) | Claim::Esup(v) | Claim::Pcnt(v) => v,
            Claim::Approx { esup, .. } => esup,
        }
    }

    pub(crate) fn primary_mut(&mut self) -> &mut f64 {
        match self {
            Claim::Sup(v) | Claim::Esup(v) | Claim::Pcnt(v) => v,
            Claim::Approx { esup, .. } => esup,
        }
    }
}

impl From<MinedValue> for Claim {
    fn from(v: MinedValue) -> Self {
        match v {
            MinedValue::Sup(s) => Claim::Sup(s as f64),
            MinedValue::Esup(e) => Claim::Esup(e),
            MinedValue::Pcnt(p) => Claim::Pcnt(p),
            MinedValue::Approx {
                esup,
                variance,
                apcnt,
            } => Claim::Approx {
                esup,
                variance,
                apcnt,
            },
        }
    }
}

/// Possible-world side data for one checkset `X`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SideData {
    /// `λ = Pr[⋀_{z∈X} 0 < sup(z) < δ]`.
    pub lambda: Option<f64>,
    /// `ρ = Pr[⋀_{z∈X} sup(z) < δ] − Pr[every sup(z) = 0]`.
    pub rho: Option<f64>,
    /// `J(S) = Pr[⋀_{z∈S} sup(z) ≥ δ]` for `S ⊆ X`, `|S| ≥ 2`.
    pub joint_tails: BTreeMap<Itemset, f64>,
}

/// Everything the prover returns for one query.
#[derive(Debug, Clone, PartialEq)]
pub struct ProverResponse {
    pub query: MiningQuery,
    pub claims: BTreeMap<Itemset, Claim>,
    /// Keyed by checkset; only filled in possible-world mode.
    pub side_data: BTreeMap<Itemset, SideData>,
    /// Which behavior produced the response, when known.
    pub adversary: Option<AdversaryModel>,
}

impl ProverResponse {
    /// One field of every claim. Errors if a claim lacks the field.
    pub fn field_values(&self, field: ClaimField) -> Result<BTreeMap<Itemset, f64>> {
        self.claims
            .iter()
            .map(|(x, c)| {
                c.field(field).map(|v| (x.clone(), v)).ok_or_else(|| {
                    Error::InvalidArgument(format!("claim for {x} has no {field} value"))
                })
            })
            .collect()
    }

    /// The checker-audited value of every claim.
    pub fn primary_values(&self) -> BTreeMap<Itemset, f64> {
        self.claims
            .iter()
            .map(|(x, c)| (x.clone(), c.primary()))
            .collect()
    }

    /// Checksets a verifier audits by default: the itemsets carrying side
    /// data when there are any, otherwise the maximal claimed itemsets.
    pub fn checksets(&self) -> Vec<Itemset> {
        if self.side_data.is_empty() {
            maximal_itemsets(self.claims.keys())
        } else {
            self.side_data.keys().cloned().collect()
        }
    }
}
