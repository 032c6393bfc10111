//! Frequent itemset mining over uncertain transaction databases, and
//! verification of mining results returned by an untrusted prover.
//!
//! The owner keeps the database and audits claims with one-scan count
//! checkers: for each checkset `X` an aggregate over the transactions is
//! compared with an inclusion–exclusion combination of the claims on the
//! non-empty subsets of `X`. Private random item weights make the check
//! hard to fool for a prover that knows the mechanism.

pub mod checker;
pub mod experiment;
mod error;
pub mod mining;
pub mod model;
pub mod numeric;
pub mod prover;
pub mod verifier;

pub use checker::{CheckerReport, SchemeId};
pub use error::{Error, Result};
pub use mining::{MinedValue, MiningMode, MiningQuery, MiningResult};
pub use model::{Item, Itemset, UncertainDatabase, WeightAssignment, WeightScheme};
pub use numeric::Tolerance;
pub use prover::{AdversaryKind, AdversaryModel, Claim, ProverResponse, SideData};
pub use verifier::{Decision, Verdict};
