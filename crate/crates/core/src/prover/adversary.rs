use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Prover behaviors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdversaryKind {
    Honest,
    /// Each claim component is independently corrupted with probability 1/2.
    RandomFault,
    /// Mines only a prefix of the database and extrapolates.
    Lazy,
    /// Shifts every claim in the largest checkset's lattice by a constant.
    Stupid,
    /// Shifts claims inside the kernel of the unweighted checkers.
    Smart,
}

impl AdversaryKind {
    pub const ALL: [AdversaryKind; 5] = [
        AdversaryKind::Honest,
        AdversaryKind::RandomFault,
        AdversaryKind::Lazy,
        AdversaryKind::Stupid,
        AdversaryKind::Smart,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            AdversaryKind::Honest => "honest",
            AdversaryKind::RandomFault => "random-fault",
            AdversaryKind::Lazy => "lazy",
            AdversaryKind::Stupid => "stupid",
            AdversaryKind::Smart => "smart",
        }
    }
}

impl fmt::Display for AdversaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AdversaryKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        AdversaryKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown adversary {s:?}")))
    }
}

/// An adversary with its fault size (or, for [`AdversaryKind::Lazy`], the
/// fraction of transactions actually mined) and RNG seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdversaryModel {
    pub kind: AdversaryKind,
    pub magnitude: f64,
    pub seed: u64,
}

impl AdversaryModel {
    pub fn new(kind: AdversaryKind, magnitude: f64, seed: u64) -> Result<Self> {
        let ok = match kind {
            AdversaryKind::Lazy => magnitude > 0.0 && magnitude <= 1.0,
            _ => magnitude > 0.0 && magnitude.is_finite(),
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "magnitude {magnitude} out of range for adversary {kind}"
            )));
        }
        Ok(AdversaryModel {
            kind,
            magnitude,
            seed,
        })
    }

    pub fn honest() -> Self {
        AdversaryModel {
            kind: AdversaryKind::Honest,
            magnitude: 1.0,
            seed: 0,
        }
    }
}
