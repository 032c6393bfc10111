use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Frequentness semantics of a mining run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MiningMode {
    /// Plain support counts; probabilities are ignored beyond presence.
    Deterministic,
    /// Expected support against `min_sup_ratio · n`.
    Expected,
    /// Possible-world semantics: `Pr[sup ≥ δ] ≥ pft`.
    Pws,
    /// Normal approximation of the possible-world criterion.
    Approx,
}

impl MiningMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            MiningMode::Deterministic => "det",
            MiningMode::Expected => "expected",
            MiningMode::Pws => "pws",
            MiningMode::Approx => "approx",
        }
    }

    pub fn needs_pft(&self) -> bool {
        matches!(self, MiningMode::Pws | MiningMode::Approx)
    }
}

impl fmt::Display for MiningMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for MiningMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" | "deterministic" => Ok(MiningMode::Deterministic),
            "expected" => Ok(MiningMode::Expected),
            "pws" => Ok(MiningMode::Pws),
            "approx" => Ok(MiningMode::Approx),
            _ => Err(Error::InvalidArgument(format!("unknown mining mode {s:?}"))),
        }
    }
}

/// A mining request.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiningQuery {
    pub mode: MiningMode,
    /// `min_sup` (or `min_esup`) as a fraction of `n`.
    pub min_sup_ratio: f64,
    /// Probabilistic frequent threshold; only for PWS and APPROX.
    pub pft: Option<f64>,
    /// Integer support threshold `δ = ceil(n · min_sup_ratio)`, at least 1.
    pub delta: u64,
}

impl MiningQuery {
    pub fn new(mode: MiningMode, min_sup_ratio: f64, pft: Option<f64>, n_txns: usize) -> Result<Self> {
        let delta = Self::delta_for(n_txns, min_sup_ratio);
        Self::with_delta(mode, min_sup_ratio, pft, delta)
    }

    /// Builds a query with an explicit threshold (as read back from a claims file).
    pub fn with_delta(mode: MiningMode, min_sup_ratio: f64, pft: Option<f64>, delta: u64) -> Result<Self> {
        if !(min_sup_ratio > 0.0 && min_sup_ratio <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "min_sup ratio {min_sup_ratio} outside (0, 1]"
            )));
        }
        match (mode.needs_pft(), pft) {
            (true, Some(p)) if p > 0.0 && p < 1.0 => {}
            (true, Some(p)) => {
                return Err(Error::InvalidArgument(format!("pft {p} outside (0, 1)")))
            }
            (true, None) => {
                return Err(Error::InvalidArgument(format!("mode {mode} requires pft")))
            }
            (false, Some(_)) => {
                return Err(Error::InvalidArgument(format!("mode {mode} takes no pft")))
            }
            (false, None) => {}
        }
        if delta == 0 {
            return Err(Error::InvalidArgument("delta must be at least 1".into()));
        }
        Ok(MiningQuery {
            mode,
            min_sup_ratio,
            pft,
            delta,
        })
    }

    /// `ceil(n · ratio)`, at least 1. Products within 1e-9 of an integer
    /// are snapped to it so that e.g. `5 · 0.4` gives 2.
    pub fn delta_for(n_txns: usize, ratio: f64) -> u64 {
        let x = n_txns as f64 * ratio;
        let nearest = x.round();
        let d = if (x - nearest).abs() <= 1e-9 * nearest.max(1.0) {
            nearest
        } else {
            x.ceil()
        };
        (d as u64).max(1)
    }

    /// Expected-support threshold `min_sup_ratio · n`.
    pub fn min_esup(&self, n_txns: usize) -> f64 {
        self.min_sup_ratio * n_txns as f64
    }
}
