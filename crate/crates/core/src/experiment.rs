//! Detection-rate experiments: seeded trial grids of adversaries against
//! verification schemes.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;

use crate::checker::SchemeId;
use crate::error::{Error, Result};
use crate::mining::{mine, MiningMode, MiningQuery};
use crate::model::{generate_synthetic, Itemset, UncertainDatabase};
use crate::numeric::{derive_seed, Tolerance};
use crate::prover::{prove, AdversaryKind, AdversaryModel, ProverResponse};
use crate::verifier::{scheme_for, scheme_label, verify, Verdict};

/// A claim-side value that moves by at most this many tolerance bounds
/// counts as unchanged when classifying a tampered trial.
pub const KERNEL_FACTOR: f64 = 10.0;

/// Parameters of an experiment, read from a flat `key = value` file.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub txns: usize,
    pub items: usize,
    pub density: f64,
    pub prob_range: (f64, f64),
    pub mode: MiningMode,
    pub min_sup_ratio: f64,
    pub pft: Option<f64>,
    /// `(kind, magnitude)` pairs; seeds are derived per trial.
    pub adversaries: Vec<(AdversaryKind, f64)>,
    pub schemes: Vec<SchemeId>,
    pub trials: usize,
    pub seed: u64,
    /// When false, timing columns are left empty so output is reproducible.
    pub timing: bool,
    pub tolerance: Tolerance,
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::InvalidArgument(format!("bad value for {key}: {v:?}")))
}

impl ExperimentConfig {
    /// Parses the config format:
    ///
    /// ```text
    /// txns = 60
    /// items = 6
    /// density = 0.5
    /// plo = 0.2
    /// phi = 0.8
    /// mode = expected
    /// minsup = 0.1
    /// adversaries = honest, random-fault:1e-6, smart:1
    /// schemes = basic, exp-w1, exp-w2
    /// trials = 1000
    /// seed = 7
    /// timing = off
    /// ```
    ///
    /// `density`, `plo`, `phi`, `pft`, `timing` and `tolerance` are optional;
    /// probabilities default to 1 in `det` mode and `[0.2, 0.8]` otherwise.
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(idx + 1, format!("expected key = value, got {line:?}")))?;
            let k = k.trim().to_ascii_lowercase();
            const KEYS: [&str; 14] = [
                "txns", "items", "density", "plo", "phi", "mode", "minsup", "pft", "adversaries",
                "schemes", "trials", "seed", "timing", "tolerance",
            ];
            if !KEYS.contains(&k.as_str()) {
                return Err(Error::parse(idx + 1, format!("unknown key {k}")));
            }
            if kv.insert(k.clone(), v.trim().to_string()).is_some() {
                return Err(Error::parse(idx + 1, format!("duplicate key {k}")));
            }
        }
        let get = |k: &str| {
            kv.get(k)
                .map(String::as_str)
                .ok_or_else(|| Error::InvalidArgument(format!("config is missing {k}")))
        };
        let mode: MiningMode = get("mode")?.parse()?;
        let default_p = if mode == MiningMode::Deterministic { 1.0 } else { 0.2 };
        let default_hi = if mode == MiningMode::Deterministic { 1.0 } else { 0.8 };
        let opt = |k: &str, d: f64| kv.get(k).map_or(Ok(d), |v| parse_num::<f64>(k, v));
        let adversaries = get("adversaries")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|spec| {
                let (kind, mag) = spec.split_once(':').unwrap_or((spec, "1"));
                let kind: AdversaryKind = kind.trim().parse()?;
                let mag: f64 = parse_num("adversaries", mag.trim())?;
                AdversaryModel::new(kind, mag, 0)?;
                Ok((kind, mag))
            })
            .collect::<Result<Vec<_>>>()?;
        let schemes = get("schemes")?
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| scheme_for(s, mode))
            .collect::<Result<Vec<_>>>()?;
        let timing = match kv.get("timing").map(|s| s.to_ascii_lowercase()) {
            None => true,
            Some(s) if s == "on" || s == "true" => true,
            Some(s) if s == "off" || s == "false" => false,
            Some(s) => return Err(Error::InvalidArgument(format!("bad timing value {s:?}"))),
        };
        let cfg = ExperimentConfig {
            txns: parse_num("txns", get("txns")?)?,
            items: parse_num("items", get("items")?)?,
            density: opt("density", 0.5)?,
            prob_range: (opt("plo", default_p)?, opt("phi", default_hi)?),
            mode,
            min_sup_ratio: parse_num("minsup", get("minsup")?)?,
            pft: kv.get("pft").map(|v| parse_num("pft", v)).transpose()?,
            adversaries,
            schemes,
            trials: parse_num("trials", get("trials")?)?,
            seed: parse_num("seed", get("seed")?)?,
            timing,
            tolerance: Tolerance::with_relative(opt("tolerance", 1e-9)?),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        if self.adversaries.is_empty() || self.schemes.is_empty() {
            return Err(Error::InvalidArgument(
                "config needs at least one adversary and one scheme".into(),
            ));
        }
        MiningQuery::new(self.mode, self.min_sup_ratio, self.pft, self.txns)?;
        for &s in &self.schemes {
            scheme_for(s.tag(), self.mode)?;
        }
        Ok(())
    }
}

/// Aggregated outcome of one (adversary, scheme) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub adversary: AdversaryKind,
    pub magnitude: f64,
    pub scheme: String,
    pub trials: usize,
    /// Trials whose response differs from the honest one.
    pub tampered: usize,
    /// Tampered trials that were rejected.
    pub detected: usize,
    /// Tampered trials whose claim-side values all stayed within
    /// [`KERNEL_FACTOR`] tolerance bounds of the honest ones.
    pub kernel: usize,
    /// Tampered trials outside the kernel that were rejected.
    pub detected_outside_kernel: usize,
    /// Rejections of untampered responses.
    pub false_alarms: usize,
    /// Trials where proving or verification failed with an error.
    pub errors: usize,
    /// Mean verification time in microseconds.
    pub verify_us: Option<f64>,
    /// Mean proving time beyond plain mining, in microseconds.
    pub prover_extra_us: Option<f64>,
}

impl ExperimentRow {
    /// `detected / tampered`, or `None` without tampered trials.
    pub fn rate(&self) -> Option<f64> {
        (self.tampered > 0).then(|| self.detected as f64 / self.tampered as f64)
    }

    /// Detection rate over tampered trials outside the kernel.
    pub fn rate_outside_kernel(&self) -> Option<f64> {
        let outside = self.tampered - self.kernel;
        (outside > 0).then(|| self.detected_outside_kernel as f64 / outside as f64)
    }
}

struct SchemeOutcome {
    rejected: bool,
    kernel: bool,
    micros: f64,
}

struct AdversaryOutcome {
    tampered: bool,
    extra_micros: f64,
    schemes: Vec<Option<SchemeOutcome>>,
}

fn micros_since(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e6
}

/// True when every claim-side value of `tampered` lies within the kernel
/// band around `honest` and no new screening violation appeared.
fn in_kernel(honest: &Verdict, tampered: &Verdict, tol: &Tolerance) -> bool {
    if !tampered.violations.is_empty() || honest.reports.len() != tampered.reports.len() {
        return false;
    }
    honest.reports.iter().zip(&tampered.reports).all(|(h, t)| {
        let scale = h.scale.max(t.scale);
        (t.claim_value - h.claim_value).abs() <= KERNEL_FACTOR * tol.bound(scale)
    })
}

fn run_trial(cfg: &ExperimentConfig, index: usize) -> Result<Option<Vec<AdversaryOutcome>>> {
    let trial_seed = derive_seed(cfg.seed, index as u64);
    let db = generate_synthetic(
        cfg.txns,
        cfg.items,
        cfg.density,
        cfg.prob_range,
        derive_seed(trial_seed, 0),
    )?;
    let query = MiningQuery::new(cfg.mode, cfg.min_sup_ratio, cfg.pft, db.len())?;
    let start = Instant::now();
    mine(&db, &query)?;
    let mine_micros = micros_since(start);
    let honest = match prove(&db, &query, None, &AdversaryModel::honest()) {
        Ok(r) => r,
        Err(Error::GuardExceeded(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    let checksets = honest.checksets();
    let weight_seeds: Vec<u64> = (0..cfg.schemes.len())
        .map(|j| derive_seed(trial_seed, 1000 + j as u64))
        .collect();
    let run_verify = |resp: &ProverResponse, j: usize| -> Option<(Verdict, f64)> {
        let start = Instant::now();
        let v = verify(&db, resp, &checksets, cfg.schemes[j], weight_seeds[j], &cfg.tolerance).ok()?;
        Some((v, micros_since(start)))
    };
    let honest_verdicts: Vec<Option<(Verdict, f64)>> =
        (0..cfg.schemes.len()).map(|j| run_verify(&honest, j)).collect();

    let outcomes = cfg
        .adversaries
        .iter()
        .enumerate()
        .map(|(k, &(kind, magnitude))| {
            let adv = AdversaryModel::new(kind, magnitude, derive_seed(trial_seed, 100 + k as u64))
                .expect("validated with the config");
            let start = Instant::now();
            let resp = match prove(&db, &query, Some(&checksets), &adv) {
                Ok(r) => r,
                Err(_) => {
                    return AdversaryOutcome {
                        tampered: false,
                        extra_micros: 0.0,
                        schemes: (0..cfg.schemes.len()).map(|_| None).collect(),
                    }
                }
            };
            let extra_micros = micros_since(start) - mine_micros;
            let tampered = resp.claims != honest.claims || resp.side_data != honest.side_data;
            let schemes = (0..cfg.schemes.len())
                .map(|j| {
                    let (verdict, micros) = run_verify(&resp, j)?;
                    let kernel = match &honest_verdicts[j] {
                        Some((h, _)) if tampered => in_kernel(h, &verdict, &cfg.tolerance),
                        _ => false,
                    };
                    Some(SchemeOutcome {
                        rejected: !verdict.accepted(),
                        kernel,
                        micros,
                    })
                })
                .collect();
            AdversaryOutcome {
                tampered,
                extra_micros,
                schemes,
            }
        })
        .collect();
    Ok(Some(outcomes))
}

/// Runs every trial (in parallel) and aggregates one row per
/// (adversary, scheme) in config order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    cfg.validate()?;
    let trials = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for (k, &(kind, magnitude)) in cfg.adversaries.iter().enumerate() {
        for (j, &scheme) in cfg.schemes.iter().enumerate() {
            let mut row = ExperimentRow {
                adversary: kind,
                magnitude,
                scheme: scheme_label(scheme, cfg.mode),
                trials: cfg.trials,
                tampered: 0,
                detected: 0,
                kernel: 0,
                detected_outside_kernel: 0,
                false_alarms: 0,
                errors: 0,
                verify_us: None,
                prover_extra_us: None,
            };
            let (mut verify_total, mut extra_total, mut timed) = (0.0, 0.0, 0usize);
            for trial in &trials {
                let Some(outcome) = trial.as_ref().map(|t| &t[k]) else {
                    row.errors += 1;
                    continue;
                };
                let Some(s) = &outcome.schemes[j] else {
                    row.errors += 1;
                    continue;
                };
                verify_total += s.micros;
                extra_total += outcome.extra_micros;
                timed += 1;
                if outcome.tampered {
                    row.tampered += 1;
                    row.detected += s.rejected as usize;
                    if s.kernel {
                        row.kernel += 1;
                    } else {
                        row.detected_outside_kernel += s.rejected as usize;
                    }
                } else {
                    row.false_alarms += s.rejected as usize;
                }
            }
            if cfg.timing && timed > 0 {
                row.verify_us = Some(verify_total / timed as f64);
                row.prover_extra_us = Some(extra_total / timed as f64);
            }
            rows.push(row);
        }
    }
    Ok(rows)
}

/// Column names shared by the table and CSV renderings.
pub const COLUMNS: [&str; 13] = [
    "adversary",
    "magnitude",
    "scheme",
    "trials",
    "tampered",
    "detected",
    "rate",
    "kernel",
    "rate_outside_kernel",
    "false_alarms",
    "errors",
    "verify_us",
    "prover_extra_us",
];

fn fmt_rate(r: Option<f64>) -> String {
    r.map_or_else(|| "n/a".to_string(), |r| format!("{r:.3}"))
}

fn fmt_time(t: Option<f64>) -> String {
    t.map_or_else(|| "-".to_string(), |t| format!("{t:.1}"))
}

impl ExperimentRow {
    /// Cell values in [`COLUMNS`] order.
    pub fn cells(&self) -> Vec<String> {
        vec![
            self.adversary.to_string(),
            format!("{}", self.magnitude),
            self.scheme.clone(),
            self.trials.to_string(),
            self.tampered.to_string(),
            self.detected.to_string(),
            fmt_rate(self.rate()),
            self.kernel.to_string(),
            fmt_rate(self.rate_outside_kernel()),
            self.false_alarms.to_string(),
            self.errors.to_string(),
            fmt_time(self.verify_us),
            fmt_time(self.prover_extra_us),
        ]
    }
}

/// Aligned plain-text table.
pub fn render_table(rows: &[ExperimentRow]) -> String {
    let cells: Vec<Vec<String>> = rows.iter().map(ExperimentRow::cells).collect();
    let widths: Vec<usize> = COLUMNS
        .iter()
        .enumerate()
        .map(|(c, name)| cells.iter().map(|r| r[c].len()).max().unwrap_or(0).max(name.len()))
        .collect();
    let mut out = String::new();
    let mut line = |values: Vec<&str>| {
        let padded: Vec<String> = values
            .iter()
            .zip(&widths)
            .map(|(v, &w)| format!("{v:<w$}"))
            .collect();
        let _ = writeln!(out, "{}", padded.join("  ").trim_end());
    };
    line(COLUMNS.to_vec());
    for r in &cells {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

/// Synthetic database of trial `index`.
pub fn trial_database(cfg: &ExperimentConfig, index: usize) -> Result<UncertainDatabase> {
    let trial_seed = derive_seed(cfg.seed, index as u64);
    generate_synthetic(
        cfg.txns,
        cfg.items,
        cfg.density,
        cfg.prob_range,
        derive_seed(trial_seed, 0),
    )
}

/// Checksets the honest prover would report for a database.
pub fn honest_checksets(db: &UncertainDatabase, query: &MiningQuery) -> Result<Vec<Itemset>> {
    Ok(prove(db, query, None, &AdversaryModel::honest())?.checksets())
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONFIG: &str = "\
# small grid
txns = 30
items = 5
density = 0.6
mode = expected
minsup = 0.05
adversaries = honest, random-fault:1e-3, smart:1
schemes = basic, exp-w2
trials = 20
seed = 3
timing = off
";

    #[test]
    fn parses_config() {
        let cfg = ExperimentConfig::parse(CONFIG).unwrap();
        assert_eq!(cfg.txns, 30);
        assert_eq!(cfg.prob_range, (0.2, 0.8));
        assert_eq!(cfg.schemes, vec![SchemeId::ExpBasic, SchemeId::ExpScheme2]);
        assert_eq!(cfg.adversaries[1], (AdversaryKind::RandomFault, 1e-3));
        assert!(!cfg.timing);
        assert!(ExperimentConfig::parse("txns = 1\nbogus = 2\n").is_err());
        assert!(ExperimentConfig::parse(&CONFIG.replace("exp-w2", "pws-exact")).is_err());
    }

    #[test]
    fn experiment_is_deterministic() {
        let cfg = ExperimentConfig::parse(CONFIG).unwrap();
        let a = run_experiment(&cfg).unwrap();
        let b = run_experiment(&cfg).unwrap();
        assert_eq!(render_table(&a), render_table(&b));
        assert_eq!(a.len(), 6);
        // Honest responses are never tampered and never rejected.
        assert_eq!(a[0].tampered, 0);
        assert_eq!(a[0].false_alarms, 0);
        // Smart passes the basic checker and fails the weighted one.
        let smart_basic = &a[4];
        let smart_w2 = &a[5];
        assert!(smart_basic.tampered > 0);
        assert_eq!(smart_basic.detected, 0);
        assert_eq!(smart_w2.detected, smart_w2.tampered);
    }
}
