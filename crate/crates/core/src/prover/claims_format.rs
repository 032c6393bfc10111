//! `#CLAIMS v1` text format.
//!
//! ```text
//! #CLAIMS v1 mode=pws minsup=0.5 pft=0.5 delta=1
//! # adversary=honest magnitude=1 seed=0
//! A	pcnt=0.69999999999999996
//! A,B	pcnt=0.44000000000000006
//! !lambda X=A,B value=0.0
//! !rho X=A,B value=0.0
//! !joint X=A,B S=A,B value=0.56000000000000005
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::adversary::{AdversaryKind, AdversaryModel};
use super::response::{Claim, ClaimField, ProverResponse, SideData};
use crate::error::{Error, Result};
use crate::mining::{MiningMode, MiningQuery};
use crate::model::Itemset;
use crate::numeric::format_real;

pub const CLAIMS_HEADER: &str = "#CLAIMS v1";

fn format_claim_value(field: ClaimField, v: f64) -> String {
    if field == ClaimField::Sup && v.fract() == 0.0 && v.abs() < 2f64.powi(53) {
        format!("{}", v as i64)
    } else {
        format_real(v)
    }
}

/// Writes a response in `#CLAIMS v1` format.
pub fn serialize_claims(resp: &ProverResponse) -> Vec<u8> {
    let q = &resp.query;
    let mut out = format!("{CLAIMS_HEADER} mode={} minsup={}", q.mode, format_real(q.min_sup_ratio));
    if let Some(p) = q.pft {
        let _ = write!(out, " pft={}", format_real(p));
    }
    let _ = writeln!(out, " delta={}", q.delta);
    if let Some(a) = &resp.adversary {
        let _ = writeln!(
            out,
            "# adversary={} magnitude={} seed={}",
            a.kind,
            format_real(a.magnitude),
            a.seed
        );
    }
    for (x, claim) in &resp.claims {
        let fields: Vec<String> = ClaimField::for_mode(claim.mode())
            .iter()
            .map(|&f| format!("{f}={}", format_claim_value(f, claim.field(f).unwrap_or(f64::NAN))))
            .collect();
        let _ = writeln!(out, "{x}\t{}", fields.join(";"));
    }
    for (x, sd) in &resp.side_data {
        if let Some(l) = sd.lambda {
            let _ = writeln!(out, "!lambda X={x} value={}", format_real(l));
        }
        if let Some(r) = sd.rho {
            let _ = writeln!(out, "!rho X={x} value={}", format_real(r));
        }
        for (s, j) in &sd.joint_tails {
            let _ = writeln!(out, "!joint X={x} S={s} value={}", format_real(*j));
        }
    }
    out.into_bytes()
}

fn parse_real(line: usize, key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|_| Error::parse(line, format!("bad value for {key}: {v:?}")))
}

fn key_values(line: usize, tokens: &[&str]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key=value, got {tok:?}")))?;
        if out.insert(k.to_string(), v.to_string()).is_some() {
            return Err(Error::parse(line, format!("duplicate key {k}")));
        }
    }
    Ok(out)
}

fn take<'a>(line: usize, kv: &'a BTreeMap<String, String>, key: &str) -> Result<&'a str> {
    kv.get(key)
        .map(String::as_str)
        .ok_or_else(|| Error::parse(line, format!("missing {key}=")))
}

fn parse_itemset(line: usize, s: &str) -> Result<Itemset> {
    Itemset::parse(s).map_err(|e| Error::parse(line, e.to_string()))
}

fn parse_header(line: usize, text: &str, n_txns: usize) -> Result<MiningQuery> {
    let mut tokens = text.split_whitespace();
    if tokens.next() != Some("#CLAIMS") {
        return Err(Error::parse(line, format!("expected header {CLAIMS_HEADER:?}")));
    }
    match tokens.next() {
        Some("v1") => {}
        other => return Err(Error::parse(line, format!("unsupported claims version {other:?}"))),
    }
    let rest: Vec<&str> = tokens.collect();
    let kv = key_values(line, &rest)?;
    for k in kv.keys() {
        if !["mode", "minsup", "pft", "delta"].contains(&k.as_str()) {
            return Err(Error::parse(line, format!("unknown header key {k}")));
        }
    }
    let mode: MiningMode = take(line, &kv, "mode")?
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
    let minsup = parse_real(line, "minsup", take(line, &kv, "minsup")?)?;
    let pft = kv.get("pft").map(|v| parse_real(line, "pft", v)).transpose()?;
    let delta = match kv.get("delta") {
        Some(v) => v
            .parse::<u64>()
            .map_err(|_| Error::parse(line, format!("bad delta {v:?}")))?,
        None => MiningQuery::delta_for(n_txns, minsup),
    };
    MiningQuery::with_delta(mode, minsup, pft, delta).map_err(|e| Error::parse(line, e.to_string()))
}

fn parse_adversary(line: usize, text: &str) -> Result<AdversaryModel> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let kv = key_values(line, &tokens)?;
    let kind: AdversaryKind = take(line, &kv, "adversary")?
        .parse()
        .map_err(|e: Error| Error::parse(line, e.to_string()))?;
    let magnitude = parse_real(line, "magnitude", take(line, &kv, "magnitude")?)?;
    let seed = take(line, &kv, "seed")?
        .parse::<u64>()
        .map_err(|_| Error::parse(line, "bad seed"))?;
    Ok(AdversaryModel {
        kind,
        magnitude,
        seed,
    })
}

fn parse_claim(line: usize, mode: MiningMode, text: &str) -> Result<(Itemset, Claim)> {
    let (set, values) = text
        .split_once('\t')
        .or_else(|| text.split_once(' '))
        .ok_or_else(|| Error::parse(line, "expected <itemset><TAB><key=value;...>"))?;
    let x = parse_itemset(line, set.trim())?;
    let tokens: Vec<&str> = values.trim().split(';').collect();
    let kv = key_values(line, &tokens)?;
    let fields = ClaimField::for_mode(mode);
    for k in kv.keys() {
        if !fields.iter().any(|f| f.key() == k) {
            return Err(Error::parse(line, format!("key {k} not valid in {mode} mode")));
        }
    }
    let get = |f: ClaimField| parse_real(line, f.key(), take(line, &kv, f.key())?);
    let claim = match mode {
        MiningMode::Deterministic => Claim::Sup(get(ClaimField::Sup)?),
        MiningMode::Expected => Claim::Esup(get(ClaimField::Esup)?),
        MiningMode::Pws => Claim::Pcnt(get(ClaimField::Pcnt)?),
        MiningMode::Approx => Claim::Approx {
            esup: get(ClaimField::Esup)?,
            variance: get(ClaimField::Var)?,
            apcnt: get(ClaimField::Apcnt)?,
        },
    };
    Ok((x, claim))
}

/// Reads a `#CLAIMS v1` file. `n_txns` is used to derive `δ` when the
/// header omits it.
pub fn parse_claims(input: &[u8], n_txns: usize) -> Result<ProverResponse> {
    let text = std::str::from_utf8(input).map_err(|e| Error::parse(0, e.to_string()))?;
    let mut query = None;
    let mut resp_claims = BTreeMap::new();
    let mut side_data: BTreeMap<Itemset, SideData> = BTreeMap::new();
    let mut adversary = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let t = raw.trim_end_matches('\r');
        if t.trim().is_empty() {
            continue;
        }
        let Some(q) = query else {
            query = Some(parse_header(line, t, n_txns)?);
            continue;
        };
        if let Some(rest) = t.strip_prefix('#') {
            let rest = rest.trim();
            if rest.starts_with("adversary=") {
                adversary = Some(parse_adversary(line, rest)?);
            }
            continue;
        }
        if let Some(rest) = t.strip_prefix('!') {
            let mut tokens = rest.split_whitespace();
            let directive = tokens.next().unwrap_or("");
            let kv = key_values(line, &tokens.collect::<Vec<_>>())?;
            let x = parse_itemset(line, take(line, &kv, "X")?)?;
            let value = parse_real(line, "value", take(line, &kv, "value")?)?;
            let entry = side_data.entry(x.clone()).or_default();
            let dup = match directive {
                "lambda" => entry.lambda.replace(value).is_some(),
                "rho" => entry.rho.replace(value).is_some(),
                "joint" => {
                    let s = parse_itemset(line, take(line, &kv, "S")?)?;
                    if !s.is_subset_of(&x) || s.len() < 2 {
                        return Err(Error::parse(
                            line,
                            format!("joint set {s} must be a subset of {x} with at least two items"),
                        ));
                    }
                    entry.joint_tails.insert(s, value).is_some()
                }
                other => return Err(Error::parse(line, format!("unknown directive !{other}"))),
            };
            if dup {
                return Err(Error::parse(line, format!("duplicate !{directive} for {x}")));
            }
            continue;
        }
        let (x, claim) = parse_claim(line, q.mode, t)?;
        if resp_claims.insert(x.clone(), claim).is_some() {
            return Err(Error::parse(line, format!("duplicate claim for {x}")));
        }
    }
    let query = query.ok_or_else(|| Error::parse(1, format!("missing {CLAIMS_HEADER} header")))?;
    Ok(ProverResponse {
        query,
        claims: resp_claims,
        side_data,
        adversary,
    })
}
