//! The UDB v1 text format.
//!
//! ```text
//! #UDB v1
//! A:0.5 B:0.6
//! A:0.4 B:0.5
//! ```
//!
//! One transaction per line as space-separated `item:prob` pairs. Blank
//! lines are ignored and `#` starts a comment line. A transaction without
//! items is written as a single `-`.

use std::fmt::Write as _;

use super::database::UncertainDatabase;
use super::itemset::Item;
use crate::error::{Error, Result};
use crate::numeric::format_real;

pub const UDB_HEADER: &str = "#UDB v1";
pub const EMPTY_TRANSACTION: &str = "-";

/// Parses a UDB v1 payload. The header line is optional.
pub fn parse_database(input: &[u8]) -> Result<UncertainDatabase> {
    let text = std::str::from_utf8(input).map_err(|e| Error::parse(0, e.to_string()))?;
    let mut records = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let lineno = k + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("#UDB") {
            if rest.trim() != "v1" {
                return Err(Error::parse(lineno, format!("unsupported header {line:?}")));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        if line == EMPTY_TRANSACTION {
            records.push(Vec::new());
            continue;
        }
        let mut rec = Vec::new();
        for tok in line.split_whitespace() {
            let (name, prob) = tok
                .split_once(':')
                .ok_or_else(|| Error::parse(lineno, format!("expected item:prob, got {tok:?}")))?;
            let item = Item::new(name).map_err(|e| Error::parse(lineno, e.to_string()))?;
            let p: f64 = prob
                .parse()
                .map_err(|_| Error::parse(lineno, format!("bad probability {prob:?}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::parse(
                    lineno,
                    format!("probability {prob} outside (0, 1]"),
                ));
            }
            if rec.iter().any(|(i, _): &(Item, f64)| *i == item) {
                return Err(Error::parse(lineno, format!("duplicate item {item}")));
            }
            rec.push((item, p));
        }
        records.push(rec);
    }
    UncertainDatabase::from_records(records)
}

/// Serializes a database to UDB v1 with 17-significant-digit probabilities.
pub fn serialize_database(db: &UncertainDatabase) -> Vec<u8> {
    let mut out = String::new();
    out.push_str(UDB_HEADER);
    out.push('\n');
    for rec in db.records() {
        if rec.is_empty() {
            out.push_str(EMPTY_TRANSACTION);
        }
        for (k, (item, p)) in rec.iter().enumerate() {
            if k > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{item}:{}", format_real(*p));
        }
        out.push('\n');
    }
    out.into_bytes()
}
