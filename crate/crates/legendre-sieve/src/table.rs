//! Loaders for the shipped extremal-constant and sieve-range tables.

use std::path::Path;

use num_bigint::BigInt;
use serde::Deserialize;

use arith_core::Rational;

use crate::SieveError;

#[derive(Deserialize)]
struct T3Rec {
    k: u64,
    r: usize,
    #[serde(rename = "A_num")]
    a_num: i64,
    #[serde(rename = "A_den")]
    a_den: i64,
    #[serde(rename = "B_num")]
    b_num: i64,
    #[serde(rename = "B_den")]
    b_den: i64,
}

/// Rows `(k, r, A, B)` as printed.
pub fn load_table3(path: &Path) -> Result<Vec<(u64, usize, Rational, Rational)>, SieveError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| SieveError::Table(e.to_string()))?;
    let mut out = Vec::new();
    for rec in rdr.deserialize::<T3Rec>() {
        let t = rec.map_err(|e| SieveError::Table(e.to_string()))?;
        if t.a_den <= 0 || t.b_den <= 0 {
            return Err(SieveError::Table(format!("bad denominator in row k={}, r={}", t.k, t.r)));
        }
        out.push((
            t.k,
            t.r,
            Rational::new(BigInt::from(t.a_num), BigInt::from(t.a_den)),
            Rational::new(BigInt::from(t.b_num), BigInt::from(t.b_den)),
        ));
    }
    Ok(out)
}

/// `[y1, y2]` on which the wheel of order `r` closes the bound for modulus `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, serde::Serialize)]
pub struct SieveRangeRow {
    pub k: u64,
    pub r: usize,
    pub y1: u64,
    pub y2: u64,
}

/// Rows for every k, sorted by `(k, y1)`.
pub fn load_table5(path: &Path) -> Result<Vec<SieveRangeRow>, SieveError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| SieveError::Table(e.to_string()))?;
    let mut out = Vec::new();
    for rec in rdr.deserialize::<SieveRangeRow>() {
        let row = rec.map_err(|e| SieveError::Table(e.to_string()))?;
        if row.y1 >= row.y2 {
            return Err(SieveError::Table(format!("k={} r={}: y1 >= y2", row.k, row.r)));
        }
        out.push(row);
    }
    out.sort_by_key(|r| (r.k, r.y1));
    Ok(out)
}
