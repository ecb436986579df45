//! Remainder window tables and the piecewise remainder coefficient table.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use arith_core::constants::decimal;
use arith_core::Rational;

use crate::MertensError;

/// Directory holding the shipped CSV tables.
pub fn default_data_dir() -> PathBuf {
    if let Ok(d) = std::env::var("BTCERT_DATA") {
        return PathBuf::from(d);
    }
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

#[derive(Clone, Debug)]
pub struct WindowRow {
    pub z: u64,
    /// Printed decimal, kept verbatim for reports.
    pub c_text: String,
    pub c: Rational,
}

/// Rows `(z_i, c_i)`: `|E_k(t)| < c_i / sqrt t` for `z_i < t`.
#[derive(Clone, Debug)]
pub struct RemainderWindowTable {
    pub k: u64,
    pub rows: Vec<WindowRow>,
}

impl RemainderWindowTable {
    pub fn new(k: u64, rows: Vec<(u64, &str)>) -> Result<Self, MertensError> {
        let rows = rows.into_iter().map(|(z, c)| WindowRow { z, c_text: c.to_string(), c: decimal(c) }).collect();
        let t = RemainderWindowTable { k, rows };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<(), MertensError> {
        if self.rows.is_empty() || self.rows[0].z != 1 {
            return Err(MertensError::Table(format!("k={}: first window must start at z = 1", self.k)));
        }
        for w in self.rows.windows(2) {
            if w[1].z <= w[0].z {
                return Err(MertensError::Table(format!("k={}: z not increasing at {}", self.k, w[1].z)));
            }
        }
        if self.rows.iter().any(|r| r.c <= Rational::from_integer(0.into())) {
            return Err(MertensError::Table(format!("k={}: nonpositive constant", self.k)));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

#[derive(Deserialize)]
struct T2Rec {
    k: u64,
    i: usize,
    z: u64,
    c: String,
}

pub fn load_table2(path: &Path) -> Result<BTreeMap<u64, RemainderWindowTable>, MertensError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| MertensError::Table(e.to_string()))?;
    let mut raw: BTreeMap<u64, Vec<(usize, u64, String)>> = BTreeMap::new();
    for rec in rdr.deserialize::<T2Rec>() {
        let r = rec.map_err(|e| MertensError::Table(e.to_string()))?;
        raw.entry(r.k).or_default().push((r.i, r.z, r.c));
    }
    let mut out = BTreeMap::new();
    for (k, mut rows) in raw {
        rows.sort_by_key(|r| r.0);
        let t = RemainderWindowTable::new(k, rows.iter().map(|(_, z, c)| (*z, c.as_str())).collect())?;
        out.insert(k, t);
    }
    Ok(out)
}

/// One row of the piecewise remainder table: `|Delta_k(z)| < d1/sqrt z + d2/z` from row `index`.
#[derive(Clone, Debug)]
pub struct DeltaTableRow {
    pub k: u64,
    pub index: usize,
    pub d1_text: String,
    pub d2_text: String,
    pub d1: Rational,
    pub d2: Rational,
    pub y0: u64,
}

#[derive(Deserialize)]
struct T4Rec {
    k: u64,
    #[serde(rename = "I")]
    index: usize,
    d1: String,
    d2: String,
    y0: u64,
}

pub fn load_table4(path: &Path) -> Result<BTreeMap<u64, DeltaTableRow>, MertensError> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| MertensError::Table(e.to_string()))?;
    let mut out = BTreeMap::new();
    for rec in rdr.deserialize::<T4Rec>() {
        let r = rec.map_err(|e| MertensError::Table(e.to_string()))?;
        out.insert(
            r.k,
            DeltaTableRow { k: r.k, index: r.index, d1: decimal(&r.d1), d2: decimal(&r.d2), d1_text: r.d1, d2_text: r.d2, y0: r.y0 },
        );
    }
    Ok(out)
}
