//! One-period scans of the wheel discrepancy `D(N) = Pi(N; Q) - (phi(Q)/Q) N`.
//!
//! `d(N) = Q D(N) = Q Pi(N; Q) - phi(Q) N` is an integer, so the whole scan runs on
//! `i64` with no rounding. `d(0) = d(Q) = 0`, so `N in [1, Q]` covers a period.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Mutex;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use arith_core::primes::{coprime_part, prime_divisors, totient};
use arith_core::Rational;

use crate::count::sieve_count_int;
use crate::table::load_table3;
use crate::SieveError;

const SEGMENT: usize = 1 << 20;

/// Where a set of constants came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "kind")]
pub enum ConstantSource {
    Computed,
    /// Read from the shipped table row for modulus `k` (same wheel).
    Shipped { k: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalConstants {
    pub k: u64,
    pub r: usize,
    /// `Q_{k,r}`.
    pub wheel: u64,
    pub phi: u64,
    pub a_const: Rational,
    pub b_const: Rational,
    pub source: ConstantSource,
    /// First `N` in `[1, Q]` attaining the minimum and the maximum of `D`.
    pub argmin: Option<u64>,
    pub argmax: Option<u64>,
}

impl ExtremalConstants {
    /// `phi(Q)/Q`.
    pub fn density(&self) -> Rational {
        Rational::new(BigInt::from(self.phi), BigInt::from(self.wheel))
    }
}

#[derive(Clone, Copy, Debug)]
struct Extrema {
    min: i64,
    argmin: u64,
    max: i64,
    argmax: u64,
}

impl Extrema {
    fn merge(self, o: Extrema) -> Extrema {
        // Ties keep the earlier abscissa; pieces are merged in order.
        let (min, argmin) = if o.min < self.min { (o.min, o.argmin) } else { (self.min, self.argmin) };
        let (max, argmax) = if o.max > self.max { (o.max, o.argmax) } else { (self.max, self.argmax) };
        Extrema { min, argmin, max, argmax }
    }
}

struct Wheel {
    q: u64,
    phi: u64,
    /// Coprimality pattern for the small primes of `q`, period `w`.
    w: u64,
    pattern: Vec<u8>,
    large: Vec<u64>,
}

impl Wheel {
    fn new(q: u64) -> Wheel {
        let ps = prime_divisors(q);
        let (small, large): (Vec<u64>, Vec<u64>) = ps.iter().partition(|&&p| p <= 13);
        let w: u64 = small.iter().product();
        let pattern = (0..w).map(|i| small.iter().all(|&p| i % p != 0) as u8).collect();
        Wheel { q, phi: totient(q), w, pattern, large }
    }

    /// `buf[i] = 1` iff `lo + i` is coprime to `q`.
    fn fill(&self, lo: u64, len: usize, buf: &mut Vec<u8>) {
        buf.clear();
        let mut off = (lo % self.w) as usize;
        while buf.len() < len {
            let take = (self.pattern.len() - off).min(len - buf.len());
            buf.extend_from_slice(&self.pattern[off..off + take]);
            off = 0;
        }
        for &p in &self.large {
            let mut m = lo.div_ceil(p) * p;
            while m < lo + len as u64 {
                buf[(m - lo) as usize] = 0;
                m += p;
            }
        }
    }

    fn scan(&self, lo: u64, hi: u64) -> Extrema {
        let (q, phi) = (self.q as i64, self.phi as i64);
        let prev = lo - 1;
        let pi = sieve_count_int(prev as i128, 1, 0, self.q) as i128;
        let mut d = (self.q as i128 * pi - self.phi as i128 * prev as i128) as i64;
        let mut ex = Extrema { min: i64::MAX, argmin: 0, max: i64::MIN, argmax: 0 };
        let mut buf = Vec::with_capacity(SEGMENT);
        let mut s = lo;
        while s < hi {
            let len = (hi - s).min(SEGMENT as u64) as usize;
            self.fill(s, len, &mut buf);
            for (i, &b) in buf.iter().enumerate() {
                d += b as i64 * q - phi;
                if d < ex.min {
                    ex.min = d;
                    ex.argmin = s + i as u64;
                }
                if d > ex.max {
                    ex.max = d;
                    ex.argmax = s + i as u64;
                }
            }
            s += len as u64;
        }
        ex
    }
}

/// `A` and `B` for the wheel `Q_{k,r}`, scanning on `jobs` threads.
pub fn extremal_constants_with(k: u64, r: usize, jobs: usize) -> Result<ExtremalConstants, SieveError> {
    if r == 0 || k == 0 {
        return Err(SieveError::Domain("need k >= 1 and r >= 1".into()));
    }
    let q = coprime_part(r, k);
    let q = u64::try_from(q).ok().filter(|&q| q < 1 << 40).ok_or(SieveError::Domain(format!("wheel Q_{{{k},{r}}} too large to scan")))?;
    let wheel = Wheel::new(q);
    let piece = (q / (jobs.max(1) as u64 * 16)).max(SEGMENT as u64);
    let mut bounds = vec![1u64];
    while *bounds.last().unwrap() <= q {
        let b = *bounds.last().unwrap();
        bounds.push((b + piece).min(q + 1));
    }
    let pieces: Vec<(u64, u64)> = bounds.windows(2).map(|w| (w[0], w[1])).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    let parts: Vec<Extrema> = pool.install(|| pieces.par_iter().map(|&(lo, hi)| wheel.scan(lo, hi)).collect());
    let ex = parts.into_iter().reduce(Extrema::merge).expect("nonempty period");
    let (qi, phi) = (BigInt::from(q), BigInt::from(wheel.phi));
    Ok(ExtremalConstants {
        k,
        r,
        wheel: q,
        phi: wheel.phi,
        a_const: Rational::new(BigInt::from(ex.min) - &phi, qi.clone()),
        b_const: Rational::new(BigInt::from(ex.max) - BigInt::from(ex.min) + &phi, qi),
        source: ConstantSource::Computed,
        argmin: Some(ex.argmin),
        argmax: Some(ex.argmax),
    })
}

pub fn extremal_constants(k: u64, r: usize) -> Result<ExtremalConstants, SieveError> {
    let jobs = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1);
    extremal_constants_with(k, r, jobs)
}

/// Supplies constants: recomputed up to `recompute_max_r`, otherwise the shipped rows.
///
/// `A` and `B` depend on the wheel only, so any shipped row with the same
/// `Q_{k,r}` serves.
pub struct ExtremalStore {
    shipped: Vec<(u64, usize, Rational, Rational)>,
    cache: Mutex<BTreeMap<u64, ExtremalConstants>>,
    pub recompute_max_r: usize,
    pub jobs: usize,
}

impl ExtremalStore {
    pub fn new(shipped: Vec<(u64, usize, Rational, Rational)>, recompute_max_r: usize, jobs: usize) -> ExtremalStore {
        ExtremalStore { shipped, cache: Mutex::new(BTreeMap::new()), recompute_max_r, jobs }
    }

    pub fn from_table(path: &Path, recompute_max_r: usize, jobs: usize) -> Result<ExtremalStore, SieveError> {
        Ok(ExtremalStore::new(load_table3(path)?, recompute_max_r, jobs))
    }

    pub fn shipped_rows(&self) -> &[(u64, usize, Rational, Rational)] {
        &self.shipped
    }

    pub fn shipped(&self, k: u64, r: usize) -> Option<ExtremalConstants> {
        let q = coprime_part(r, k);
        let row = self
            .shipped
            .iter()
            .find(|row| row.0 == k && row.1 == r)
            .or_else(|| self.shipped.iter().find(|row| row.1 == r && coprime_part(r, row.0) == q))?;
        let q = q as u64;
        Some(ExtremalConstants {
            k,
            r,
            wheel: q,
            phi: totient(q),
            a_const: row.2.clone(),
            b_const: row.3.clone(),
            source: ConstantSource::Shipped { k: row.0 },
            argmin: None,
            argmax: None,
        })
    }

    pub fn get(&self, k: u64, r: usize) -> Result<ExtremalConstants, SieveError> {
        if r > self.recompute_max_r {
            return self.shipped(k, r).ok_or(SieveError::Missing { k, r, why: "no shipped row with this wheel".into() });
        }
        let q = coprime_part(r, k) as u64;
        if let Some(c) = self.cache.lock().expect("cache").get(&q) {
            return Ok(ExtremalConstants { k, r, ..c.clone() });
        }
        let c = extremal_constants_with(k, r, self.jobs)?;
        self.cache.lock().expect("cache").insert(q, c.clone());
        Ok(c)
    }
}
