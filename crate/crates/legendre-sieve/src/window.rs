//! Window counts and the affine window bounds `alpha y + beta`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use arith_core::primes::{omega_u128, totient_u128};
use arith_core::rational::ceil;
use arith_core::{IntervalReal, Rational};

use crate::extremal::{ConstantSource, ExtremalStore};
use crate::SieveError;

/// Primes appended to `Q_{k,10}` one at a time, in order.
pub const CHAIN_PRIMES: [u64; 6] = [31, 37, 41, 43, 47, 53];

/// Largest number of `n` in a window `(x, x+y]` with `n = a (mod k)` and `gcd(n, Q) = 1`.
///
/// Such a window holds `ceil(y)` consecutive integers at most, and the indicator has
/// period `kQ`, so one cyclic slide over a period is exhaustive.
pub fn window_count_max(k: u64, a: u64, q: u64, y: &Rational, period_cap: u64) -> Result<u64, SieveError> {
    if k == 0 || q == 0 || k.gcd(&q) != 1 {
        return Err(SieveError::Domain(format!("need gcd(Q, k) = 1, got k={k}, Q={q}")));
    }
    let period = k.checked_mul(q).filter(|&p| p <= period_cap).ok_or(SieveError::Domain(format!("period kQ = {k}*{q} exceeds cap {period_cap}")))?;
    if !y.is_positive() {
        return Ok(0);
    }
    let w = ceil(y).to_u64().ok_or(SieveError::Domain("window too long".into()))?;
    let a = a % k;
    let ind: Vec<u8> = (0..period).map(|n| (n % k == a && n.gcd(&q) == 1) as u8).collect();
    let per_period: u64 = ind.iter().map(|&b| b as u64).sum();
    let (full, rem) = (w / period, (w % period) as usize);
    let p = period as usize;
    let mut cur: u64 = ind[..rem].iter().map(|&b| b as u64).sum();
    let mut best = cur;
    for s in 1..p {
        cur = cur + ind[(s + rem - 1) % p] as u64 - ind[s - 1] as u64;
        best = best.max(cur);
    }
    Ok(full * per_period + best)
}

/// Most integers coprime to `q` among `t` consecutive integers.
pub fn coprime_run_max(q: u64, t: u64) -> u64 {
    coprime_run_table(q, t)[t as usize]
}

/// `out[t]` = most integers coprime to `q` among `t` consecutive integers, `t <= t_max`.
///
/// One sieve over a period and a prefix sum; each `t` is then a cyclic slide.
pub fn coprime_run_table(q: u64, t_max: u64) -> Vec<u64> {
    assert!(q >= 1, "wheel must be positive");
    let p = q as usize;
    let mut ind = vec![1u8; p];
    for d in arith_core::primes::prime_divisors(q) {
        for m in (0..p).step_by(d as usize) {
            ind[m] = 0;
        }
    }
    let per: u64 = ind.iter().map(|&b| b as u64).sum();
    let mut prefix = Vec::with_capacity(2 * p + 1);
    prefix.push(0u32);
    for i in 0..2 * p {
        prefix.push(prefix[i] + ind[i % p] as u32);
    }
    (0..=t_max)
        .map(|t| {
            let (full, rem) = (t / q, (t % q) as usize);
            let best = (0..p).map(|s| prefix[s + rem] - prefix[s]).max().unwrap_or(0) as u64;
            full * per + best
        })
        .collect()
}

/// `pi(x, x+y; k, a) < alpha y + beta` for every `x >= 0` and admissible `a`.
#[derive(Clone, Debug, Serialize)]
pub struct WindowBound {
    pub k: u64,
    /// Wheel order `r`; above 10 the extra primes come from [`CHAIN_PRIMES`].
    pub r: usize,
    pub wheel: u128,
    #[serde(serialize_with = "ser_rational")]
    pub alpha: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub beta: Rational,
    pub source: ConstantSource,
}

fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

impl WindowBound {
    pub fn at(&self, y: &Rational) -> Rational {
        &self.alpha * y + &self.beta
    }

    pub fn enclose(&self, y: &Rational) -> IntervalReal {
        IntervalReal::from_rational(&self.at(y))
    }
}

fn ratio(n: u128, d: u128) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `phi(Q) y/(k Q) + B_{k,r} + omega(Q_{k,r})`, `r <= 10`.
pub fn lemma23_affine(store: &ExtremalStore, k: u64, r: usize) -> Result<WindowBound, SieveError> {
    let c = store.get(k, r)?;
    let q = c.wheel as u128;
    Ok(WindowBound {
        k,
        r,
        wheel: q,
        alpha: ratio(totient_u128(q), k as u128 * q),
        beta: &c.b_const + Rational::from_integer(BigInt::from(omega_u128(q))),
        source: c.source,
    })
}

pub fn lemma23_window_bound(store: &ExtremalStore, k: u64, r: usize, y: &Rational) -> Result<IntervalReal, SieveError> {
    Ok(lemma23_affine(store, k, r)?.enclose(y))
}

/// `Q = Q_{k,10} * 31 * ... ` (j chained primes): `phi(Q) y/(k Q) + 2^j B_{k,10} + omega(Q_{k,10}) + j`.
pub fn chained_affine(store: &ExtremalStore, k: u64, j: usize) -> Result<WindowBound, SieveError> {
    if j == 0 || j > CHAIN_PRIMES.len() {
        return Err(SieveError::Domain(format!("chain length {j} outside 1..=6")));
    }
    if let Some(p) = CHAIN_PRIMES[..j].iter().find(|&&p| k % p == 0) {
        return Err(SieveError::Domain(format!("chained prime {p} divides k={k}")));
    }
    let c = store.get(k, 10)?;
    let q10 = c.wheel as u128;
    let q: u128 = q10 * CHAIN_PRIMES[..j].iter().map(|&p| p as u128).product::<u128>();
    Ok(WindowBound {
        k,
        r: 10 + j,
        wheel: q,
        alpha: ratio(totient_u128(q), k as u128 * q),
        beta: &c.b_const * Rational::from_integer(BigInt::from(1u64 << j))
            + Rational::from_integer(BigInt::from(omega_u128(q10) as usize + j)),
        source: c.source,
    })
}

pub fn chained_window_bound(store: &ExtremalStore, k: u64, j: usize, y: &Rational) -> Result<IntervalReal, SieveError> {
    Ok(chained_affine(store, k, j)?.enclose(y))
}

/// The affine bound a table row of order `r` refers to.
pub fn row_affine(store: &ExtremalStore, k: u64, r: usize) -> Result<WindowBound, SieveError> {
    if r <= 10 {
        lemma23_affine(store, k, r)
    } else {
        chained_affine(store, k, r - 10)
    }
}
