//! Exact counts `pi(x, x+y; k, a)` of primes `p = a (mod k)` in `(x, x+y]` by a segmented
//! sieve of Eratosthenes, and randomized spot checks of the bounds against them.

use std::sync::Mutex;
use std::time::Instant;

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use arith_core::primes::primes_upto;
use arith_core::rational::to_decimal;
use arith_core::report::{VerificationReport, Witness};
use arith_core::Rational;
use bt_bounds::{simple_bound, thm11_bound};
use mertens_remainder::Mode;

/// Numbers per sieve segment.
pub const SEGMENT: u64 = 1 << 20;
/// Default upper guard on `x + y`.
pub const DEFAULT_LIMIT: u64 = 1_000_000_000_000;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum CountError {
    #[error("need gcd(k, a) = 1, got k={k}, a={a}")]
    NotCoprime { k: u64, a: u64 },
    #[error("window end {end} exceeds the limit {limit}")]
    Range { end: u128, limit: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// The window `(x, x+y]` and the class `a (mod k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ApWindowQuery {
    pub x: u64,
    pub y: u64,
    pub k: u64,
    pub a: u64,
}

impl ApWindowQuery {
    pub fn new(x: u64, y: u64, k: u64, a: u64) -> Result<Self, CountError> {
        if k == 0 {
            return Err(CountError::ZeroModulus);
        }
        if a.gcd(&k) != 1 {
            return Err(CountError::NotCoprime { k, a });
        }
        Ok(ApWindowQuery { x, y, k, a: a % k })
    }
}

/// Segmented sieve with the base primes kept between queries.
pub struct PrimeCounter {
    limit: u64,
    base: Mutex<(u64, Vec<u64>)>,
}

impl Default for PrimeCounter {
    fn default() -> Self {
        PrimeCounter::new(DEFAULT_LIMIT)
    }
}

impl PrimeCounter {
    pub fn new(limit: u64) -> Self {
        PrimeCounter { limit, base: Mutex::new((1, Vec::new())) }
    }

    fn base_primes(&self, upto: u64) -> Vec<u64> {
        let mut g = self.base.lock().expect("base primes");
        if g.0 < upto {
            *g = (upto, primes_upto(upto));
        }
        g.1.iter().copied().take_while(|&p| p <= upto).collect()
    }

    pub fn pi_ap(&self, q: &ApWindowQuery) -> Result<u64, CountError> {
        let end = q.x as u128 + q.y as u128;
        if end > self.limit as u128 {
            return Err(CountError::Range { end, limit: self.limit });
        }
        let (lo, hi) = (q.x + 1, q.x + q.y);
        if lo > hi || hi < 2 {
            return Ok(0);
        }
        let base = self.base_primes(hi.isqrt());
        let mut count = 0;
        let mut buf = Vec::with_capacity(SEGMENT as usize);
        let mut s = lo.max(2);
        while s <= hi {
            let e = (s + SEGMENT - 1).min(hi);
            buf.clear();
            buf.resize((e - s + 1) as usize, true);
            for &p in &base {
                let first = (p * p).max(s.div_ceil(p) * p);
                let mut m = first;
                while m <= e {
                    buf[(m - s) as usize] = false;
                    m += p;
                }
            }
            count += buf.iter().enumerate().filter(|&(i, &b)| b && (s + i as u64) % q.k == q.a).count() as u64;
            s = e + 1;
        }
        Ok(count)
    }
}

/// One-off count with a fresh sieve and the default limit.
pub fn pi_ap(q: &ApWindowQuery) -> Result<u64, CountError> {
    PrimeCounter::default().pi_ap(q)
}

/// Trial-division count, for cross-checks on small windows.
pub fn pi_ap_trial(q: &ApWindowQuery) -> u64 {
    (q.x + 1..=q.x + q.y).filter(|&n| n % q.k == q.a && arith_core::primes::is_prime(n)).count() as u64
}

pub const SPOT_X_MAX: u64 = 10_000_000;
pub const SPOT_Y_MAX: u64 = 100_000;

/// Random windows `x <= 10^7`, `k < y <= 10^5`, admissible `a`: the count must stay below
/// the simple bound with `xi` and, where it applies, the conservative large-sieve bound.
pub fn spot_check(k: u64, xi: &Rational, trials: u64, seed: u64) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new("spot_check")
        .param("k", k)
        .param("xi", to_decimal(xi, 6, false))
        .param("trials", trials)
        .param("seed", seed)
        .param("x_max", SPOT_X_MAX)
        .param("y_max", SPOT_Y_MAX);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let classes: Vec<u64> = (0..k).filter(|a| a.gcd(&k) == 1).collect();
    let counter = PrimeCounter::default();
    let mut violations = 0u64;
    let mut tightest: Option<(f64, Witness)> = None;
    for _ in 0..trials {
        let x = rng.gen_range(0..=SPOT_X_MAX);
        let y = rng.gen_range(k + 1..=SPOT_Y_MAX);
        let a = classes[rng.gen_range(0..classes.len())];
        let q = ApWindowQuery { x, y, k, a };
        let count = counter.pi_ap(&q).expect("window inside the guard");
        let yr = Rational::from_integer(y.into());
        let bound = simple_bound(k, &yr, xi).expect("y > k");
        let w = Witness::new("window").with("x", x).with("y", y).with("a", a).with("count", count).with("bound", bound.to_decimal(6));
        let ok = (count as f64) < bound.lo_f64();
        let large_ok = thm11_bound(k, &yr, Mode::Conservative).map_or(true, |b| count as f64 <= b.hi_f64());
        if !ok || !large_ok {
            violations += 1;
            if violations <= 10 {
                rep.fail(w.with("large_sieve_ok", large_ok));
            }
            continue;
        }
        let ratio = count as f64 / bound.mid_f64();
        if tightest.as_ref().map_or(true, |(r, _)| ratio > *r) {
            tightest = Some((ratio, w.with("ratio", ratio)));
        }
    }
    rep.set_param("violations", violations);
    if let Some((_, w)) = tightest {
        rep.witness(w);
    }
    rep.timed(start)
}
