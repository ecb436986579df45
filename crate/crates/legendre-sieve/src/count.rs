//! `Pi(z; k, a, Q)`: positive `n <= z`, `n = a (mod k)`, `gcd(n, Q) = 1`.

use num_integer::Integer;

use arith_core::primes::{is_squarefree, prime_divisors};
use arith_core::rational::{floor, Rational};

use crate::SieveError;

/// Solves `n = a (mod k)`, `n = 0 (mod d)`; returns `(n0, lcm)` or `None` if incompatible.
fn crt_zero(a: i128, k: i128, d: i128) -> Option<(i128, i128)> {
    let g = k.gcd(&d);
    if a.rem_euclid(g) != 0 {
        return None;
    }
    let l = k / g * d;
    // n = d t with d t = a (mod k): t = (a/g) (d/g)^{-1} (mod k/g).
    let kg = k / g;
    let t = if kg == 1 {
        0
    } else {
        let inv = (d / g).extended_gcd(&kg).x.rem_euclid(kg);
        ((a / g).rem_euclid(kg) * inv).rem_euclid(kg)
    };
    Some(((d * t).rem_euclid(l), l))
}

/// Number of `n` in `[1, z]` with `n = r (mod m)`.
fn ap_count(z: i128, r: i128, m: i128) -> i128 {
    Integer::div_floor(&(z - r), &m) - Integer::div_floor(&(-r), &m)
}

/// Exact count by inclusion-exclusion over the divisors of `Q`.
pub fn sieve_count(z: &Rational, k: u64, a: u64, q: u64) -> Result<u128, SieveError> {
    if k == 0 || q == 0 || !is_squarefree(q) {
        return Err(SieveError::Domain(format!("need k >= 1 and squarefree Q >= 1, got k={k}, Q={q}")));
    }
    let zf = floor(z);
    if zf < 0.into() {
        return Ok(0);
    }
    let z = i128::try_from(zf).map_err(|_| SieveError::Domain("z too large".into()))?;
    Ok(sieve_count_int(z, k, a, q))
}

pub(crate) fn sieve_count_int(z: i128, k: u64, a: u64, q: u64) -> u128 {
    if z <= 0 {
        return 0;
    }
    let ps = prime_divisors(q);
    let (k, a) = (k as i128, (a % k) as i128);
    let mut total: i128 = 0;
    for mask in 0u32..(1 << ps.len()) {
        let d: i128 = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p as i128).product();
        if let Some((r, m)) = crt_zero(a, k, d) {
            let c = ap_count(z, r, m);
            if mask.count_ones() % 2 == 0 {
                total += c;
            } else {
                total -= c;
            }
        }
    }
    total as u128
}

/// Direct loop with gcd tests.
pub fn sieve_count_oracle(z: &Rational, k: u64, a: u64, q: u64) -> Result<u128, SieveError> {
    let zf = floor(z);
    if zf > 1_000_000.into() {
        return Err(SieveError::Domain("oracle limited to z <= 1e6".into()));
    }
    if k == 0 || q == 0 {
        return Err(SieveError::Domain("need k, Q >= 1".into()));
    }
    let z = i64::try_from(zf).unwrap_or(0).max(0) as u64;
    Ok((1..=z).filter(|n| n % k == a % k && n.gcd(&q) == 1).count() as u128)
}
