//! Exact and fixed-point evaluations of the squarefree totient sums.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use arith_core::primes::{prime_divisors, SquarefreeSegments};
use arith_core::rational::{self, Rational};
use arith_core::Fi;

use crate::MertensError;

/// Fractional bits of the running-sum accumulators.
pub const FRAC_BITS: u32 = 96;

const SEGMENT: u64 = 1 << 16;

/// Calls `f(q, phi(q))` for every squarefree `q` in `[lo, hi)` coprime to `k`, in order.
pub fn for_each_term(k: u64, lo: u64, hi: u64, mut f: impl FnMut(u64, u64)) {
    let lo = lo.max(1);
    if lo >= hi {
        return;
    }
    let kp = prime_divisors(k);
    let seg = SquarefreeSegments::new(hi);
    let (mut phi, mut rem) = (Vec::new(), Vec::new());
    let mut s = lo;
    while s < hi {
        let e = (s + SEGMENT).min(hi);
        seg.fill(s, e, &mut phi, &mut rem);
        for (i, &ph) in phi.iter().enumerate() {
            if ph == 0 {
                continue;
            }
            let q = s + i as u64;
            if kp.iter().any(|&p| q % p == 0) {
                continue;
            }
            f(q, ph);
        }
        s = e;
    }
}

fn check_z(z: &Rational) -> Result<u64, MertensError> {
    if z < &rational::int(1) {
        return Err(MertensError::Domain(format!("sum needs z >= 1, got {z}")));
    }
    let n = rational::floor(z);
    u64::try_from(n).map_err(|_| MertensError::Domain("z out of range".into()))
}

/// `sum_{q <= z, (q,k) = 1} mu^2(q)/phi(q)` exactly.
pub fn plain_sum(k: u64, z: &Rational) -> Result<Rational, MertensError> {
    let n = check_z(z)?;
    // Running numerator over a running lcm keeps each step to small-by-big products.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for_each_term(k, 1, n + 1, |_, ph| {
        let ph = BigInt::from(ph);
        let g = num_integer::Integer::gcd(&den, &ph);
        let l = &den / &g * &ph;
        num = &num * (&l / &den) + (&l / &ph);
        den = l;
    });
    Ok(Rational::new(num, den))
}

/// `sum_{q <= z, (q,k) = 1} (1 + q/z)^{-1} mu^2(q)/phi(q)` exactly.
pub fn weighted_sum(k: u64, z: &Rational) -> Result<Rational, MertensError> {
    let n = check_z(z)?;
    let mut acc = Rational::zero();
    for_each_term(k, 1, n + 1, |q, ph| {
        let w = z / (z + Rational::from_integer(BigInt::from(q)));
        acc += w / Rational::from_integer(BigInt::from(ph));
    });
    Ok(acc)
}

/// Fixed-point bracket of the plain sum up to integer `n`, in units of `2^-FRAC_BITS`.
pub fn plain_sum_fixed(k: u64, n: u64) -> (u128, u128) {
    let mut lo = 0u128;
    let mut hi = 0u128;
    for_each_term(k, 1, n + 1, |_, ph| {
        let (t, r) = fixed_recip(ph);
        lo += t;
        hi += t + (r != 0) as u128;
    });
    (lo, hi)
}

/// `floor(2^FRAC_BITS / d)` and the remainder.
#[inline]
pub fn fixed_recip(d: u64) -> (u128, u128) {
    let one = 1u128 << FRAC_BITS;
    (one / d as u128, one % d as u128)
}

pub fn fixed_to_fi(lo: u128, hi: u128) -> Fi {
    Fi::new(Fi::from_fixed(lo, FRAC_BITS as i32).lo, Fi::from_fixed(hi, FRAC_BITS as i32).hi)
}

/// Enclosure of the weighted sum at the rational point `z = zn/zd`, summed in 64-bit fixed point.
pub fn weighted_sum_enclosure(k: u64, zn: u64, zd: u64) -> Fi {
    assert!(zn >= zd && zd >= 1);
    let n = zn / zd;
    let mut lo = 0u128;
    let mut hi = 0u128;
    let num = (zn as u128) << 64;
    for_each_term(k, 1, n + 1, |q, ph| {
        let d = (zn as u128 + q as u128 * zd as u128) * ph as u128;
        let t = num / d;
        lo += t;
        hi += t + (num % d != 0) as u128;
    });
    Fi::new(Fi::from_fixed(lo, 64).lo, Fi::from_fixed(hi, 64).hi)
}
