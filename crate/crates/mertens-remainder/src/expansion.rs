//! Per-modulus constants of the Mertens-type expansion.

use arith_core::constants::{FixedConstants, CONSTANT_PREC};
use arith_core::interval::{enclose_log_prec, IntervalReal};
use arith_core::primes::{prime_divisors, totient};
use arith_core::rational::{int, rat, Rational};
use arith_core::Fi;

/// Constants of `sum_{q<=z, (q,k)=1} mu^2(q)/phi(q) = (phi(k)/k)(log z + eta_k) + E_k(z)`.
#[derive(Clone, Debug)]
pub struct MertensExpansion {
    pub k: u64,
    /// phi(k)/k, the density coefficient.
    pub density_coeff: Rational,
    pub eta: IntervalReal,
    /// Alterman's c_k for the remainder bound `|E_k(t)| <= c_k / sqrt t`.
    pub c_alterman: IntervalReal,
    pub delta_k: Rational,
}

impl MertensExpansion {
    pub fn new(k: u64) -> MertensExpansion {
        MertensExpansion {
            k,
            density_coeff: density_coeff(k),
            eta: eta(k),
            c_alterman: alterman_c(k),
            delta_k: delta_k(k),
        }
    }

    pub fn density_fi(&self) -> Fi {
        Fi::ratio(totient(self.k), self.k)
    }
}

pub fn density_coeff(k: u64) -> Rational {
    rat(totient(k) as i64, k as i64)
}

pub fn delta_k(k: u64) -> Rational {
    if k % 2 == 1 {
        int(1)
    } else {
        rat(493, 1000)
    }
}

/// `eta_k = gamma + C + sum_{p | k} log p / p`.
pub fn eta(k: u64) -> IntervalReal {
    assert!(k >= 1);
    let c = FixedConstants::get();
    let mut e = &c.gamma + &c.mertens_c;
    for p in prime_divisors(k) {
        let lp = enclose_log_prec(&int(p as i64), CONSTANT_PREC).expect("positive");
        e = &e + &(&lp / &IntervalReal::from_rational_prec(&int(p as i64), CONSTANT_PREC));
    }
    e
}

/// `c_k = 4.4 delta_k prod_{p | k} (1 + (p - 2)/(p^{3/2} - p - sqrt p + 2))`.
pub fn alterman_c(k: u64) -> IntervalReal {
    assert!(k >= 1);
    let prec = CONSTANT_PREC;
    let one = IntervalReal::from_rational_prec(&int(1), prec);
    let mut c = IntervalReal::from_rational_prec(&(rat(44, 10) * delta_k(k)), prec);
    for p in prime_divisors(k) {
        let pi = IntervalReal::from_rational_prec(&int(p as i64), prec);
        let sp = pi.sqrt();
        let den = &(&(&(&pi * &sp) - &pi) - &sp) + &IntervalReal::from_rational_prec(&int(2), prec);
        let num = IntervalReal::from_rational_prec(&int(p as i64 - 2), prec);
        c = &c * &(&one + &(&num / &den));
    }
    c
}

/// Ramare's constant for the trivial modulus.
pub fn ramare_c1() -> Rational {
    rat(244, 100)
}

/// The remainder constant used in the large-y bounds: 2.44 for k = 1, else Alterman's c_k.
pub fn remainder_constant(k: u64) -> IntervalReal {
    if k == 1 {
        IntervalReal::from_rational_prec(&ramare_c1(), CONSTANT_PREC)
    } else {
        alterman_c(k)
    }
}

/// Enclosure of `E_k(t) = plain_sum(k, t) - (phi(k)/k)(log t + eta_k)`.
pub fn remainder(k: u64, t: &Rational) -> Result<IntervalReal, crate::MertensError> {
    let s = crate::sums::plain_sum(k, t)?;
    let lt = enclose_log_prec(t, CONSTANT_PREC).map_err(|e| crate::MertensError::Domain(e.to_string()))?;
    let main = (&lt + &eta(k)).mul_rational(&density_coeff(k));
    Ok(&IntervalReal::from_rational_prec(&s, CONSTANT_PREC) - &main)
}
