//! Fixed transcendental constants used throughout the bounds.

use std::sync::OnceLock;

use serde::Serialize;

use crate::fast::Fi;
use crate::interval::{enclose_log_prec, enclose_pi, IntervalReal};
use crate::primes::primes_upto;
use crate::rational::{parse_decimal, rat, Rational};

/// Euler's constant to 60 digits (OEIS A001620).
pub const GAMMA_DIGITS: &str = "0.577215664901532860606512090082402431042159335939923598805767";

/// `sum_p log p / (p (p - 1))` to 60 digits, computed as
/// `sum_{n >= 2} mu(n) zeta'(n) / zeta(n)` with mpmath at 80 digits.
pub const MERTENS_C_DIGITS: &str = "0.755366610831688021159316685988625317796300153102499062981364";

/// Radius attached to the decimal literals above (they are truncated at 60 digits).
const LITERAL_RADIUS: &str = "1e-59";

/// Precision the constants are built at; well beyond the default working precision.
pub const CONSTANT_PREC: u32 = 128;

#[derive(Clone, Debug)]
pub struct FixedConstants {
    pub gamma: IntervalReal,
    pub mertens_c: IntervalReal,
    pub half_plus_quarter_pi: IntervalReal,
    pub one_plus_quarter_pi: IntervalReal,
    pub log_16_3: IntervalReal,
    pub pi: IntervalReal,
}

fn literal(digits: &str, prec: u32) -> IntervalReal {
    let v = parse_decimal(digits).expect("valid literal");
    let r = parse_decimal(LITERAL_RADIUS).expect("valid literal");
    IntervalReal::hull_rational(&(&v - &r), &(&v + &r), prec)
}

impl FixedConstants {
    pub fn new(prec: u32) -> FixedConstants {
        let pi = enclose_pi(prec);
        let quarter_pi = pi.ldexp(-2);
        let half = IntervalReal::from_rational_prec(&rat(1, 2), prec);
        let one = IntervalReal::from_rational_prec(&rat(1, 1), prec);
        FixedConstants {
            gamma: literal(GAMMA_DIGITS, prec),
            mertens_c: literal(MERTENS_C_DIGITS, prec),
            half_plus_quarter_pi: &half + &quarter_pi,
            one_plus_quarter_pi: &one + &quarter_pi,
            log_16_3: enclose_log_prec(&rat(16, 3), prec).expect("positive"),
            pi,
        }
    }

    /// Shared instance at [`CONSTANT_PREC`] bits.
    pub fn get() -> &'static FixedConstants {
        static C: OnceLock<FixedConstants> = OnceLock::new();
        C.get_or_init(|| FixedConstants::new(CONSTANT_PREC))
    }
}

/// Outcome of checking the embedded Mertens constant against a partial sum.
#[derive(Clone, Debug, Serialize)]
pub struct MertensCCheck {
    pub prime_bound: u64,
    pub partial_lo: f64,
    pub partial_hi: f64,
    pub tail_bound: f64,
    pub literal_lo: f64,
    pub literal_hi: f64,
    pub consistent: bool,
}

/// Certifies `S_P <= C <= S_P + T_P` for the embedded literal, where `S_P` is
/// the partial sum over `p <= P` and `T_P = (log P + 1)/(P - 1)` bounds the tail
/// `sum_{n > P} log n / (n (n - 1)) <= int_P^inf log t / (t - 1)^2 dt`.
pub fn check_mertens_c(prime_bound: u64) -> MertensCCheck {
    assert!(prime_bound >= 3);
    let mut s = Fi::point(0.0);
    for p in primes_upto(prime_bound) {
        let pf = Fi::from_u64(p);
        s = s + pf.ln() / (pf * Fi::from_u64(p - 1));
    }
    let pb = Fi::from_u64(prime_bound);
    let tail = (pb.ln() + Fi::point(1.0)) / Fi::from_u64(prime_bound - 1);
    let c = FixedConstants::get().mertens_c.clone();
    let (clo, chi) = (c.lo_f64(), c.hi_f64());
    MertensCCheck {
        prime_bound,
        partial_lo: s.lo,
        partial_hi: s.hi,
        tail_bound: tail.hi,
        literal_lo: clo,
        literal_hi: chi,
        consistent: s.lo <= clo && chi <= (s + Fi::point(tail.hi)).hi,
    }
}

/// Exact rational for a decimal table entry.
pub fn decimal(s: &str) -> Rational {
    parse_decimal(s).expect("valid decimal")
}
