//! Exact rationals and decimal conversion helpers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ArithError;

/// Arbitrary-precision rational, always kept in lowest terms by `num-rational`.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn from_u128(n: u128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses a plain decimal such as `-0.8601`, `12`, `1.5e3` exactly.
pub fn parse_decimal(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(s.to_string());
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    if neg {
        num = -num;
    }
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    })
}

pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Decimal rendering with `digits` fractional digits, rounded toward -inf or +inf.
pub fn to_decimal(r: &Rational, digits: usize, round_up: bool) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let scaled = r * Rational::from_integer(scale.clone());
    let v = if round_up { ceil(&scaled) } else { floor(&scaled) };
    let neg = v.is_negative();
    let a = v.abs().to_string();
    let a = if a.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - a.len()), a) } else { a };
    let (ip, fp) = a.split_at(a.len() - digits);
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{ip}")
    } else {
        format!("{sign}{ip}.{fp}")
    }
}

/// Nearest f64 (used only for display and for seeding non-rigorous searches).
pub fn approx_f64(r: &Rational) -> f64 {
    let (n, d) = (r.numer(), r.denom());
    let shift = (n.bits() as i64 - d.bits() as i64 - 60).max(-1100);
    // Scale so the quotient carries ~60 significant bits.
    let q = if shift >= 0 { n / (d << (shift as usize)) } else { (n << ((-shift) as usize)) / d };
    let qf: f64 = q.to_string().parse().unwrap_or(0.0);
    qf * 2f64.powi(shift.clamp(-1074, 1023) as i32)
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
