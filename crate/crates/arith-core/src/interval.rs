//! Outward-rounded multiprecision intervals over dyadic endpoints.
//!
//! Endpoints are `m * 2^e` with a big-integer mantissa. Every operation is
//! computed exactly and then rounded to the working precision with the lower
//! endpoint rounded toward -inf and the upper toward +inf, so the true value
//! of any expression built from these operations stays inside the result.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{self, Rational};

static DEFAULT_PREC: AtomicU32 = AtomicU32::new(80);

/// Mantissa bits used when a precision is not given explicitly.
pub fn default_precision() -> u32 {
    DEFAULT_PREC.load(AtomicOrdering::Relaxed)
}

pub fn set_default_precision(bits: u32) {
    DEFAULT_PREC.store(bits.max(53), AtomicOrdering::Relaxed);
}

fn floor_shr(m: &BigInt, s: u64) -> BigInt {
    if s == 0 {
        return m.clone();
    }
    m.div_floor(&(BigInt::one() << s))
}

fn ceil_shr(m: &BigInt, s: u64) -> BigInt {
    -floor_shr(&-m, s)
}

/// Exact binary rational `m * 2^e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        Dyadic { m, e }
    }

    pub fn zero() -> Self {
        Dyadic { m: BigInt::zero(), e: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic { m: n.into(), e: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.m.is_positive() {
            1
        } else if self.m.is_negative() {
            -1
        } else {
            0
        }
    }

    fn round(&self, prec: u32, up: bool) -> Dyadic {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        let m = if up { ceil_shr(&self.m, s) } else { floor_shr(&self.m, s) };
        Dyadic { m, e: self.e + s as i64 }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.e.min(b.e);
        ((&a.m) << (a.e - e) as u64, (&b.m) << (b.e - e) as u64, e)
    }

    fn add_exact(&self, o: &Dyadic) -> Dyadic {
        let (x, y, e) = Dyadic::align(self, o);
        Dyadic { m: x + y, e }
    }

    fn mul_exact(&self, o: &Dyadic) -> Dyadic {
        Dyadic { m: &self.m * &o.m, e: self.e + o.e }
    }

    fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }

    /// Quotient rounded to `prec` bits in the requested direction.
    fn div_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!o.m.is_zero(), "dyadic division by zero");
        let s = (prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 2).max(0) as u64;
        let num = (&self.m) << s;
        let q = if up { -((-num).div_floor(&o.m)) } else { num.div_floor(&o.m) };
        Dyadic { m: q, e: self.e - o.e - s as i64 }.round(prec, up)
    }

    pub fn to_rational(&self) -> Rational {
        if self.e >= 0 {
            Rational::from_integer(&self.m << self.e as u64)
        } else {
            Rational::new(self.m.clone(), BigInt::one() << (-self.e) as u64)
        }
    }

    /// Rational rounded to a dyadic with `prec` bits.
    pub fn from_rational(r: &Rational, prec: u32, up: bool) -> Dyadic {
        let n = Dyadic::from_int(r.numer().clone());
        let d = Dyadic::from_int(r.denom().clone());
        if r.denom().is_one() {
            n.round(prec, up)
        } else {
            n.div_round(&d, prec, up)
        }
    }

    pub fn to_f64(&self, up: bool) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let r = self.round(53, up);
        let m = r.m.to_i64().expect("53-bit mantissa fits in i64") as f64;
        let v = ldexp(m, r.e);
        if v == 0.0 {
            // Underflow: keep the rounding direction sound.
            return if up == (m > 0.0) { if up { f64::MIN_POSITIVE } else { -f64::MIN_POSITIVE } } else { 0.0 };
        }
        if v.is_infinite() {
            return if up == (m > 0.0) { v } else if m > 0.0 { f64::MAX } else { -f64::MAX };
        }
        v
    }
}

fn ldexp(m: f64, e: i64) -> f64 {
    let mut v = m;
    let mut e = e;
    while e > 1000 {
        v *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        v *= 2f64.powi(-1000);
        e += 1000;
    }
    v * 2f64.powi(e as i32)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        let (x, y, _) = Dyadic::align(self, o);
        x.cmp(&y)
    }
}

/// Closed interval `[lo, hi]` certified to contain the real it stands for.
#[derive(Clone, Debug)]
pub struct IntervalReal {
    lo: Dyadic,
    hi: Dyadic,
    prec: u32,
}

impl IntervalReal {
    pub fn from_endpoints(lo: Dyadic, hi: Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        IntervalReal { lo: lo.round(prec, false), hi: hi.round(prec, true), prec }
    }

    pub fn point(d: Dyadic, prec: u32) -> Self {
        IntervalReal::from_endpoints(d.clone(), d, prec)
    }

    pub fn from_int(n: i64) -> Self {
        IntervalReal::point(Dyadic::from_int(n), default_precision())
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        IntervalReal::point(Dyadic::from_int(n.clone()), default_precision())
    }

    pub fn from_u128(n: u128) -> Self {
        IntervalReal::point(Dyadic::from_int(n), default_precision())
    }

    pub fn from_rational(r: &Rational) -> Self {
        IntervalReal::from_rational_prec(r, default_precision())
    }

    pub fn from_rational_prec(r: &Rational, prec: u32) -> Self {
        IntervalReal {
            lo: Dyadic::from_rational(r, prec, false),
            hi: Dyadic::from_rational(r, prec, true),
            prec,
        }
    }

    /// Hull of two rationals.
    pub fn hull_rational(a: &Rational, b: &Rational, prec: u32) -> Self {
        let (l, h) = if a <= b { (a, b) } else { (b, a) };
        IntervalReal { lo: Dyadic::from_rational(l, prec, false), hi: Dyadic::from_rational(h, prec, true), prec }
    }

    /// Enclosure of an f64 value treated as exact.
    pub fn from_f64_exact(x: f64) -> Self {
        let r = Rational::from_float(x).expect("finite float");
        IntervalReal::from_rational(&r)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        IntervalReal { lo: self.lo.round(prec, false), hi: self.hi.round(prec, true), prec }
    }

    pub fn lo(&self) -> &Dyadic {
        &self.lo
    }

    pub fn hi(&self) -> &Dyadic {
        &self.hi
    }

    pub fn lo_f64(&self) -> f64 {
        self.lo.to_f64(false)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64(true)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo_f64() + self.hi_f64())
    }

    pub fn width(&self) -> Rational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn width_f64(&self) -> f64 {
        self.hi.add_exact(&self.lo.neg()).to_f64(true)
    }

    pub fn contains(&self, r: &Rational) -> bool {
        &self.lo.to_rational() <= r && r <= &self.hi.to_rational()
    }

    pub fn contains_interval(&self, o: &IntervalReal) -> bool {
        self.lo <= o.lo && o.hi <= self.hi
    }

    /// Certified strict inequality `self < o`.
    pub fn certainly_lt(&self, o: &IntervalReal) -> bool {
        self.hi < o.lo
    }

    pub fn certainly_gt(&self, o: &IntervalReal) -> bool {
        o.certainly_lt(self)
    }

    pub fn certainly_le(&self, o: &IntervalReal) -> bool {
        self.hi <= o.lo
    }

    pub fn certainly_positive(&self) -> bool {
        self.lo.signum() > 0
    }

    pub fn certainly_negative(&self) -> bool {
        self.hi.signum() < 0
    }

    fn p(&self, o: &IntervalReal) -> u32 {
        self.prec.max(o.prec)
    }

    pub fn hull(&self, o: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.p(o),
        }
    }

    pub fn max(&self, o: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().max(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
            prec: self.p(o),
        }
    }

    pub fn min(&self, o: &IntervalReal) -> IntervalReal {
        IntervalReal {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().min(o.hi.clone()),
            prec: self.p(o),
        }
    }

    pub fn abs(&self) -> IntervalReal {
        if self.lo.signum() >= 0 {
            self.clone()
        } else if self.hi.signum() <= 0 {
            -self
        } else {
            let m = self.lo.neg().max(self.hi.clone());
            IntervalReal { lo: Dyadic::zero(), hi: m, prec: self.prec }
        }
    }

    pub fn square(&self) -> IntervalReal {
        let a = self.abs();
        &a * &a
    }

    pub fn recip(&self) -> IntervalReal {
        &IntervalReal::point(Dyadic::from_int(1), self.prec) / self
    }

    /// Multiplies by `2^k` exactly.
    pub fn ldexp(&self, k: i64) -> IntervalReal {
        IntervalReal {
            lo: Dyadic { m: self.lo.m.clone(), e: self.lo.e + k },
            hi: Dyadic { m: self.hi.m.clone(), e: self.hi.e + k },
            prec: self.prec,
        }
    }

    pub fn mul_rational(&self, r: &Rational) -> IntervalReal {
        self * &IntervalReal::from_rational_prec(r, self.prec)
    }

    pub fn add_rational(&self, r: &Rational) -> IntervalReal {
        self + &IntervalReal::from_rational_prec(r, self.prec)
    }

    pub fn sqrt(&self) -> IntervalReal {
        assert!(self.lo.signum() >= 0, "sqrt of an interval reaching below zero");
        IntervalReal { lo: sqrt_dyadic(&self.lo, self.prec, false), hi: sqrt_dyadic(&self.hi, self.prec, true), prec: self.prec }
    }

    pub fn ln(&self) -> IntervalReal {
        assert!(self.lo.signum() > 0, "log of an interval reaching zero or below");
        IntervalReal { lo: log_dyadic(&self.lo, self.prec, false), hi: log_dyadic(&self.hi, self.prec, true), prec: self.prec }
    }

    /// Decimal rendering `[lo, hi]` with outward rounding at `digits` places.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            rational::to_decimal(&self.lo.to_rational(), digits, false),
            rational::to_decimal(&self.hi.to_rational(), digits, true)
        )
    }
}

impl fmt::Display for IntervalReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

impl Neg for &IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        IntervalReal { lo: self.hi.neg(), hi: self.lo.neg(), prec: self.prec }
    }
}

impl Neg for IntervalReal {
    type Output = IntervalReal;
    fn neg(self) -> IntervalReal {
        -&self
    }
}

impl Add for &IntervalReal {
    type Output = IntervalReal;
    fn add(self, o: &IntervalReal) -> IntervalReal {
        let p = self.p(o);
        IntervalReal { lo: self.lo.add_exact(&o.lo).round(p, false), hi: self.hi.add_exact(&o.hi).round(p, true), prec: p }
    }
}

impl Sub for &IntervalReal {
    type Output = IntervalReal;
    fn sub(self, o: &IntervalReal) -> IntervalReal {
        let p = self.p(o);
        IntervalReal {
            lo: self.lo.add_exact(&o.hi.neg()).round(p, false),
            hi: self.hi.add_exact(&o.lo.neg()).round(p, true),
            prec: p,
        }
    }
}

impl Mul for &IntervalReal {
    type Output = IntervalReal;
    fn mul(self, o: &IntervalReal) -> IntervalReal {
        let p = self.p(o);
        let c = [
            self.lo.mul_exact(&o.lo),
            self.lo.mul_exact(&o.hi),
            self.hi.mul_exact(&o.lo),
            self.hi.mul_exact(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round(p, false);
        let hi = c.iter().max().unwrap().round(p, true);
        IntervalReal { lo, hi, prec: p }
    }
}

impl Div for &IntervalReal {
    type Output = IntervalReal;
    fn div(self, o: &IntervalReal) -> IntervalReal {
        assert!(o.lo.signum() > 0 || o.hi.signum() < 0, "interval division by an interval containing zero");
        let p = self.p(o);
        let pairs = [(&self.lo, &o.lo), (&self.lo, &o.hi), (&self.hi, &o.lo), (&self.hi, &o.hi)];
        let lo = pairs.iter().map(|(a, b)| a.div_round(b, p, false)).min().unwrap();
        let hi = pairs.iter().map(|(a, b)| a.div_round(b, p, true)).max().unwrap();
        IntervalReal { lo, hi, prec: p }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for IntervalReal {
            type Output = IntervalReal;
            fn $f(self, o: IntervalReal) -> IntervalReal { (&self).$f(&o) }
        }
        impl $tr<&IntervalReal> for IntervalReal {
            type Output = IntervalReal;
            fn $f(self, o: &IntervalReal) -> IntervalReal { (&self).$f(o) }
        }
        impl $tr<IntervalReal> for &IntervalReal {
            type Output = IntervalReal;
            fn $f(self, o: IntervalReal) -> IntervalReal { self.$f(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

fn sqrt_dyadic(d: &Dyadic, prec: u32, up: bool) -> Dyadic {
    if d.m.is_zero() {
        return Dyadic::zero();
    }
    // Shift so the radicand has about 2*prec bits and an even exponent.
    let mut t = (2 * prec as i64 + 4 - d.m.bits() as i64).max(0);
    if (d.e - t).rem_euclid(2) != 0 {
        t += 1;
    }
    let rad = (&d.m) << t as u64;
    let r = rad.sqrt();
    let exact = &r * &r == rad;
    let m = if up && !exact { r + 1 } else { r };
    Dyadic { m, e: (d.e - t) / 2 }.round(prec, up)
}

/// Fixed-point enclosure of atanh(num/den) for 0 <= num/den <= 1/3, in units of 2^-f.
fn atanh_fixed(num: &BigInt, den: &BigInt, f: u64) -> (BigInt, BigInt) {
    if num.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let n2 = num * num;
    let d2 = den * den;
    let mut p = (num << f).div_floor(den);
    let mut sum = BigInt::zero();
    let mut j: u64 = 0;
    while !p.is_zero() {
        sum += &p / BigInt::from(2 * j + 1);
        p = (&p * &n2).div_floor(&d2);
        j += 1;
    }
    // Each truncated power is short by < 9/8 unit, each quotient by < 1 more,
    // and the remaining tail is below one unit once the power vanishes.
    let hi = &sum + BigInt::from(3 * j + 2);
    (sum, hi)
}

const LN2_CACHE_BITS: u64 = 1088;

fn ln2_fixed(f: u64) -> (BigInt, BigInt) {
    static CACHE: OnceLock<(BigInt, BigInt)> = OnceLock::new();
    let compute = |bits: u64| {
        let (l, h) = atanh_fixed(&BigInt::one(), &BigInt::from(3), bits + 8);
        (floor_shr(&(l << 1), 8), ceil_shr(&(h << 1), 8))
    };
    if f > LN2_CACHE_BITS {
        return compute(f);
    }
    let (l, h) = CACHE.get_or_init(|| compute(LN2_CACHE_BITS));
    let s = LN2_CACHE_BITS - f;
    (floor_shr(l, s), ceil_shr(h, s))
}

fn log_dyadic(d: &Dyadic, prec: u32, up: bool) -> Dyadic {
    assert!(d.m.is_positive());
    let b = d.m.bits();
    let half = BigInt::one() << (b - 1);
    let kexp = d.e + b as i64 - 1;
    if d.m == half {
        // Exact power of two.
        if kexp == 0 {
            return Dyadic::zero();
        }
    }
    let f = prec as u64 + 40 + (64 - kexp.unsigned_abs().leading_zeros() as u64);
    let (a_lo, a_hi) = atanh_fixed(&(&d.m - &half), &(&d.m + &half), f);
    let (l2_lo, l2_hi) = ln2_fixed(f);
    let k = BigInt::from(kexp);
    let v = if up {
        let l2 = if kexp >= 0 { &l2_hi } else { &l2_lo };
        k * l2 + (a_hi << 1)
    } else {
        let l2 = if kexp >= 0 { &l2_lo } else { &l2_hi };
        k * l2 + (a_lo << 1)
    };
    Dyadic { m: v, e: -(f as i64) }.round(prec, up)
}

/// Enclosure of log x for a positive rational.
pub fn enclose_log(x: &Rational) -> Result<IntervalReal, crate::ArithError> {
    enclose_log_prec(x, default_precision())
}

pub fn enclose_log_prec(x: &Rational, prec: u32) -> Result<IntervalReal, crate::ArithError> {
    if !x.is_positive() {
        return Err(crate::ArithError::Domain(format!("log of nonpositive value {x}")));
    }
    let n = IntervalReal::point(Dyadic::from_int(x.numer().clone()), prec).ln();
    if x.denom().is_one() {
        return Ok(n);
    }
    let d = IntervalReal::point(Dyadic::from_int(x.denom().clone()), prec).ln();
    Ok(&n - &d)
}

/// Enclosure of the square root of a nonnegative rational.
pub fn enclose_sqrt(x: &Rational) -> Result<IntervalReal, crate::ArithError> {
    enclose_sqrt_prec(x, default_precision())
}

pub fn enclose_sqrt_prec(x: &Rational, prec: u32) -> Result<IntervalReal, crate::ArithError> {
    if x.is_negative() {
        return Err(crate::ArithError::Domain(format!("sqrt of negative value {x}")));
    }
    Ok(IntervalReal::from_rational_prec(x, prec).sqrt())
}

/// Enclosure of atan(1/n) by the alternating Taylor series.
fn atan_inv(n: u64, prec: u32) -> IntervalReal {
    let f = prec as u64 + 24;
    let one = BigInt::one() << f;
    let n2 = BigInt::from(n) * BigInt::from(n);
    let mut pow = BigInt::from(n);
    let (mut lo, mut hi) = (BigInt::zero(), BigInt::zero());
    let mut j: u64 = 0;
    loop {
        let t_lo = &one / (&pow * BigInt::from(2 * j + 1));
        let t_hi = &t_lo + 1;
        if t_lo.is_zero() {
            // Remainder of an alternating series is bounded by the next term.
            lo -= &t_hi;
            hi += &t_hi;
            break;
        }
        if j % 2 == 0 {
            lo += &t_lo;
            hi += &t_hi;
        } else {
            lo -= &t_hi;
            hi -= &t_lo;
        }
        pow *= &n2;
        j += 1;
    }
    IntervalReal::from_endpoints(Dyadic::new(lo, -(f as i64)), Dyadic::new(hi, -(f as i64)), prec)
}

/// Enclosure of pi via Machin's formula.
pub fn enclose_pi(prec: u32) -> IntervalReal {
    let a = atan_inv(5, prec + 8);
    let b = atan_inv(239, prec + 8);
    let four = IntervalReal::point(Dyadic::from_int(4), prec + 8);
    (&four * &(&(&four * &a) - &b)).with_prec(prec)
}
