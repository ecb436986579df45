//! Double-precision interval arithmetic for hot scan loops.
//!
//! Each basic operation is rounded to nearest by the hardware and then widened
//! by one ulp on both sides, which is enough to contain the exact result.
//! `ln` does not trust libm: it evaluates the atanh series in this same
//! arithmetic with an explicit tail bound.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::interval::IntervalReal;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fi {
    pub lo: f64,
    pub hi: f64,
}

#[inline]
fn dn(x: f64) -> f64 {
    x.next_down()
}

#[inline]
fn up(x: f64) -> f64 {
    x.next_up()
}

impl Fi {
    #[inline]
    pub const fn new(lo: f64, hi: f64) -> Fi {
        Fi { lo, hi }
    }

    #[inline]
    pub const fn point(x: f64) -> Fi {
        Fi { lo: x, hi: x }
    }

    /// Integer converted with a guard when it is not exactly representable.
    #[inline]
    pub fn from_u64(n: u64) -> Fi {
        let x = n as f64;
        if n < (1u64 << 53) {
            Fi::point(x)
        } else {
            Fi::new(dn(x), up(x))
        }
    }

    pub fn from_interval(x: &IntervalReal) -> Fi {
        Fi::new(x.lo_f64(), x.hi_f64())
    }

    /// Enclosure of `n / d`.
    #[inline]
    pub fn ratio(n: u64, d: u64) -> Fi {
        Fi::from_u64(n) / Fi::from_u64(d)
    }

    /// Enclosure of a fixed-point value `v / 2^frac`.
    #[inline]
    pub fn from_fixed(v: u128, frac: i32) -> Fi {
        let x = v as f64;
        let s = 2f64.powi(-frac);
        if (x as u128) == v {
            Fi::point(x * s)
        } else {
            Fi::new(dn(x) * s, up(x) * s)
        }
    }

    #[inline]
    pub fn hull(self, o: Fi) -> Fi {
        Fi::new(self.lo.min(o.lo), self.hi.max(o.hi))
    }

    #[inline]
    pub fn abs(self) -> Fi {
        if self.lo >= 0.0 {
            self
        } else if self.hi <= 0.0 {
            -self
        } else {
            Fi::new(0.0, (-self.lo).max(self.hi))
        }
    }

    #[inline]
    pub fn sqrt(self) -> Fi {
        debug_assert!(self.lo >= 0.0);
        Fi::new(dn(self.lo.sqrt()).max(0.0), up(self.hi.sqrt()))
    }

    #[inline]
    pub fn square(self) -> Fi {
        let a = self.abs();
        a * a
    }

    pub fn ln(self) -> Fi {
        assert!(self.lo > 0.0, "log of an interval reaching zero or below");
        if self.lo == self.hi {
            return ln_point(self.lo);
        }
        Fi::new(ln_point(self.lo).lo, ln_point(self.hi).hi)
    }

    #[inline]
    pub fn certainly_lt(self, o: Fi) -> bool {
        self.hi < o.lo
    }

    #[inline]
    pub fn certainly_positive(self) -> bool {
        self.lo > 0.0
    }

    pub fn mid(self) -> f64 {
        0.5 * (self.lo + self.hi)
    }
}

const LN2: Fi = Fi { lo: 0.693_147_180_559_945_2, hi: 0.693_147_180_559_945_4 };

/// Enclosure of log x for a positive double.
fn ln_point(x: f64) -> Fi {
    if x == 1.0 {
        return Fi::point(0.0);
    }
    // x = y * 2^e with y in [sqrt(1/2), sqrt(2)); scaling by 2^e is exact.
    let bits = x.to_bits();
    let raw_exp = ((bits >> 52) & 0x7ff) as i64;
    assert!(raw_exp != 0, "subnormal input to log");
    let mut e = raw_exp - 1023;
    let mut y = f64::from_bits((bits & !(0x7ffu64 << 52)) | (1023u64 << 52));
    if y > std::f64::consts::SQRT_2 {
        y *= 0.5;
        e += 1;
    }
    // Sterbenz: y - 1 is exact on this range.
    let num = Fi::point(y - 1.0);
    let den = Fi::point(y) + Fi::point(1.0);
    let u = num / den;
    let u2 = u * u;
    let mut pow = u;
    let mut sum = Fi::point(0.0);
    let terms = 14;
    for j in 0..terms {
        sum = sum + pow / Fi::point((2 * j + 1) as f64);
        pow = pow * u2;
    }
    // |u| < 0.172, so the tail is below |u|^29 / (29 (1 - u^2)).
    let ua = u.abs().hi;
    let tail = up(up(ua.powi(2 * terms + 1)) / (2 * terms + 1) as f64 * 1.05);
    let atanh = Fi::new(dn(sum.lo - tail), up(sum.hi + tail));
    let e = Fi::point(e as f64);
    e * LN2 + Fi::point(2.0) * atanh
}

impl Neg for Fi {
    type Output = Fi;
    #[inline]
    fn neg(self) -> Fi {
        Fi::new(-self.hi, -self.lo)
    }
}

impl Add for Fi {
    type Output = Fi;
    #[inline]
    fn add(self, o: Fi) -> Fi {
        Fi::new(dn(self.lo + o.lo), up(self.hi + o.hi))
    }
}

impl Sub for Fi {
    type Output = Fi;
    #[inline]
    fn sub(self, o: Fi) -> Fi {
        Fi::new(dn(self.lo - o.hi), up(self.hi - o.lo))
    }
}

impl Mul for Fi {
    type Output = Fi;
    #[inline]
    fn mul(self, o: Fi) -> Fi {
        if self.lo >= 0.0 && o.lo >= 0.0 {
            return Fi::new(dn(self.lo * o.lo), up(self.hi * o.hi));
        }
        let a = self.lo * o.lo;
        let b = self.lo * o.hi;
        let c = self.hi * o.lo;
        let d = self.hi * o.hi;
        Fi::new(dn(a.min(b).min(c).min(d)), up(a.max(b).max(c).max(d)))
    }
}

impl Div for Fi {
    type Output = Fi;
    #[inline]
    fn div(self, o: Fi) -> Fi {
        assert!(o.lo > 0.0 || o.hi < 0.0, "division by an interval containing zero");
        if self.lo >= 0.0 && o.lo > 0.0 {
            return Fi::new(dn(self.lo / o.hi), up(self.hi / o.lo));
        }
        let a = self.lo / o.lo;
        let b = self.lo / o.hi;
        let c = self.hi / o.lo;
        let d = self.hi / o.hi;
        Fi::new(dn(a.min(b).min(c).min(d)), up(a.max(b).max(c).max(d)))
    }
}
