//! The error terms of the large-sieve bound and the bounds built from them.
//!
//! With `u = y/k`, `N = floor(u)`, `z = sqrt(3N/4)` and `Lc = 2 eta - log(16/3)`:
//!
//! * `eps1(z) = eta/(1+z) + (1/2 + pi/4)(k/phi(k)) c / sqrt z` (displayed form),
//! * `eps2(N) = (phi(k)/k)(log N + Lc)^2 / sqrt(16N/3)`,
//! * `eps3(y) = k (log u + Lc)^2 / y`,
//!
//! and `pi(x, x+y; k, a) <= 2y / (phi(k)(log u + Lc - eps(y)))`.
//!
//! Writing `H >= (phi/k)(log z - log 2 + z eta/(z+1)) - D(z)` as `(phi/2k)(log N + Lc - e)`
//! gives `e = 2 eta/(1+z) + 2 (k/phi) D(z)`, twice the displayed `eps1`.
//! [`Mode::Conservative`] uses this `e` with `D(z) = (1 + pi/4) c/sqrt z`, which also
//! absorbs the `E(z)/2` term of the weighted-sum identity.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use arith_core::constants::FixedConstants;
use arith_core::interval::{default_precision, enclose_log_prec};
use arith_core::primes::totient;
use arith_core::rational::{floor, int, rat};
use arith_core::{IntervalReal, Rational};
use mertens_remainder::{eta, remainder_constant, DeltaCoeffs, Mode};

use crate::BoundsError;

pub(crate) fn ir(r: &Rational) -> IntervalReal {
    IntervalReal::from_rational_prec(r, default_precision())
}

pub(crate) fn log_r(r: &Rational) -> IntervalReal {
    enclose_log_prec(r, default_precision()).expect("positive log argument")
}

/// `floor(y/k)` as an integer.
pub(crate) fn blocks(y: &Rational, k: u64) -> u64 {
    floor(&(y / Rational::from_integer(BigInt::from(k)))).to_u64().unwrap_or(0)
}

/// Which composite error term to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// Modulus-specific constants `eta_k`, `c_k`.
    Thm11,
    /// `eta_1` and the trivial-modulus remainder constant for every `k`.
    Primed,
    /// Modulus-specific, with the piecewise remainder coefficients `(d1, d2)`.
    Tilde,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Thm11 => "thm11",
            Variant::Primed => "primed",
            Variant::Tilde => "tilde",
        }
    }
}

/// Everything the error terms depend on for one modulus, variant and mode.
#[derive(Clone, Debug)]
pub struct EpsilonParams {
    pub k: u64,
    pub variant: Variant,
    pub mode: Mode,
    pub eta: IntervalReal,
    /// The remainder constant `c` (unused by the tilde variant).
    pub c: IntervalReal,
    /// `phi(k)/k`.
    pub density: Rational,
    pub delta: Option<DeltaCoeffs>,
    /// Largest `z` the tilde coefficients were certified on.
    pub z_max: u64,
}

impl EpsilonParams {
    pub fn thm11(k: u64, mode: Mode) -> EpsilonParams {
        EpsilonParams {
            k,
            variant: Variant::Thm11,
            mode,
            eta: eta(k),
            c: remainder_constant(k),
            density: rat(totient(k) as i64, k as i64),
            delta: None,
            z_max: u64::MAX,
        }
    }

    pub fn primed(k: u64, mode: Mode) -> EpsilonParams {
        EpsilonParams { eta: eta(1), c: remainder_constant(1), variant: Variant::Primed, ..EpsilonParams::thm11(k, mode) }
    }

    /// Tilde variant; `delta.mode` must match `mode`.
    pub fn tilde(k: u64, delta: DeltaCoeffs, z_max: u64) -> EpsilonParams {
        let mode = delta.mode;
        EpsilonParams { variant: Variant::Tilde, delta: Some(delta), z_max, ..EpsilonParams::thm11(k, mode) }
    }

    fn k_over_phi(&self) -> Rational {
        if self.variant == Variant::Primed {
            int(1)
        } else {
            self.density.recip()
        }
    }

    /// `2 eta - log(16/3)`.
    pub fn lc(&self) -> IntervalReal {
        &self.eta.ldexp(1) - &FixedConstants::get().log_16_3
    }

    pub fn eps1(&self, z: &IntervalReal) -> IntervalReal {
        let one = ir(&int(1));
        let fc = FixedConstants::get();
        let root = z.sqrt();
        let eta_term = &self.eta / &(&one + z);
        let rem = match (&self.delta, self.variant) {
            (Some(d), Variant::Tilde) => {
                let t = &(&d.d1 / &root) + &(&d.d2 / z);
                match self.mode {
                    // As printed: no k/phi(k) factor.
                    Mode::Paper => t,
                    Mode::Conservative => t.mul_rational(&self.k_over_phi()),
                }
            }
            _ => {
                let coeff = match self.mode {
                    Mode::Paper => &fc.half_plus_quarter_pi,
                    Mode::Conservative => &fc.one_plus_quarter_pi,
                };
                (&(coeff * &self.c) / &root).mul_rational(&self.k_over_phi())
            }
        };
        let e = &eta_term + &rem;
        match self.mode {
            Mode::Paper => e,
            Mode::Conservative => e.ldexp(1),
        }
    }

    pub fn eps2(&self, n: u64) -> IntervalReal {
        let l = &log_r(&Rational::from_integer(BigInt::from(n))) + &self.lc();
        let den = ir(&(rat(16, 3) * Rational::from_integer(BigInt::from(n)))).sqrt();
        (&l.square() / &den).mul_rational(&self.density)
    }

    pub fn eps3(&self, y: &Rational) -> IntervalReal {
        let k = Rational::from_integer(BigInt::from(self.k));
        let l = &log_r(&(y / &k)) + &self.lc();
        l.square().mul_rational(&(&k / y))
    }

    /// `z = sqrt(3N/4)`.
    pub fn z_of(n: u64) -> IntervalReal {
        ir(&(rat(3, 4) * Rational::from_integer(BigInt::from(n)))).sqrt()
    }

    /// `eps(y)`; errors when `floor(y/k) < 2` or outside the tilde window.
    pub fn total(&self, y: &Rational) -> Result<IntervalReal, BoundsError> {
        let n = blocks(y, self.k);
        if n < 2 {
            return Err(BoundsError::NotApplicable(format!("floor(y/k) = {n} < 2")));
        }
        let z = Self::z_of(n);
        if let Some(d) = &self.delta {
            if !(z.lo_f64() > d.valid_from as f64 && z.hi_f64() <= self.z_max as f64) {
                return Err(BoundsError::NotApplicable(format!(
                    "z = {:.3} outside the tilde window ({}, {}]",
                    z.mid_f64(),
                    d.valid_from,
                    self.z_max
                )));
            }
        }
        Ok(&(&self.eps1(&z) + &self.eps2(n)) + &self.eps3(y))
    }

    /// `Lc - eps(y) - xi`; positive means the simple bound with `xi` follows at `y`.
    pub fn margin(&self, y: &Rational, xi: &Rational) -> Result<IntervalReal, BoundsError> {
        Ok(&(&self.lc() - &self.total(y)?) - &ir(xi))
    }

    /// Certificates that every piece is nonincreasing on `[y, oo)`: `eps1` always is,
    /// `eps3` once `log u + Lc > 2`, `eps2` once `log N + Lc > 4`.
    pub fn monotone_from(&self, y: &Rational) -> Result<(), String> {
        let k = Rational::from_integer(BigInt::from(self.k));
        let n = blocks(y, self.k).max(1);
        let l3 = &log_r(&(y / &k)) + &self.lc();
        let l2 = &log_r(&Rational::from_integer(BigInt::from(n))) + &self.lc();
        if !l3.certainly_gt(&ir(&int(2))) {
            return Err(format!("eps3 not certified decreasing: log u + Lc = {}", l3.to_decimal(6)));
        }
        if !l2.certainly_gt(&ir(&int(4))) {
            return Err(format!("eps2 not certified decreasing: log N + Lc = {}", l2.to_decimal(6)));
        }
        Ok(())
    }
}

/// Displayed `eps_{k,1}(z)` with the modulus constants.
pub fn eps1(k: u64, z: &Rational) -> Result<IntervalReal, BoundsError> {
    positive(z)?;
    Ok(EpsilonParams::thm11(k, Mode::Paper).eps1(&ir(z)))
}

/// Displayed `eps_{k,2}(N)`.
pub fn eps2(k: u64, n: u64) -> Result<IntervalReal, BoundsError> {
    if n == 0 {
        return Err(BoundsError::Domain("N must be positive".into()));
    }
    Ok(EpsilonParams::thm11(k, Mode::Paper).eps2(n))
}

/// Displayed `eps_{k,3}(y)`.
pub fn eps3(k: u64, y: &Rational) -> Result<IntervalReal, BoundsError> {
    positive(y)?;
    Ok(EpsilonParams::thm11(k, Mode::Paper).eps3(y))
}

fn positive(r: &Rational) -> Result<(), BoundsError> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(BoundsError::Domain(format!("argument must be positive, got {r}")))
    }
}

/// `eps(y)` for the thm11 or primed variants (tilde needs coefficients; use [`EpsilonParams::tilde`]).
pub fn eps_total(k: u64, y: &Rational, variant: Variant, mode: Mode) -> Result<IntervalReal, BoundsError> {
    let p = match variant {
        Variant::Thm11 => EpsilonParams::thm11(k, mode),
        Variant::Primed => EpsilonParams::primed(k, mode),
        Variant::Tilde => return Err(BoundsError::Domain("tilde variant needs remainder coefficients".into())),
    };
    p.total(y)
}

/// `2y / (phi(k)(log(y/k) + Lc - eps(y)))`, or `None` when not applicable.
pub fn thm11_bound(k: u64, y: &Rational, mode: Mode) -> Option<IntervalReal> {
    let p = EpsilonParams::thm11(k, mode);
    let e = p.total(y).ok()?;
    let kk = Rational::from_integer(BigInt::from(k));
    let den = &(&log_r(&(y / &kk)) + &p.lc()) - &e;
    if !den.certainly_positive() {
        return None;
    }
    Some(&ir(&(y * rat(2, 1) / Rational::from_integer(BigInt::from(totient(k))))) / &den)
}

/// `2y / (phi(k)(log(y/k) + xi))`.
pub fn simple_bound(k: u64, y: &Rational, xi: &Rational) -> Result<IntervalReal, BoundsError> {
    let kk = Rational::from_integer(BigInt::from(k));
    if y <= &kk {
        return Err(BoundsError::Domain(format!("need y > k, got y = {y}")));
    }
    let den = &log_r(&(y / &kk)) + &ir(xi);
    if !den.certainly_positive() {
        return Err(BoundsError::Domain("log(y/k) + xi is not positive".into()));
    }
    let num = y * rat(2, 1) / Rational::from_integer(BigInt::from(totient(k)));
    Ok(&ir(&num) / &den)
}

/// Lower bound of the simple bound over `y in [lo, hi]`: `2 lo / (phi(k)(log(hi/k) + xi))`.
///
/// Zero when the denominator is not certainly positive.
pub fn simple_bound_inf(k: u64, lo: &Rational, hi: &Rational, xi: &Rational) -> IntervalReal {
    let kk = Rational::from_integer(BigInt::from(k));
    let den = &log_r(&(hi / &kk)) + &ir(xi);
    if !den.certainly_positive() || !lo.is_positive() {
        return ir(&int(0));
    }
    let num = lo * rat(2, 1) / Rational::from_integer(BigInt::from(totient(k)));
    &ir(&num) / &den
}
