//! The weighted-sum identity and the remainder coefficients derived from a window table.
//!
//! For the weighted sum one has exactly
//! `H(z) = C_g (log z - log 2 + log(1 + 1/z) + z eta/(z+1)) + E(z)/2 + Delta(z)`
//! with `Delta(z) = z int_1^z E(t)/(z+t)^2 dt`. The displayed main term drops
//! `E(z)/2`; `Mode::Conservative` puts it back into every bound derived here.

use std::time::Instant;

use num_traits::ToPrimitive;

use arith_core::constants::{FixedConstants, CONSTANT_PREC};
use arith_core::interval::enclose_log_prec;
use arith_core::rational::{int, to_decimal};
use arith_core::report::{Status, VerificationReport, Witness};
use arith_core::{IntervalReal, Rational};

use crate::expansion::{density_coeff, eta, remainder_constant};
use crate::sums::{weighted_sum, weighted_sum_enclosure};
use crate::table::RemainderWindowTable;
use crate::{MertensError, Mode};

fn ir(r: &Rational) -> IntervalReal {
    IntervalReal::from_rational_prec(r, CONSTANT_PREC)
}

fn log_ir(r: &Rational) -> IntervalReal {
    enclose_log_prec(r, CONSTANT_PREC).expect("positive argument")
}

/// `C_g (log z - log 2 + log(1 + 1/z) + z/(z+1) eta_k)`.
pub fn lemma21_main_term(k: u64, z: &Rational) -> IntervalReal {
    assert!(z >= &int(1), "main term needs z >= 1");
    let one = int(1);
    let inner = &(&(&log_ir(z) - &log_ir(&int(2))) + &log_ir(&(&one + &one / z))) + &eta(k).mul_rational(&(z / (z + &one)));
    inner.mul_rational(&density_coeff(k))
}

/// Coefficient of `c / sqrt z` in the remainder allowance.
fn sqrt_coeff(mode: Mode) -> IntervalReal {
    let c = FixedConstants::get();
    match mode {
        Mode::Paper => c.half_plus_quarter_pi.clone(),
        Mode::Conservative => c.one_plus_quarter_pi.clone(),
    }
}

/// Enclosure of the weighted sum; exact for small `z`, fixed-point above.
fn weighted_enclosure(k: u64, z: &Rational) -> IntervalReal {
    if z <= &int(2000) {
        return ir(&weighted_sum(k, z).expect("z >= 1"));
    }
    let zn = z.numer().to_u64().expect("z numerator fits u64");
    let zd = z.denom().to_u64().expect("z denominator fits u64");
    let f = weighted_sum_enclosure(k, zn, zd);
    IntervalReal::from_f64_exact(f.lo).hull(&IntervalReal::from_f64_exact(f.hi))
}

/// `n` points geometrically spaced on `[lo, hi]`, rounded to multiples of `1/denom`.
pub fn geometric_grid(lo: f64, hi: f64, n: usize, denom: u64) -> Vec<Rational> {
    assert!(n >= 2 && 1.0 <= lo && lo < hi);
    let mut out: Vec<Rational> = (0..n)
        .map(|j| {
            let x = lo * (hi / lo).powf(j as f64 / (n - 1) as f64);
            Rational::new(((x * denom as f64).round() as i64).into(), (denom as i64).into())
        })
        .collect();
    out[0] = Rational::from_float(lo).expect("finite");
    out[n - 1] = Rational::from_float(hi).expect("finite");
    out.dedup();
    out
}

/// Checks `H_k(z) > main term - coeff * c_k / sqrt z` at every `z` in `z_set`.
///
/// In paper mode the report also records whether any point needed the larger
/// conservative allowance.
pub fn verify_weighted_lower_bound(k: u64, z_set: &[Rational], mode: Mode) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new("weighted_lower_bound").param("k", k).param("points", z_set.len());
    rep.flag(mode.as_str());
    let c = remainder_constant(k);
    let mut tightest: Option<(f64, Witness)> = None;
    let mut conservative_needed = false;
    for z in z_set {
        if z < &int(1) {
            rep.fail(Witness::new("domain").with("z", to_decimal(z, 6, false)));
            continue;
        }
        let h = weighted_enclosure(k, z);
        let main = lemma21_main_term(k, z);
        let root = ir(z).sqrt();
        let allowance = |m: Mode| &(&sqrt_coeff(m) * &c) / &root;
        let rhs = &main - &allowance(mode);
        let margin = &h - &rhs;
        if mode == Mode::Paper && !margin.certainly_positive() {
            conservative_needed = true;
        }
        let w = Witness::new("point")
            .with("z", to_decimal(z, 6, false))
            .with("weighted_sum", h.to_decimal(12))
            .with("lower_bound", rhs.to_decimal(12))
            .with("margin_lo", margin.lo_f64());
        if margin.certainly_positive() {
            if tightest.as_ref().map_or(true, |(m, _)| margin.lo_f64() < *m) {
                tightest = Some((margin.lo_f64(), w));
            }
        } else if margin.certainly_negative() {
            rep.fail(w);
        } else {
            rep.require(Status::Inconclusive);
            rep.witness(w);
        }
    }
    if let Some((_, w)) = tightest {
        rep.witness(w);
    }
    if mode == Mode::Paper {
        rep.set_param("conservative_required", conservative_needed);
    }
    rep.timed(start)
}

/// `(d1, d2)` with `|Delta_k(z)| (+ |E_k(z)|/2 in conservative mode) < d1/sqrt z + d2/z`
/// for `z_{k,I} < z <= t_max`, where `t_max` is the range the window table was scanned on.
#[derive(Clone, Debug)]
pub struct DeltaCoeffs {
    pub k: u64,
    pub index: usize,
    pub mode: Mode,
    pub d1: IntervalReal,
    pub d2: IntervalReal,
    /// `z_{k,I}`: the bound holds strictly above this.
    pub valid_from: u64,
}

/// Coefficients from rows `1..=index` of the window table.
///
/// Paper mode: `d1 = c_I (1/2 + pi/4)`, `d2 = sum_{i<I} (c_i - c_{i+1})(sqrt z_{i+1} - 1)`.
/// Conservative mode: `d1 = c_I (1 + pi/4)` and `d2` doubled; integrating
/// `t^{-1/2}` over `[1, z_{i+1}]` gives `2(sqrt z_{i+1} - 1)`.
pub fn piecewise_delta_bound(table: &RemainderWindowTable, index: usize, mode: Mode) -> Result<DeltaCoeffs, MertensError> {
    if index == 0 || index > table.len() {
        return Err(MertensError::Domain(format!("row index {index} outside 1..={}", table.len())));
    }
    let rows = &table.rows[..index];
    for (i, w) in rows.windows(2).enumerate() {
        if w[1].c >= w[0].c {
            return Err(MertensError::Table(format!("k={}: c not decreasing at row {}", table.k, i + 2)));
        }
    }
    let last = &rows[index - 1];
    let d1 = &sqrt_coeff(mode) * &ir(&last.c);
    let mut d2 = ir(&int(0));
    let one = ir(&int(1));
    for w in rows.windows(2) {
        let step = ir(&(&w[0].c - &w[1].c));
        let root = &ir(&int(w[1].z as i64)).sqrt() - &one;
        d2 = &d2 + &(&step * &root);
    }
    if mode == Mode::Conservative {
        d2 = d2.ldexp(1);
    }
    Ok(DeltaCoeffs { k: table.k, index, mode, d1, d2, valid_from: last.z })
}
