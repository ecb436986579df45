//! Range-by-range certificates for `pi(x, x+y; k, a) < 2y/(phi(k)(log(y/k) + xi))`.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Roots;
use serde_json::json;

use arith_core::primes::totient;
use arith_core::rational::{int, rat, to_decimal};
use arith_core::report::{Status, VerificationReport, Witness};
use arith_core::{Fi, IntervalReal, Rational};
use legendre_sieve::{row_affine, ExtremalStore, SieveRangeRow, WindowBound};
use mertens_remainder::sums::weighted_sum_enclosure;
use mertens_remainder::Mode;

use crate::eps::{blocks, ir, log_r, simple_bound, EpsilonParams};

fn ru(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Stamps the covered range onto a report. `hi = None` means unbounded.
pub(crate) fn set_range(rep: &mut VerificationReport, lo: &Rational, hi: Option<&Rational>) {
    rep.set_param("y_lo", lo.to_string());
    rep.set_param("y_hi", hi.map_or(serde_json::Value::Null, |h| json!(h.to_string())));
}

/// Certifies `Lc - eps(y) >= xi` for every `y` in `[y_lo, y_hi]` (or `[y_lo, oo)`).
///
/// Every piece of `eps` is a nonincreasing function of `N = floor(y/k)` or of `y` from
/// `y_lo` on (see [`EpsilonParams::monotone_from`]), so its value at the left edge bounds
/// it on the whole range. A geometric grid is evaluated as a consistency witness.
pub fn verify_analytic_range(p: &EpsilonParams, xi: &Rational, y_lo: &Rational, y_hi: Option<&Rational>) -> VerificationReport {
    let start = Instant::now();
    let task = match p.variant {
        crate::eps::Variant::Tilde => "mid_range",
        _ => "large_range",
    };
    let mut rep = VerificationReport::new(task).param("k", p.k).param("xi", to_decimal(xi, 6, false)).param("variant", p.variant.as_str());
    rep.flag(p.mode.as_str());
    set_range(&mut rep, y_lo, y_hi);
    if let Some(h) = y_hi {
        // The count N may reach floor(y/k) + 1 at the top edge; the tilde window must cover it.
        if p.delta.is_some() {
            let z_top = EpsilonParams::z_of(blocks(h, p.k) + 1);
            if z_top.hi_f64() > p.z_max as f64 {
                rep.fail(Witness::new("tilde_window").with("z_top", z_top.hi_f64()).with("z_max", p.z_max));
                return rep.timed(start);
            }
        }
    }
    if let Err(why) = p.monotone_from(y_lo) {
        rep.require(Status::Inconclusive);
        rep.note(why);
        return rep.timed(start);
    }
    let m = match p.margin(y_lo, xi) {
        Ok(m) => m,
        Err(e) => {
            rep.fail(Witness::new("not_applicable").with("y", y_lo.to_string()).with("reason", e.to_string()));
            return rep.timed(start);
        }
    };
    let w = Witness::new("left_edge").with("y", y_lo.to_string()).with("margin", m.to_decimal(8));
    if m.certainly_positive() {
        rep.witness(w);
    } else if m.certainly_negative() {
        rep.fail(w);
        return rep.timed(start);
    } else {
        rep.require(Status::Inconclusive);
        rep.witness(w);
        return rep.timed(start);
    }
    // Grid witness: margins must not drop below the left-edge value.
    let top = y_hi.cloned().unwrap_or_else(|| y_lo * ru(1000));
    let (a, b) = (arith_core::rational::approx_f64(y_lo), arith_core::rational::approx_f64(&top));
    let mut worst = f64::INFINITY;
    for j in 1..=16 {
        let y = Rational::from_float((a * (b / a).powf(j as f64 / 16.0)).floor()).expect("finite");
        let y = if &y < y_lo { y_lo.clone() } else { y };
        if let Ok(g) = p.margin(&y, xi) {
            worst = worst.min(g.lo_f64());
            if g.hi_f64() < m.lo_f64() {
                rep.require(Status::Inconclusive);
                rep.note(format!("grid margin at y = {y} fell below the left-edge margin"));
            }
        }
    }
    rep.set_param("grid_min_margin", worst);
    rep.timed(start)
}

/// Top regime from `y_lo` (default `10^10 k`) with the modulus constants.
pub fn verify_large_range(k: u64, xi: &Rational, mode: Mode, y_lo: Option<Rational>) -> VerificationReport {
    let y = y_lo.unwrap_or_else(|| ru(10_000_000_000 * k));
    verify_analytic_range(&EpsilonParams::thm11(k, mode), xi, &y, None)
}

/// Tilde regime on `[y_lo, y_hi]`.
pub fn verify_mid_range(p: &EpsilonParams, xi: &Rational, y_lo: &Rational, y_hi: &Rational) -> VerificationReport {
    verify_analytic_range(p, xi, y_lo, Some(y_hi))
}

/// Upper bound of `pi(x, x+y; k, a)` for every real `y` in `[y_lo, y_hi]` from the sieve
/// inequality `pi <= N/H(z) + z`, `z = sqrt(3N/4)`, with `H` the weighted sum.
///
/// `N` ranges over `[floor(y_lo/k), floor(y_hi/k) + 1]`; `H` increases with `z`, so
/// `N_max / H(z(N_min)) + z(N_max)` bounds every case.
pub fn direct_block_bound(k: u64, y_lo: u64, y_hi: u64) -> Option<Fi> {
    let n_min = y_lo / k;
    let n_max = y_hi / k + 1;
    if n_min < 2 {
        return None;
    }
    // z_lo <= sqrt(3 N_min / 4) and z_hi >= sqrt(3 N_max / 4), both in thousandths.
    let zn_lo = (750_000u128 * n_min as u128).sqrt() as u64;
    let zn_hi = (750_000u128 * n_max as u128).sqrt() as u64 + 1;
    if zn_lo < 1000 {
        return None;
    }
    let h = weighted_sum_enclosure(k, zn_lo, 1000);
    let z_hi = Fi::ratio(zn_hi, 1000);
    Some(Fi::from_u64(n_max) / Fi::new(h.lo, h.lo) + z_hi)
}

/// Direct certificate on `[y_lo, y_hi]` by adaptive blocks.
pub fn verify_bridge(k: u64, xi: &Rational, y_lo: u64, y_hi: u64) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new("bridge_range").param("k", k).param("xi", to_decimal(xi, 6, false));
    set_range(&mut rep, &ru(y_lo), Some(&ru(y_hi)));
    let mut a = y_lo;
    let mut width = (y_lo / 2000).max(1);
    let mut n_blocks = 0u64;
    let mut tightest = (f64::INFINITY, 0u64);
    while a < y_hi {
        let b = (a + width).min(y_hi);
        let bound = direct_block_bound(k, a, b);
        let target = simple_bound(k, &ru(a), xi).ok();
        match (bound, target) {
            (Some(bd), Some(t)) if bd.hi < t.lo_f64() => {
                let rel = t.lo_f64() / bd.hi - 1.0;
                if rel < tightest.0 {
                    tightest = (rel, a);
                }
                n_blocks += 1;
                a = b;
                width = width + width / 2;
            }
            (bd, t) => {
                if width == 1 {
                    rep.fail(
                        Witness::new("block")
                            .with("y_lo", a)
                            .with("y_hi", b)
                            .with("count_bound", bd.map_or(f64::NAN, |x| x.hi))
                            .with("simple_bound", t.map_or(f64::NAN, |x| x.lo_f64())),
                    );
                    return rep.timed(start);
                }
                width = (width / 2).max(1);
            }
        }
    }
    rep.set_param("blocks", n_blocks);
    rep.witness(Witness::new("tightest_block").with("y_lo", tightest.1).with("relative_margin", tightest.0));
    rep.timed(start)
}

/// `h(y) = 2y - phi(k)(log(y/k) + xi)(alpha y + beta)`.
pub fn sieve_gap(k: u64, xi: &Rational, w: &WindowBound, y: &Rational) -> IntervalReal {
    let kk = ru(k);
    let f = ir(&w.at(y));
    let l = &log_r(&(y / &kk)) + &ir(xi);
    &ir(&(y * int(2))) - &(&l * &f).mul_rational(&ru(totient(k)))
}

/// Lower bound of `h` on `[a, b]` from the monotone pieces.
fn sieve_gap_lower(k: u64, xi: &Rational, w: &WindowBound, a: &Rational, b: &Rational) -> IntervalReal {
    let kk = ru(k);
    let f = ir(&w.at(b));
    let l = &log_r(&(b / &kk)) + &ir(xi);
    &ir(&(a * int(2))) - &(&l * &f).mul_rational(&ru(totient(k)))
}

/// Certifies `alpha y + beta <= simple_bound(k, y, xi)` on `[y1, y2]`.
///
/// `h'' = -phi(k)(alpha y - beta)/y^2`, so `h` is concave where `y > beta/alpha` and
/// positivity at both ends suffices there. Otherwise the range is bisected and each
/// piece bounded from below by monotonicity of its factors.
pub fn verify_sieve_range(k: u64, xi: &Rational, row: &SieveRangeRow, store: &ExtremalStore) -> VerificationReport {
    let start = Instant::now();
    let mut rep = VerificationReport::new("sieve_range").param("k", k).param("r", row.r).param("xi", to_decimal(xi, 6, false));
    set_range(&mut rep, &ru(row.y1), Some(&ru(row.y2)));
    let w = match row_affine(store, k, row.r) {
        Ok(w) => w,
        Err(e) => {
            rep.require(Status::Inconclusive);
            rep.note(e.to_string());
            return rep.timed(start);
        }
    };
    rep.set_param("alpha", w.alpha.to_string());
    rep.set_param("beta", w.beta.to_string());
    rep.set_param("constants", serde_json::to_value(w.source).expect("serializable"));
    let (y1, y2) = (ru(row.y1), ru(row.y2));
    let h1 = sieve_gap(k, xi, &w, &y1);
    let h2 = sieve_gap(k, xi, &w, &y2);
    rep.witness(Witness::new("left_edge").with("y", row.y1).with("gap", h1.to_decimal(8)).with("bound", to_decimal(&w.at(&y1), 6, true)));
    rep.witness(Witness::new("right_edge").with("y", row.y2).with("gap", h2.to_decimal(8)));
    for (h, y) in [(&h1, row.y1), (&h2, row.y2)] {
        if h.certainly_negative() {
            rep.fail(Witness::new("violation").with("y", y).with("gap", h.to_decimal(8)));
        } else if !h.certainly_positive() {
            rep.require(Status::Inconclusive);
        }
    }
    if rep.status != Status::Verified {
        return rep.timed(start);
    }
    if &w.alpha * &y1 > w.beta {
        rep.set_param("certificate", "concave");
        return rep.timed(start);
    }
    rep.set_param("certificate", "bisection");
    let mut stack = vec![(y1, y2, 0u32)];
    let mut pieces = 0u64;
    while let Some((a, b, depth)) = stack.pop() {
        if sieve_gap_lower(k, xi, &w, &a, &b).certainly_positive() {
            pieces += 1;
            continue;
        }
        if depth >= 40 {
            rep.require(Status::Inconclusive);
            rep.note(format!("bisection exhausted on [{a}, {b}]"));
            break;
        }
        let m = (&a + &b) / int(2);
        if sieve_gap(k, xi, &w, &m).certainly_negative() {
            rep.fail(Witness::new("violation").with("y", m.to_string()));
            break;
        }
        stack.push((m.clone(), b, depth + 1));
        stack.push((a, m, depth + 1));
    }
    rep.set_param("pieces", pieces);
    rep.timed(start)
}

/// Encloses the point where `alpha y + beta` crosses the simple bound inside `[lo, hi]`
/// (gap negative at `lo`, positive at `hi`), to within `1/1000`.
pub fn sieve_crossover(k: u64, xi: &Rational, w: &WindowBound, lo: &Rational, hi: &Rational) -> Option<(Rational, Rational)> {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    if !sieve_gap(k, xi, w, &a).certainly_negative() || !sieve_gap(k, xi, w, &b).certainly_positive() {
        return None;
    }
    while &b - &a > rat(1, 1000) {
        let m = (&a + &b) / int(2);
        let h = sieve_gap(k, xi, w, &m);
        if h.certainly_negative() {
            a = m;
        } else if h.certainly_positive() {
            b = m;
        } else {
            break;
        }
    }
    Some((a, b))
}

/// Smallest integer `y` in `[lo, hi]` (to within a factor `1 + 1e-4`) where the analytic
/// margin is certified positive together with the monotonicity certificates.
pub fn analytic_start(p: &EpsilonParams, xi: &Rational, lo: u64, hi: u64) -> Option<u64> {
    let ok = |y: u64| {
        let y = ru(y);
        p.monotone_from(&y).is_ok() && p.margin(&y, xi).map(|m| m.certainly_positive()).unwrap_or(false)
    };
    if !ok(hi) {
        return None;
    }
    if ok(lo) {
        return Some(lo);
    }
    let (mut a, mut b) = (lo, hi);
    while b - a > (a / 10_000).max(1) {
        let m = a + (b - a) / 2;
        if ok(m) {
            b = m;
        } else {
            a = m;
        }
    }
    // The margin is only piecewise monotone in y; walk up until the certificate holds.
    let mut y = b;
    while !ok(y) && y < hi {
        y += (y / 10_000).max(1);
    }
    Some(y.min(hi))
}
