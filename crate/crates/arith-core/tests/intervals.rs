use arith_core::fast::Fi;
use arith_core::interval::{enclose_log_prec, enclose_pi, enclose_sqrt_prec, IntervalReal};
use arith_core::rational::{int, parse_decimal, rat, Rational};
use arith_core::{enclose_log, enclose_sqrt, FixedConstants};
use num_bigint::BigInt;
use proptest::prelude::*;

// 50-digit reference values from an independent arbitrary-precision library.
const LOG_16_3: &str = "1.6739764335716715462736832489101805676545099796183";
const LN2: &str = "0.69314718055994530941723212145817656807550013436025";
const HALF_PLUS_QUARTER_PI: &str = "1.2853981633974483096156608458198757210492923498438";
const LOG_10: &str = "2.3025850929940456840179914546843642076011014886288";
const LOG_1E12_PLUS_7: &str = "27.631021115935548208215872956212370605546551196278";
const SQRT_2: &str = "1.4142135623730950488016887242096980785696718753769";
const LOG_3_7: &str = "-0.84729786038720361371010750652065402498959417175911";
const SQRT_5_3: &str = "1.2909944487358056283930884665941332036109739017639";

fn assert_encloses(iv: &IntervalReal, digits: &str, max_width: f64) {
    // The reference is truncated at 50 digits; allow that much slack around it.
    let v = parse_decimal(digits).unwrap();
    let slack = parse_decimal("1e-48").unwrap();
    let lo = iv.lo().to_rational();
    let hi = iv.hi().to_rational();
    assert!(lo <= &v + &slack && &v - &slack <= hi, "{iv} does not contain {digits}");
    assert!(iv.width_f64() <= max_width, "{iv} too wide");
}

#[test]
fn log_of_one_is_exact_zero() {
    let l = enclose_log(&int(1)).unwrap();
    assert!(l.lo().is_zero() && l.hi().is_zero());
}

#[test]
fn log_reference_values() {
    let p = 80;
    let ulp = 2f64.powi(-(p as i32) + 2);
    assert_encloses(&enclose_log_prec(&rat(16, 3), p).unwrap(), LOG_16_3, 4.0 * ulp);
    assert_encloses(&enclose_log_prec(&int(2), p).unwrap(), LN2, 4.0 * ulp);
    assert_encloses(&enclose_log_prec(&int(10), p).unwrap(), LOG_10, 4.0 * ulp * 2.0);
    assert_encloses(&enclose_log_prec(&int(1_000_000_000_007), p).unwrap(), LOG_1E12_PLUS_7, 4.0 * ulp * 16.0);
    assert_encloses(&enclose_log_prec(&rat(3, 7), p).unwrap(), LOG_3_7, 4.0 * ulp);
}

#[test]
fn log_at_high_precision() {
    let l = enclose_log_prec(&rat(16, 3), 160).unwrap();
    assert_encloses(&l, LOG_16_3, 1e-45);
}

#[test]
fn log_rejects_nonpositive() {
    assert!(enclose_log(&int(0)).is_err());
    assert!(enclose_log(&int(-3)).is_err());
}

#[test]
fn sqrt_reference_values() {
    let two = enclose_sqrt(&int(4)).unwrap();
    assert!(two.contains(&int(2)) && two.width_f64() == 0.0);
    assert_encloses(&enclose_sqrt_prec(&int(2), 80).unwrap(), SQRT_2, 1e-23);
    assert_encloses(&enclose_sqrt_prec(&rat(5, 3), 80).unwrap(), SQRT_5_3, 1e-23);
}

#[test]
fn machin_pi() {
    let quarter = enclose_pi(128).ldexp(-2);
    let half = IntervalReal::from_rational_prec(&rat(1, 2), 128);
    assert_encloses(&(&half + &quarter), HALF_PLUS_QUARTER_PI, 1e-36);
}

#[test]
fn fixed_constants_are_narrow() {
    let c = FixedConstants::get();
    for (name, iv) in [
        ("gamma", &c.gamma),
        ("mertens_c", &c.mertens_c),
        ("half_plus_quarter_pi", &c.half_plus_quarter_pi),
        ("log_16_3", &c.log_16_3),
    ] {
        assert!(iv.width_f64() < 1e-25, "{name} width {}", iv.width_f64());
    }
    assert_encloses(&c.log_16_3, LOG_16_3, 1e-25);
    assert_encloses(&c.half_plus_quarter_pi, HALF_PLUS_QUARTER_PI, 1e-25);
}

#[test]
fn fast_log_contains_multiprecision_log() {
    for &x in &[1.0, 1.5, 2.0, 3.0, 0.1, 7.25, 1e6, 123456789.0, 1e12 + 7.0, 0.999999, 1.000001] {
        let fast = Fi::point(x).ln();
        let exact = enclose_log_prec(&Rational::from_float(x).unwrap(), 200).unwrap();
        assert!(fast.lo <= exact.lo_f64() && exact.hi_f64() <= fast.hi, "log {x}: {fast:?} vs {exact}");
        assert!(fast.hi - fast.lo < 1e-13 * (1.0 + fast.hi.abs()), "log {x} too wide");
    }
}

#[test]
fn fast_ln2_constant_brackets_truth() {
    let l = Fi::point(2.0).ln();
    let exact = enclose_log_prec(&int(2), 200).unwrap();
    assert!(l.lo <= exact.lo_f64() && exact.hi_f64() <= l.hi);
}

#[test]
fn fixed_point_conversion() {
    let v: u128 = (1u128 << 96) / 3;
    let f = Fi::from_fixed(v, 96);
    let exact = Rational::new(BigInt::from(v), BigInt::from(1u128 << 96));
    let iv = IntervalReal::from_rational_prec(&exact, 200);
    assert!(f.lo <= iv.lo_f64() && iv.hi_f64() <= f.hi);
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-10_000i64..10_000, 1i64..5_000).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn arithmetic_contains_exact_result(a in small_rational(), b in small_rational(), prec in 53u32..120) {
        let ia = IntervalReal::from_rational_prec(&a, prec);
        let ib = IntervalReal::from_rational_prec(&b, prec);
        prop_assert!((&ia + &ib).contains(&(&a + &b)));
        prop_assert!((&ia - &ib).contains(&(&a - &b)));
        prop_assert!((&ia * &ib).contains(&(&a * &b)));
        if b != int(0) {
            prop_assert!((&ia / &ib).contains(&(&a / &b)));
        }
    }

    #[test]
    fn fast_arithmetic_contains_exact_result(a in small_rational(), b in small_rational()) {
        let fa = Fi::from_interval(&IntervalReal::from_rational(&a));
        let fb = Fi::from_interval(&IntervalReal::from_rational(&b));
        let check = |f: Fi, exact: Rational| {
            let iv = IntervalReal::from_rational_prec(&exact, 200);
            f.lo <= iv.lo_f64() && iv.hi_f64() <= f.hi
        };
        prop_assert!(check(fa + fb, &a + &b));
        prop_assert!(check(fa - fb, &a - &b));
        prop_assert!(check(fa * fb, &a * &b));
        if b != int(0) {
            prop_assert!(check(fa / fb, &a / &b));
        }
    }

    #[test]
    fn log_is_monotone_and_additive(n in 2u64..1_000_000, m in 2u64..1_000_000) {
        let ln = enclose_log(&int(n as i64)).unwrap();
        let lm = enclose_log(&int(m as i64)).unwrap();
        let lnm = enclose_log(&int((n * m) as i64)).unwrap();
        let sum = &ln + &lm;
        prop_assert!(!(sum.certainly_lt(&lnm) || lnm.certainly_lt(&sum)));
        if n < m {
            prop_assert!(ln.certainly_lt(&lm));
        }
    }

    #[test]
    fn sqrt_squares_back(n in 1u64..10_000_000, d in 1u64..1000) {
        let x = rat(n as i64, d as i64);
        let s = enclose_sqrt(&x).unwrap();
        prop_assert!(s.square().contains(&x));
    }

    #[test]
    fn fast_log_encloses(x in 1e-3f64..1e15) {
        let fast = Fi::point(x).ln();
        let exact = enclose_log_prec(&Rational::from_float(x).unwrap(), 160).unwrap();
        prop_assert!(fast.lo <= exact.lo_f64() && exact.hi_f64() <= fast.hi);
    }
}
