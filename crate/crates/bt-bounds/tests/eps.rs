use arith_core::rational::{int, rat};
use arith_core::Rational;
use bt_bounds::*;
use mertens_remainder::{default_data_dir, load_table2, piecewise_delta_bound, Mode};
use proptest::prelude::*;

// gamma + sum_p log p / (p(p-1)), from published decimal expansions.
const ETA1: f64 = 0.577_215_664_901_532_9 + 0.755_366_610_831_675_7;
const LC1: f64 = 2.0 * ETA1 - 1.673_976_433_571_671_6;

fn close(x: &arith_core::IntervalReal, want: f64, tol: f64) {
    assert!((x.mid_f64() - want).abs() < tol, "{} vs {want}", x.to_decimal(12));
    assert!(x.hi_f64() - x.lo_f64() < 1e-15_f64.max(want.abs() * 1e-15));
}

fn ri(n: u64) -> Rational {
    Rational::from_integer(n.into())
}

#[test]
fn displayed_pieces() {
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    close(&eps1(1, &int(10_000)).unwrap(), ETA1 / 10_001.0 + (0.5 + quarter_pi) * 2.44 / 100.0, 1e-12);
    close(&eps2(1, 1).unwrap(), LC1 * LC1 / (16.0f64 / 3.0).sqrt(), 1e-12);
    let l = (1e10f64).ln() + LC1;
    close(&eps3(1, &ri(10_000_000_000)).unwrap(), l * l / 1e10, 1e-18);
    assert!((eps3(1, &ri(10_000_000_000)).unwrap().mid_f64() - 5.77e-8).abs() < 1e-9);
    assert!(eps1(1, &int(0)).is_err());
    assert!(eps2(1, 0).is_err());
    assert!(eps3(1, &int(-1)).is_err());
}

#[test]
fn conservative_first_piece_is_twice_the_displayed_one_with_the_full_weight() {
    let z = Rational::from_integer(4096.into());
    let paper = eps1(1, &z).unwrap();
    let cons = EpsilonParams::thm11(1, Mode::Conservative).eps1(&arith_core::IntervalReal::from_rational(&z));
    let quarter_pi = std::f64::consts::FRAC_PI_4;
    let want = 2.0 * (ETA1 / 4097.0 + (1.0 + quarter_pi) * 2.44 / 64.0);
    close(&cons, want, 1e-12);
    assert!(cons.certainly_gt(&paper));
}

#[test]
fn composite_and_large_sieve_bound() {
    let y = ri(10_000_000_000);
    let e = eps_total(1, &y, Variant::Thm11, Mode::Paper).unwrap();
    let p = EpsilonParams::thm11(1, Mode::Paper);
    let sum = &(&p.eps1(&EpsilonParams::z_of(10_000_000_000)) + &p.eps2(10_000_000_000)) + &p.eps3(&y);
    assert!((e.mid_f64() - sum.mid_f64()).abs() < 1e-15);
    assert!(eps_total(1, &int(1), Variant::Thm11, Mode::Paper).is_err());
    assert!(eps_total(1, &y, Variant::Tilde, Mode::Paper).is_err());

    let b = thm11_bound(1, &ri(1_000_000_000_000), Mode::Conservative).unwrap();
    assert!(b.hi_f64() < 2e12 / ((1e12f64).ln() - 0.1));
    assert!(thm11_bound(1, &rat(3, 2), Mode::Paper).is_none());
    assert!(thm11_bound(1, &int(5), Mode::Paper).is_none());
    assert!(thm11_bound(5, &ri(100_000_000_000), Mode::Conservative).is_some());
}

#[test]
fn error_terms_decay_slowly() {
    // The constant-remainder piece decays like y^(-1/4): about 1e-3 at 10^14 k.
    for k in [1u64, 5, 12] {
        let mut prev = f64::INFINITY;
        for e in [8u32, 10, 12, 14, 16, 18] {
            let y = ri(10u64.pow(e) * k);
            let v = eps_total(k, &y, Variant::Thm11, Mode::Paper).unwrap();
            assert!(v.hi_f64() < prev, "k={k} e={e}");
            prev = v.hi_f64();
        }
        let at14 = eps_total(k, &ri(10u64.pow(14) * k), Variant::Thm11, Mode::Paper).unwrap();
        assert!(at14.hi_f64() < 1e-2 && at14.lo_f64() > 1e-6, "{}", at14.to_decimal(8));
    }
}

#[test]
fn primed_is_dominated_by_the_base_modulus() {
    let r = verify_primed_domination();
    assert!(r.is_verified(), "{:?}", r.witnesses);
}

#[test]
fn tilde_window() {
    let t2 = load_table2(&default_data_dir().join("table2.csv")).unwrap();
    let d = piecewise_delta_bound(&t2[&1], 12, Mode::Paper).unwrap();
    let p = EpsilonParams::tilde(1, d, 100_000);
    assert!(p.total(&ri(669_671)).is_ok());
    // z = sqrt(3 * 300000 / 4) ~ 474.3 sits below z_{1,12} = 475.
    assert!(p.total(&ri(300_000)).is_err());
    assert!(p.total(&ri(20_000_000_000)).is_err());
}

#[test]
fn simple_bound_examples() {
    let xi = rat(8601, 10_000);
    close(&simple_bound(1, &int(381), &xi).unwrap(), 762.0 / (381f64.ln() + 0.8601), 1e-12);
    assert!((simple_bound(1, &int(381), &xi).unwrap().mid_f64() - 112.011).abs() < 0.001);
    assert!((simple_bound(1, &int(14), &xi).unwrap().mid_f64() - 8.002).abs() < 0.001);
    let b = simple_bound(3, &int(463), &rat(15864, 10_000)).unwrap();
    assert!((b.mid_f64() - 926.0 / (2.0 * ((463.0f64 / 3.0).ln() + 1.5864))).abs() < 1e-12);
    assert!(simple_bound(3, &int(3), &xi).is_err());
    let inf = simple_bound_inf(1, &int(381), &int(382), &xi);
    assert!(inf.certainly_lt(&simple_bound(1, &int(381), &xi).unwrap()));
}

#[test]
fn simple_bound_is_monotone() {
    for (k, xi) in [(1u64, rat(8601, 10_000)), (12, rat(23143, 10_000)), (7, rat(13925, 10_000))] {
        let mut prev = simple_bound(k, &(ri(k) + rat(1, 10)), &xi).unwrap();
        for j in 1..200u64 {
            let y = ri(k) + rat(1, 10) + Rational::from_integer((j * j).into()) * rat(1, 3);
            let b = simple_bound(k, &y, &xi).unwrap();
            assert!(b.certainly_gt(&prev), "k={k} y={y}");
            let stronger = simple_bound(k, &y, &(&xi + rat(1, 1000))).unwrap();
            assert!(stronger.certainly_lt(&b));
            prev = b;
        }
    }
}

const MODULI: [u64; 12] = [1, 3, 4, 5, 7, 8, 9, 11, 12, 13, 15, 16];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn error_term_decreases_beyond_ten_billion_k(i in 0usize..12, e in 0u32..6, f in 0u64..1000, paper in any::<bool>()) {
        let k = MODULI[i];
        let mode = if paper { Mode::Paper } else { Mode::Conservative };
        let y = Rational::from_integer((k * 10_000_000_000 * 10u64.pow(e)).into()) * rat(1000 + f as i64, 1000);
        for v in [Variant::Thm11, Variant::Primed] {
            let here = eps_total(k, &y, v, mode).unwrap();
            let later = eps_total(k, &(&y * int(2)), v, mode).unwrap();
            prop_assert!(later.certainly_lt(&here), "k={} y={} {:?}", k, y, v);
        }
    }

    #[test]
    fn simple_bound_grows_with_y(i in 0usize..12, y in 1u64..1_000_000_000, d in 1u64..1_000_000, x in 1i64..40_000) {
        let k = MODULI[i];
        let xi = rat(x, 10_000);
        let y0 = ri(k) + ri(y) * rat(1, 7);
        let b0 = simple_bound(k, &y0, &xi).unwrap();
        let b1 = simple_bound(k, &(&y0 + ri(d)), &xi).unwrap();
        prop_assert!(b1.certainly_gt(&b0));
    }
}
