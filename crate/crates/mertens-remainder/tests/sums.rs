use arith_core::primes::{is_squarefree, totient};
use arith_core::rational::{int, rat, Rational};
use mertens_remainder::expansion::{alterman_c, eta, remainder_constant};
use mertens_remainder::sums::{plain_sum_fixed, weighted_sum_enclosure};
use mertens_remainder::{plain_sum, remainder, weighted_sum, MertensError};
use num_integer::Integer;
use proptest::prelude::*;

#[test]
fn plain_sum_examples() {
    assert_eq!(plain_sum(1, &int(3)).unwrap(), rat(5, 2));
    assert_eq!(plain_sum(1, &int(10)).unwrap(), rat(11, 3));
    assert_eq!(plain_sum(3, &int(3)).unwrap(), int(2));
    assert_eq!(plain_sum(1, &rat(7, 2)).unwrap(), rat(5, 2));
    assert!(matches!(plain_sum(1, &rat(1, 2)), Err(MertensError::Domain(_))));
}

#[test]
fn weighted_sum_examples() {
    // Weight z/(z+q): at z=1 the single term is 1/2; at z=2 it is 2/3 + 2/4.
    assert_eq!(weighted_sum(1, &int(1)).unwrap(), rat(1, 2));
    assert_eq!(weighted_sum(1, &int(2)).unwrap(), rat(7, 6));
    assert_eq!(weighted_sum(3, &int(2)).unwrap(), rat(7, 6));
    assert!(weighted_sum(1, &int(0)).is_err());
}

#[test]
fn eta_and_alterman() {
    let e1 = eta(1);
    assert!(e1.lo_f64() > 1.33258 && e1.hi_f64() < 1.33259);
    let e2 = eta(2);
    let d = e2.mid_f64() - e1.mid_f64();
    assert!((d - std::f64::consts::LN_2 / 2.0).abs() < 1e-15);
    let e15 = eta(15);
    let d = e15.mid_f64() - e1.mid_f64();
    assert!((d - (3f64.ln() / 3.0 + 5f64.ln() / 5.0)).abs() < 1e-14);
    assert!(e1.width_f64() < 1e-25);

    assert!(alterman_c(1).contains(&rat(44, 10)));
    assert!(alterman_c(2).contains(&rat(21692, 10000)));
    let s3 = 3f64.sqrt();
    let c3 = 4.4 * (1.0 + 1.0 / (3.0 * s3 - 3.0 - s3 + 2.0));
    assert!((alterman_c(3).mid_f64() - c3).abs() < 1e-13);
    assert!(remainder_constant(1).contains(&rat(244, 100)));
}

#[test]
fn remainder_examples() {
    let e = remainder(1, &int(1)).unwrap();
    assert!((e.mid_f64() - (1.0 - eta(1).mid_f64())).abs() < 1e-15);
    let e = remainder(1, &int(10)).unwrap();
    assert!((e.mid_f64() - (11.0 / 3.0 - 10f64.ln() - eta(1).mid_f64())).abs() < 1e-14);
    let e = remainder(4, &int(1)).unwrap();
    assert!((e.mid_f64() - (1.0 - 0.5 * eta(4).mid_f64())).abs() < 1e-15);
}

#[test]
fn fixed_point_brackets_exact() {
    for k in [1u64, 2, 12] {
        for n in [1u64, 17, 500] {
            let exact = plain_sum(k, &int(n as i64)).unwrap();
            let (lo, hi) = plain_sum_fixed(k, n);
            let scale = Rational::from_integer(num_bigint::BigInt::from(1u8) << 96);
            assert!(Rational::from_integer(lo.into()) <= &exact * &scale);
            assert!(&exact * &scale <= Rational::from_integer(hi.into()));
        }
    }
    let w = weighted_sum(5, &rat(2001, 2)).unwrap();
    let f = weighted_sum_enclosure(5, 2001, 2);
    let wf = arith_core::rational::approx_f64(&w);
    assert!(f.lo <= wf && wf <= f.hi && f.hi - f.lo < 1e-12);
}

#[test]
fn ramare_bound_at_integers() {
    // Integer endpoints only; the continuous check lives in the scan tests.
    let mut s = 0f64;
    let eta1 = eta(1).mid_f64();
    for n in 1..=1_000_000u64 {
        if is_squarefree(n) {
            s += 1.0 / totient(n) as f64;
        }
        let e = s - ((n as f64).ln() + eta1);
        assert!(e.abs() * (n as f64).sqrt() < 2.44, "n={n}");
    }
}

fn sieve_term(k: u64, q: u64) -> Rational {
    if is_squarefree(q) && q.gcd(&k) == 1 {
        rat(1, totient(q) as i64)
    } else {
        int(0)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone_with_exact_jumps(k in 1u64..=16, n in 1u64..3000) {
        let a = plain_sum(k, &int(n as i64)).unwrap();
        let b = plain_sum(k, &int(n as i64 + 1)).unwrap();
        prop_assert_eq!(&b - &a, sieve_term(k, n + 1));
        let mid = plain_sum(k, &rat(2 * n as i64 + 1, 2)).unwrap();
        prop_assert_eq!(mid, a);
    }

    #[test]
    fn coprime_restriction_sandwich(k in 1u64..=16, n in 1u64..10_000) {
        let z = int(n as i64);
        let g = rat(totient(k) as i64, k as i64);
        let h1 = plain_sum(1, &z).unwrap();
        let hk = plain_sum(k, &z).unwrap();
        prop_assert!(hk <= h1);
        prop_assert!(&g * &h1 <= hk);
        if n <= 2000 {
            let w1 = weighted_sum(1, &z).unwrap();
            let wk = weighted_sum(k, &z).unwrap();
            prop_assert!(wk <= w1);
            prop_assert!(&g * &w1 <= wk);
            if n > 1 {
                prop_assert!(wk < hk);
            }
        }
    }

    #[test]
    fn remainder_jump_consistency(k in 1u64..=16, q in 2u64..2000) {
        let below = remainder(k, &rat(1_000_000 * q as i64 - 1, 1_000_000)).unwrap();
        let at = remainder(k, &int(q as i64)).unwrap();
        let jump = arith_core::rational::approx_f64(&sieve_term(k, q));
        let d = below.mid_f64() - at.mid_f64();
        // The log moves by about 1e-6/q between the two abscissae.
        prop_assert!((d + jump).abs() < 2e-6, "d={} jump={}", d, jump);
    }
}
