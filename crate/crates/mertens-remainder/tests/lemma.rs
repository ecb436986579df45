use arith_core::rational::{int, rat};
use arith_core::Status;
use mertens_remainder::lemma::geometric_grid;
use mertens_remainder::table::{default_data_dir, load_table2, load_table4};
use mertens_remainder::{eta, lemma21_main_term, piecewise_delta_bound, verify_weighted_lower_bound, Mode};

#[test]
fn main_term_examples() {
    let m = lemma21_main_term(1, &int(1));
    assert!((m.mid_f64() - eta(1).mid_f64() / 2.0).abs() < 1e-15);
    let m = lemma21_main_term(1, &int(100));
    let v = 100f64.ln() - 2f64.ln() + 1.01f64.ln() + 100.0 / 101.0 * eta(1).mid_f64();
    assert!((m.mid_f64() - v).abs() < 1e-13);
    let m = lemma21_main_term(3, &int(10));
    let v = 2.0 / 3.0 * (10f64.ln() - 2f64.ln() + 1.1f64.ln() + 10.0 / 11.0 * eta(3).mid_f64());
    assert!((m.mid_f64() - v).abs() < 1e-13);
}

#[test]
fn weighted_lower_bound_small() {
    let r = verify_weighted_lower_bound(1, &[int(1)], Mode::Paper);
    assert!(r.is_verified());
    let pts: Vec<_> = (1..=10).map(|j| int(4i64.pow(j).min(1_000_000))).collect();
    assert!(verify_weighted_lower_bound(1, &pts, Mode::Paper).is_verified());
    assert!(verify_weighted_lower_bound(1, &pts, Mode::Conservative).is_verified());
}

#[test]
fn weighted_lower_bound_grid() {
    let grid = geometric_grid(1.0, 1e5, 64, 1000);
    assert_eq!(grid.len(), 64);
    for k in [1u64, 3, 5] {
        let r = verify_weighted_lower_bound(k, &grid, Mode::Paper);
        assert_eq!(r.status, Status::Verified, "k={k}");
        assert_eq!(r.parameters["conservative_required"], false);
    }
}

#[test]
fn delta_coefficients_against_printed() {
    let t2 = load_table2(&default_data_dir().join("table2.csv")).unwrap();
    let t4 = load_table4(&default_data_dir().join("table4.csv")).unwrap();
    assert_eq!(t4.len(), 12);
    for (k, row) in &t4 {
        let d = piecewise_delta_bound(&t2[k], row.index, Mode::Paper).unwrap();
        let slack = &row.d1 + &rat(1, 10000);
        assert!(d.d1.hi_f64() <= arith_core::rational::approx_f64(&slack), "k={k} d1");
        let c = piecewise_delta_bound(&t2[k], row.index, Mode::Conservative).unwrap();
        assert!(c.d1.lo_f64() > d.d1.hi_f64());
        assert!((c.d2.mid_f64() - 2.0 * d.d2.mid_f64()).abs() < 1e-12);
    }
    let d = piecewise_delta_bound(&t2[&1], 12, Mode::Paper).unwrap();
    assert!(d.d1.hi_f64() <= 0.3271);
    assert_eq!(d.valid_from, 475);
}

#[test]
fn delta_rejects_bad_index() {
    let t2 = load_table2(&default_data_dir().join("table2.csv")).unwrap();
    assert!(piecewise_delta_bound(&t2[&1], 0, Mode::Paper).is_err());
    assert!(piecewise_delta_bound(&t2[&1], 13, Mode::Paper).is_err());
}
