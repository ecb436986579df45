//! One PASS/FAIL line per acceptance criterion.
//!
//! Runs without the libtest harness so the lines always reach the console. The process
//! exits nonzero when an outcome differs from the one recorded in `KNOWN_FAILURES`:
//! a criterion failing for another reason, or a known failure that no longer fails.

use std::collections::BTreeSet;
use std::time::Instant;

use arith_core::primes::{coprime_part, totient};
use arith_core::rational::{int, rat};
use arith_core::report::{Status, VerificationReport};
use arith_core::Rational;
use bt_bounds::{check_coverage, Cover};
use cli_report::*;
use legendre_sieve::{extremal_constants, sieve_count, sieve_count_oracle, window_count_max};
use mertens_remainder::{default_data_dir, plain_sum, Mode};
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

/// Criteria whose failure is reproducible and explained; the closure checks it is that failure.
const KNOWN_FAILURES: [u32; 2] = [4, 6];

/// Moduli whose windows just above `k` hold two primes of one class, `2` and `k + 2`,
/// more than the bound allows.
const TINY_COUNTEREXAMPLE_MODULI: [u64; 5] = [3, 5, 9, 11, 15];

struct Outcome {
    pass: bool,
    /// For a known failure: whether it is exactly the recorded one.
    as_recorded: bool,
    detail: String,
}

fn judged(ok: bool, detail: String) -> Outcome {
    Outcome { pass: ok, as_recorded: ok, detail }
}

fn failing_subtasks(r: &VerificationReport) -> Vec<String> {
    r.subreports.iter().filter(|s| s.status != Status::Verified).map(|s| s.task.clone()).collect()
}

fn k_of(r: &VerificationReport) -> u64 {
    r.parameters["k"].as_u64().unwrap()
}

fn table3(ctx_long: &Context) -> Outcome {
    let rep = cmd_table3(ctx_long, &ctx_long.tables.store, 10).unwrap();
    let rows = rep.witnesses.len();
    let upto8 = rep.witnesses.iter().filter(|w| w.get("r").and_then(Value::as_u64).unwrap() <= 8).count();
    let mismatches = rep.witnesses.iter().filter(|w| w.get("printed_A") != w.get("computed_A") || w.get("printed_B") != w.get("computed_B")).count();
    let e18 = extremal_constants(1, 8).unwrap();
    let example = e18.a_const == rat(-2799708, 323323) && e18.b_const == rat(5599416, 323323);
    judged(
        rep.is_verified() && mismatches == 0 && example,
        format!("{rows} rows exact ({upto8} with r <= 8, rest r = 9, 10); (1,8) -> ({}, {}); {:.1} s", e18.a_const, e18.b_const, rep.runtime_seconds),
    )
}

fn table2(ctx: &Context) -> Outcome {
    let rep = cmd_table2(ctx, None, 1_000_000).unwrap();
    let tables: Vec<&VerificationReport> = rep.subreports.iter().filter(|s| s.task == "remainder_table").collect();
    let bad: Vec<u64> = tables.iter().filter(|s| !s.is_verified()).map(|s| k_of(s)).collect();
    judged(
        bad.is_empty() && tables.len() == 12,
        format!("{} moduli scanned on (z_i, 1e6], failing: {bad:?}; {:.1} s", tables.len(), rep.runtime_seconds),
    )
}

fn ramare(ctx: &Context) -> Outcome {
    let rep = cmd_ramare(ctx, 1_000_000);
    let sup = rep.witnesses.first().and_then(|w| w.get("sup_upper")).cloned().unwrap_or(Value::Null);
    judged(rep.is_verified(), format!("sup of |E_1(t)| sqrt t on (1, 1e6] is at most {sup} < 2.44"))
}

fn table4(ctx: &Context) -> Outcome {
    let rep = cmd_table4(ctx).unwrap();
    let flag = |key: &str| rep.witnesses.iter().filter(|w| w.get(key) == Some(&Value::Bool(false))).count();
    let (d1_bad, d2_bad) = (flag("d1_ok"), flag("d2_ok"));
    let first = rep.witnesses.iter().find(|w| w.get("d2_ok") == Some(&Value::Bool(false)));
    let eg = first.map_or(String::new(), |w| format!("; k = {}: d2 = {} against printed {}", w.get("k").unwrap(), w.get("d2").unwrap(), w.get("printed_d2").unwrap()));
    Outcome {
        pass: rep.is_verified(),
        // Every d1 matches; every d2 lies above the printed value.
        as_recorded: rep.witnesses.len() == 12 && d1_bad == 0 && d2_bad == 12,
        detail: format!("{} rows, d1 within tolerance in {}, d2 within tolerance in {}{eg}", rep.witnesses.len(), 12 - d1_bad, 12 - d2_bad),
    }
}

fn table5(ctx: &Context) -> Outcome {
    let rep = cmd_table5(ctx, None).unwrap();
    let failed = rep.subreports.iter().filter(|s| !s.is_verified()).count();
    let sharp = rep
        .subreports
        .iter()
        .find(|s| s.parameters.get("k") == Some(&Value::from(1)) && s.parameters.get("r") == Some(&Value::from(10)))
        .and_then(|s| s.witnesses.iter().find(|w| w.get("label") == Some(&Value::from("crossover"))))
        .map(|w| (w.get("lo").unwrap().as_str().unwrap().parse::<f64>().unwrap(), w.get("hi").unwrap().as_str().unwrap().parse::<f64>().unwrap()));
    let in_range = sharp.is_some_and(|(a, b)| 380.0 <= a && b <= 382.0);
    judged(
        failed == 0 && in_range,
        format!("{} rows, {failed} failing; crossover for (1, 10) in {sharp:?}; {:.1} s", rep.subreports.len(), rep.runtime_seconds),
    )
}

fn theorem(ctx: &Context) -> (Outcome, VerificationReport) {
    let args = TheoremArgs { k: None, xi: None, mode: Mode::Conservative, t_max: 1_000_000, scan_tables: true, uniform: false, search: None };
    let rep = cmd_theorem(ctx, &args).unwrap();
    let failing: Vec<u64> = rep.subreports.iter().filter(|s| !s.is_verified()).map(k_of).collect();
    let only_tiny = rep.subreports.iter().filter(|s| !s.is_verified()).all(|s| failing_subtasks(s) == ["tiny_range"]);
    let certified_cx = rep.subreports.iter().filter(|s| !s.is_verified()).all(|s| {
        s.find("tiny_range").is_some_and(|t| t.witnesses.iter().any(|w| w.get("label") == Some(&Value::from("counterexample"))))
    });
    let base = rep.subreports.iter().find(|s| k_of(s) == 1).is_some_and(|s| s.is_verified());
    let out = Outcome {
        pass: rep.is_verified(),
        as_recorded: base && failing == TINY_COUNTEREXAMPLE_MODULI && only_tiny && certified_cx,
        detail: format!(
            "{} of 12 verified (k = 1 {}); failing {failing:?}, each only on tiny windows with a certified counterexample: {}; {:.1} s",
            12 - failing.len(),
            if base { "verified" } else { "NOT verified" },
            only_tiny && certified_cx,
            rep.runtime_seconds
        ),
    };
    (out, rep)
}

fn oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let ps = [2u64, 3, 5, 7, 11, 13];
    let mut mismatches = 0;
    let n = 1000;
    for _ in 0..n {
        let z = int(rng.gen_range(0..=10_000));
        let k = rng.gen_range(1..=16u64);
        let a = rng.gen_range(0..k);
        let mask: u32 = rng.gen_range(0..64);
        let q: u64 = ps.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).product();
        if sieve_count(&z, k, a, q).unwrap() != sieve_count_oracle(&z, k, a, q).unwrap() {
            mismatches += 1;
        }
    }
    judged(mismatches == 0, format!("{n} random instances, {mismatches} mismatches"))
}

fn lemma21(ctx: &Context) -> Outcome {
    let rep = cmd_lemma21(ctx, &[1, 3, 5], 1e5, 64, Mode::Paper).unwrap();
    let needed = &rep.parameters["conservative_required"];
    judged(rep.is_verified(), format!("paper mode, k = 1, 3, 5, {} grid points; conservative mode required: {needed}", rep.parameters["points"]))
}

fn spot(ctx: &Context) -> Outcome {
    let rep = cmd_spotcheck(ctx, None, 1000, 1).unwrap();
    judged(
        rep.is_verified() && rep.subreports.len() == 12,
        format!("12 moduli x 1000 windows, {} violations; {:.1} s", rep.parameters["violations"], rep.runtime_seconds),
    )
}

fn properties(theorem: &VerificationReport) -> Outcome {
    let mut failures: Vec<String> = vec![];

    // D(N) has period kQ: each block of kQ integers adds phi(Q) admissible terms.
    for (k, q) in [(1u64, 6u64), (1, 210), (3, 70), (4, 105), (7, 30), (15, 14)] {
        for z in (0..3000).step_by(37) {
            let d = sieve_count(&int(z + (k * q) as i64), k, 1, q).unwrap() - sieve_count(&int(z), k, 1, q).unwrap();
            if d != totient(q) as u128 {
                failures.push(format!("period k={k} Q={q} z={z}"));
            }
        }
    }

    // Equal wheels give equal B.
    for r in 1..=6 {
        for k in 1..=16u64 {
            for l in k + 1..=16 {
                if coprime_part(r, k) == coprime_part(r, l) && extremal_constants(k, r).unwrap().b_const != extremal_constants(l, r).unwrap().b_const {
                    failures.push(format!("B k={k} l={l} r={r}"));
                }
            }
        }
    }

    // The window maximum does not depend on the residue class.
    for k in 1..=16u64 {
        for r in 0..=4 {
            let q = coprime_part(r, k) as u64;
            for y in [1i64, 7, 60, 211] {
                let vals: BTreeSet<u64> = (0..k).filter(|a| a.gcd(&k) == 1).map(|a| window_count_max(k, a, q, &int(y), 100_000).unwrap()).collect();
                if vals.len() != 1 {
                    failures.push(format!("residue k={k} Q={q} y={y}"));
                }
            }
        }
    }

    // plain_sum is a step function jumping by 1/phi(n) at squarefree n coprime to k.
    for k in [1u64, 4, 15] {
        // Empty below 1.
        let mut prev = int(0);
        for n in 1..=2000i64 {
            let at = plain_sum(k, &int(n)).unwrap();
            let after = plain_sum(k, &rat(2 * n + 1, 2)).unwrap();
            let u = n as u64;
            let expected = if arith_core::primes::is_squarefree(u) && u.gcd(&k) == 1 { rat(1, totient(u) as i64) } else { int(0) };
            if &at - &prev != expected || after != at {
                failures.push(format!("plain_sum k={k} n={n}"));
            }
            prev = after;
        }
    }

    // Regimes tile (k, oo) for every modulus, and a hole is reported.
    for s in &theorem.subreports {
        if s.parameters.get("coverage") != Some(&Value::from("complete")) {
            failures.push(format!("coverage k={}", k_of(s)));
        }
    }
    let cover = |lo: i64, hi: Option<i64>| Cover { task: "t".into(), lo: int(lo), hi: hi.map(int) };
    let gap: Result<(), (Rational, Option<Rational>)> = check_coverage(1, &[cover(1, Some(381)), cover(382, None)]);
    if gap != Err((int(381), Some(int(382)))) {
        failures.push("coverage gap not detected".into());
    }

    judged(
        failures.is_empty(),
        format!("periodicity, equal-wheel B, residue independence, plain_sum steps, regime tiling; failures: {failures:?}"),
    )
}

const TITLES: [&str; 10] = [
    "extremal wheel constants exact",
    "remainder window table to 1e6",
    "constant 2.44 for k = 1",
    "(d1, d2) coefficients",
    "sieve ranges and threshold 381",
    "end-to-end certificates, 12 moduli",
    "inclusion-exclusion against oracle",
    "weighted-sum lower bound audit",
    "random windows",
    "property suites",
];

fn main() {
    let start = Instant::now();
    let data = default_data_dir();
    let ctx = Context::load(&data, 1, false).expect("tables load");
    let ctx_long = Context::load(&data, 1, true).expect("tables load");

    let (c6, th) = theorem(&ctx);
    let outcomes = [table3(&ctx_long), table2(&ctx), ramare(&ctx), table4(&ctx), table5(&ctx), c6, oracle(), lemma21(&ctx), spot(&ctx), properties(&th)];

    let mut unexpected = vec![];
    for (i, o) in outcomes.iter().enumerate() {
        let n = i as u32 + 1;
        println!("criterion {n:>2}: {} {}: {}", if o.pass { "PASS" } else { "FAIL" }, TITLES[i], o.detail);
        let known = KNOWN_FAILURES.contains(&n);
        if (known && (o.pass || !o.as_recorded)) || (!known && !o.pass) {
            unexpected.push(n);
        }
    }
    println!("acceptance: {:.1} s", start.elapsed().as_secs_f64());
    if !unexpected.is_empty() {
        println!("acceptance: outcome differs from the recorded one for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
