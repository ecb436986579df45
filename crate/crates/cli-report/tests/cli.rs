use std::process::{Command, Output};

use arith_core::rational::{int, rat};
use arith_core::report::{Status, VerificationReport, Witness};
use cli_report::{parse_rational, CertificateDocument};
use proptest::prelude::*;
use serde_json::Value;

fn btcert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_btcert")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn strip_runtimes(v: &mut Value) {
    if let Some(m) = v.as_object_mut() {
        m.remove("runtime_seconds");
        m.values_mut().for_each(strip_runtimes);
    } else if let Some(a) = v.as_array_mut() {
        a.iter_mut().for_each(strip_runtimes);
    }
}

#[test]
fn bound_uses_the_table_constant() {
    let o = btcert(&["bound", "--k", "7", "--y", "1e6"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["parameters"]["xi"], "1.392500");
    // 2e6 / (6 (log(1e6/7) + 1.3925))
    let expect = 2e6 / (6.0 * ((1e6f64 / 7.0).ln() + 1.3925));
    let got: f64 = v["parameters"]["bound"].as_str().unwrap().trim_matches(['[', ']']).split(',').next().unwrap().trim().parse().unwrap();
    assert!((got - expect).abs() < 1e-6 * expect, "{got} vs {expect}");
}

#[test]
fn constants_examples() {
    let v = json(&btcert(&["constants", "--k", "2"]));
    assert_eq!(v["parameters"]["delta_k"], "0.493");
    let v = json(&btcert(&["constants", "--k", "15"]));
    assert_eq!(v["parameters"]["density"], "8/15");
    // The first four primes without 3 and 5.
    assert_eq!(v["parameters"]["wheels"][3], "14");
    let v = json(&btcert(&["constants", "--k", "1"]));
    let eta: f64 = v["parameters"]["eta"].as_str().unwrap()[1..].split(',').next().unwrap().parse().unwrap();
    assert!((eta - 1.3325822757332).abs() < 1e-12);
}

#[test]
fn pi_counts_and_csv() {
    let o = btcert(&["pi", "--x", "0", "--y", "100", "--k", "4", "--a", "1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let row = rdr.records().next().unwrap().unwrap();
    assert_eq!(&row[1], "pi");
    let params: Value = serde_json::from_str(&row[4]).unwrap();
    assert_eq!(params["count"], 11);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(btcert(&["bound", "--k", "7", "--y", "x"]).status.code(), Some(2));
    assert_eq!(btcert(&["pi", "--x", "0", "--y", "10", "--k", "4", "--a", "2"]).status.code(), Some(2));
    assert_eq!(btcert(&["bound", "--k", "6", "--y", "100"]).status.code(), Some(2));
    assert_eq!(btcert(&["nonsense"]).status.code(), Some(2));
    assert_eq!(btcert(&["table2", "--data", "/nonexistent"]).status.code(), Some(2));
    assert_eq!(btcert(&["theorem", "--k", "3", "--search", "1"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    let o = btcert(&["theorem", "--k", "3"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["status"], "failed");
    let o = btcert(&["theorem", "--k", "7", "--no-scan"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn constant_search_for_modulus_three() {
    let o = btcert(&["theorem", "--k", "3", "--search", "1,2", "--no-scan"]);
    let v = json(&o);
    assert_eq!(v["task"], "xi_search");
    let best: f64 = v["parameters"]["best_xi"].as_str().unwrap().parse().unwrap();
    assert!(1.49 < best && best < 1.5, "{best}");
}

#[test]
fn reruns_are_identical_up_to_runtimes() {
    let args = ["spotcheck", "--k", "5", "--trials", "40", "--seed", "9"];
    let (mut a, mut b) = (json(&btcert(&args)), json(&btcert(&args)));
    assert_eq!(a["seed"], 9);
    strip_runtimes(&mut a);
    strip_runtimes(&mut b);
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn output_file() {
    let p = std::env::temp_dir().join(format!("btcert-{}.json", std::process::id()));
    let o = btcert(&["table5", "--k", "7", "--out", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    std::fs::remove_file(&p).unwrap();
    assert_eq!(v["task"], "table5");
    assert_eq!(v["tool"], "btcert");
}

#[test]
fn status_aggregates_nested_failures() {
    let mut inner = VerificationReport::new("inner");
    inner.status = Status::Failed;
    let mut mid = VerificationReport::new("mid");
    mid.subreports.push(inner);
    let mut top = VerificationReport::new("top");
    top.subreports.push(mid);
    top.witness(Witness::new("w"));
    let doc = CertificateDocument::new(top, None);
    assert_eq!(doc.status, Status::Failed);
    assert_eq!(doc.exit_code(), 1);
    assert_eq!(CertificateDocument::new(VerificationReport::new("ok"), Some(3)).exit_code(), 0);
    assert_eq!(doc.to_csv().lines().count(), 4);
}

#[test]
fn rational_arguments() {
    assert_eq!(parse_rational("0.8601").unwrap(), rat(8601, 10_000));
    assert_eq!(parse_rational("1e6").unwrap(), int(1_000_000));
    assert_eq!(parse_rational("3/2").unwrap(), rat(3, 2));
    assert!(parse_rational("1/0").is_err());
    assert!(parse_rational("").is_err());
}

proptest! {
    #[test]
    fn fractions_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        prop_assert_eq!(parse_rational(&format!("{n}/{d}")).unwrap(), rat(n, d));
    }
}
