//! Certificate documents and the commands behind the `btcert` binary.
//!
//! Every command returns a [`VerificationReport`]; the binary wraps it in a
//! [`CertificateDocument`] and writes JSON or CSV.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use arith_core::constants::check_mertens_c;
use arith_core::primes::{coprime_part, totient};
use arith_core::rational::{parse_decimal, rat, to_decimal};
use arith_core::report::{Status, VerificationReport, Witness};
use arith_core::{IntervalReal, Rational};
use bt_bounds::{
    search_xi, sieve_crossover, simple_bound, thm11_bound, verify_sieve_range, verify_theorem, verify_uniform, BoundsError, Tables,
    TheoremOptions,
};
use legendre_sieve::{extremal_constants_with, row_affine, ExtremalStore};
use mertens_remainder::expansion::{alterman_c, delta_k, density_coeff, eta, ramare_c1, remainder_constant};
use mertens_remainder::lemma::geometric_grid;
use mertens_remainder::{piecewise_delta_bound, verify_constant_bound, verify_remainder_table, verify_weighted_lower_bound, Mode};
use prime_count::{pi_ap, spot_check, ApWindowQuery};

pub const TOOL: &str = "btcert";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Exit code for a run whose certificate is not fully verified.
pub const EXIT_UNVERIFIED: i32 = 1;
/// Exit code for bad arguments or unreadable inputs (clap uses the same).
pub const EXIT_USAGE: i32 = 2;

/// Top-level output of one command.
#[derive(Clone, Debug, Serialize)]
pub struct CertificateDocument {
    pub tool: String,
    pub version: String,
    pub task: String,
    pub parameters: BTreeMap<String, Value>,
    pub status: Status,
    pub witnesses: Vec<Witness>,
    pub mode_flags: Vec<String>,
    pub notes: Vec<String>,
    pub seed: Option<u64>,
    pub runtime_seconds: f64,
    pub subreports: Vec<VerificationReport>,
}

fn aggregate(r: &VerificationReport) -> Status {
    r.subreports.iter().fold(r.status, |s, sub| s.combine(aggregate(sub)))
}

impl CertificateDocument {
    pub fn new(rep: VerificationReport, seed: Option<u64>) -> CertificateDocument {
        CertificateDocument {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            status: aggregate(&rep),
            task: rep.task,
            parameters: rep.parameters,
            witnesses: rep.witnesses,
            mode_flags: rep.mode_flags,
            notes: rep.notes,
            seed,
            runtime_seconds: rep.runtime_seconds,
            subreports: rep.subreports,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.status == Status::Verified {
            0
        } else {
            EXIT_UNVERIFIED
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    /// One row per report, depth first; nested values are JSON strings.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["path", "task", "status", "runtime_seconds", "parameters", "witnesses", "notes"]).expect("in memory");
        let top = VerificationReport {
            task: self.task.clone(),
            parameters: self.parameters.clone(),
            status: self.status,
            witnesses: self.witnesses.clone(),
            mode_flags: self.mode_flags.clone(),
            notes: self.notes.clone(),
            runtime_seconds: self.runtime_seconds,
            subreports: self.subreports.clone(),
        };
        csv_rows(&mut w, &top, "0");
        String::from_utf8(w.into_inner().expect("in memory")).expect("utf8")
    }
}

fn csv_rows(w: &mut csv::Writer<Vec<u8>>, r: &VerificationReport, path: &str) {
    w.write_record([
        path,
        &r.task,
        aggregate(r).as_str(),
        &format!("{:.3}", r.runtime_seconds),
        &js(&r.parameters),
        &js(&r.witnesses),
        &js(&r.notes),
    ])
    .expect("in memory");
    for (i, s) in r.subreports.iter().enumerate() {
        csv_rows(w, s, &format!("{path}.{i}"));
    }
}

fn js<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

/// Accepts `0.8601`, `1e6`, `-3` and `3/2`.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_decimal(n).map_err(|e| e.to_string())?;
        let d = parse_decimal(d).map_err(|e| e.to_string())?;
        if d == rat(0, 1) {
            return Err(format!("zero denominator in {s}"));
        }
        return Ok(n / d);
    }
    parse_decimal(s).map_err(|e| e.to_string())
}

/// Shared inputs of every command.
pub struct Context {
    pub tables: Tables,
    pub jobs: usize,
    pub long_running: bool,
}

impl Context {
    /// Wheel constants with `r > 8` are recomputed only when `long_running` is set.
    pub fn load(data: &Path, jobs: usize, long_running: bool) -> Result<Context, BoundsError> {
        let recompute = if long_running { 10 } else { 8 };
        Ok(Context { tables: Tables::load(data, recompute, jobs)?, jobs: jobs.max(1), long_running })
    }

    pub fn default_t_max(&self) -> u64 {
        if self.long_running {
            100_000_000
        } else {
            1_000_000
        }
    }

    fn xi(&self, k: u64) -> Result<Rational, String> {
        self.tables.xi(k).map(|r| r.xi.clone()).ok_or_else(|| format!("modulus {k} is not in table1.csv"))
    }

    fn moduli(&self, k: Option<u64>) -> Vec<u64> {
        match k {
            Some(k) => vec![k],
            None => self.tables.table1.iter().map(|r| r.k).collect(),
        }
    }

    /// Runs `f` on each item across `jobs` threads, keeping input order.
    fn fork<T: Sync, R: Send>(&self, items: &[T], f: impl Fn(&T) -> R + Sync + Send) -> Vec<R> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build().expect("thread pool");
        pool.install(|| items.par_iter().map(f).collect())
    }
}

fn progress(msg: &str) {
    eprintln!("[{TOOL}] {msg}");
}

fn dec(x: &IntervalReal) -> String {
    x.to_decimal(15)
}

/// Per-modulus constants: `eta_k`, `c_k`, `phi(k)/k`, `delta_k` and the wheels `Q_{k,r}`.
pub fn cmd_constants(k: u64) -> Result<VerificationReport, String> {
    if k == 0 {
        return Err("k must be positive".into());
    }
    let start = Instant::now();
    let phi = totient(k);
    let wheels: Vec<Value> = (1..=10).map(|r| Value::from(coprime_part(r, k).to_string())).collect();
    let mut rep = VerificationReport::new("constants")
        .param("k", k)
        .param("phi", phi)
        .param("density", density_coeff(k).to_string())
        .param("delta_k", to_decimal(&delta_k(k), 3, false))
        .param("eta", dec(&eta(k)))
        .param("c_alterman", dec(&alterman_c(k)))
        .param("c_used", dec(&remainder_constant(k)))
        .param("wheels", Value::Array(wheels));
    if k == 1 {
        rep.set_param("c_ramare", to_decimal(&ramare_c1(), 2, false));
    }
    let chk = check_mertens_c(1_000_000);
    rep.require(Status::from_bool(chk.consistent));
    rep.witness(Witness::new("mertens_constant").with("check", serde_json::to_value(&chk).expect("serializable")));
    Ok(rep.timed(start))
}

/// Remainder window table scans for one or all moduli, plus the `2.44` check for `k = 1`.
pub fn cmd_table2(ctx: &Context, k: Option<u64>, t_max: u64) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let mut rep = VerificationReport::new("table2").param("t_max", t_max).param("jobs", ctx.jobs);
    let ks: Vec<u64> = match k {
        Some(k) if !ctx.tables.table2.contains_key(&k) => return Err(format!("modulus {k} is not in table2.csv")),
        Some(k) => vec![k],
        None => ctx.tables.table2.keys().copied().collect(),
    };
    for k in &ks {
        progress(&format!("table2: scanning k = {k} to {t_max}"));
        rep.push_sub(verify_remainder_table(&ctx.tables.table2[k], t_max, ctx.jobs));
    }
    if ks.contains(&1) {
        rep.push_sub(cmd_ramare(ctx, t_max));
    }
    Ok(rep.timed(start))
}

/// `|E_1(t)| < 2.44 / sqrt t` on `(1, t_max]`.
pub fn cmd_ramare(ctx: &Context, t_max: u64) -> VerificationReport {
    progress(&format!("ramare: scanning to {t_max}"));
    verify_constant_bound(1, &ramare_c1(), 1, t_max, ctx.jobs)
}

/// Recomputes every shipped extremal constant with `r <= r_max` and compares exactly.
///
/// Rows sharing a wheel `Q_{k,r}` are computed once.
pub fn cmd_table3(ctx: &Context, store: &ExtremalStore, r_max: usize) -> Result<VerificationReport, String> {
    if r_max > 8 && !ctx.long_running {
        return Err("rows with r > 8 need --long-running".into());
    }
    let start = Instant::now();
    let mut rep = VerificationReport::new("table3").param("r_max", r_max).param("jobs", ctx.jobs);
    let mut cache: BTreeMap<(u128, usize), (Rational, Rational, u64)> = BTreeMap::new();
    let mut skipped = 0;
    for (k, r, a, b) in store.shipped_rows() {
        if *r > r_max {
            skipped += 1;
            continue;
        }
        let q = coprime_part(*r, *k);
        let (ca, cb, from) = match cache.get(&(q, *r)) {
            Some(hit) => hit.clone(),
            None => {
                progress(&format!("table3: k = {k}, r = {r}, wheel {q}"));
                let c = extremal_constants_with(*k, *r, ctx.jobs).map_err(|e| e.to_string())?;
                let v = (c.a_const, c.b_const, *k);
                cache.insert((q, *r), v.clone());
                v
            }
        };
        let ok = &ca == a && &cb == b;
        let w = Witness::new("row")
            .with("k", *k)
            .with("r", *r as u64)
            .with("wheel", q.to_string())
            .with("printed_A", a.to_string())
            .with("printed_B", b.to_string())
            .with("computed_A", ca.to_string())
            .with("computed_B", cb.to_string())
            .with("computed_with_k", from);
        if ok {
            rep.witness(w);
        } else {
            rep.fail(w);
        }
    }
    if skipped > 0 {
        rep.note(format!("{skipped} rows with r > {r_max} not recomputed"));
    }
    rep.set_param("rows_checked", rep.witnesses.len());
    Ok(rep.timed(start))
}

/// Recomputes the `(d1, d2)` coefficients and diffs them against `table4.csv`.
///
/// A row passes when both recomputed upper ends are at most the printed value plus `1e-4`.
/// The conservative coefficients are listed alongside for reference.
pub fn cmd_table4(ctx: &Context) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let mut rep = VerificationReport::new("table4").param("tolerance", "0.0001");
    let tol = rat(1, 10_000);
    for (k, row) in &ctx.tables.table4 {
        let tbl = ctx.tables.table2.get(k).ok_or_else(|| format!("no table2 rows for k = {k}"))?;
        let p = piecewise_delta_bound(tbl, row.index, Mode::Paper).map_err(|e| e.to_string())?;
        let c = piecewise_delta_bound(tbl, row.index, Mode::Conservative).map_err(|e| e.to_string())?;
        let within = |x: &IntervalReal, printed: &Rational| x.certainly_le(&IntervalReal::from_rational(&(printed + &tol)));
        let (ok1, ok2) = (within(&p.d1, &row.d1), within(&p.d2, &row.d2));
        let w = Witness::new("row")
            .with("k", *k)
            .with("I", row.index as u64)
            .with("printed_d1", row.d1_text.clone())
            .with("printed_d2", row.d2_text.clone())
            .with("d1", p.d1.to_decimal(6))
            .with("d2", p.d2.to_decimal(6))
            .with("d1_ok", ok1)
            .with("d2_ok", ok2)
            .with("conservative_d1", c.d1.to_decimal(6))
            .with("conservative_d2", c.d2.to_decimal(6));
        if ok1 && ok2 {
            rep.witness(w);
        } else {
            rep.fail(w);
        }
    }
    Ok(rep.timed(start))
}

/// The row whose threshold is checked for sharpness.
pub const SHARP_ROW: (u64, usize, u64) = (1, 10, 381);

/// Sieve-range rows for one or all moduli, and the crossover near each row's `y1`.
///
/// The crossover is informational except for [`SHARP_ROW`], where it must lie in
/// `[y1 - 1, y1 + 1]`.
pub fn cmd_table5(ctx: &Context, k: Option<u64>) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let mut rep = VerificationReport::new("table5");
    let rows: Vec<_> = ctx.tables.table5.iter().filter(|r| k.map_or(true, |k| r.k == k)).copied().collect();
    if rows.is_empty() {
        return Err(format!("no table5 rows for k = {}", k.unwrap_or(0)));
    }
    for row in rows {
        let xi = ctx.xi(row.k)?;
        progress(&format!("table5: k = {}, r = {}, [{}, {}]", row.k, row.r, row.y1, row.y2));
        let mut sub = verify_sieve_range(row.k, &xi, &row, &ctx.tables.store);
        let w = row_affine(&ctx.tables.store, row.k, row.r).map_err(|e| e.to_string())?;
        let lo = Rational::from_integer((row.y1 - 1).into());
        let hi = Rational::from_integer((row.y1 + 1).into());
        let sharp = (row.k, row.r, row.y1) == SHARP_ROW;
        match sieve_crossover(row.k, &xi, &w, &lo, &hi) {
            Some((a, b)) => sub.witness(Witness::new("crossover").with("lo", to_decimal(&a, 6, false)).with("hi", to_decimal(&b, 6, true))),
            None if sharp => sub.fail(Witness::new("crossover_missing").with("lo", row.y1 - 1).with("hi", row.y1 + 1)),
            None => sub.note(format!("no crossover within 1 of y1 = {}", row.y1)),
        }
        rep.push_sub(sub);
    }
    Ok(rep.timed(start))
}

pub struct TheoremArgs {
    pub k: Option<u64>,
    pub xi: Option<Rational>,
    pub mode: Mode,
    pub t_max: u64,
    pub scan_tables: bool,
    pub uniform: bool,
    /// Bisect for the largest verifiable constant in `[lo, hi]`.
    pub search: Option<(Rational, Rational)>,
}

/// End-to-end certificate for one modulus, every modulus in `table1.csv`, the uniform statement,
/// or a constant search.
pub fn cmd_theorem(ctx: &Context, a: &TheoremArgs) -> Result<VerificationReport, String> {
    let opts = TheoremOptions { mode: a.mode, t_max: a.t_max, jobs: 1, scan_tables: a.scan_tables };
    if a.uniform {
        let xi = match &a.xi {
            Some(x) => x.clone(),
            None => ctx.xi(1)?,
        };
        progress("theorem: uniform statement");
        return Ok(verify_uniform(&xi, &ctx.tables, &opts));
    }
    if let Some((lo, hi)) = &a.search {
        let k = a.k.ok_or("--search needs --k")?;
        progress(&format!("theorem: searching k = {k}"));
        return Ok(search_xi(k, &ctx.tables, &opts, lo, hi));
    }
    let ks = ctx.moduli(a.k);
    if ks.len() == 1 {
        let k = ks[0];
        let xi = match &a.xi {
            Some(x) => x.clone(),
            None => ctx.xi(k)?,
        };
        progress(&format!("theorem: k = {k}"));
        return Ok(verify_theorem(k, &xi, &ctx.tables, &opts));
    }
    if a.xi.is_some() {
        return Err("--xi needs --k".into());
    }
    let start = Instant::now();
    let xis = ks.iter().map(|&k| ctx.xi(k).map(|x| (k, x))).collect::<Result<Vec<_>, _>>()?;
    let subs = ctx.fork(&xis, |(k, xi)| {
        progress(&format!("theorem: k = {k}"));
        verify_theorem(*k, xi, &ctx.tables, &opts)
    });
    let mut rep = VerificationReport::new("theorem_all").param("moduli", ks.len()).param("mode", a.mode.as_str());
    for s in subs {
        rep.push_sub(s);
    }
    Ok(rep.timed(start))
}

/// `2y / (phi(k)(log(y/k) + xi))` with the `table1.csv` constant unless one is given, and
/// the large-sieve bound where it applies.
pub fn cmd_bound(ctx: &Context, k: u64, y: &Rational, xi: Option<Rational>) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let xi = match xi {
        Some(x) => x,
        None => ctx.xi(k)?,
    };
    let b = simple_bound(k, y, &xi).map_err(|e| e.to_string())?;
    let mut rep = VerificationReport::new("bound")
        .param("k", k)
        .param("y", y.to_string())
        .param("xi", to_decimal(&xi, 6, false))
        .param("bound", b.to_decimal(12));
    for mode in [Mode::Conservative, Mode::Paper] {
        if let Some(t) = thm11_bound(k, y, mode) {
            rep.set_param(&format!("large_sieve_{}", mode.as_str()), t.to_decimal(12));
        }
    }
    Ok(rep.timed(start))
}

/// Counts primes `p = a (mod k)` in `(x, x+y]`.
pub fn cmd_pi(x: u64, y: u64, k: u64, a: u64) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let q = ApWindowQuery::new(x, y, k, a).map_err(|e| e.to_string())?;
    let n = pi_ap(&q).map_err(|e| e.to_string())?;
    let rep = VerificationReport::new("pi").param("x", x).param("y", y).param("k", k).param("a", q.a).param("count", n);
    Ok(rep.timed(start))
}

/// Random windows against the bound, for one or every modulus in `table1.csv`.
pub fn cmd_spotcheck(ctx: &Context, k: Option<u64>, trials: u64, seed: u64) -> Result<VerificationReport, String> {
    let start = Instant::now();
    let xis = ctx.moduli(k).into_iter().map(|k| ctx.xi(k).map(|x| (k, x))).collect::<Result<Vec<_>, _>>()?;
    let subs = ctx.fork(&xis, |(k, xi)| {
        progress(&format!("spotcheck: k = {k}"));
        spot_check(*k, xi, trials, seed)
    });
    let mut rep = VerificationReport::new("spotcheck").param("trials", trials).param("seed", seed);
    let mut violations = 0;
    for s in subs {
        violations += s.parameters.get("violations").and_then(Value::as_u64).unwrap_or(0);
        rep.push_sub(s);
    }
    rep.set_param("violations", violations);
    Ok(rep.timed(start))
}

/// The weighted-sum lower bound in the given mode on `points` geometric points of `[1, z_max]`.
pub fn cmd_lemma21(ctx: &Context, ks: &[u64], z_max: f64, points: usize, mode: Mode) -> Result<VerificationReport, String> {
    if points < 2 || !(z_max > 1.0) {
        return Err("need at least 2 points and z_max > 1".into());
    }
    let start = Instant::now();
    let grid = geometric_grid(1.0, z_max, points, 1000);
    let subs = ctx.fork(ks, |&k| verify_weighted_lower_bound(k, &grid, mode));
    let mut rep = VerificationReport::new("lemma21").param("points", grid.len()).param("z_max", z_max).param("mode", mode.as_str());
    let mut needed = false;
    for s in subs {
        needed |= s.parameters.get("conservative_required").and_then(Value::as_bool).unwrap_or(false);
        rep.push_sub(s);
    }
    if mode == Mode::Paper {
        rep.set_param("conservative_required", needed);
    }
    Ok(rep.timed(start))
}
