//! Certified sup-norm scans of `|E_k(t)| sqrt t`.
//!
//! On `[n, n+1)` the sum is constant, so `E` strictly decreases and
//! `d/dt (E sqrt t)` has the sign of `E/2 - phi(k)/k`. When `E(n) < 2 phi(k)/k`
//! the product is monotone on the unit interval and its modulus peaks at
//! `t = n` or at the left limit `t -> (n+1)^-`; otherwise the interior
//! stationary value `2 (phi(k)/k) sqrt t` is added as a third candidate.

use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use arith_core::primes::{prime_divisors, SquarefreeSegments};
use arith_core::report::{Status, VerificationReport, Witness};
use arith_core::{Fi, IntervalReal, Rational};

use crate::expansion::MertensExpansion;
use crate::sums::{fixed_recip, fixed_to_fi};
use crate::table::RemainderWindowTable;

const SEGMENT: u64 = 1 << 16;
const CHUNK: u64 = 1 << 21;

/// Where the lower end of a segment supremum was attained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupPoint {
    /// At `t = n`.
    At(u64),
    /// As `t -> n^-`.
    LeftLimit(u64),
}

impl SupPoint {
    pub fn describe(&self) -> String {
        match self {
            SupPoint::At(n) => format!("{n}"),
            SupPoint::LeftLimit(n) => format!("{n}-"),
        }
    }

    pub fn abscissa(&self) -> u64 {
        match self {
            SupPoint::At(n) | SupPoint::LeftLimit(n) => *n,
        }
    }
}

/// Supremum enclosure of `|E_k(t)| sqrt t` over one segment of t.
#[derive(Clone, Copy, Debug)]
pub struct SegmentSup {
    /// Certified upper bound of the supremum.
    pub upper: f64,
    /// A certified lower bound, attained at `witness`.
    pub lower: f64,
    pub witness: SupPoint,
    /// Unit intervals where the interior stationary point had to be included.
    pub interior_cases: u64,
}

impl SegmentSup {
    fn empty() -> SegmentSup {
        SegmentSup { upper: f64::NEG_INFINITY, lower: f64::NEG_INFINITY, witness: SupPoint::At(0), interior_cases: 0 }
    }

    fn merge(&mut self, o: &SegmentSup) {
        self.upper = self.upper.max(o.upper);
        if o.lower > self.lower {
            self.lower = o.lower;
            self.witness = o.witness;
        }
        self.interior_cases += o.interior_cases;
    }

    pub fn enclosure(&self) -> IntervalReal {
        IntervalReal::hull_rational(
            &Rational::from_float(self.lower).expect("finite"),
            &Rational::from_float(self.upper).expect("finite"),
            64,
        )
    }
}

struct Ctx {
    cg: Fi,
    two_cg: Fi,
    eta: Fi,
    kp: Vec<u64>,
}

fn chunk_sum(ctx: &Ctx, seg: &SquarefreeSegments, lo: u64, hi: u64) -> (u128, u128) {
    let (mut phi, mut rem) = (Vec::new(), Vec::new());
    let (mut a, mut b) = (0u128, 0u128);
    let mut s = lo;
    while s < hi {
        let e = (s + SEGMENT).min(hi);
        seg.fill(s, e, &mut phi, &mut rem);
        for (i, &ph) in phi.iter().enumerate() {
            let q = s + i as u64;
            if ph != 0 && !ctx.kp.iter().any(|&p| q % p == 0) {
                let (t, r) = fixed_recip(ph);
                a += t;
                b += t + (r != 0) as u128;
            }
        }
        s = e;
    }
    (a, b)
}

/// Scans the unit intervals `n in [lo, hi)` of one chunk given the prefix sums at `lo - 1`.
#[allow(clippy::too_many_arguments)]
fn chunk_scan(
    ctx: &Ctx,
    seg: &SquarefreeSegments,
    lo: u64,
    hi: u64,
    prefix: (u128, u128),
    breaks: &[u64],
    t_max: u64,
) -> Vec<SegmentSup> {
    let mut out = vec![SegmentSup::empty(); breaks.len()];
    let (mut phi, mut rem) = (Vec::new(), Vec::new());
    let (mut s_lo, mut s_hi) = prefix;
    let mut ln_next: Option<Fi> = None;
    let mut s = lo;
    while s < hi {
        let e = (s + SEGMENT).min(hi);
        seg.fill(s, e, &mut phi, &mut rem);
        for (i, &ph) in phi.iter().enumerate() {
            let n = s + i as u64;
            if ph != 0 && !ctx.kp.iter().any(|&p| n % p == 0) {
                let (t, r) = fixed_recip(ph);
                s_lo += t;
                s_hi += t + (r != 0) as u128;
            }
            if n < breaks[0] {
                ln_next = None;
                continue;
            }
            let j = breaks.partition_point(|&b| b <= n) - 1;
            let sum = fixed_to_fi(s_lo, s_hi);
            let ln_n = ln_next.unwrap_or_else(|| Fi::from_u64(n).ln());
            let e_n = sum - ctx.cg * (ln_n + ctx.eta);
            let g_n = e_n.abs() * Fi::from_u64(n).sqrt();
            let mut cand = SegmentSup { upper: g_n.hi, lower: g_n.lo, witness: SupPoint::At(n), interior_cases: 0 };
            if n < t_max {
                let ln_m = Fi::from_u64(n + 1).ln();
                ln_next = Some(ln_m);
                let e_m = sum - ctx.cg * (ln_m + ctx.eta);
                let root = Fi::from_u64(n + 1).sqrt();
                let g_m = e_m.abs() * root;
                cand.merge(&SegmentSup { upper: g_m.hi, lower: g_m.lo, witness: SupPoint::LeftLimit(n + 1), interior_cases: 0 });
                if e_n.hi >= ctx.two_cg.lo {
                    let g_i = ctx.two_cg * root;
                    cand.upper = cand.upper.max(g_i.hi);
                    cand.interior_cases = 1;
                }
            }
            out[j].merge(&cand);
        }
        s = e;
    }
    out
}

/// Segment suprema of `|E_k(t)| sqrt t`.
///
/// Segment `j` covers `t in [breaks[j], breaks[j+1])`, the last one
/// `[breaks[last], t_max]`. Including `t = breaks[j]` itself makes each result
/// an upper bound for the supremum over the half-open `(breaks[j], ...]`.
pub fn scan_segments(k: u64, breaks: &[u64], t_max: u64, jobs: usize) -> Vec<SegmentSup> {
    assert!(!breaks.is_empty() && breaks[0] >= 1);
    assert!(breaks.windows(2).all(|w| w[0] < w[1]) && *breaks.last().unwrap() <= t_max);
    let me = MertensExpansion::new(k);
    let cg = me.density_fi();
    let ctx = Ctx { cg, two_cg: cg * Fi::point(2.0), eta: Fi::from_interval(&me.eta), kp: prime_divisors(k) };
    let seg = SquarefreeSegments::new(t_max + 1);
    let mut bounds = vec![1u64];
    while *bounds.last().unwrap() <= t_max {
        let b = *bounds.last().unwrap();
        bounds.push((b + CHUNK).min(t_max + 1));
    }
    let chunks: Vec<(u64, u64)> = bounds.windows(2).map(|w| (w[0], w[1])).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build().expect("thread pool");
    pool.install(|| {
        let sums: Vec<(u128, u128)> = chunks.par_iter().map(|&(a, b)| chunk_sum(&ctx, &seg, a, b)).collect();
        let mut prefix = Vec::with_capacity(chunks.len());
        let (mut a, mut b) = (0u128, 0u128);
        for s in &sums {
            prefix.push((a, b));
            a += s.0;
            b += s.1;
        }
        let parts: Vec<Vec<SegmentSup>> = chunks
            .par_iter()
            .zip(prefix.par_iter())
            .map(|(&(lo, hi), &p)| chunk_scan(&ctx, &seg, lo, hi, p, breaks, t_max))
            .collect();
        let mut out = vec![SegmentSup::empty(); breaks.len()];
        for part in parts {
            for (o, p) in out.iter_mut().zip(part.iter()) {
                o.merge(p);
            }
        }
        out
    })
}

/// Certified enclosure of `sup_{t_lo < t <= t_hi} |E_k(t)| sqrt t` with a witness abscissa.
pub fn scan_remainder_sup(k: u64, t_lo: u64, t_hi: u64, jobs: usize) -> (IntervalReal, SupPoint) {
    assert!(1 <= t_lo && t_lo < t_hi);
    let s = scan_segments(k, &[t_lo], t_hi, jobs)[0];
    (s.enclosure(), s.witness)
}

/// Checks every row `(z_i, c_i)` on its whole range `(z_i, t_max]`.
pub fn verify_remainder_table(table: &RemainderWindowTable, t_max: u64, jobs: usize) -> VerificationReport {
    let start = Instant::now();
    let k = table.k;
    let mut rep = VerificationReport::new("remainder_table").param("k", k).param("t_max", t_max).param("rows", table.len());
    let breaks: Vec<u64> = table.rows.iter().map(|r| r.z).filter(|&z| z < t_max).collect();
    let segs = scan_segments(k, &breaks, t_max, jobs);
    // Suffix maxima: row i needs every segment from its own to the end.
    let mut suffix = segs.clone();
    for j in (0..suffix.len().saturating_sub(1)).rev() {
        let next = suffix[j + 1];
        suffix[j].merge(&next);
    }
    let mut interior = 0;
    for (i, row) in table.rows.iter().enumerate() {
        if i >= suffix.len() {
            rep.note(format!("row {} starts beyond t_max", i + 1));
            continue;
        }
        let sup = suffix[i];
        interior += segs[i].interior_cases;
        let c = IntervalReal::from_rational(&row.c);
        let ok = sup.upper < c.lo_f64();
        let w = Witness::new(if ok { "row_sup" } else { "row_violation" })
            .with("i", i + 1)
            .with("z", row.z)
            .with("c", row.c_text.clone())
            .with("sup_lower", sup.lower)
            .with("sup_upper", sup.upper)
            .with("witness_t", sup.witness.describe())
            .with("margin", c.lo_f64() - sup.upper);
        if ok {
            rep.witness(w);
        } else if sup.lower >= c.hi_f64() {
            rep.fail(w);
        } else {
            rep.require(Status::Inconclusive);
            rep.witness(w);
        }
    }
    rep.set_param("interior_stationary_cases", interior);
    rep.timed(start)
}

/// Checks `|E_k(t)| < c / sqrt t` for all `t in (t_lo, t_max]`.
pub fn verify_constant_bound(k: u64, c: &Rational, t_lo: u64, t_max: u64, jobs: usize) -> VerificationReport {
    let start = Instant::now();
    let s = scan_segments(k, &[t_lo], t_max, jobs)[0];
    let ci = IntervalReal::from_rational(c);
    let mut rep = VerificationReport::new("remainder_constant_bound")
        .param("k", k)
        .param("c", arith_core::rational::to_decimal(c, 6, false))
        .param("t_lo", t_lo)
        .param("t_max", t_max);
    rep.require(if s.upper < ci.lo_f64() { Status::Verified } else { Status::Failed });
    rep.witness(
        Witness::new("sup")
            .with("sup_lower", s.lower)
            .with("sup_upper", s.upper)
            .with("witness_t", s.witness.describe())
            .with("margin", ci.lo_f64() - s.upper),
    );
    rep.parameters.insert("sup".into(), json!([s.lower, s.upper]));
    rep.timed(start)
}
