use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use arith_core::report::VerificationReport;
use cli_report::*;
use mertens_remainder::{default_data_dir, Mode};

#[derive(Parser)]
#[command(name = "btcert", version, about = "Certificates for explicit Brun-Titchmarsh constants")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads for scans and per-modulus runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Working precision of interval arithmetic, in bits.
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Recompute order 9 and 10 wheel constants and sweep remainders to 1e8.
    #[arg(long, global = true)]
    long_running: bool,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Directory holding table1.csv .. table5.csv.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Write the certificate here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Conservative,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Paper => Mode::Paper,
            ModeArg::Conservative => Mode::Conservative,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-modulus constants of the Mertens-type expansion.
    Constants {
        #[arg(long)]
        k: u64,
    },
    /// Scan the remainder window table (all moduli unless --k).
    Table2 {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long)]
        t_max: Option<u64>,
    },
    /// Recompute the extremal wheel constants exactly.
    Table3 {
        #[arg(long)]
        r_max: Option<usize>,
    },
    /// Recompute the (d1, d2) coefficients and diff them against the table.
    Table4,
    /// Verify the sieve ranges (all moduli unless --k).
    Table5 {
        #[arg(long)]
        k: Option<u64>,
    },
    /// End-to-end certificate of the bound.
    Theorem {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, value_parser = parse_rational)]
        xi: Option<arith_core::Rational>,
        #[arg(long, value_enum, default_value_t = ModeArg::Conservative)]
        mode: ModeArg,
        #[arg(long)]
        t_max: Option<u64>,
        /// Trust the remainder window table without re-scanning it.
        #[arg(long)]
        no_scan: bool,
        /// The statement for every modulus.
        #[arg(long)]
        uniform: bool,
        /// Bisect for the largest verifiable constant in LO,HI.
        #[arg(long, value_name = "LO,HI", value_delimiter = ',', value_parser = parse_rational)]
        search: Option<Vec<arith_core::Rational>>,
    },
    /// Evaluate the bound at one window length.
    Bound {
        #[arg(long)]
        k: u64,
        #[arg(long, value_parser = parse_rational)]
        y: arith_core::Rational,
        #[arg(long, value_parser = parse_rational)]
        xi: Option<arith_core::Rational>,
    },
    /// Count primes p = a (mod k) in (x, x+y].
    Pi {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        y: u64,
        #[arg(long, default_value_t = 1)]
        k: u64,
        #[arg(long, default_value_t = 0)]
        a: u64,
    },
    /// Random windows against the bound (all moduli unless --k).
    Spotcheck {
        #[arg(long)]
        k: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Weighted-sum lower bound on a geometric grid.
    Lemma21 {
        #[arg(long, value_delimiter = ',', default_values_t = [1u64, 3, 5])]
        k: Vec<u64>,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, default_value_t = 1e5)]
        z_max: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
    },
}

fn run(cli: &Cli) -> Result<(VerificationReport, Option<u64>), String> {
    if let Some(bits) = cli.precision {
        if bits < 64 {
            return Err("--precision must be at least 64 bits".into());
        }
        arith_core::interval::set_default_precision(bits);
    }
    let data = cli.data.clone().unwrap_or_else(default_data_dir);
    let ctx = || Context::load(&data, cli.jobs, cli.long_running).map_err(|e| e.to_string());
    let rep = match &cli.cmd {
        Cmd::Constants { k } => cmd_constants(*k)?,
        Cmd::Table2 { k, t_max } => {
            let c = ctx()?;
            let t = t_max.unwrap_or(c.default_t_max());
            cmd_table2(&c, *k, t)?
        }
        Cmd::Table3 { r_max } => {
            let c = ctx()?;
            let r = r_max.unwrap_or(if cli.long_running { 10 } else { 8 });
            cmd_table3(&c, &c.tables.store, r)?
        }
        Cmd::Table4 => cmd_table4(&ctx()?)?,
        Cmd::Table5 { k } => cmd_table5(&ctx()?, *k)?,
        Cmd::Theorem { k, xi, mode, t_max, no_scan, uniform, search } => {
            if search.as_ref().is_some_and(|v| v.len() != 2) {
                return Err("--search takes LO,HI".into());
            }
            let c = ctx()?;
            let args = TheoremArgs {
                k: *k,
                xi: xi.clone(),
                mode: (*mode).into(),
                t_max: t_max.unwrap_or(1_000_000),
                scan_tables: !no_scan,
                uniform: *uniform,
                search: search.as_ref().map(|v| (v[0].clone(), v[1].clone())),
            };
            cmd_theorem(&c, &args)?
        }
        Cmd::Bound { k, y, xi } => cmd_bound(&ctx()?, *k, y, xi.clone())?,
        Cmd::Pi { x, y, k, a } => cmd_pi(*x, *y, *k, *a)?,
        Cmd::Spotcheck { k, trials } => return Ok((cmd_spotcheck(&ctx()?, *k, *trials, cli.seed)?, Some(cli.seed))),
        Cmd::Lemma21 { k, points, z_max, mode } => cmd_lemma21(&ctx()?, k, *z_max, *points, (*mode).into())?,
    };
    Ok((rep, None))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (rep, seed) = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("btcert: {e}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    let doc = CertificateDocument::new(rep, seed);
    let text = match cli.format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
    };
    match &cli.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, text) {
                eprintln!("btcert: cannot write {}: {e}", p.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(doc.exit_code() as u8)
}
