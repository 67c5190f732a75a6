//! `automorphe` command-line front end.
//!
//! Exit codes: 0 success, 1 an asserted check failed (the report is still
//! written), 2 usage or input-data error (nothing is written).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use automorphe::arith::{is_prime, weil_bound, KloostermanRow};
use automorphe::halfplane::{eval_eisenstein, eval_maass, load_fixture, poincare_selberg};
use automorphe::heckewords::hecke_power;
use automorphe::lab::{self, ReportRow, ScanReport};
use automorphe::planedist::GaussPoly;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "automorphe", version, about = "Tables, evaluations and experiments for SL(2,Z) automorphic distributions")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Debug, Args)]
struct Experiment {
    #[arg(long, default_value_t = 2)]
    p: u64,
    #[arg(long = "n", default_value_t = 6)]
    n: u32,
    #[arg(long, default_value_t = lab::DEFAULT_EPS)]
    eps: f64,
    /// Coefficients `a,b,c` of the test function exp(-pi (a x^2 + 2 b x xi + c xi^2)).
    #[arg(long, default_value = "1.3,0.4,0.8")]
    gauss: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Hecke-power table alpha_{k,l}^{(r)}; CSV columns k,l,r,alpha.
    HeckeTable {
        #[arg(long)]
        k: u32,
    },
    /// Kloosterman sum S(1,k;m) with its Weil majorant.
    Kloosterman {
        #[arg(long)]
        m: i64,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Eisenstein series E*(z, (1 - nu)/2) from its truncated Fourier expansion.
    EvalEisenstein {
        #[arg(long, allow_hyphen_values = true)]
        nu: String,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 40)]
        kmax: usize,
    },
    /// Maass expansion from a fixture file.
    EvalMaass {
        #[arg(long)]
        fixture: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Selberg-Poincare series truncated to Im(gz) >= 1/radius^2.
    Poincare {
        #[arg(long, default_value_t = 1)]
        j: u32,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 80.0)]
        radius: f64,
    },
    /// Theta of s_1^1 against its closed form at 20 points.
    ThetaCheck,
    /// Envelope ratios over (N, l, r) at radius and twice radius.
    ScanEnvelope {
        #[command(flatten)]
        exp: Experiment,
        /// Truncation radius in units of the row spacing 1/q.
        #[arg(long, default_value_t = 10.0)]
        radius: f64,
    },
    /// B_m pairings summed directly and through Kloosterman sums.
    BmCheck {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        m: Vec<i64>,
        #[arg(long, default_value = "1.3,0.4,0.8")]
        gauss: String,
        #[arg(long, default_value_t = 400)]
        radius: i64,
        #[arg(long, default_value_t = 12)]
        kmax: i64,
    },
    /// Hecke-power budget sum alpha p^{N eps} norm for N up to --n.
    Budget {
        #[command(flatten)]
        exp: Experiment,
        #[arg(long, default_value_t = 1.0)]
        norm: f64,
        /// Degree A of the test norm.
        #[arg(long, default_value_t = lab::DEFAULT_NORM_DEGREE)]
        degree: u32,
    },
    /// Hecke recursion residuals and |b_p| <= 2 per prime of a fixture.
    Ramanujan {
        #[arg(long)]
        fixture: PathBuf,
    },
}

/// Validated experiment settings.
#[derive(Debug, Clone)]
struct RunConfig {
    p: u64,
    n: u32,
    eps: f64,
    test_fn: GaussPoly<f64>,
}

impl RunConfig {
    fn from_args(e: &Experiment) -> anyhow::Result<Self> {
        if !is_prime(e.p) {
            bail!("--p must be prime, got {}", e.p);
        }
        if e.n < 1 {
            bail!("--n must be at least 1");
        }
        if !(e.eps > 0.0 && e.eps < 1.0) {
            bail!("--eps must lie in (0, 1), got {}", e.eps);
        }
        Ok(RunConfig { p: e.p, n: e.n, eps: e.eps, test_fn: parse_gauss(&e.gauss)? })
    }
}

fn parse_gauss(s: &str) -> anyhow::Result<GaussPoly<f64>> {
    let v: Vec<f64> = s.split(',').map(|t| t.trim().parse::<f64>()).collect::<Result<_, _>>().context("--gauss")?;
    if v.len() != 3 {
        bail!("--gauss needs three numbers a,b,c");
    }
    GaussPoly::real_gaussian(v[0], v[1], v[2]).map_err(|e| anyhow!("--gauss: {e}"))
}

fn parse_complex(name: &str, s: &str) -> anyhow::Result<Complex64> {
    s.parse::<Complex64>().map_err(|_| anyhow!("--{name}: expected a complex number like 0.3+1.1i, got {s:?}"))
}

fn parse_z(s: &str) -> anyhow::Result<Complex64> {
    let z = parse_complex("z", s)?;
    if !(z.im > 0.0) {
        bail!("--z must lie in the upper half-plane");
    }
    Ok(z)
}

enum Output {
    Report(ScanReport),
    Table(automorphe::heckewords::HeckePowerTable),
}

fn execute(cmd: &Command) -> anyhow::Result<Output> {
    let report = match cmd {
        Command::HeckeTable { k } => {
            if *k > 512 {
                bail!("--k above 512 is not supported");
            }
            return Ok(Output::Table(hecke_power(*k)));
        }
        Command::Kloosterman { m, k } => {
            let row = KloostermanRow::<f64>::new(*m).map_err(|e| anyhow!("{e}"))?;
            let s = row.sum(*k).map_err(|e| anyhow!("{e}"))?;
            let mut rep = ScanReport::new("kloosterman");
            let mut r = ReportRow::new("sum", &[("m", *m as f64), ("k", *k as f64)], Complex64::new(s, 0.0));
            let w = weil_bound(*k, *m);
            r.bound = w;
            r.ratio = s.abs() / w;
            r.pass = Some(s.abs() <= w * (1.0 + 1e-12));
            rep.rows.push(r);
            rep
        }
        Command::EvalEisenstein { nu, z, kmax } => {
            let (nu, z) = (parse_complex("nu", nu)?, parse_z(z)?);
            let t = eval_eisenstein(nu, z, *kmax).map_err(|e| anyhow!("{e}"))?;
            let mut rep = ScanReport::new("eval_eisenstein");
            let mut r = ReportRow::new(
                "value",
                &[("nu_re", nu.re), ("nu_im", nu.im), ("x", z.re), ("y", z.im), ("kmax", *kmax as f64)],
                t.value,
            );
            r.bound = t.tail_bound;
            rep.rows.push(r);
            rep
        }
        Command::EvalMaass { fixture, z } => {
            let z = parse_z(z)?;
            let e = load_fixture(fixture).map_err(|e| anyhow!("{}: {e}", fixture.display()))?;
            let v = eval_maass(&e, z).map_err(|e| anyhow!("{e}"))?;
            let mut rep = ScanReport::new("eval_maass");
            rep.rows.push(ReportRow::new(
                "value",
                &[("lambda", e.lambda), ("x", z.re), ("y", z.im), ("kmax", e.k_max as f64)],
                v,
            ));
            rep.meta("fixture", json!(fixture.display().to_string()));
            rep
        }
        Command::Poincare { j, z, radius } => {
            let z = parse_z(z)?;
            let t = poincare_selberg(*j, z, *radius).map_err(|e| anyhow!("{e}"))?;
            let mut rep = ScanReport::new("poincare");
            let mut r = ReportRow::new("value", &[("j", *j as f64), ("x", z.re), ("y", z.im), ("radius", *radius)], t.value);
            r.bound = t.tail_bound;
            rep.rows.push(r);
            rep
        }
        Command::ThetaCheck => lab::exp_theta_s11()?,
        Command::ScanEnvelope { exp, radius } => {
            let cfg = RunConfig::from_args(exp)?;
            if !(*radius >= 10.0) {
                bail!("--radius must be at least 10");
            }
            lab::exp_scan_envelope(cfg.p, cfg.n, cfg.eps, &cfg.test_fn, (*radius, 2.0 * radius))?
        }
        Command::BmCheck { m, gauss, radius, kmax } => {
            if m.iter().any(|&v| v < 1) {
                bail!("--m values must be positive");
            }
            if *radius < 10 {
                bail!("--radius must be at least 10");
            }
            lab::exp_bm_consistency(m, &parse_gauss(gauss)?, *radius, *kmax)?
        }
        Command::Budget { exp, norm, degree } => {
            let cfg = RunConfig::from_args(exp)?;
            if !(norm.is_finite() && *norm > 0.0) {
                bail!("--norm must be positive");
            }
            lab::exp_binomial_budget(cfg.p, cfg.n, cfg.eps, *norm, *degree)?
        }
        Command::Ramanujan { fixture } => {
            let e = load_fixture(fixture).map_err(|e| anyhow!("{}: {e}", fixture.display()))?;
            let mut rep = lab::exp_ramanujan(&e)?;
            rep.meta("fixture", json!(fixture.display().to_string()));
            rep
        }
    };
    Ok(Output::Report(report))
}

fn render(out: &Output, format: Format) -> anyhow::Result<(Vec<u8>, bool)> {
    let mut buf = Vec::new();
    let ok = match out {
        Output::Table(t) => {
            match format {
                Format::Csv => t.write_csv(&mut buf).map_err(|e| anyhow!("{e}"))?,
                Format::Json => {
                    let rows: Vec<_> = (0..=t.k as usize)
                        .flat_map(|l| (0..=l).map(move |r| (l, r)))
                        .map(|(l, r)| json!({"l": l, "r": r, "alpha": t.get(l, r).to_string()}))
                        .collect();
                    let doc = json!({"schema_version": lab::SCHEMA_VERSION, "experiment": "hecke_table", "k": t.k, "rows": rows});
                    serde_json::to_writer_pretty(&mut buf, &doc)?;
                    buf.push(b'\n');
                }
            }
            true
        }
        Output::Report(rep) => {
            match format {
                Format::Csv => rep.write_csv(&mut buf)?,
                Format::Json => {
                    buf.extend(rep.to_json()?.into_bytes());
                    buf.push(b'\n');
                }
            }
            rep.passed()
        }
    };
    Ok((buf, ok))
}

fn set_threads() {
    if let Some(n) = std::env::var("AUTOMORPHE_THREADS").ok().and_then(|s| s.trim().parse::<usize>().ok()) {
        if n > 0 {
            // a second initialisation only fails when a pool already exists
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

fn run<I: IntoIterator<Item = OsString>>(argv: I) -> i32 {
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    set_threads();
    let result = execute(&cli.cmd).and_then(|o| render(&o, cli.format));
    let (bytes, ok) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("error: {e:#}");
            return 2;
        }
    };
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &bytes).with_context(|| format!("writing {}", path.display())),
        None => std::io::stdout().lock().write_all(&bytes).context("writing stdout"),
    };
    if let Err(e) = written {
        eprintln!("error: {e:#}");
        return 2;
    }
    if ok {
        0
    } else {
        eprintln!("check failed");
        1
    }
}

fn main() {
    std::process::exit(run(std::env::args_os()));
}
