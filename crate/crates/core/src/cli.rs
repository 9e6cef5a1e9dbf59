//! Command-line front end: argument parsing and output formatting.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::corpus::{load_manifest, parse_coeffs, parse_generator};
use crate::error::{Error, Result};
use crate::laguerre::{degenerate_laguerre_explicit, frac_laguerre, stretch_demo};
use crate::poly::Polynomial;
use crate::report::Status;
use crate::scalar::{Mode, Rational, Scalar};
use crate::series::TruncatedSeries;
use crate::umbral::{construct, fractional_iterate, integer_iterate, itlog, Formula, UmbralSpec};
use crate::verify::{self, Suite, VerifyConfig};

pub const DEFAULT_ORDER: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(name = "umbral", version, about = "Exact umbral operators, iterative logarithms and fractional powers")]
pub struct Cli {
    /// Truncation order of power series.
    #[arg(long, global = true, env = "UMBRAL_ORDER", default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Scalar field: exact rationals or f64.
    #[arg(long, global = true, default_value = "exact")]
    pub mode: Mode,
    /// Output format (verify defaults to json, everything else to pretty).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Power-series operations on generators given as "c1,c2,...".
    Series {
        #[command(subcommand)]
        op: SeriesOp,
    },
    /// Tabulate umbral operators φ_0..φ_n and diff the constructions.
    Umbral(UmbralArgs),
    /// Degenerate Laguerre polynomials and their identity grid.
    Laguerre(LaguerreArgs),
    /// Run identity suites; exit status 0 iff every identity holds.
    Verify(VerifyArgs),
}

#[derive(Debug, Subcommand)]
pub enum SeriesOp {
    /// f ∘ g
    Compose {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Compositional inverse of f.
    Invert {
        #[arg(long)]
        f: String,
    },
    /// Iterative logarithm of f.
    Itlog {
        #[arg(long)]
        f: String,
    },
    /// The s-th iterate of f.
    Iterate {
        #[arg(long)]
        f: String,
        #[arg(long)]
        s: String,
    },
}

#[derive(Debug, Args)]
pub struct UmbralArgs {
    #[arg(long)]
    pub f: String,
    /// Highest polynomial index.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// "all" or a comma list of garsia, steffensen, steffensen2, bucc, expitlog.
    #[arg(long, default_value = "bucc")]
    pub formulas: String,
}

#[derive(Debug, Args)]
pub struct LaguerreArgs {
    /// Degeneracy order (p = 0 needs --mode float).
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    #[arg(long, default_value = "0")]
    pub alpha: String,
    /// Fractional exponent.
    #[arg(long, default_value = "1")]
    pub s: String,
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    /// Run the identity grid instead of printing a table.
    #[arg(long, value_name = "all")]
    pub check: Option<String>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "all")]
    pub suite: String,
    /// Adds seeded random generators and seeds the random kernel operators.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Corpus manifest: JSON list of {"name", "coeffs"}.
    #[arg(long)]
    pub corpus: Option<PathBuf>,
}

/// Rendered output plus the process exit status.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    if cli.order < 2 {
        return Err(Error::pre("cli", "truncation order must be at least 2"));
    }
    match &cli.command {
        Command::Verify(args) => cmd_verify(cli, args),
        _ => match cli.mode {
            Mode::Exact => run_in::<Rational>(cli),
            Mode::Float => run_in::<f64>(cli),
        },
    }
}

fn run_in<S: Scalar>(cli: &Cli) -> Result<Outcome> {
    let format = cli.format.unwrap_or(Format::Pretty);
    match &cli.command {
        Command::Series { op } => cmd_series::<S>(op, cli.order, format).map(Outcome::ok),
        Command::Umbral(args) => cmd_umbral::<S>(args, cli.order, format),
        Command::Laguerre(args) => cmd_laguerre::<S>(args, cli.order, format),
        Command::Verify(_) => unreachable!("handled by run"),
    }
}

fn parse_one<S: Scalar>(text: &str) -> Result<S> {
    let mut v = parse_coeffs::<S>(text)?;
    if v.len() != 1 {
        return Err(Error::Parse { position: 0, message: format!("expected one scalar, got `{text}`") });
    }
    Ok(v.remove(0))
}

fn render_series<S: Scalar>(s: &TruncatedSeries<S>, format: Format) -> String {
    match format {
        Format::Json => s.to_json().to_string(),
        Format::Csv => {
            let mut out = String::from("n,coeff\n");
            for (n, c) in s.coeffs().iter().enumerate() {
                out.push_str(&format!("{n},{c}\n"));
            }
            out.trim_end().to_string()
        }
        Format::Pretty => s.to_string(),
    }
}

pub fn cmd_series<S: Scalar>(op: &SeriesOp, order: usize, format: Format) -> Result<String> {
    let result = match op {
        SeriesOp::Compose { f, g } => {
            parse_generator::<S>(f, order)?.compose(&parse_generator::<S>(g, order)?)?
        }
        SeriesOp::Invert { f } => parse_generator::<S>(f, order)?.comp_inverse()?,
        SeriesOp::Itlog { f } => itlog(&parse_generator::<S>(f, order)?)?,
        SeriesOp::Iterate { f, s } => {
            let f = parse_generator::<S>(f, order)?;
            let s = parse_one::<S>(s)?;
            match s.to_integer() {
                Some(k) => integer_iterate(&f, k)?,
                None => fractional_iterate(&f, &s)?,
            }
        }
    };
    Ok(render_series(&result, format))
}

fn parse_formulas(text: &str) -> Result<Vec<Formula>> {
    if text.trim() == "all" {
        return Ok(Formula::CONSTRUCTORS.to_vec());
    }
    let list = text.split(',').map(|s| s.trim().parse()).collect::<Result<Vec<Formula>>>()?;
    if list.is_empty() {
        return Err(Error::pre("umbral", "the formula set must be nonempty"));
    }
    Ok(list)
}

fn poly_rows<S: Scalar>(rows: &[Polynomial<S>]) -> Value {
    Value::Array(rows.iter().map(Polynomial::to_json).collect())
}

pub fn cmd_umbral<S: Scalar>(args: &UmbralArgs, order: usize, format: Format) -> Result<Outcome> {
    let f = parse_generator::<S>(&args.f, order)?;
    let spec = UmbralSpec::new(f, args.n)?;
    let formulas = parse_formulas(&args.formulas)?;
    let built = formulas.iter().map(|&fm| Ok((fm, construct(&spec, fm)?))).collect::<Result<Vec<_>>>()?;
    let (_, reference) = &built[0];
    let mut diffs = Vec::new();
    for (fm, u) in &built[1..] {
        let a = u.matrix.compare(&reference.matrix);
        diffs.push((*fm, a));
    }
    let code = if diffs.iter().all(|(_, a)| a.holds()) { 0 } else { 1 };
    let table = |u: &crate::umbral::UmbralOperator<S>| (0..=u.window()).map(|n| u.basic(n).clone()).collect::<Vec<_>>();
    let text = match format {
        Format::Json => {
            let ops: serde_json::Map<String, Value> = built
                .iter()
                .map(|(fm, u)| (fm.name().to_string(), json!({"window": u.window(), "columns": poly_rows(&table(u))})))
                .collect();
            let diff: Vec<Value> = diffs
                .iter()
                .map(|(fm, a)| json!({"formula": fm.name(), "against": built[0].0.name(), "window": a.window, "first_discrepancy": a.first_discrepancy}))
                .collect();
            json!({"f": spec.f().to_json(), "n": args.n, "mode": S::MODE.name(), "operators": ops, "diff": diff}).to_string()
        }
        Format::Csv => {
            let mut out = String::from("formula,n,k,coeff\n");
            for (fm, u) in &built {
                for (n, p) in table(u).iter().enumerate() {
                    for (k, c) in p.coeffs().iter().enumerate() {
                        out.push_str(&format!("{fm},{n},{k},{c}\n"));
                    }
                }
            }
            out.trim_end().to_string()
        }
        Format::Pretty => {
            let mut out = format!("f = {}\n", spec.f());
            for (fm, u) in &built {
                out.push_str(&format!("{fm} (window {})\n", u.window()));
                for (n, p) in table(u).iter().enumerate() {
                    out.push_str(&format!("  phi_{n} = {p}\n"));
                }
            }
            for (fm, a) in &diffs {
                match a.first_discrepancy {
                    None => out.push_str(&format!("{fm} = {} on window {}\n", built[0].0, a.window)),
                    Some(d) => out.push_str(&format!(
                        "{fm} != {}: column {}, coefficient of x^{} (window {})\n",
                        built[0].0, d.col, d.coeff, a.window
                    )),
                }
            }
            out.trim_end().to_string()
        }
    };
    Ok(Outcome { text, code })
}

pub fn cmd_laguerre<S: Scalar>(args: &LaguerreArgs, order: usize, format: Format) -> Result<Outcome> {
    if let Some(which) = &args.check {
        if which != "all" {
            return Err(Error::Parse { position: 0, message: format!("--check takes `all`, got `{which}`") });
        }
        let report = verify::run(Suite::Laguerre, &VerifyConfig { order, ..VerifyConfig::default() });
        return Ok(render_report(&report, Some(format)));
    }
    let rows: Vec<Polynomial<S>> = if args.p == 0 {
        if S::MODE == Mode::Exact {
            return Err(Error::ModeMismatch { expected: "float", found: "p = 0 needs the irrational 1/e".into() });
        }
        stretch_demo(args.n)?
            .into_iter()
            .map(|p| p.coeffs().iter().map(|&c| S::from_json(&Value::from(c))).collect::<Result<Vec<S>>>().map(Polynomial::new))
            .collect::<Result<_>>()?
    } else {
        let alpha = parse_one::<S>(&args.alpha)?;
        let s = parse_one::<S>(&args.s)?;
        if !s.is_one() && !alpha.is_zero() {
            return Err(Error::pre("laguerre", "fractional exponents are defined for alpha = 0"));
        }
        (0..=args.n)
            .map(|n| if s.is_one() { degenerate_laguerre_explicit(args.p, n, &alpha) } else { frac_laguerre(args.p, n, &s) })
            .collect()
    };
    let text = match format {
        Format::Json => json!({"p": args.p, "alpha": args.alpha, "s": args.s, "rows": poly_rows(&rows)}).to_string(),
        Format::Csv => {
            let mut out = String::from("n,k,coeff\n");
            for (n, p) in rows.iter().enumerate() {
                for (k, c) in p.coeffs().iter().enumerate() {
                    out.push_str(&format!("{n},{k},{c}\n"));
                }
            }
            out.trim_end().to_string()
        }
        Format::Pretty => rows.iter().enumerate().map(|(n, p)| format!("L_{n} = {p}")).collect::<Vec<_>>().join("\n"),
    };
    Ok(Outcome::ok(text))
}

fn render_report(report: &verify::VerifyReport, format: Option<Format>) -> Outcome {
    let code = if report.passed() { 0 } else { 1 };
    let text = match format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&report.to_json()).expect("serializable"),
        Format::Csv => {
            let mut out = String::from("identity,status,window,col,coeff\n");
            for r in &report.items {
                let (c, k) = r.first_discrepancy.map_or((String::new(), String::new()), |d| (d.col.to_string(), d.coeff.to_string()));
                let status = match r.status {
                    Status::ExactPass => "exact-pass",
                    Status::ApproxPass => "approx-pass",
                    Status::Fail => "fail",
                };
                out.push_str(&format!("{},{status},{},{c},{k}\n", r.identity, r.window));
            }
            out.trim_end().to_string()
        }
        Format::Pretty => {
            let mut out = String::new();
            for r in &report.items {
                let mark = if r.passed() { "PASS" } else { "FAIL" };
                out.push_str(&format!("{mark} {} (window {})", r.identity, r.window));
                if let Some(d) = r.first_discrepancy {
                    out.push_str(&format!(" first discrepancy at column {}, coefficient {}", d.col, d.coeff));
                }
                if let Some(n) = &r.note {
                    out.push_str(&format!(" [{n}]"));
                }
                out.push('\n');
            }
            let failed = report.failures().count();
            out.push_str(&format!("{} identities, {failed} failed", report.items.len()));
            out
        }
    };
    Outcome { text, code }
}

pub fn cmd_verify(cli: &Cli, args: &VerifyArgs) -> Result<Outcome> {
    let suite: Suite = args.suite.parse()?;
    let mut cfg = VerifyConfig { order: cli.order, ..VerifyConfig::default() };
    cfg.corpus = match &args.corpus {
        Some(path) => load_manifest(path, cli.order)?,
        None => crate::corpus::default_corpus(cli.order),
    };
    if cfg.order < cfg.degree {
        cfg.degree = cfg.order;
    }
    if let Some(seed) = args.seed {
        cfg = cfg.with_seed(seed);
    }
    Ok(render_report(&verify::run(suite, &cfg), cli.format))
}
