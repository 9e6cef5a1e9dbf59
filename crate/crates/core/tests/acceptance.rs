//! Acceptance criteria, one line each. Exact criteria compare with zero
//! tolerance; the float demos use 1e-12. Runs without the libtest harness so
//! the summary is always printed.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use umbral::corpus::default_corpus;
use umbral::report::IdentityReport;
use umbral::umbral::{frac_power, umbral_bucc, UmbralSpec};
use umbral::verify::{self, Suite, VerifyConfig};
use umbral::{Rational, Scalar};

struct Outcome {
    passed: bool,
    detail: String,
}

fn from_reports(items: &[IdentityReport]) -> Outcome {
    let failed: Vec<_> = items.iter().filter(|r| !r.passed()).map(|r| r.identity.as_str()).collect();
    let detail = if failed.is_empty() {
        format!("{} identities", items.len())
    } else {
        format!("{} of {} failed, first {}", failed.len(), items.len(), failed[0])
    };
    Outcome { passed: !items.is_empty() && failed.is_empty(), detail }
}

fn suite(s: Suite, cfg: &VerifyConfig, keep: impl Fn(&IdentityReport) -> bool) -> Outcome {
    let report = verify::run(s, cfg);
    let items: Vec<_> = report.items.into_iter().filter(|r| keep(r)).collect();
    from_reports(&items)
}

fn within(o: Outcome, elapsed: Duration, budget: Option<u64>) -> Outcome {
    match budget {
        Some(b) if elapsed > Duration::from_secs(b) => Outcome {
            passed: false,
            detail: format!("{}; over the {b}s budget", o.detail),
        },
        _ => o,
    }
}

fn half_squared_is_phi(cfg: &VerifyConfig) -> Outcome {
    let mut items = Vec::new();
    for e in cfg.corpus.iter().filter(|e| e.q().is_one()) {
        let name = format!("half-squared/{}", e.name);
        items.push(umbral::report::check(name, "phi^(1/2) phi^(1/2) = phi", || {
            let spec = UmbralSpec::new(e.f.clone(), cfg.degree)?;
            let half = frac_power(&spec, &Rational::ratio(1, 2))?.matrix;
            Ok(half.compose(&half)?.compare(&umbral_bucc(&spec)?.matrix))
        }));
    }
    from_reports(&items)
}

fn main() -> ExitCode {
    let cfg = VerifyConfig { order: 12, degree: 10, corpus: default_corpus(12), seed: 0 };
    let q2 = |r: &IdentityReport| r.identity.starts_with("coeff/2t");
    let unit = |r: &IdentityReport| {
        cfg.corpus.iter().any(|e| e.q().is_one() && r.identity.starts_with(&format!("coeff/{}[", e.name)))
    };
    type Check<'a> = (&'a str, Option<u64>, Box<dyn Fn() -> Outcome + 'a>);
    let criteria: Vec<Check> = vec![
        ("cross-formula agreement, five constructions, N = 10", Some(10), Box::new(|| {
            suite(Suite::Formulas, &cfg, |r| r.identity.starts_with("formulas/"))
        })),
        ("duality between C_f and phi", Some(5), Box::new(|| suite(Suite::Duality, &cfg, |_| true))),
        ("extract_V(phi) = itlog f and the Julia equation", None, Box::new(|| {
            suite(Suite::Main, &cfg, |r| r.identity.ends_with("/extract-v") || r.identity.ends_with("/julia"))
        })),
        ("Pincherle differential equation", None, Box::new(|| suite(Suite::Ode, &cfg, |_| true))),
        ("generating function through t^8", None, Box::new(|| suite(Suite::Genfun, &cfg, |_| true))),
        ("one-parameter group laws", None, Box::new(|| {
            let mut a = suite(Suite::Group, &cfg, |_| true);
            let b = half_squared_is_phi(&cfg);
            a.detail = format!("{}; {}", a.detail, b.detail);
            a.passed &= b.passed;
            a
        })),
        ("coefficient identity, q = 1 and q = 2", None, Box::new(|| {
            let report = verify::run(Suite::Coeff, &cfg);
            let items: Vec<_> = report.items.into_iter().filter(|r| q2(r) || unit(r)).collect();
            from_reports(&items)
        })),
        ("Laguerre grid p <= 3, n <= 10", Some(30), Box::new(|| suite(Suite::Laguerre, &cfg, |_| true))),
        ("operator-calculus kernel", None, Box::new(|| suite(Suite::Kernel, &cfg, |_| true))),
        ("float demos within 1e-12", None, Box::new(|| suite(Suite::Float, &cfg, |_| true))),
    ];

    let mut all = true;
    for (i, (name, budget, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = within(outcome, elapsed, *budget);
        all &= outcome.passed;
        let mark = if outcome.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {mark}: {name} ({}, {:.2}s)", i + 1, outcome.detail, elapsed.as_secs_f64());
    }
    if all {
        println!("acceptance: all criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failures above");
        ExitCode::FAILURE
    }
}
