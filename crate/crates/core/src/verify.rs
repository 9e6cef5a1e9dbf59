//! Identity suites over the generator corpus, assembled into one report.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::corpus::{default_corpus, random_corpus, random_polynomial, random_sparse_operator, rng, CorpusEntry};
use crate::error::{Error, Result};
use crate::laguerre::{
    cross_sequence_check, degenerate_laguerre_explicit, frac_laguerre, laguerre_generator, laguerre_genfun_check,
    laguerre_ode_residual, laguerre_operator_paths, stretch_demo,
};
use crate::operator::{
    boole_check, exponentiation_check, leibniz_check, nth_pincherle_explicit, pincherle_derivative, OperatorMatrix,
};
use crate::poly::Polynomial;
use crate::report::{check, Agreement, Discrepancy, IdentityReport};
use crate::scalar::{Rational, Scalar};
use crate::series::TruncatedSeries;
use crate::umbral::{
    binomial_type_check, coeff_identity_table, construct, extract_v, flow, flow_umbral_check, genfun_check,
    group_law_checks, itlog, iterate, julia_residual, l_duality_check, pincherle_ode_residual, umbral_bucc, Formula,
    UmbralSpec,
};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Formulas,
    Duality,
    Main,
    Ode,
    Genfun,
    Group,
    Coeff,
    Laguerre,
    Kernel,
    Float,
    All,
}

impl Suite {
    pub const EACH: [Suite; 10] = [
        Suite::Formulas,
        Suite::Duality,
        Suite::Main,
        Suite::Ode,
        Suite::Genfun,
        Suite::Group,
        Suite::Coeff,
        Suite::Laguerre,
        Suite::Kernel,
        Suite::Float,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Formulas => "formulas",
            Suite::Duality => "duality",
            Suite::Main => "main",
            Suite::Ode => "ode",
            Suite::Genfun => "genfun",
            Suite::Group => "group",
            Suite::Coeff => "coeff",
            Suite::Laguerre => "laguerre",
            Suite::Kernel => "kernel",
            Suite::Float => "float",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse { position: 0, message: format!("unknown suite `{s}`") })
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    /// Truncation order of the generators.
    pub order: usize,
    /// Degree bound `N` of the operator matrices.
    pub degree: usize,
    pub corpus: Vec<CorpusEntry<Rational>>,
    /// Seed for the random kernel operators.
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { order: 12, degree: 10, corpus: default_corpus(12), seed: 0 }
    }
}

impl VerifyConfig {
    /// Adds three seeded random generators and reseeds the kernel operators.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.corpus.extend(random_corpus(seed, 3, self.order));
        self.seed = seed;
        self
    }
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: Suite,
    /// Sorted by identity name.
    pub items: Vec<IdentityReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(IdentityReport::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &IdentityReport> {
        self.items.iter().filter(|r| !r.passed())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "suite": self.suite.name(),
            "passed": self.passed(),
            "count": self.items.len(),
            "items": self.items,
        })
    }
}

/// Runs a suite; identity failures are report content, never errors.
pub fn run(suite: Suite, cfg: &VerifyConfig) -> VerifyReport {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut items: Vec<IdentityReport> = suites.par_iter().flat_map_iter(|&s| run_one(s, cfg)).collect();
    items.sort_by(|a, b| a.identity.cmp(&b.identity));
    VerifyReport { suite, items }
}

fn run_one(suite: Suite, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    match suite {
        Suite::Formulas => per_entry(cfg, formulas),
        Suite::Duality => per_entry(cfg, duality),
        Suite::Main => {
            let mut out = per_entry(cfg, main_result);
            out.extend(flow_corollary(cfg.degree));
            out
        }
        Suite::Ode => per_entry(cfg, ode),
        Suite::Genfun => per_entry(cfg, genfun),
        Suite::Group => per_entry(cfg, group),
        Suite::Coeff => per_entry(cfg, coeff),
        Suite::Laguerre => laguerre_grid(3, 10),
        Suite::Kernel => kernel(cfg.seed),
        Suite::Float => float_demos(),
        Suite::All => unreachable!("expanded by run"),
    }
}

fn per_entry(
    cfg: &VerifyConfig,
    f: impl Fn(&CorpusEntry<Rational>, &VerifyConfig) -> Vec<IdentityReport> + Sync,
) -> Vec<IdentityReport> {
    cfg.corpus.par_iter().flat_map_iter(|e| f(e, cfg)).collect()
}

fn spec_of(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Result<UmbralSpec<Rational>> {
    UmbralSpec::new(e.f.clone(), cfg.degree)
}

pub fn formulas(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    let spec = match spec_of(e, cfg) {
        Ok(s) => s,
        Err(err) => return vec![IdentityReport::errored(format!("formulas/{}", e.name), "valid generator", &err)],
    };
    let built: Vec<_> = Formula::CONSTRUCTORS.iter().map(|&fm| (fm, construct(&spec, fm))).collect();
    let mut out = Vec::new();
    let reference = built[0].1.as_ref().ok();
    for (fm, u) in &built {
        let u = u.as_ref().map_err(Clone::clone);
        out.push(check(format!("axioms/{}/{fm}", e.name), "phi_0 = 1, phi_n(0) = 0, deg phi_n = n, Q phi_n = n phi_(n-1)", || {
            let u = u.clone()?;
            Ok(u.check_axioms().and(u.check_delta()?))
        }));
        if *fm != Formula::Garsia {
            out.push(check(format!("formulas/{}/{fm}-vs-garsia", e.name), format!("{fm} construction equals the Garsia sum"), || {
                let r = reference.ok_or_else(|| Error::pre("formulas", "reference construction failed"))?;
                Ok(u.clone()?.matrix.compare(&r.matrix))
            }));
        }
    }
    out.push(check(
        format!("binomial-type/{}", e.name),
        "phi_n(x+y) = sum_k binom(n,k) phi_k(x) phi_(n-k)(y), n <= 8",
        || Ok(binomial_type_check(&umbral_bucc(&spec)?, 8)),
    ));
    out
}

pub fn duality(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    vec![check(format!("duality/{}", e.name), "swapping x and D in the normal form of C_f gives phi", || {
        l_duality_check(&umbral_bucc(&spec_of(e, cfg)?)?)
    })]
}

pub fn main_result(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    if !e.q().is_one() {
        return Vec::new();
    }
    let mut out = vec![
        check(format!("main/{}/extract-v", e.name), "log phi = x V(D) with V = itlog f", || {
            let v = extract_v(&umbral_bucc(&spec_of(e, cfg)?)?)?;
            Ok(v.compare(&itlog(&e.f)?))
        }),
        check(format!("main/{}/julia", e.name), "V(f(t)) = f'(t) V(t) for V = itlog f", || {
            let res = julia_residual(&e.f, &itlog(&e.f)?)?;
            Ok(res.compare(&TruncatedSeries::zero(res.order())))
        }),
    ];
    for s in [Rational::from_i64(2), Rational::from_i64(-1), Rational::ratio(1, 2), Rational::ratio(1, 3)] {
        out.push(check(
            format!("main/{}/itlog-homogeneity[s={s}]", e.name),
            "itlog(f^[s]) = s itlog(f)",
            || Ok(itlog(&iterate(&e.f, &s)?)?.compare(&itlog(&e.f)?.scale(&s))),
        ));
    }
    out
}

fn flow_corollary(degree: usize) -> Vec<IdentityReport> {
    let order = degree + 2;
    let fields: [(&str, &[i64]); 3] = [("-t^2", &[0, 0, -1]), ("-t^3", &[0, 0, 0, -1]), ("t^2+t^3", &[0, 0, 1, 1])];
    let mut out = Vec::new();
    for (label, cs) in fields {
        let v = TruncatedSeries::new(cs.iter().map(|&c| Rational::from_i64(c)).collect(), order);
        for s in [Rational::one(), Rational::from_i64(2), Rational::ratio(1, 2)] {
            out.push(check(
                format!("main/flow-umbral[V={label},s={s}]"),
                "exp(s x V(D)) is the umbral operator of the flow exp(s V d/dt) t",
                || flow_umbral_check(&v, &s, degree),
            ));
        }
    }
    out
}

pub fn ode(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    vec![check(format!("ode/{}", e.name), "phi' = x phi (f'(D) - 1)", || {
        Ok(pincherle_ode_residual(&umbral_bucc(&spec_of(e, cfg)?)?)?.zero_check())
    })]
}

pub fn genfun(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    vec![check(format!("genfun/{}", e.name), "sum phi_n(x) t^n/n! = exp(x f(t)) through t^8", || {
        genfun_check(&spec_of(e, cfg)?, 8)
    })]
}

fn group_pairs(q_is_one: bool) -> Vec<(Rational, Rational)> {
    let vals: Vec<Rational> = if q_is_one {
        vec![Rational::ratio(1, 2), Rational::ratio(1, 3), Rational::from_i64(-1)]
    } else {
        vec![Rational::one(), Rational::from_i64(2), Rational::from_i64(-1)]
    };
    vals.iter().flat_map(|s| vals.iter().map(move |t| (s.clone(), t.clone()))).collect()
}

pub fn group(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    let spec = match spec_of(e, cfg) {
        Ok(s) => s,
        Err(err) => return vec![IdentityReport::errored(format!("group/{}", e.name), "valid generator", &err)],
    };
    group_pairs(e.q().is_one())
        .into_par_iter()
        .flat_map_iter(|(s, t)| {
            group_law_checks(&spec, &s, &t).into_iter().map(|mut r| {
                r.identity = format!("group/{}/{}", e.name, r.identity);
                r
            })
        })
        .collect()
}

pub fn coeff(e: &CorpusEntry<Rational>, cfg: &VerifyConfig) -> Vec<IdentityReport> {
    let exps: Vec<Rational> = if e.q().is_one() {
        vec![Rational::ratio(1, 2), Rational::from_i64(2), Rational::from_i64(-1)]
    } else {
        (-1..=3).map(Rational::from_i64).collect()
    };
    let n_max = 8.min(cfg.degree);
    exps.into_par_iter()
        .map(|s| {
            check(
                format!("coeff/{}[s={s}]", e.name),
                "<n k>_(phi^s) = sum_p <n k>_(phi^p) [s p]_q [n-k-s n-k-p]_q q^((n-p)(s-p)), n <= 8",
                || {
                    let table = coeff_identity_table(&spec_of(e, cfg)?, &s, n_max)?;
                    let first = table
                        .iter()
                        .find(|c| !c.residual().is_zero())
                        .map(|c| Discrepancy { col: c.n, coeff: c.k });
                    Ok(Agreement { window: n_max, first_discrepancy: first })
                },
            )
        })
        .collect()
}

fn columns_match(cols: &OperatorMatrix<Rational>, expect: impl Fn(usize) -> Polynomial<Rational>, n_max: usize) -> Agreement {
    let first = (0..=n_max).find_map(|n| {
        let e = expect(n);
        let c = cols.col(n);
        (c != &e).then(|| {
            let k = (0..=n).find(|&k| c.coeff(k) != e.coeff(k)).unwrap_or(0);
            Discrepancy { col: n, coeff: k }
        })
    });
    Agreement { window: n_max, first_discrepancy: first }
}

/// Laguerre identities for `p <= p_max`, `n <= n_max`, `α ∈ {-1, 0, 1, 2}`.
pub fn laguerre_grid(p_max: usize, n_max: usize) -> Vec<IdentityReport> {
    let alphas = [-1i64, 0, 1, 2];
    let cells: Vec<(usize, i64)> = (1..=p_max).flat_map(|p| alphas.iter().map(move |&a| (p, a))).collect();
    let mut out: Vec<IdentityReport> = cells
        .par_iter()
        .flat_map_iter(|&(p, a)| {
            let alpha = Rational::from_i64(a);
            let tag = format!("p={p},alpha={a}");
            vec![
                check(format!("laguerre/operator-path-1[{tag}]"), "(1 - pD^p)^(alpha/p) exp(-x D^(p+1)) x^n equals the explicit sum", || {
                    let (first, _) = laguerre_operator_paths(p, n_max, &alpha)?;
                    Ok(columns_match(&first, |n| degenerate_laguerre_explicit(p, n, &alpha), n_max))
                }),
                check(format!("laguerre/operator-path-2[{tag}]"), "exp(-x D^(p+1) - alpha D^p) x^n equals the explicit sum", || {
                    let (_, second) = laguerre_operator_paths(p, n_max, &alpha)?;
                    Ok(columns_match(&second, |n| degenerate_laguerre_explicit(p, n, &alpha), n_max))
                }),
                check(format!("laguerre/ode[{tag}]"), "x p F^(p+1) + alpha p F^(p) - x F' + n F = 0", || {
                    let first = (0..=n_max)
                        .find_map(|n| laguerre_ode_residual(p, n, &alpha).valuation().map(|k| Discrepancy { col: n, coeff: k }));
                    Ok(Agreement { window: n_max, first_discrepancy: first })
                }),
                check(format!("laguerre/genfun[{tag}]"), "sum L_n t^n/n! = (1+pt^p)^(-alpha/p) exp(x t (1+pt^p)^(-1/p)) through t^7", || {
                    laguerre_genfun_check(p, &alpha, 7)
                }),
            ]
        })
        .collect();
    for p in 1..=p_max {
        for (a, b) in [(1i64, -1i64), (0, 2)] {
            out.push(check(
                format!("laguerre/cross-sequence[p={p},alpha={a},beta={b}]"),
                "L^(a+b)_n(x+y) = sum_k binom(n,k) L^(a)_k(x) L^(b)_(n-k)(y)",
                || {
                    let (alpha, beta) = (Rational::from_i64(a), Rational::from_i64(b));
                    Ok((0..=n_max)
                        .map(|n| cross_sequence_check(p, n, &alpha, &beta))
                        .find(|ag| !ag.holds())
                        .map_or(Agreement { window: n_max, first_discrepancy: None }, |ag| Agreement { window: n_max, ..ag }))
                },
            ));
        }
        for s in [Rational::one(), Rational::ratio(1, 2), Rational::ratio(-1, 3)] {
            out.push(check(format!("laguerre/generator-flow[p={p},s={s}]"), "t (1 + s p t^p)^(-1/p) = exp(-s t^(p+1) d/dt) t", || {
                let order = n_max + 2;
                let v = TruncatedSeries::monomial(p + 1, -Rational::one(), order);
                Ok(laguerre_generator(p, &s, order)?.compare(&flow(&v, &s)?))
            }));
        }
        for s in [Rational::ratio(1, 2), Rational::ratio(-1, 3)] {
            out.push(check(format!("laguerre/fractional[p={p},s={s}]"), "phi^s x^n equals sum_k binom(n/p-1,k) n! (-sp)^k/(n-pk)! x^(n-pk)", || {
                let spec = UmbralSpec::new(laguerre_generator(p, &Rational::one(), n_max + 2)?, n_max)?;
                let m = crate::umbral::frac_power(&spec, &s)?.matrix;
                Ok(columns_match(&m, |n| frac_laguerre(p, n, &s), n_max))
            }));
        }
        out.push(check(format!("laguerre/delta[p={p}]"), "the delta operator is D (1 - pD^p)^(-1/p)", || {
            let order = n_max + 2;
            let q = laguerre_generator(p, &Rational::one(), order)?.comp_inverse()?;
            let mut base = vec![Rational::zero(); order + 1];
            base[0] = Rational::one();
            base[p] = -Rational::from_usize(p);
            let expect = TruncatedSeries::new(base, order).pow_scalar(&Rational::ratio(-1, p as i64))?.shift_up(1);
            Ok(q.compare(&expect))
        }));
    }
    out
}

/// Operator-calculus kernel: Leibniz rule on random sparse operators, the
/// two Pincherle paths, Boole, and the exponentiation identity.
pub fn kernel(seed: u64) -> Vec<IdentityReport> {
    let mut g = rng(seed);
    let cases: Vec<_> = (0..25).map(|_| (random_sparse_operator(&mut g, 12), random_polynomial(&mut g))).collect();
    let mut out: Vec<IdentityReport> = cases
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, (u, p))| {
            vec![
                check(format!("kernel/leibniz[{seed}#{i:02}]"), "U p(x) = sum_k p^(k)(x) U^(k)/k!", || leibniz_check(u, p)),
                check(format!("kernel/nth-pincherle[{seed}#{i:02}]"), "iterated Pincherle derivative equals the alternating sum", || {
                    let mut it = u.clone();
                    let mut acc = Agreement { window: u.window(), first_discrepancy: None };
                    for k in 1..=3 {
                        it = pincherle_derivative(&it)?;
                        acc = acc.and(it.compare(&nth_pincherle_explicit(u, k)?));
                    }
                    Ok(acc)
                }),
            ]
        })
        .collect();
    for n in 0..=4 {
        out.push(check(format!("kernel/boole[n={n}]"), "x^n D^n = (xD)(xD-1)...(xD-n+1)", || Ok(boole_check::<Rational>(n, 10))));
    }
    out.push(check("kernel/exponentiation", "sum x^n (f(D)-D)^n/n! = (e^x)^(f(D)-D) for f = t + t^2", || {
        exponentiation_check(&TruncatedSeries::monomial(2, Rational::one(), 12), 10, 24)
    }));
    out
}

/// Float-mode demonstrations, checked to `1e-12`.
pub fn float_demos() -> Vec<IdentityReport> {
    const TOL: f64 = 1e-12;
    let mut out = Vec::new();
    let stmt = "the umbral operator of t/e has columns e^(-n) x^n";
    out.push(match stretch_demo(10) {
        Ok(cols) => {
            let err = cols
                .iter()
                .enumerate()
                .map(|(n, c)| {
                    let e = Polynomial::monomial(n, (-(n as f64)).exp());
                    (0..=n.max(c.degree().unwrap_or(0))).map(|k| (c.coeff(k) - e.coeff(k)).abs()).fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            IdentityReport::approx("float/stretch-inverse-e", stmt, 10, err <= TOL, format!("max abs error {err:.3e}"))
        }
        Err(e) => IdentityReport::errored("float/stretch-inverse-e", stmt, &e),
    });
    let stmt = "itlog(2t) = ln(2) t";
    let f = TruncatedSeries::new(vec![0.0, 2.0], 12);
    out.push(match itlog(&f) {
        Ok(v) => {
            let expect = TruncatedSeries::monomial(1, 2f64.ln(), 12);
            let err = (0..=12).map(|k| (v.coeff(k) - expect.coeff(k)).abs()).fold(0.0, f64::max);
            IdentityReport::approx("float/itlog-stretch", stmt, 12, err <= TOL, format!("max abs error {err:.3e}"))
        }
        Err(e) => IdentityReport::errored("float/itlog-stretch", stmt, &e),
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_suites_pass_and_sort() {
        let cfg = VerifyConfig::default();
        for s in [Suite::Duality, Suite::Ode, Suite::Float] {
            let r = run(s, &cfg);
            assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
            assert!(r.items.windows(2).all(|w| w[0].identity <= w[1].identity));
        }
        let j = run(Suite::Float, &cfg).to_json();
        assert_eq!(j["schema_version"], 1);
        assert_eq!(j["items"][0]["status"], "approx-pass");
    }
}
