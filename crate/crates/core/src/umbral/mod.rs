//! Umbral operators from a generating series `f`, built by five
//! independent constructions, plus inversion and the axiom checks.
//!
//! The umbral operator `φ` generated by `f` (with `f(0) = 0`, `f'(0) = q != 0`)
//! maps `x^n` to the basic polynomial `φ_n(x)`, where
//! `e^(x f(t)) = sum φ_n(x) t^n / n!`.

mod checks;
mod fractional;
mod iteration;

pub use checks::*;
pub use fractional::*;
pub use iteration::*;

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{gen_pow, km_operator, OperatorMatrix};
use crate::poly::Polynomial;
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{factorial, Scalar};
use crate::series::TruncatedSeries;

/// Which construction produced an operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Formula {
    /// `sum x̂^k/k! E f(D)^k`, `E` evaluation at the origin.
    Garsia,
    /// `Q'(D/Q)^(x̂D+1)`, `Q = f^-1(D)`.
    Steffensen,
    /// `x̂ (D/Q)^(x̂D+1) x̂^-1`, i.e. `φ_n = x (D/Q)^n x^(n-1)`.
    Steffensen2,
    /// `(e^x̂)^(f(D)-D) = sum x̂^k/k! (f(D)-D)^k`.
    Bucc,
    /// `e^(x̂ itlog(f)(D))`.
    ExpItlog,
    Flow,
    Fractional,
    Inverse,
}

impl Formula {
    /// The five constructors selectable from the command line.
    pub const CONSTRUCTORS: [Formula; 5] =
        [Formula::Garsia, Formula::Steffensen, Formula::Steffensen2, Formula::Bucc, Formula::ExpItlog];

    pub fn name(self) -> &'static str {
        match self {
            Formula::Garsia => "garsia",
            Formula::Steffensen => "steffensen",
            Formula::Steffensen2 => "steffensen2",
            Formula::Bucc => "bucc",
            Formula::ExpItlog => "expitlog",
            Formula::Flow => "flow",
            Formula::Fractional => "fractional",
            Formula::Inverse => "inverse",
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Formula::CONSTRUCTORS
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse { position: 0, message: format!("unknown formula `{s}`") })
    }
}

/// A validated generator together with the degree bound for matrices.
#[derive(Clone, Debug)]
pub struct UmbralSpec<S> {
    f: TruncatedSeries<S>,
    degree: usize,
    inverse: OnceLock<TruncatedSeries<S>>,
    itlog: OnceLock<Result<TruncatedSeries<S>>>,
}

impl<S: Scalar> UmbralSpec<S> {
    /// Requires `f(0) = 0`, `f'(0) != 0`, and `f` known at least to `t^degree`.
    pub fn new(f: TruncatedSeries<S>, degree: usize) -> Result<Self> {
        if !f.coeff(0).is_zero() {
            return Err(Error::NotInvertible("f(0) != 0"));
        }
        if f.coeff(1).is_zero() {
            return Err(Error::NotInvertible("f'(0) = 0"));
        }
        if f.order() < degree {
            return Err(Error::pre(
                "UmbralSpec",
                format!("series order {} is below the degree bound {degree}", f.order()),
            ));
        }
        Ok(UmbralSpec { f, degree, inverse: OnceLock::new(), itlog: OnceLock::new() })
    }

    pub fn f(&self) -> &TruncatedSeries<S> {
        &self.f
    }

    /// The multiplier `q = f'(0)`.
    pub fn q(&self) -> S {
        self.f.coeff(1)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// `f^-1`, cached.
    pub fn inverse(&self) -> &TruncatedSeries<S> {
        self.inverse.get_or_init(|| self.f.comp_inverse().expect("validated at construction"))
    }

    /// `itlog(f)`, cached.
    pub fn itlog(&self) -> Result<TruncatedSeries<S>> {
        self.itlog.get_or_init(|| itlog(&self.f)).clone()
    }

    /// `f^[s]`, reusing the cached iterative logarithm for non-integer `s`.
    pub fn iterate(&self, s: &S) -> Result<TruncatedSeries<S>> {
        match s.to_integer() {
            Some(k) => integer_iterate(&self.f, k),
            None if self.q().is_one() => flow(&self.itlog()?, s),
            None => Err(Error::MultiplierNotOne(format!("f'(0) = {}", self.q()))),
        }
    }

    /// The same generator at another degree bound.
    pub fn with_degree(&self, degree: usize) -> Result<Self> {
        Self::new(self.f.clone(), degree)
    }
}

#[derive(Clone, Debug)]
pub struct UmbralOperator<S> {
    pub spec: UmbralSpec<S>,
    pub matrix: OperatorMatrix<S>,
    pub provenance: Formula,
}

impl<S: Scalar> UmbralOperator<S> {
    pub fn window(&self) -> usize {
        self.matrix.window()
    }

    /// `φ_n(x)`.
    pub fn basic(&self, n: usize) -> &Polynomial<S> {
        self.matrix.col(n)
    }

    /// `φ_0 = 1`, `φ_n(0) = 0` for `n > 0`, `deg φ_n = n` with leading coefficient `q^n`.
    pub fn check_axioms(&self) -> Agreement {
        let q = self.spec.q();
        let w = self.window();
        let first = (0..=w).find_map(|n| {
            let p = self.basic(n);
            if n == 0 {
                return (p != &Polynomial::one()).then_some(Discrepancy { col: 0, coeff: 0 });
            }
            if !p.coeff(0).is_zero() {
                return Some(Discrepancy { col: n, coeff: 0 });
            }
            if p.degree() != Some(n) || p.leading() != q.powi(n as i64) {
                return Some(Discrepancy { col: n, coeff: n });
            }
            None
        });
        Agreement { window: w, first_discrepancy: first }
    }

    /// `Q φ_n = n φ_(n-1)` with `Q = f^-1(D)`, i.e. `Q φ = φ D` as matrices.
    pub fn check_delta(&self) -> Result<Agreement> {
        let n = self.matrix.n_in();
        let q = OperatorMatrix::from_d_series(self.spec.inverse(), n);
        let lhs = q.compose(&self.matrix)?;
        let rhs = self.matrix.compose(&OperatorMatrix::d_power(1, n))?;
        Ok(lhs.compare(&rhs))
    }
}

/// Builds `φ` with the requested construction.
pub fn construct<S: Scalar>(spec: &UmbralSpec<S>, formula: Formula) -> Result<UmbralOperator<S>> {
    match formula {
        Formula::Garsia => umbral_garsia(spec),
        Formula::Steffensen => umbral_steffensen(spec),
        Formula::Steffensen2 => umbral_steffensen2(spec),
        Formula::Bucc => umbral_bucc(spec),
        Formula::ExpItlog => umbral_exp_itlog(spec),
        other => Err(Error::pre("construct", format!("`{other}` is not a constructor"))),
    }
}

fn wrap<S: Scalar>(spec: &UmbralSpec<S>, matrix: OperatorMatrix<S>, provenance: Formula) -> UmbralOperator<S> {
    UmbralOperator { spec: spec.clone(), matrix, provenance }
}

fn x_pow_over_factorial<S: Scalar>(k: usize) -> Polynomial<S> {
    Polynomial::monomial(k, S::one() / factorial::<S>(k))
}

/// `φ = sum_k x̂^k/k! E f(D)^k`.
pub fn umbral_garsia<S: Scalar>(spec: &UmbralSpec<S>) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    let eval = OperatorMatrix::evaluation(n);
    let mut fk = TruncatedSeries::one(spec.order());
    let mut acc: Option<OperatorMatrix<S>> = None;
    for k in 0..=n {
        let term = eval
            .compose(&OperatorMatrix::from_d_series(&fk, n))?
            .left_mul_poly(&x_pow_over_factorial(k));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
        fk = &fk * spec.f();
    }
    Ok(wrap(spec, acc.expect("n >= 0"), Formula::Garsia))
}

/// `D/Q` as a series in `D`: `t / f^-1(t)`.
fn d_over_q<S: Scalar>(spec: &UmbralSpec<S>) -> Result<TruncatedSeries<S>> {
    spec.inverse().shift_down(1)?.reciprocal()
}

/// `φ = Q'(D/Q)^(x̂D+1)`.
pub fn umbral_steffensen<S: Scalar>(spec: &UmbralSpec<S>) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    let base = OperatorMatrix::from_d_series(&d_over_q(spec)?, n);
    let exponent = OperatorMatrix::diagonal(n, |k| S::from_usize(k + 1));
    let power = gen_pow(&base, &exponent, None)?;
    let q_prime = OperatorMatrix::from_d_series(&spec.inverse().derivative(), n);
    Ok(wrap(spec, q_prime.compose(&power)?, Formula::Steffensen))
}

/// `φ_n = x (D/Q)^n x^(n-1)` as the operator `x̂ (D/Q)^(x̂D+1) x̂^-1`, with
/// `φ_0 = 1` fixed by the axioms.
///
/// The exponent is `x̂D + 1` because `x̂D` sees `x^(n-1)`, not `x^n`. It is
/// applied as `(D/Q) (D/Q)^(x̂D)`, which holds under the left-placement convention.
pub fn umbral_steffensen2<S: Scalar>(spec: &UmbralSpec<S>) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    let base = OperatorMatrix::from_d_series(&d_over_q(spec)?, n);
    let power = base.compose(&gen_pow(&base, &OperatorMatrix::diagonal(n, S::from_usize), None)?)?;
    // x̂^-1 on x^n, n >= 1; the image of 1 is overwritten below.
    let lower = OperatorMatrix::from_exact_columns(
        (0..=n).map(|k| if k == 0 { Polynomial::zero() } else { Polynomial::x_pow(k - 1) }).collect(),
    );
    let mut m = power.compose(&lower)?.mul_x();
    m.set_column(0, Polynomial::one());
    Ok(wrap(spec, m, Formula::Steffensen2))
}

/// `φ = sum_k x̂^k/k! (f(D) - D)^k`.
pub fn umbral_bucc<S: Scalar>(spec: &UmbralSpec<S>) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    let h = spec.f() - &TruncatedSeries::var(spec.order());
    let gs: Vec<_> = (0..=n).map(x_pow_over_factorial).collect();
    let hs: Vec<_> = (0..=n).map(|k| h.pow(k)).collect();
    let m = km_operator(&gs, &hs, &OperatorMatrix::d_power(1, n))?;
    Ok(wrap(spec, m, Formula::Bucc))
}

/// `φ = e^(x̂ itlog(f)(D))`.
///
/// For `q != 1` the generator is factored as `f = (q t) ∘ (f / q)`, so
/// `φ = str_q · e^(x̂ itlog(f/q)(D))` stays in exact arithmetic.
pub fn umbral_exp_itlog<S: Scalar>(spec: &UmbralSpec<S>) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    let q = spec.q();
    let v = if q.is_one() { spec.itlog()? } else { itlog(&spec.f().scale(&(S::one() / &q)))? };
    let m = exp_x_v(&v, n)?;
    let m = if q.is_one() { m } else { OperatorMatrix::diagonal(n, |k| q.powi(k as i64)).compose(&m)? };
    Ok(wrap(spec, m, Formula::ExpItlog))
}

/// `e^(x̂ V(D))` for `V(0) = V'(0) = 0`.
pub fn exp_x_v<S: Scalar>(v: &TruncatedSeries<S>, n: usize) -> Result<OperatorMatrix<S>> {
    crate::operator::exp_loc_nilpotent(&OperatorMatrix::from_d_series(v, n).mul_x())
}

/// Triangular inverse of `φ`; it is the umbral operator generated by `f^-1`.
pub fn umbral_inverse<S: Scalar>(u: &UmbralOperator<S>) -> Result<UmbralOperator<S>> {
    let w = u.window();
    let mut cols: Vec<Polynomial<S>> = Vec::with_capacity(w + 1);
    for n in 0..=w {
        let phi_n = u.basic(n);
        let lead = phi_n.coeff(n);
        if lead.is_zero() || phi_n.degree() != Some(n) {
            return Err(Error::pre("umbral_inverse", format!("column {n} is not of degree {n}")));
        }
        let mut p = Polynomial::x_pow(n);
        for (m, psi_m) in cols.iter().enumerate() {
            let a = phi_n.coeff(m);
            if !a.is_zero() {
                p = &p - &psi_m.scale(&a);
            }
        }
        cols.push(p.scale(&(S::one() / lead)));
    }
    let spec = UmbralSpec::new(u.spec.inverse().clone(), u.spec.degree().min(u.spec.order()))?;
    Ok(UmbralOperator { spec, matrix: OperatorMatrix::from_exact_columns(cols), provenance: Formula::Inverse })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn gen(cs: &[(i64, i64)], order: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::generator(&cs.iter().map(|&(n, d)| r(n, d)).collect::<Vec<_>>(), order)
    }

    fn geometric(order: usize) -> TruncatedSeries<Rational> {
        // t/(1+t)
        TruncatedSeries::new(
            (0..=order).map(|k| if k == 0 { r(0, 1) } else { r(if k % 2 == 1 { 1 } else { -1 }, 1) }).collect(),
            order,
        )
    }

    fn each_formula(f: TruncatedSeries<Rational>, n: usize) -> Vec<UmbralOperator<Rational>> {
        let spec = UmbralSpec::new(f, n).unwrap();
        Formula::CONSTRUCTORS.iter().map(|&fm| construct(&spec, fm).unwrap()).collect()
    }

    #[test]
    fn identity_generator_gives_identity() {
        for u in each_formula(TruncatedSeries::var(8), 6) {
            assert!(u.matrix.compare(&OperatorMatrix::identity(6)).holds(), "{}", u.provenance);
        }
    }

    #[test]
    fn stretch_generator_gives_stretch() {
        let lam = r(-3, 2);
        for u in each_formula(TruncatedSeries::var(8).scale(&lam), 6) {
            for n in 0..=u.window() {
                assert_eq!(u.basic(n), &Polynomial::monomial(n, lam.powi(n as i64)), "{}", u.provenance);
            }
        }
    }

    #[test]
    fn laguerre_generator_column_two() {
        let expect = Polynomial::new(vec![r(0, 1), r(-2, 1), r(1, 1)]);
        for u in each_formula(geometric(10), 6) {
            assert_eq!(u.basic(2), &expect, "{}", u.provenance);
            assert!(u.check_axioms().holds());
            assert!(u.check_delta().unwrap().holds());
        }
    }

    #[test]
    fn linear_coefficient_rule() {
        let spec = UmbralSpec::new(gen(&[(2, 1), (1, 1)], 8), 4).unwrap();
        let u = umbral_bucc(&spec).unwrap();
        assert_eq!(u.basic(1), &Polynomial::monomial(1, r(2, 1)));
    }

    #[test]
    fn inverse_matches_inverse_generator() {
        let spec = UmbralSpec::new(geometric(10), 8).unwrap();
        let u = umbral_garsia(&spec).unwrap();
        let inv = umbral_inverse(&u).unwrap();
        let direct = umbral_garsia(&inv.spec).unwrap();
        assert!(inv.matrix.compare(&direct.matrix).holds());
        assert!(inv.matrix.compose(&u.matrix).unwrap().compare(&OperatorMatrix::identity(8)).holds());
        // str_lambda^-1 = str_(1/lambda)
        let st = umbral_bucc(&UmbralSpec::new(TruncatedSeries::var(6).scale(&r(5, 1)), 6).unwrap()).unwrap();
        let st_inv = umbral_inverse(&st).unwrap();
        for n in 0..=6 {
            assert_eq!(st_inv.basic(n), &Polynomial::monomial(n, r(1, 5).powi(n as i64)));
        }
    }

    #[test]
    fn generator_validation() {
        assert!(UmbralSpec::new(TruncatedSeries::<Rational>::one(5), 3).is_err());
        assert!(UmbralSpec::new(TruncatedSeries::<Rational>::monomial(2, r(1, 1), 5), 3).is_err());
        assert!(UmbralSpec::new(TruncatedSeries::<Rational>::var(3), 5).is_err());
    }
}
