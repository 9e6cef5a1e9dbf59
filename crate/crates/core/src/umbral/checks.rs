//! Identity checks on constructed umbral operators.

use crate::bivariate::BiPoly;
use crate::error::{Error, Result};
use crate::operator::{log_unipotent, normal_form, op_from_normal_form, pincherle_derivative, OperatorMatrix};
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{factorial, gbinom, Scalar};
use crate::series::TruncatedSeries;

use super::{construct, exp_x_v, flow, umbral_bucc, umbral_exp_itlog, Formula, UmbralOperator, UmbralSpec};

/// Recovers `V` from `φ = e^(x̂ V(D))`.
///
/// Fails with [`Error::Inconsistent`] when `log φ` has any normal-form
/// support off the row `x̂^1 D^k`, `k >= 1`.
pub fn extract_v<S: Scalar>(u: &UmbralOperator<S>) -> Result<TruncatedSeries<S>> {
    let w = u.window();
    let log = log_unipotent(&u.matrix)?;
    let nf = normal_form(&log, w)?;
    let mut v = vec![S::zero(); w + 1];
    for (j, k, c) in nf.entries() {
        if j != 1 || k == 0 {
            return Err(Error::Inconsistent {
                op: "extract_v",
                reason: format!("log has a term at x̂^{j} D^{k}"),
            });
        }
        v[k] = c.clone();
    }
    Ok(TruncatedSeries::new(v, w))
}

/// Checks `sum φ_n(x) t^n/n! = e^(x f(t))` through `t^t_order`, using Formula 6.
pub fn genfun_check<S: Scalar>(spec: &UmbralSpec<S>, t_order: usize) -> Result<Agreement> {
    if t_order > spec.degree() {
        return Err(Error::WindowUnderflow {
            op: "genfun_check",
            requested: t_order as i64,
            achievable: spec.degree() as i64,
        });
    }
    genfun_residual(&umbral_exp_itlog(spec)?, t_order)
}

/// Compares `[x^k] φ_n / n!` against `[t^n] f(t)^k / k!` for every `k`, `n <= t_order`.
pub fn genfun_residual<S: Scalar>(u: &UmbralOperator<S>, t_order: usize) -> Result<Agreement> {
    if t_order > u.window() {
        return Err(Error::WindowUnderflow {
            op: "genfun_residual",
            requested: t_order as i64,
            achievable: u.window() as i64,
        });
    }
    let f = u.spec.f().truncate(t_order);
    let mut fk = TruncatedSeries::one(t_order);
    let mut first = None;
    // For k > n both sides vanish: deg φ_n = n and ord f^k = k.
    'outer: for k in 0..=t_order {
        let kf = factorial::<S>(k);
        for n in 0..=t_order {
            let lhs = u.basic(n).coeff(k) / factorial::<S>(n);
            let rhs = fk.coeff(n) / &kf;
            if lhs != rhs {
                first = Some(Discrepancy { col: n, coeff: k });
                break 'outer;
            }
        }
        fk = &fk * &f;
    }
    Ok(Agreement { window: t_order, first_discrepancy: first })
}

/// `φ' - x̂ φ (f'(D) - 1)`, which vanishes for an umbral operator.
pub fn pincherle_ode_residual<S: Scalar>(u: &UmbralOperator<S>) -> Result<OperatorMatrix<S>> {
    if u.window() < 2 {
        return Err(Error::pre("pincherle_ode_residual", "window must be at least 2"));
    }
    let n = u.matrix.n_in();
    let lhs = pincherle_derivative(&u.matrix)?;
    let fp = OperatorMatrix::from_d_series(&u.spec.f().derivative(), n).sub_identity();
    let rhs = u.matrix.compose(&fp)?.mul_x();
    Ok(lhs.sub(&rhs))
}

/// `φ_n(x + y) = sum_k binom(n, k) φ_k(x) φ_(n-k)(y)` for `n <= n_max`.
pub fn binomial_type_check<S: Scalar>(u: &UmbralOperator<S>, n_max: usize) -> Agreement {
    let n_max = n_max.min(u.window());
    let mut out = Agreement { window: n_max, first_discrepancy: None };
    for n in 0..=n_max {
        let lhs = BiPoly::of_sum(u.basic(n));
        let nn = S::from_usize(n);
        let mut rhs = BiPoly::zero();
        for k in 0..=n {
            let term = BiPoly::in_first(u.basic(k)).mul(&BiPoly::in_second(u.basic(n - k)));
            rhs = rhs.add(&term.scale(&gbinom(&nn, k)));
        }
        if let Some(d) = lhs.compare(&rhs, n_max).first_discrepancy {
            // report the column; `coeff` carries the x-degree of the bad term
            out.first_discrepancy = Some(Discrepancy { col: n, coeff: d.col });
            break;
        }
    }
    out
}

/// The transform swapping `x̂` and `D` takes `C_f` to `φ`.
pub fn l_duality_check<S: Scalar>(u: &UmbralOperator<S>) -> Result<Agreement> {
    let n = u.window();
    let c = OperatorMatrix::composition(u.spec.f(), n)?;
    let rebuilt = op_from_normal_form(&normal_form(&c, n)?.l_transform(), n);
    Ok(rebuilt.compare(&u.matrix))
}

/// Each requested construction compared with the first one.
pub fn cross_formula_check<S: Scalar>(
    spec: &UmbralSpec<S>,
    formulas: &[Formula],
) -> Result<Vec<(Formula, Agreement)>> {
    let Some((&base, rest)) = formulas.split_first() else {
        return Ok(Vec::new());
    };
    let reference = construct(spec, base)?;
    rest.iter()
        .map(|&fm| Ok((fm, construct(spec, fm)?.matrix.compare(&reference.matrix))))
        .collect()
}

/// `e^(s x̂ V(D))` equals the umbral operator generated by the flow `exp(s V d/dt) t`.
pub fn flow_umbral_check<S: Scalar>(v: &TruncatedSeries<S>, s: &S, n: usize) -> Result<Agreement> {
    let lhs = exp_x_v(&v.scale(s), n)?;
    let g = flow(v, s)?;
    let rhs = umbral_bucc(&UmbralSpec::new(g, n)?)?;
    Ok(lhs.compare(&rhs.matrix))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::umbral::itlog;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn corpus() -> Vec<TruncatedSeries<Rational>> {
        let g = |cs: &[(i64, i64)]| {
            TruncatedSeries::generator(&cs.iter().map(|&(n, d)| r(n, d)).collect::<Vec<_>>(), 12)
        };
        let geometric = TruncatedSeries::new(
            (0..=12).map(|k| r(if k == 0 { 0 } else if k % 2 == 1 { 1 } else { -1 }, 1)).collect(),
            12,
        );
        vec![
            g(&[(1, 1)]),
            g(&[(1, 1), (1, 1)]),
            geometric,
            g(&[(1, 1), (1, 2), (1, 6)]),
            g(&[(1, 1), (0, 1), (-1, 6)]),
            g(&[(2, 1)]),
            g(&[(2, 1), (1, 1)]),
            g(&[(1, 3), (1, 1)]),
        ]
    }

    #[test]
    fn all_formulas_agree_on_corpus() {
        for f in corpus() {
            let spec = UmbralSpec::new(f.clone(), 10).unwrap();
            for (fm, a) in cross_formula_check(&spec, &Formula::CONSTRUCTORS).unwrap() {
                assert!(a.holds(), "{fm} on {f}: {a:?}");
                assert!(a.window >= 9);
            }
        }
    }

    #[test]
    fn corpus_identities() {
        for f in corpus() {
            let spec = UmbralSpec::new(f.clone(), 10).unwrap();
            let u = umbral_bucc(&spec).unwrap();
            assert!(l_duality_check(&u).unwrap().holds(), "{f}");
            assert!(pincherle_ode_residual(&u).unwrap().is_zero_on_window(), "{f}");
            assert!(genfun_check(&spec, 8).unwrap().holds(), "{f}");
            assert!(binomial_type_check(&u, 8).holds(), "{f}");
            if spec.q().is_one() {
                let v = extract_v(&u).unwrap();
                assert_eq!(v, itlog(&f).unwrap().truncate(10), "{f}");
                assert!(v.coeff(0).is_zero());
            }
        }
    }

    #[test]
    fn extract_from_exponential() {
        // e^(-x̂ D^2)
        let v = TruncatedSeries::monomial(2, r(-1, 1), 10);
        let phi = exp_x_v(&v, 10).unwrap();
        let spec = UmbralSpec::new(flow(&v, &r(1, 1)).unwrap(), 10).unwrap();
        let u = UmbralOperator { spec, matrix: phi, provenance: Formula::ExpItlog };
        assert_eq!(extract_v(&u).unwrap(), v);
    }

    #[test]
    fn extract_rejects_non_umbral() {
        let spec = UmbralSpec::new(TruncatedSeries::var(6), 6).unwrap();
        let m = OperatorMatrix::from_d_series(&TruncatedSeries::new(vec![r(1, 1), r(0, 1), r(1, 1)], 6), 6);
        let u = UmbralOperator { spec, matrix: m, provenance: Formula::Bucc };
        assert!(matches!(extract_v(&u), Err(Error::Inconsistent { .. })));
    }

    #[test]
    fn flows_are_umbral() {
        for v in [vec![0, 0, -1], vec![0, 0, 0, -1], vec![0, 0, 1, 1]] {
            let v = TruncatedSeries::new(v.into_iter().map(|c| r(c, 1)).collect(), 10);
            for s in [r(1, 1), r(2, 1), r(1, 2)] {
                assert!(flow_umbral_check(&v, &s, 10).unwrap().holds());
            }
        }
    }

    #[test]
    fn stretch_ode() {
        let lam = r(3, 1);
        let spec = UmbralSpec::new(TruncatedSeries::var(10).scale(&lam), 8).unwrap();
        let u = umbral_bucc(&spec).unwrap();
        let lhs = pincherle_derivative(&u.matrix).unwrap();
        let rhs = u.matrix.mul_x().scale(&(lam - r(1, 1)));
        assert!(lhs.compare(&rhs).holds());
    }
}
