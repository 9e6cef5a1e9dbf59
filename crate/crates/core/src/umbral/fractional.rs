//! Fractional powers `φ^s` and their delta operators.

use crate::error::{Error, Result};
use crate::operator::OperatorMatrix;
use crate::report::IdentityReport;
use crate::scalar::{qbinom, Scalar};

use super::{exp_x_v, integer_iterate, umbral_bucc, umbral_exp_itlog, Formula, UmbralOperator, UmbralSpec};

/// `Q^[s] = f^[-s](D)`, the delta operator of `φ^s`.
pub fn delta_operator<S: Scalar>(spec: &UmbralSpec<S>, s: &S) -> Result<OperatorMatrix<S>> {
    let g = if s.is_one() { spec.inverse().clone() } else { spec.iterate(&-s.clone())? };
    Ok(OperatorMatrix::from_d_series(&g, spec.degree()))
}

/// `φ^s = e^(s x̂ itlog(f)(D))`, the umbral operator generated by `f^[s]`.
///
/// Integer `s` is accepted for any multiplier through integer iterates.
pub fn frac_power<S: Scalar>(spec: &UmbralSpec<S>, s: &S) -> Result<UmbralOperator<S>> {
    let n = spec.degree();
    if spec.q().is_one() {
        let matrix = exp_x_v(&spec.itlog()?.scale(s), n)?;
        let fs = UmbralSpec::new(spec.iterate(s)?, n)?;
        return Ok(UmbralOperator { spec: fs, matrix, provenance: Formula::Fractional });
    }
    let Some(k) = s.to_integer() else {
        return Err(Error::MultiplierNotOne(format!("fractional power {s} with f'(0) = {}", spec.q())));
    };
    let fk = UmbralSpec::new(integer_iterate(spec.f(), k)?, n)?;
    let mut u = umbral_exp_itlog(&fk)?;
    u.provenance = Formula::Fractional;
    Ok(u)
}

/// The three one-parameter group identities for `φ^s`, `φ^t`.
pub fn group_law_checks<S: Scalar>(spec: &UmbralSpec<S>, s: &S, t: &S) -> Vec<IdentityReport> {
    let label = |name: &str| format!("{name}[s={s},t={t}]");
    let run = |name: &str, statement: &str, check: &dyn Fn() -> Result<crate::report::Agreement>| match check() {
        Ok(a) => IdentityReport::from_agreement(label(name), statement, a),
        Err(e) => IdentityReport::errored(label(name), statement, &e),
    };
    let st = s.clone() + t;
    let phi_s = frac_power(spec, s).map(|u| u.matrix);
    let phi_s = || phi_s.clone();
    vec![
        run("group.power", "phi^(s+t) = phi^s phi^t", &|| {
            let lhs = frac_power(spec, &st)?.matrix;
            Ok(lhs.compare(&phi_s()?.compose(&frac_power(spec, t)?.matrix)?))
        }),
        run("group.intertwining", "Q^[t] phi^s = phi^s Q^[t-s]", &|| {
            let phi_s = phi_s()?;
            let lhs = delta_operator(spec, t)?.compose(&phi_s)?;
            let rhs = phi_s.compose(&delta_operator(spec, &(t.clone() - s))?)?;
            Ok(lhs.compare(&rhs))
        }),
        run("group.diamond", "Q^[s+t] = (f^[-s] o f^[-t])(D)", &|| {
            let g = spec.iterate(&-s.clone())?.compose(&spec.iterate(&-t.clone())?)?;
            let lhs = OperatorMatrix::from_d_series(&g, spec.degree());
            Ok(lhs.compare(&delta_operator(spec, &st)?))
        }),
    ]
}

/// One entry of the coefficient identity: `<n k>` is `[x^k] φ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffResidual<S> {
    pub n: usize,
    pub k: usize,
    pub lhs: S,
    pub rhs: S,
}

impl<S: Scalar> CoeffResidual<S> {
    pub fn residual(&self) -> S {
        self.lhs.clone() - &self.rhs
    }
}

fn q_power<S: Scalar>(q: &S, e: &S) -> Result<S> {
    if q.is_one() {
        return Ok(S::one());
    }
    match e.to_integer() {
        Some(k) => Ok(q.powi(k)),
        None => q.powf(e).ok_or_else(|| Error::MultiplierNotOne(format!("{q}^{e} is not exact"))),
    }
}

/// `<n k>_(φ^s) = sum_p <n k>_(φ^p) [s p]_q [n-k-s, n-k-p]_q q^((n-p)(s-p))` for all `k <= n <= n_max`.
///
/// The left side comes from [`frac_power`], the right side from integer matrix
/// powers of the operator built by [`umbral_bucc`].
pub fn coeff_identity_table<S: Scalar>(spec: &UmbralSpec<S>, s: &S, n_max: usize) -> Result<Vec<CoeffResidual<S>>> {
    let spec = spec.with_degree(n_max)?;
    let q = spec.q();
    let lhs = frac_power(&spec, s)?.matrix;
    let phi = umbral_bucc(&spec)?.matrix;
    let mut powers = vec![OperatorMatrix::identity(n_max)];
    for p in 1..=n_max {
        powers.push(powers[p - 1].compose(&phi)?);
    }
    let mut out = Vec::new();
    for n in 0..=n_max {
        for k in 0..=n {
            let top = S::from_usize(n - k) - s;
            let mut rhs = S::zero();
            for (p, pw) in powers.iter().enumerate().take(n - k + 1) {
                let c = pw.entry(k, n);
                if c.is_zero() {
                    continue;
                }
                let pp = S::from_usize(p);
                let e = S::from_usize(n - p) * (s.clone() - &pp);
                rhs = rhs + c * qbinom(s, p, &q)? * qbinom(&top, n - k - p, &q)? * q_power(&q, &e)?;
            }
            out.push(CoeffResidual { n, k, lhs: lhs.entry(k, n), rhs });
        }
    }
    Ok(out)
}

/// Residual `LHS - RHS` of the coefficient identity at one `(n, k)`.
pub fn coeff_identity_check<S: Scalar>(spec: &UmbralSpec<S>, n: usize, k: usize, s: &S) -> Result<S> {
    if k > n {
        return Err(Error::pre("coeff_identity_check", "need k <= n"));
    }
    let table = coeff_identity_table(spec, s, n)?;
    Ok(table.into_iter().find(|c| c.n == n && c.k == k).expect("k <= n").residual())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::Rational;
    use crate::series::TruncatedSeries;
    use crate::umbral::fractional_iterate;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn spec(cs: &[i64], n: usize) -> UmbralSpec<Rational> {
        UmbralSpec::new(TruncatedSeries::generator(&cs.iter().map(|&c| r(c, 1)).collect::<Vec<_>>(), 12), n).unwrap()
    }

    fn geometric(n: usize) -> UmbralSpec<Rational> {
        UmbralSpec::new(
            TruncatedSeries::new((0..=12).map(|k| r(if k == 0 { 0 } else if k % 2 == 1 { 1 } else { -1 }, 1)).collect(), 12),
            n,
        )
        .unwrap()
    }

    #[test]
    fn trivial_powers() {
        let sp = spec(&[1, 1], 8);
        assert!(frac_power(&sp, &r(0, 1)).unwrap().matrix.compare(&OperatorMatrix::identity(8)).holds());
        let one = frac_power(&sp, &r(1, 1)).unwrap();
        assert!(one.matrix.compare(&umbral_bucc(&sp).unwrap().matrix).holds());
    }

    #[test]
    fn half_power_is_umbral_of_half_iterate() {
        let sp = spec(&[1, 1], 8);
        let half = frac_power(&sp, &r(1, 2)).unwrap();
        let via_iterate = umbral_bucc(&UmbralSpec::new(fractional_iterate(sp.f(), &r(1, 2)).unwrap(), 8).unwrap()).unwrap();
        assert!(half.matrix.compare(&via_iterate.matrix).holds());
    }

    #[test]
    fn half_laguerre_column() {
        // x^3 - 3x^2 + 3/2 x
        let half = frac_power(&geometric(6), &r(1, 2)).unwrap();
        assert_eq!(half.basic(3), &Polynomial::new(vec![r(0, 1), r(3, 2), r(-3, 1), r(1, 1)]));
    }

    #[test]
    fn delta_of_geometric() {
        // D/(1-D)
        let q = delta_operator(&geometric(8), &r(1, 1)).unwrap();
        let expect = TruncatedSeries::new((0..=12).map(|k| r(if k == 0 { 0 } else { 1 }, 1)).collect(), 12);
        assert!(q.compare(&OperatorMatrix::from_d_series(&expect, 8)).holds());
    }

    #[test]
    fn group_laws() {
        let sp = geometric(8);
        for (s, t) in [(r(0, 1), r(0, 1)), (r(1, 2), r(1, 2)), (r(1, 3), r(-1, 1))] {
            for rep in group_law_checks(&sp, &s, &t) {
                assert!(rep.passed(), "{rep:?}");
            }
        }
    }

    #[test]
    fn coefficient_identity_unit_multiplier() {
        let sp = spec(&[1, 0, 1], 5);
        assert!(coeff_identity_check(&sp, 5, 2, &r(1, 2)).unwrap().is_zero());
        for row in coeff_identity_table(&sp, &r(1, 3), 6).unwrap() {
            assert!(row.residual().is_zero(), "{row:?}");
        }
    }

    #[test]
    fn coefficient_identity_multiplier_two() {
        let sp = spec(&[2, 1], 5);
        for s in [-1, 0, 1, 2, 3] {
            for row in coeff_identity_table(&sp, &r(s, 1), 5).unwrap() {
                assert!(row.residual().is_zero(), "s={s} {row:?}");
            }
        }
        assert!(coeff_identity_table(&sp, &r(1, 2), 5).is_err());
    }
}
