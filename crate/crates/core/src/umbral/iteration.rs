//! Iterative logarithms, flows of formal vector fields, and iterates.

use crate::error::{Error, Result};
use crate::operator::{exp_loc_nilpotent, log_unipotent, OperatorMatrix};
use crate::poly::Polynomial;
use crate::scalar::Scalar;
use crate::series::TruncatedSeries;

fn check_generator<S: Scalar>(op: &'static str, f: &TruncatedSeries<S>) -> Result<()> {
    if !f.coeff(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    if f.coeff(1).is_zero() {
        return Err(Error::pre(op, "f'(0) = 0"));
    }
    Ok(())
}

/// Iterative logarithm: the `V` with `V(f(t)) = f'(t) V(t)` and `V'(0) = ln f'(0)`.
///
/// For `f'(0) = 1` this is `log(C_f) t` and works in both modes. With
/// `f'(0) = q != 1` only float mode can proceed, solving the functional
/// equation coefficient by coefficient (requires `q > 0` and `q` not a root of unity).
pub fn itlog<S: Scalar>(f: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    check_generator("itlog", f)?;
    let order = f.order();
    let q = f.coeff(1);
    if q.is_one() {
        let log = log_unipotent(&OperatorMatrix::composition(f, order)?)?;
        let v = log.apply(&Polynomial::x_pow(1))?;
        return Ok(TruncatedSeries::from_polynomial(&v, order));
    }
    let Some(ln_q) = q.ln() else {
        return Err(Error::MultiplierNotOne(format!("f'(0) = {q}")));
    };
    // powers[m] = f^m
    let mut powers = vec![TruncatedSeries::one(order)];
    for m in 1..order {
        powers.push(&powers[m - 1] * f);
    }
    let mut v = vec![S::zero(), ln_q];
    for n in 2..=order {
        let mut rhs = S::zero();
        for i in 1..n {
            rhs = rhs + S::from_usize(i + 1) * f.coeff(i + 1) * &v[n - i];
        }
        for (m, vm) in v.iter().enumerate().take(n).skip(1) {
            rhs = rhs - vm.clone() * powers[m].coeff(n);
        }
        let denom = q.powi(n as i64) - &q;
        if denom.is_zero() {
            return Err(Error::MultiplierNotOne(format!("f'(0) = {q} is a root of unity")));
        }
        v.push(rhs / denom);
    }
    Ok(TruncatedSeries::new(v, order))
}

/// `V(f(t)) - f'(t) V(t)`.
///
/// The coefficient of `t^N` in `f' V` needs `f'` only to `t^(N-1)` once
/// `V(0) = 0`, so the residual is reported to the full order in that case.
pub fn julia_residual<S: Scalar>(f: &TruncatedSeries<S>, v: &TruncatedSeries<S>) -> Result<TruncatedSeries<S>> {
    let order = f.order().min(v.order());
    let f = f.truncate(order);
    let v = v.truncate(order);
    let lhs = v.compose(&f)?;
    let fp = f.derivative();
    let fp = if v.coeff(0).is_zero() { TruncatedSeries::new(fp.coeffs().to_vec(), order) } else { fp };
    Ok(&lhs - &(&fp * &v))
}

/// Time-`s` flow `exp(s V(x) d/dx) x` of a vector field with `V(0) = V'(0) = 0`.
pub fn flow<S: Scalar>(v: &TruncatedSeries<S>, s: &S) -> Result<TruncatedSeries<S>> {
    let order = v.order();
    if v.is_zero() || s.is_zero() {
        return Ok(TruncatedSeries::var(order));
    }
    if v.ord().is_some_and(|k| k < 2) {
        return Err(Error::pre("flow", "the vector field must vanish to second order"));
    }
    let e = exp_loc_nilpotent(&OperatorMatrix::vector_field(v)?.scale(s))?;
    Ok(TruncatedSeries::from_polynomial(&e.apply(&Polynomial::x_pow(1))?, order))
}

/// `f^[s]` for `f'(0) = 1`, as the flow of `itlog f`.
pub fn fractional_iterate<S: Scalar>(f: &TruncatedSeries<S>, s: &S) -> Result<TruncatedSeries<S>> {
    check_generator("fractional_iterate", f)?;
    if !f.coeff(1).is_one() {
        return Err(Error::MultiplierNotOne(format!("f'(0) = {}", f.coeff(1))));
    }
    flow(&itlog(f)?, s)
}

/// `f^[k]` for an integer `k`, by repeated composition; any nonzero multiplier.
pub fn integer_iterate<S: Scalar>(f: &TruncatedSeries<S>, k: i64) -> Result<TruncatedSeries<S>> {
    check_generator("integer_iterate", f)?;
    let base = if k < 0 { f.comp_inverse()? } else { f.clone() };
    let mut acc = TruncatedSeries::var(f.order());
    for _ in 0..k.unsigned_abs() {
        acc = base.compose(&acc)?;
    }
    Ok(acc)
}

/// `f^[s]`: integer iterates for integral `s`, the flow otherwise.
pub fn iterate<S: Scalar>(f: &TruncatedSeries<S>, s: &S) -> Result<TruncatedSeries<S>> {
    match s.to_integer() {
        Some(k) => integer_iterate(f, k),
        None => fractional_iterate(f, s),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn series(cs: &[i64], order: usize) -> TruncatedSeries<Rational> {
        TruncatedSeries::new(cs.iter().map(|&c| r(c, 1)).collect(), order)
    }

    #[test]
    fn itlog_of_geometric() {
        // t/(1+t) = t - t^2 + t^3 - ...
        let f = TruncatedSeries::new((0..=8).map(|k| r(if k == 0 { 0 } else if k % 2 == 1 { 1 } else { -1 }, 1)).collect(), 8);
        assert_eq!(itlog(&f).unwrap(), series(&[0, 0, -1], 8));
    }

    #[test]
    fn itlog_solves_julia() {
        let f = series(&[0, 1, 1], 9);
        let v = itlog(&f).unwrap();
        assert!(julia_residual(&f, &v).unwrap().is_zero());
        assert_eq!(v.coeff(2), r(1, 1));
        assert_eq!(v.coeff(3), r(-1, 1));
        assert_eq!(v.coeff(4), r(3, 2));
    }

    #[test]
    fn itlog_requires_unit_multiplier_in_exact_mode() {
        let f = series(&[0, 2, 1], 6);
        assert!(matches!(itlog(&f), Err(Error::MultiplierNotOne(_))));
    }

    #[test]
    fn float_itlog_with_multiplier() {
        let f = TruncatedSeries::new(vec![0.0, 2.0, 1.0, 0.0, 0.0, 0.0, 0.0], 6);
        let v = itlog(&f).unwrap();
        assert!((v.coeff(1) - 2f64.ln()).abs() < 1e-15);
        let res = julia_residual(&f, &v).unwrap();
        assert!(res.coeffs().iter().all(|c| c.abs() < 1e-12), "{res}");
    }

    #[test]
    fn flow_of_cubic_field() {
        // exp(-s t^3 d/dt) t = t (1 + 2 s t^2)^(-1/2)
        let s = r(3, 7);
        let v = series(&[0, 0, 0, -1], 9);
        let g = flow(&v, &s).unwrap();
        let base = TruncatedSeries::new(vec![r(1, 1), r(0, 1), r(2, 1) * &s], 9);
        let expect = base.pow_scalar(&r(-1, 2)).unwrap().shift_up(1);
        assert_eq!(g, expect);
    }

    #[test]
    fn half_iterate_squares_back() {
        let f = series(&[0, 1, 1], 8);
        let h = fractional_iterate(&f, &r(1, 2)).unwrap();
        assert_eq!(h.compose(&h).unwrap(), f);
        assert_eq!(fractional_iterate(&f, &r(2, 1)).unwrap(), integer_iterate(&f, 2).unwrap());
        assert_eq!(fractional_iterate(&f, &r(-1, 1)).unwrap(), f.comp_inverse().unwrap());
    }
}
