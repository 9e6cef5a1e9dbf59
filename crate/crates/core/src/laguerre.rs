//! Degenerate Laguerre polynomials `L^(α)_(p,n) = (1 - pD^p)^(α/p) e^(-x̂D^(p+1)) x^n`
//! and their fractional variants, each with an explicit formula and the
//! operator constructions it has to match.

use crate::bivariate::BiPoly;
use crate::error::{Error, Result};
use crate::operator::{exp_loc_nilpotent, OperatorMatrix};
use crate::poly::Polynomial;
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{factorial, gbinom, Scalar};
use crate::series::TruncatedSeries;
use crate::umbral::{frac_power, UmbralSpec};

/// Parameters of one member of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct LaguerreParams<S> {
    /// Degeneracy order, at least 1.
    pub p: usize,
    pub alpha: S,
    /// Fractional exponent; 1 gives the ordinary family.
    pub s: S,
    pub n: usize,
}

impl<S: Scalar> LaguerreParams<S> {
    pub fn new(p: usize, alpha: S, s: S, n: usize) -> Result<Self> {
        check_p(p)?;
        Ok(LaguerreParams { p, alpha, s, n })
    }

    pub fn explicit(&self) -> Polynomial<S> {
        if self.s.is_one() {
            degenerate_laguerre_explicit(self.p, self.n, &self.alpha)
        } else {
            frac_laguerre(self.p, self.n, &self.s)
        }
    }
}

fn check_p(p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::pre("laguerre", "p must be at least 1 (p = 0 is the float-only stretch)"));
    }
    Ok(())
}

/// `1 + c t^p` to the given order.
fn binomial_base<S: Scalar>(p: usize, c: S, order: usize) -> TruncatedSeries<S> {
    let mut coeffs = vec![S::zero(); order + 1];
    coeffs[0] = S::one();
    if p <= order {
        coeffs[p] = c;
    }
    TruncatedSeries::new(coeffs, order)
}

/// `f^s(t) = t (1 + s p t^p)^(-1/p)`.
pub fn laguerre_generator<S: Scalar>(p: usize, s: &S, order: usize) -> Result<TruncatedSeries<S>> {
    check_p(p)?;
    let base = binomial_base(p, s.clone() * S::from_usize(p), order);
    Ok(base.pow_scalar(&(-S::one() / S::from_usize(p)))?.shift_up(1))
}

/// `sum_k binom((n+α)/p - 1, k) n! (-p)^k / (n-pk)! x^(n-pk)`.
pub fn degenerate_laguerre_explicit<S: Scalar>(p: usize, n: usize, alpha: &S) -> Polynomial<S> {
    let pp = S::from_usize(p);
    let top = (S::from_usize(n) + alpha) / &pp - S::one();
    explicit_sum(p, n, &top, &-pp)
}

/// `sum_k binom(n/p - 1, k) n! (-sp)^k / (n-pk)! x^(n-pk)`.
pub fn frac_laguerre<S: Scalar>(p: usize, n: usize, s: &S) -> Polynomial<S> {
    let pp = S::from_usize(p);
    let top = S::from_usize(n) / &pp - S::one();
    explicit_sum(p, n, &top, &-(s.clone() * pp))
}

fn explicit_sum<S: Scalar>(p: usize, n: usize, top: &S, ratio: &S) -> Polynomial<S> {
    let p = p.max(1);
    let nf = factorial::<S>(n);
    let mut coeffs = vec![S::zero(); n + 1];
    for k in 0..=n / p {
        let c = gbinom(top, k) * &nf * ratio.powi(k as i64) / factorial::<S>(n - p * k);
        coeffs[n - p * k] = c;
    }
    Polynomial::new(coeffs)
}

/// `-x̂ D^(p+1)` on inputs of degree `<= n`.
fn lowering_generator<S: Scalar>(p: usize, n: usize) -> OperatorMatrix<S> {
    OperatorMatrix::d_power(p + 1, n).mul_x().scale(&-S::one())
}

/// Both operator constructions, on inputs of degree `<= n_max`:
/// `(1 - pD^p)^(α/p) e^(-x̂D^(p+1))` and `exp(-x̂D^(p+1) - αD^p)`.
pub fn laguerre_operator_paths<S: Scalar>(
    p: usize,
    n_max: usize,
    alpha: &S,
) -> Result<(OperatorMatrix<S>, OperatorMatrix<S>)> {
    check_p(p)?;
    let pp = S::from_usize(p);
    let lag = exp_loc_nilpotent(&lowering_generator(p, n_max))?;
    let prefactor = binomial_base(p, -pp.clone(), n_max).pow_scalar(&(alpha.clone() / &pp))?;
    let first = OperatorMatrix::from_d_series(&prefactor, n_max).compose(&lag)?;
    let gen = lowering_generator(p, n_max).sub(&OperatorMatrix::d_power(p, n_max).scale(alpha));
    let second = exp_loc_nilpotent(&gen)?;
    Ok((first, second))
}

/// `L^(α)_(p,n)` from the operator side; fails if the two constructions disagree.
pub fn degenerate_laguerre_operator<S: Scalar>(p: usize, n: usize, alpha: &S) -> Result<Polynomial<S>> {
    let (a, b) = laguerre_operator_paths(p, n, alpha)?;
    if a.col(n) != b.col(n) {
        return Err(Error::Inconsistent {
            op: "degenerate_laguerre_operator",
            reason: format!("the two operator paths differ at p = {p}, n = {n}, alpha = {alpha}"),
        });
    }
    Ok(a.col(n).clone())
}

/// `x p F^(p+1) + α p F^(p) - x F' + n F` for the explicit `F = L^(α)_(p,n)`.
pub fn laguerre_ode_residual<S: Scalar>(p: usize, n: usize, alpha: &S) -> Polynomial<S> {
    let f = degenerate_laguerre_explicit(p, n, alpha);
    let pp = S::from_usize(p);
    let x = Polynomial::x_pow(1);
    let a = (&x * &f.nth_derivative(p + 1)).scale(&pp);
    let b = f.nth_derivative(p).scale(&(alpha.clone() * &pp));
    let c = &x * &f.derivative();
    let d = f.scale(&S::from_usize(n));
    &(&(&a + &b) - &c) + &d
}

/// `L^(α+β)_(p,n)(x+y) = sum_k binom(n,k) L^(α)_(p,k)(x) L^(β)_(p,n-k)(y)`.
pub fn cross_sequence_check<S: Scalar>(p: usize, n: usize, alpha: &S, beta: &S) -> Agreement {
    let ab = alpha.clone() + beta;
    let lhs = BiPoly::of_sum(&degenerate_laguerre_explicit(p, n, &ab));
    let nn = S::from_usize(n);
    let mut rhs = BiPoly::zero();
    for k in 0..=n {
        let term = BiPoly::in_first(&degenerate_laguerre_explicit(p, k, alpha))
            .mul(&BiPoly::in_second(&degenerate_laguerre_explicit(p, n - k, beta)));
        rhs = rhs.add(&term.scale(&gbinom(&nn, k)));
    }
    lhs.compare(&rhs, n)
}

/// `sum_n L^(α)_(p,n)(x) t^n/n! = (1 + pt^p)^(-α/p) exp(x t (1 + pt^p)^(-1/p))` through `t^t_order`.
///
/// A discrepancy reports `col = n` (power of `t`) and `coeff = k` (power of `x`).
pub fn laguerre_genfun_check<S: Scalar>(p: usize, alpha: &S, t_order: usize) -> Result<Agreement> {
    check_p(p)?;
    let pp = S::from_usize(p);
    let prefactor = binomial_base(p, pp.clone(), t_order).pow_scalar(&(-alpha.clone() / &pp))?;
    let g = laguerre_generator(p, &S::one(), t_order)?;
    let ls: Vec<_> = (0..=t_order).map(|n| degenerate_laguerre_explicit(p, n, alpha)).collect();
    let mut term = prefactor;
    for k in 0..=t_order {
        let kf = factorial::<S>(k);
        for (n, l) in ls.iter().enumerate() {
            if l.coeff(k) / factorial::<S>(n) != term.coeff(n) / &kf {
                return Ok(Agreement { window: t_order, first_discrepancy: Some(Discrepancy { col: n, coeff: k }) });
            }
        }
        term = &term * &g;
    }
    Ok(Agreement { window: t_order, first_discrepancy: None })
}

/// `L^s_(p,n)` from the operator side: column `n` of `φ^s` for the generator `f^1`.
pub fn frac_laguerre_operator<S: Scalar>(p: usize, n: usize, s: &S) -> Result<Polynomial<S>> {
    let order = n + 2;
    let spec = UmbralSpec::new(laguerre_generator(p, &S::one(), order)?, n)?;
    Ok(frac_power(&spec, s)?.basic(n).clone())
}

/// `L_0 = str_(1/e)`: the umbral operator of `t/e`, float mode only.
pub fn stretch_demo(n: usize) -> Result<Vec<Polynomial<f64>>> {
    let f = TruncatedSeries::new(vec![0.0, (-1.0f64).exp()], n);
    let u = crate::umbral::umbral_bucc(&UmbralSpec::new(f, n)?)?;
    Ok((0..=n).map(|k| u.basic(k).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use crate::umbral::flow;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn poly(cs: &[(i64, i64)]) -> Polynomial<Rational> {
        Polynomial::new(cs.iter().map(|&(n, d)| r(n, d)).collect())
    }

    #[test]
    fn generators() {
        let g1 = laguerre_generator(1, &r(1, 1), 5).unwrap();
        assert_eq!(g1.coeffs(), &[r(0, 1), r(1, 1), r(-1, 1), r(1, 1), r(-1, 1), r(1, 1)]);
        let g2 = laguerre_generator(2, &r(1, 1), 6).unwrap();
        assert_eq!(g2.coeffs(), &[r(0, 1), r(1, 1), r(0, 1), r(-1, 1), r(0, 1), r(3, 2), r(0, 1)]);
        assert_eq!(laguerre_generator(3, &r(0, 1), 6).unwrap(), TruncatedSeries::var(6));
        assert!(laguerre_generator::<Rational>(0, &r(1, 1), 6).is_err());
    }

    #[test]
    fn generator_is_flow_of_monomial_field() {
        for p in 1..=3 {
            let v = TruncatedSeries::monomial(p + 1, r(-1, 1), 10);
            for s in [r(1, 1), r(1, 2), r(-2, 3)] {
                assert_eq!(laguerre_generator(p, &s, 10).unwrap(), flow(&v, &s).unwrap());
            }
        }
    }

    #[test]
    fn explicit_values() {
        assert_eq!(degenerate_laguerre_explicit(2, 0, &r(5, 1)), Polynomial::one());
        assert_eq!(degenerate_laguerre_explicit(1, 2, &r(0, 1)), poly(&[(0, 1), (-2, 1), (1, 1)]));
        assert_eq!(degenerate_laguerre_explicit(2, 3, &r(0, 1)), poly(&[(0, 1), (-6, 1), (0, 1), (1, 1)]));
        assert_eq!(degenerate_laguerre_explicit(1, 3, &r(0, 1)), poly(&[(0, 1), (6, 1), (-6, 1), (1, 1)]));
    }

    #[test]
    fn operator_paths_match_explicit() {
        assert_eq!(degenerate_laguerre_operator(1, 1, &r(1, 1)).unwrap(), poly(&[(-1, 1), (1, 1)]));
        for p in 1..=3 {
            for alpha in [r(-1, 1), r(0, 1), r(1, 1), r(2, 1), r(1, 3)] {
                let (a, b) = laguerre_operator_paths(p, 8, &alpha).unwrap();
                for n in 0..=8 {
                    let e = degenerate_laguerre_explicit(p, n, &alpha);
                    assert_eq!(a.col(n), &e, "p={p} n={n} alpha={alpha}");
                    assert_eq!(b.col(n), &e, "p={p} n={n} alpha={alpha}");
                }
            }
        }
    }

    #[test]
    fn ode_cross_sequence_genfun() {
        assert!(laguerre_ode_residual(1, 2, &r(0, 1)).is_zero());
        assert!(laguerre_ode_residual(2, 4, &r(1, 1)).is_zero());
        assert!(cross_sequence_check(1, 3, &r(1, 1), &r(-1, 1)).holds());
        assert!(cross_sequence_check(2, 4, &r(0, 1), &r(2, 1)).holds());
        assert!(laguerre_genfun_check(1, &r(0, 1), 6).unwrap().holds());
        assert!(laguerre_genfun_check(3, &r(1, 1), 7).unwrap().holds());
    }

    #[test]
    fn fractional_family() {
        assert_eq!(frac_laguerre(2, 5, &r(0, 1)), Polynomial::x_pow(5));
        assert_eq!(frac_laguerre(2, 5, &r(1, 1)), degenerate_laguerre_explicit(2, 5, &r(0, 1)));
        let half = frac_laguerre(1, 3, &r(1, 2));
        assert_eq!(half, poly(&[(0, 1), (3, 2), (-3, 1), (1, 1)]));
        for p in 1..=3 {
            for n in 0..=6 {
                let s = r(2, 5);
                assert_eq!(frac_laguerre_operator(p, n, &s).unwrap(), frac_laguerre(p, n, &s));
            }
        }
    }

    #[test]
    fn delta_operator_closed_form() {
        for p in 1..=3 {
            let q = laguerre_generator(p, &r(1, 1), 10).unwrap().comp_inverse().unwrap();
            let expect = binomial_base(p, -r(p as i64, 1), 10).pow_scalar(&r(-1, p as i64)).unwrap().shift_up(1);
            assert_eq!(q, expect);
        }
    }

    #[test]
    fn stretch_by_inverse_e() {
        let cols = stretch_demo(10).unwrap();
        for (n, c) in cols.iter().enumerate() {
            assert_eq!(c.degree(), Some(n));
            assert!((c.coeff(n) - (-(n as f64)).exp()).abs() < 1e-12);
        }
    }
}
