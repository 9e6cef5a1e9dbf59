//! Pincherle derivatives, exponentials and logarithms of locally nilpotent
//! operators, generalized exponentiation, and operator-valued series.

use super::{min_opt, OperatorMatrix, Precision, Tracked};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::report::Agreement;
use crate::scalar::{factorial, falling, gbinom, Scalar};
use crate::series::TruncatedSeries;

/// `U' = U x̂ - x̂ U`. The window shrinks by one.
pub fn pincherle_derivative<S: Scalar>(u: &OperatorMatrix<S>) -> Result<OperatorMatrix<S>> {
    Ok(u.right_mul_x()?.sub(&u.mul_x()))
}

/// The `n`-th Pincherle derivative.
///
/// Computed both as the `n`-fold iterate of [`pincherle_derivative`] and by
/// the alternating sum [`nth_pincherle_explicit`]; the two must agree.
pub fn nth_pincherle<S: Scalar>(u: &OperatorMatrix<S>, n: usize) -> Result<OperatorMatrix<S>> {
    if n > u.window() {
        return Err(Error::WindowUnderflow { op: "nth_pincherle", requested: n as i64, achievable: u.window() as i64 });
    }
    let mut iterated = u.clone();
    for _ in 0..n {
        iterated = pincherle_derivative(&iterated)?;
    }
    let explicit = nth_pincherle_explicit(u, n)?;
    let agreement = iterated.compare(&explicit);
    if let Some(d) = agreement.first_discrepancy {
        return Err(Error::Inconsistent {
            op: "nth_pincherle",
            reason: format!("iterated and explicit forms differ at column {}, x^{}", d.col, d.coeff),
        });
    }
    Ok(iterated)
}

/// `U^(n) = sum_k binom(n, k) (-x̂)^(n-k) U x̂^k`.
pub fn nth_pincherle_explicit<S: Scalar>(u: &OperatorMatrix<S>, n: usize) -> Result<OperatorMatrix<S>> {
    let nn = S::from_usize(n);
    let mut shifted = u.clone();
    let mut acc: Option<OperatorMatrix<S>> = None;
    for k in 0..=n {
        if k > 0 {
            shifted = shifted.right_mul_x()?;
        }
        let sign = if (n - k).is_multiple_of(2) { S::one() } else { -S::one() };
        let term = shifted.left_mul_poly(&Polynomial::monomial(n - k, sign * gbinom(&nn, k)));
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.expect("n >= 0 gives at least one term"))
}

/// Checks that `A` strictly lowers degree (exact) or strictly raises
/// valuation (modular) on every certified column.
fn nilpotency_violation<S: Scalar>(a: &OperatorMatrix<S>) -> Option<usize> {
    (0..=a.window()).find(|&n| {
        let c = a.col(n);
        match a.precision() {
            Precision::Exact { .. } => c.degree().is_some_and(|d| d >= n),
            Precision::Modular => c.valuation().is_some_and(|v| v <= n),
        }
    })
}

fn check_modular_nilpotent<S: Scalar>(a: &OperatorMatrix<S>, op: &'static str) -> Result<()> {
    if a.is_modular() {
        if !a.val_shift().is_some_and(|v| v >= 0) {
            return Err(Error::pre(op, "modular operator must not lower valuation"));
        }
        if a.window() < a.max_out() {
            return Err(Error::WindowUnderflow { op, requested: a.max_out() as i64, achievable: a.window() as i64 });
        }
    }
    Ok(())
}

/// Runs `sum_(k>=1) c_k A^k x^n` per column until the terms vanish.
fn nilpotent_series<S: Scalar>(
    a: &OperatorMatrix<S>,
    coeff: impl Fn(usize) -> S,
    op: &'static str,
) -> Result<OperatorMatrix<S>> {
    let (n_cols, modulus) = match a.precision() {
        Precision::Exact { .. } => (a.window(), None),
        Precision::Modular => (a.n_in(), Some(a.max_out())),
    };
    let mut cols = Vec::with_capacity(n_cols + 1);
    for n in 0..=n_cols {
        let mut term = Tracked { poly: Polynomial::x_pow(n), modulus };
        if let Some(m) = modulus {
            term.poly = term.poly.truncate(m);
        }
        let mut acc = Polynomial::zero();
        let mut k = 1;
        loop {
            term = a.apply_tracked(&term, op)?;
            if term.poly.is_zero() {
                break;
            }
            acc = &acc + &term.poly.scale(&coeff(k));
            k += 1;
        }
        cols.push(acc);
    }
    Ok(finish(a, cols, n_cols))
}

/// `e^A = sum A^k / k!` for locally nilpotent `A`; the sum is finite per column.
pub fn exp_loc_nilpotent<S: Scalar>(a: &OperatorMatrix<S>) -> Result<OperatorMatrix<S>> {
    check_modular_nilpotent(a, "exp_loc_nilpotent")?;
    if let Some(n) = nilpotency_violation(a) {
        return Err(Error::pre(
            "exp_loc_nilpotent",
            format!("operator does not lower degree (or raise valuation) on column {n}"),
        ));
    }
    // Term k is A^k x^n / k!, built incrementally as A(term_{k-1}) / k.
    let (n_cols, modulus) = match a.precision() {
        Precision::Exact { .. } => (a.window(), None),
        Precision::Modular => (a.n_in(), Some(a.max_out())),
    };
    let mut cols = Vec::with_capacity(n_cols + 1);
    for n in 0..=n_cols {
        let mut term = Tracked { poly: Polynomial::x_pow(n), modulus };
        if let Some(m) = modulus {
            term.poly = term.poly.truncate(m);
        }
        let mut acc = term.poly.clone();
        let mut k = 1;
        loop {
            term = a.apply_tracked(&term, "exp_loc_nilpotent")?;
            term.poly = term.poly.scale(&(S::one() / S::from_usize(k)));
            if term.poly.is_zero() {
                break;
            }
            acc = &acc + &term.poly;
            k += 1;
        }
        cols.push(acc);
    }
    Ok(finish(a, cols, n_cols))
}

fn finish<S: Scalar>(a: &OperatorMatrix<S>, cols: Vec<Polynomial<S>>, n_cols: usize) -> OperatorMatrix<S> {
    match a.precision() {
        Precision::Exact { .. } => {
            let raise = cols
                .iter()
                .enumerate()
                .filter_map(|(n, c)| c.degree().map(|d| d as i64 - n as i64))
                .max()
                .unwrap_or(0);
            OperatorMatrix::from_parts(cols, n_cols, n_cols, Precision::Exact { raise }, None)
        }
        Precision::Modular => OperatorMatrix::from_parts(cols, a.max_out(), n_cols, Precision::Modular, Some(0)),
    }
}

/// `log U = sum_{k>=1} (-1)^(k+1) (U-1)^k / k` for unipotent `U`.
pub fn log_unipotent<S: Scalar>(u: &OperatorMatrix<S>) -> Result<OperatorMatrix<S>> {
    let nil = u.sub_identity();
    check_modular_nilpotent(&nil, "log_unipotent")?;
    if let Some(column) = nilpotency_violation(&nil) {
        return Err(Error::NotUnipotent { op: "log_unipotent", column });
    }
    nilpotent_series(
        &nil,
        |k| {
            let sign = if k % 2 == 1 { S::one() } else { -S::one() };
            sign / S::from_usize(k)
        },
        "log_unipotent",
    )
}

/// `h(Q) = sum_j h_j Q^j` for `Q` strictly lowering degree.
pub fn series_of_operator<S: Scalar>(h: &TruncatedSeries<S>, q: &OperatorMatrix<S>) -> Result<OperatorMatrix<S>> {
    if q.is_modular() {
        return Err(Error::pre("series_of_operator", "Q must be an exact degree-lowering operator"));
    }
    if let Some(n) = nilpotency_violation(q) {
        return Err(Error::pre("series_of_operator", format!("Q does not lower degree on column {n}")));
    }
    let window = q.window().min(h.order());
    let cols = (0..=window)
        .map(|n| {
            let mut term = Polynomial::x_pow(n);
            let mut acc = term.scale(&h.coeff(0));
            for j in 1..=n {
                term = q.apply_unchecked(&term);
                if term.is_zero() {
                    break;
                }
                acc = &acc + &term.scale(&h.coeff(j));
            }
            acc
        })
        .collect::<Vec<_>>();
    let raise = cols
        .iter()
        .enumerate()
        .filter_map(|(n, c)| c.degree().map(|d| d as i64 - n as i64))
        .max()
        .unwrap_or(-(window as i64) - 1);
    Ok(OperatorMatrix::from_parts(cols, window, window, Precision::Exact { raise }, None))
}

/// `sum_k g_k(x̂) h_k(Q)`.
pub fn km_operator<S: Scalar>(
    gs: &[Polynomial<S>],
    hs: &[TruncatedSeries<S>],
    q: &OperatorMatrix<S>,
) -> Result<OperatorMatrix<S>> {
    if gs.len() != hs.len() || gs.is_empty() {
        return Err(Error::pre("km_operator", "need equally many (nonzero count) g_k and h_k"));
    }
    let mut acc: Option<OperatorMatrix<S>> = None;
    for (g, h) in gs.iter().zip(hs) {
        let term = series_of_operator(h, q)?.left_mul_poly(g);
        acc = Some(match acc {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(acc.expect("nonempty"))
}

/// Whether `V` acts diagonally with nonnegative integer eigenvalues on its window.
fn nonneg_integer_diagonal<S: Scalar>(v: &OperatorMatrix<S>) -> bool {
    !v.is_modular()
        && (0..=v.window()).all(|n| {
            let c = v.col(n);
            c.is_zero()
                || (c.valuation() == Some(n)
                    && c.degree() == Some(n)
                    && c.coeff(n).to_integer().is_some_and(|e| e >= 0))
        })
}

#[derive(Clone, Copy, Debug)]
enum Stop {
    Bound(usize),
    /// `binom(V, k) x^n` vanishes for large `k`.
    Vanishing,
    /// `U - 1` lowers degree and `V` does not raise it: stop after `k = n`.
    DegreeLowering,
    /// `U - 1` raises valuation; stop after `k = max_out`.
    ValuationRaising(usize),
}

/// Generalized exponentiation `U^V = sum_n (U - 1)^n binom(V, n)`.
///
/// `(U - 1)^n` is placed to the left of `binom(V, n)`. The per-column sum
/// must be provably finite unless `term_bound` is given.
pub fn gen_pow<S: Scalar>(
    u: &OperatorMatrix<S>,
    v: &OperatorMatrix<S>,
    term_bound: Option<usize>,
) -> Result<OperatorMatrix<S>> {
    let nil = u.sub_identity();
    let stop = if let Some(b) = term_bound {
        Stop::Bound(b)
    } else if nonneg_integer_diagonal(v) {
        Stop::Vanishing
    } else if !nil.is_modular()
        && nilpotency_violation(&nil).is_none()
        && matches!(v.precision(), Precision::Exact { raise } if raise <= 0)
    {
        Stop::DegreeLowering
    } else if nil.is_modular() && nil.val_shift().is_some_and(|s| s >= 0) && nilpotency_violation(&nil).is_none() {
        Stop::ValuationRaising(nil.max_out())
    } else {
        return Err(Error::NonTerminating { column: 0 });
    };

    let n_cols = u.n_in().min(v.n_in());
    let mut cols = Vec::new();
    let mut modulus: Option<usize> = None;
    for n in 0..=n_cols {
        match gen_pow_column(&nil, v, n, stop) {
            Ok(t) => {
                modulus = match (modulus, t.modulus) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                cols.push(t.poly);
            }
            Err(e) if n == 0 => return Err(e),
            Err(_) => break,
        }
    }
    let window = cols.len() - 1;
    Ok(match modulus {
        Some(m) => OperatorMatrix::from_parts(cols, m, window, Precision::Modular, None),
        None => OperatorMatrix::from_exact_columns(cols),
    })
}

fn gen_pow_column<S: Scalar>(
    nil: &OperatorMatrix<S>,
    v: &OperatorMatrix<S>,
    n: usize,
    stop: Stop,
) -> Result<Tracked<S>> {
    let last = match stop {
        Stop::Bound(b) => Some(b),
        Stop::Vanishing => None,
        Stop::DegreeLowering => Some(n),
        Stop::ValuationRaising(m) => Some(m),
    };
    // b_k = binom(V, k) x^n, with b_{k+1} = (V - k) b_k / (k + 1).
    let mut bs = Vec::new();
    let mut b = Tracked::exact(Polynomial::x_pow(n));
    let mut k = 0usize;
    while !b.poly.is_zero() && !last.is_some_and(|l| k > l) {
        let vb = v.apply_tracked(&b, "gen_pow")?;
        let kk = S::from_usize(k);
        let next = Tracked {
            poly: (&vb.poly - &b.poly.scale(&kk)).scale(&(S::one() / S::from_usize(k + 1))),
            modulus: vb.modulus,
        };
        bs.push(std::mem::replace(&mut b, next));
        k += 1;
    }
    // sum_k N^k b_k by Horner's rule
    let mut acc = Tracked::exact(Polynomial::zero());
    for (i, bk) in bs.iter().enumerate().rev() {
        if i + 1 < bs.len() {
            acc = nil.apply_tracked(&acc, "gen_pow")?;
        }
        acc = Tracked { poly: &acc.poly + &bk.poly, modulus: min_opt(acc.modulus, bk.modulus) };
    }
    if let Some(m) = acc.modulus {
        acc.poly = acc.poly.truncate(m);
    }
    Ok(acc)
}

/// Leibniz rule for arbitrary operators: `U p(x̂) = sum_k p^(k)(x̂) U^(k) / k!`.
pub fn leibniz_check<S: Scalar>(u: &OperatorMatrix<S>, p: &Polynomial<S>) -> Result<Agreement> {
    let n = u.n_in();
    let deg = p.degree().unwrap_or(0);
    let lhs = u.compose(&OperatorMatrix::from_x_poly(p, n, n + deg)?)?;
    let mut rhs: Option<OperatorMatrix<S>> = None;
    let mut uk = u.clone();
    let mut pk = p.clone();
    for k in 0..=deg {
        if k > 0 {
            uk = pincherle_derivative(&uk)?;
            pk = pk.derivative();
        }
        let term = uk.left_mul_poly(&pk.scale(&(S::one() / factorial::<S>(k))));
        rhs = Some(match rhs {
            None => term,
            Some(a) => a.add(&term),
        });
    }
    Ok(lhs.compare(&rhs.expect("deg >= 0")))
}

/// Boole: `x̂^n D^n = (x̂D)(x̂D - 1)...(x̂D - n + 1)`.
pub fn boole_check<S: Scalar>(n: usize, n_in: usize) -> Agreement {
    let lhs = OperatorMatrix::d_power(n, n_in).left_mul_poly(&Polynomial::x_pow(n));
    let rhs = OperatorMatrix::diagonal(n_in, |m| falling(&S::from_usize(m), n));
    lhs.compare(&rhs)
}

/// `sum_n x̂^n V^n / n! = (e^x̂)^V` with `V = h(D)`, `h(0) = h'(0) = 0`.
///
/// The left side is exact; the right side is computed modulo `x^(max_out+1)`.
pub fn exponentiation_check<S: Scalar>(h: &TruncatedSeries<S>, n_in: usize, max_out: usize) -> Result<Agreement> {
    let d = OperatorMatrix::d_power(1, n_in);
    let gs: Vec<_> = (0..=n_in).map(|k| Polynomial::monomial(k, S::one() / factorial::<S>(k))).collect();
    let hs: Vec<_> = (0..=n_in).map(|k| h.pow(k)).collect();
    let lhs = km_operator(&gs, &hs, &d)?;
    let exp_x = TruncatedSeries::from_egf_weights(&vec![S::one(); max_out + 1], max_out);
    let rhs = gen_pow(&OperatorMatrix::from_x_series(&exp_x), &OperatorMatrix::from_d_series(h, n_in), None)?;
    Ok(lhs.compare(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{falling, Rational};

    type Op = OperatorMatrix<Rational>;
    type P = Polynomial<Rational>;

    fn r(n: i64) -> Rational {
        Rational::from_i64(n)
    }

    fn p(cs: &[i64]) -> P {
        P::new(cs.iter().map(|&c| r(c)).collect())
    }

    fn x_poly_op(q: &P, n: usize) -> Op {
        Op::from_x_poly(q, n, n + q.degree().unwrap_or(0)).unwrap()
    }

    #[test]
    fn pincherle_of_basic_operators() {
        let n = 8;
        let d = Op::d_power(1, n);
        let dp = pincherle_derivative(&d).unwrap();
        assert!(dp.compare(&Op::identity(n)).holds());
        assert_eq!(dp.window(), n - 1);
        let x = x_poly_op(&P::x_pow(1), n);
        assert!(pincherle_derivative(&x).unwrap().is_zero_on_window());
        let d2 = Op::d_power(2, n);
        assert!(pincherle_derivative(&d2).unwrap().compare(&d.scale(&r(2))).holds());
    }

    #[test]
    fn nth_pincherle_examples() {
        let n = 9;
        let d3 = Op::d_power(3, n);
        assert!(nth_pincherle(&d3, 0).unwrap().compare(&d3).holds());
        let six_d = Op::d_power(1, n).scale(&r(6));
        assert!(nth_pincherle(&d3, 2).unwrap().compare(&six_d).holds());
        let xd = Op::diagonal(n, Rational::from_usize);
        let x = x_poly_op(&P::x_pow(1), n);
        assert!(nth_pincherle(&xd, 1).unwrap().compare(&x).holds());
        assert!(matches!(nth_pincherle(&d3, 10), Err(Error::WindowUnderflow { .. })));
    }

    #[test]
    fn exp_examples() {
        let n = 6;
        assert!(exp_loc_nilpotent(&Op::zero(n)).unwrap().compare(&Op::identity(n)).holds());
        let xd2 = Op::d_power(2, n).mul_x().scale(&r(-1));
        let e = exp_loc_nilpotent(&xd2).unwrap();
        assert_eq!(e.col(2), &p(&[0, -2, 1]));
        let a = xd2.sub(&Op::d_power(1, n));
        assert_eq!(exp_loc_nilpotent(&a).unwrap().col(1), &p(&[-1, 1]));
        assert!(exp_loc_nilpotent(&Op::identity(n)).is_err());
    }

    #[test]
    fn log_examples() {
        let n = 7;
        assert!(log_unipotent(&Op::identity(n)).unwrap().is_zero_on_window());
        let shift = Op::from_d_series(&TruncatedSeries::var(n).exp_series().unwrap(), n);
        assert!(log_unipotent(&shift).unwrap().compare(&Op::d_power(1, n)).holds());
        let diag = Op::diagonal(n, |k| r(k as i64 + 1));
        assert!(matches!(log_unipotent(&diag), Err(Error::NotUnipotent { .. })));
        let back = exp_loc_nilpotent(&log_unipotent(&shift).unwrap()).unwrap();
        assert!(back.compare(&shift).holds());
    }

    #[test]
    fn gen_pow_examples() {
        let n = 7;
        let xd = Op::diagonal(n, Rational::from_usize);
        let any = Op::from_d_series(&TruncatedSeries::new(vec![r(1), r(3), r(-1)], n), n);
        assert!(gen_pow(&any, &Op::zero(n), None).unwrap().compare(&Op::identity(n)).holds());
        // lambda^(x̂D): stretch by lambda
        let lam = Rational::ratio(-2, 3);
        let base = Op::identity(n).scale(&lam);
        let st = gen_pow(&base, &xd, None).unwrap();
        for k in 0..=n {
            assert_eq!(st.col(k), &P::monomial(k, lam.powi(k as i64)));
        }
    }

    #[test]
    fn boole_identity() {
        // x̂^n D^n = (x̂D)_n
        let m = 8;
        let xd = Op::diagonal(m, Rational::from_usize);
        for n in 0..=4 {
            let lhs = Op::d_power(n, m).left_mul_poly(&P::x_pow(n));
            let rhs = Op::diagonal(m, |k| falling(&Rational::from_usize(k), n));
            let mut prod = Op::identity(m);
            for i in 0..n {
                prod = xd.sub(&Op::identity(m).scale(&r(i as i64))).compose(&prod).unwrap();
            }
            assert!(lhs.compare(&rhs).holds());
            assert!(prod.compare(&rhs).holds());
        }
    }

    #[test]
    fn gen_pow_non_terminating_needs_bound() {
        let n = 5;
        let base = Op::identity(n).scale(&r(2));
        let v = Op::diagonal(n, |_| Rational::ratio(1, 2));
        assert!(matches!(gen_pow(&base, &v, None), Err(Error::NonTerminating { .. })));
        assert!(gen_pow(&base, &v, Some(4)).is_ok());
    }

    #[test]
    fn km_single_term_identity() {
        let n = 6;
        let id = km_operator(&[P::one()], &[TruncatedSeries::one(n)], &Op::d_power(1, n)).unwrap();
        assert!(id.compare(&Op::identity(n)).holds());
        assert!(km_operator(&[P::one()], &[], &Op::d_power(1, n)).is_err());
    }

    #[test]
    fn kernel_identities() {
        for n in 0..=4 {
            assert!(boole_check::<Rational>(n, 8).holds());
        }
        let u = x_poly_op(&p(&[1, 2]), 10).compose(&OperatorMatrix::d_power(2, 10)).unwrap();
        assert!(leibniz_check(&u, &p(&[3, 0, -1, 2])).unwrap().holds());
        let h = TruncatedSeries::new(vec![r(0), r(0), r(1)], 12);
        let a = exponentiation_check(&h, 10, 24).unwrap();
        assert!(a.holds(), "{a:?}");
        assert_eq!(a.window, 10);
    }
}
