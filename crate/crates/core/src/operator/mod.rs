//! Linear operators on polynomials as finite column matrices.
//!
//! An [`OperatorMatrix`] stores the images `U x^n` for `n = 0..=n_in`. Two
//! truncation regimes are tracked:
//!
//! * [`Precision::Exact`]: columns `0..=window` are the true images, as
//!   polynomials. `raise` bounds `deg(U x^n) - n` and drives the window
//!   bookkeeping of [`OperatorMatrix::compose`].
//! * [`Precision::Modular`]: the true images may be infinite power series
//!   (composition operators, multiplication by a series); columns
//!   `0..=window` agree with them modulo `x^(max_out + 1)`.
//!
//! A structural lower bound `val_shift` on `val(U x^n) - n` decides whether an
//! operator may act on modular data: missing tails of degree `> max_out` only
//! stay out of sight under operators that never lower valuation.

mod calculus;
mod normal_form;

pub use calculus::*;
pub use normal_form::{normal_form, op_from_normal_form, NormalForm};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{falling, Scalar};
use crate::series::TruncatedSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Precision {
    Exact { raise: i64 },
    Modular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S> {
    cols: Vec<Polynomial<S>>,
    max_out: usize,
    window: usize,
    precision: Precision,
    val_shift: Option<i64>,
}

/// Polynomial data that may be known only modulo `x^(m+1)`.
#[derive(Clone, Debug)]
pub(crate) struct Tracked<S> {
    pub poly: Polynomial<S>,
    pub modulus: Option<usize>,
}

impl<S: Scalar> Tracked<S> {
    pub fn exact(poly: Polynomial<S>) -> Self {
        Tracked { poly, modulus: None }
    }
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<S: Scalar> OperatorMatrix<S> {
    pub(crate) fn from_parts(
        cols: Vec<Polynomial<S>>,
        max_out: usize,
        window: usize,
        precision: Precision,
        val_shift: Option<i64>,
    ) -> Self {
        debug_assert!(!cols.is_empty());
        debug_assert!(window < cols.len());
        let cols = match precision {
            Precision::Modular => cols.into_iter().map(|c| c.truncate(max_out)).collect(),
            Precision::Exact { .. } => cols,
        };
        OperatorMatrix { cols, max_out, window, precision, val_shift }
    }

    /// An operator given by exactly known polynomial columns; bounds are read off the data.
    pub fn from_exact_columns(cols: Vec<Polynomial<S>>) -> Self {
        assert!(!cols.is_empty(), "an operator needs at least one column");
        let raise = cols
            .iter()
            .enumerate()
            .filter_map(|(n, c)| c.degree().map(|d| d as i64 - n as i64))
            .max()
            .unwrap_or(0);
        let max_out = cols.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
        let window = cols.len() - 1;
        Self::from_parts(cols, max_out, window, Precision::Exact { raise }, None)
    }

    pub fn identity(n_in: usize) -> Self {
        Self::diagonal(n_in, |_| S::one())
    }

    pub fn zero(n_in: usize) -> Self {
        Self::from_parts(vec![Polynomial::zero(); n_in + 1], 0, n_in, Precision::Exact { raise: 0 }, Some(0))
    }

    /// `x^n -> d(n) x^n`, e.g. `x̂D + c` with `d(n) = n + c`.
    pub fn diagonal(n_in: usize, d: impl Fn(usize) -> S) -> Self {
        let cols = (0..=n_in).map(|n| Polynomial::monomial(n, d(n))).collect();
        Self::from_parts(cols, n_in, n_in, Precision::Exact { raise: 0 }, Some(0))
    }

    /// Multiplication by the polynomial `p(x)`.
    pub fn from_x_poly(p: &Polynomial<S>, n_in: usize, max_out: usize) -> Result<Self> {
        let deg = p.degree().unwrap_or(0);
        if n_in + deg > max_out {
            return Err(Error::DegreeOverflow { op: "op_from_x_poly", degree: n_in + deg, max_out });
        }
        let cols = (0..=n_in).map(|n| p.shift_up(n)).collect();
        let val = p.valuation().unwrap_or(0) as i64;
        Ok(Self::from_parts(cols, max_out, n_in, Precision::Exact { raise: deg as i64 }, Some(val)))
    }

    /// Multiplication by a power series `g(x)`, known modulo `x^(order+1)`.
    pub fn from_x_series(g: &TruncatedSeries<S>) -> Self {
        let m = g.order();
        let gp = g.to_polynomial();
        let cols = (0..=m).map(|n| gp.shift_up(n)).collect();
        let val = g.ord().unwrap_or(m + 1) as i64;
        Self::from_parts(cols, m, m, Precision::Modular, Some(val))
    }

    /// The shift-invariant operator `g(D)`: column `n` is `sum_k g_k (n)_k x^(n-k)`.
    ///
    /// Exact for `n <= g.order()`, since higher coefficients of `g` are unknown.
    pub fn from_d_series(g: &TruncatedSeries<S>, n_in: usize) -> Self {
        let cols = (0..=n_in)
            .map(|n| {
                let mut c = vec![S::zero(); n + 1];
                for k in 0..=n.min(g.order()) {
                    let gk = g.coeff(k);
                    if !gk.is_zero() {
                        c[n - k] = gk * falling(&S::from_usize(n), k);
                    }
                }
                Polynomial::new(c)
            })
            .collect();
        let raise = -(g.ord().unwrap_or(0) as i64);
        Self::from_parts(cols, n_in, n_in.min(g.order()), Precision::Exact { raise }, None)
    }

    /// `D^k` as an exact operator.
    pub fn d_power(k: usize, n_in: usize) -> Self {
        let g = TruncatedSeries::monomial(k, S::one(), n_in.max(k));
        let mut op = Self::from_d_series(&g, n_in);
        op.window = n_in;
        op.val_shift = Some(-(k as i64));
        op
    }

    /// The composition operator `C_g p(x) = p(g(x))`; columns are `g(x)^n`.
    pub fn composition(g: &TruncatedSeries<S>, n_in: usize) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let m = g.order();
        let mut cols = Vec::with_capacity(n_in + 1);
        let mut pow = TruncatedSeries::one(m);
        for _ in 0..=n_in {
            cols.push(pow.to_polynomial());
            pow = &pow * g;
        }
        Ok(Self::from_parts(cols, m, n_in, Precision::Modular, Some(0)))
    }

    /// The vector field `v(x̂) D`, known modulo `x^(order+1)`; requires `v(0) = 0`.
    pub fn vector_field(v: &TruncatedSeries<S>) -> Result<Self> {
        let Some(ord) = v.ord() else {
            return Ok(Self::from_parts(
                vec![Polynomial::zero(); v.order() + 1],
                v.order(),
                v.order(),
                Precision::Modular,
                Some(v.order() as i64),
            ));
        };
        if ord == 0 {
            return Err(Error::pre("vector_field", "v(0) must be 0"));
        }
        let m = v.order();
        let vp = v.to_polynomial();
        let cols = (0..=m)
            .map(|n| if n == 0 { Polynomial::zero() } else { vp.shift_up(n - 1).scale(&S::from_usize(n)) })
            .collect();
        Ok(Self::from_parts(cols, m, m, Precision::Modular, Some(ord as i64 - 1)))
    }

    /// Evaluation at the origin, `p(x) -> p(0)`.
    pub fn evaluation(n_in: usize) -> Self {
        let cols = (0..=n_in).map(|n| if n == 0 { Polynomial::one() } else { Polynomial::zero() }).collect();
        Self::from_parts(cols, 0, n_in, Precision::Exact { raise: 0 }, Some(0))
    }

    pub fn n_in(&self) -> usize {
        self.cols.len() - 1
    }

    pub fn max_out(&self) -> usize {
        self.max_out
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn precision(&self) -> Precision {
        self.precision
    }

    pub fn is_modular(&self) -> bool {
        self.precision == Precision::Modular
    }

    pub fn val_shift(&self) -> Option<i64> {
        self.val_shift
    }

    pub fn cols(&self) -> &[Polynomial<S>] {
        &self.cols
    }

    pub fn col(&self, n: usize) -> &Polynomial<S> {
        &self.cols[n]
    }

    /// Coefficient of `x^m` in `U x^n`.
    pub fn entry(&self, m: usize, n: usize) -> S {
        self.cols[n].coeff(m)
    }

    fn modulus(&self) -> Option<usize> {
        match self.precision {
            Precision::Modular => Some(self.max_out),
            Precision::Exact { .. } => None,
        }
    }

    fn keeps_valuation(&self) -> bool {
        self.val_shift.is_some_and(|v| v >= 0)
    }

    /// Restricts the certified window.
    pub fn with_window(mut self, window: usize) -> Self {
        self.window = self.window.min(window);
        self
    }

    pub(crate) fn set_column(&mut self, n: usize, p: Polynomial<S>) {
        if let Some(d) = p.degree() {
            if let Precision::Exact { raise } = &mut self.precision {
                *raise = (*raise).max(d as i64 - n as i64);
                self.max_out = self.max_out.max(d);
            }
        }
        self.cols[n] = match self.precision {
            Precision::Modular => p.truncate(self.max_out),
            Precision::Exact { .. } => p,
        };
    }

    pub(crate) fn apply_unchecked(&self, p: &Polynomial<S>) -> Polynomial<S> {
        let mut acc = Polynomial::zero();
        for (l, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() || l > self.n_in() {
                continue;
            }
            acc = &acc + &self.cols[l].scale(c);
        }
        acc
    }

    pub(crate) fn apply_tracked(&self, v: &Tracked<S>, op: &'static str) -> Result<Tracked<S>> {
        if v.modulus.is_some() && !self.keeps_valuation() {
            return Err(Error::Truncation { op, reason: "operator may lower valuation of truncated data" });
        }
        if let Some(d) = v.poly.degree() {
            if d > self.window {
                return Err(Error::WindowUnderflow { op, requested: d as i64, achievable: self.window as i64 });
            }
        }
        let modulus = min_opt(v.modulus, self.modulus());
        let mut poly = self.apply_unchecked(&v.poly);
        if let Some(m) = modulus {
            poly = poly.truncate(m);
        }
        Ok(Tracked { poly, modulus })
    }

    /// `U p`, for `deg p <= window`. Modular operators return the image modulo `x^(max_out+1)`.
    pub fn apply(&self, p: &Polynomial<S>) -> Result<Polynomial<S>> {
        Ok(self.apply_tracked(&Tracked::exact(p.clone()), "apply")?.poly)
    }

    /// The product `self ∘ v`: column `n` is `self` applied to `v x^n`.
    pub fn compose(&self, v: &Self) -> Result<Self> {
        let u = self;
        let (window, precision, max_out) = match v.precision {
            Precision::Exact { raise: rv } => {
                let w = (v.window as i64).min(u.window as i64 - rv);
                if w < 0 {
                    return Err(Error::WindowUnderflow {
                        op: "compose_ops",
                        requested: v.window as i64,
                        achievable: w,
                    });
                }
                let precision = match u.precision {
                    Precision::Exact { raise: ru } => Precision::Exact { raise: ru + rv },
                    Precision::Modular => Precision::Modular,
                };
                (w as usize, precision, u.max_out)
            }
            Precision::Modular => {
                if !u.keeps_valuation() {
                    return Err(Error::Truncation {
                        op: "compose_ops",
                        reason: "left factor may lower valuation of a modular right factor",
                    });
                }
                if u.window < v.max_out {
                    return Err(Error::WindowUnderflow {
                        op: "compose_ops",
                        requested: v.max_out as i64,
                        achievable: u.window as i64,
                    });
                }
                let m = match u.precision {
                    Precision::Modular => u.max_out.min(v.max_out),
                    Precision::Exact { .. } => v.max_out,
                };
                (v.window, Precision::Modular, m)
            }
        };
        let cols = v.cols.iter().map(|c| u.apply_unchecked(c)).collect();
        let val_shift = match (u.val_shift, v.val_shift) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        Ok(Self::from_parts(cols, max_out, window, precision, val_shift))
    }

    /// `self^k` by repeated composition.
    pub fn power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::identity(self.n_in()).with_max_out(self.max_out.max(self.n_in()));
        for _ in 0..k {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    fn with_max_out(mut self, m: usize) -> Self {
        if !self.is_modular() {
            self.max_out = self.max_out.max(m);
        }
        self
    }

    fn combine(&self, other: &Self, f: impl Fn(&Polynomial<S>, &Polynomial<S>) -> Polynomial<S>) -> Self {
        let n_in = self.n_in().min(other.n_in());
        let window = self.window.min(other.window).min(n_in);
        let (precision, max_out) = match (self.precision, other.precision) {
            (Precision::Exact { raise: a }, Precision::Exact { raise: b }) => {
                (Precision::Exact { raise: a.max(b) }, self.max_out.max(other.max_out))
            }
            _ => (
                Precision::Modular,
                min_opt(self.modulus(), other.modulus()).expect("one side is modular"),
            ),
        };
        let val_shift = match (self.val_shift, other.val_shift) {
            (Some(a), Some(b)) => Some(a.min(b)),
            _ => None,
        };
        let cols = (0..=n_in).map(|n| f(&self.cols[n], &other.cols[n])).collect();
        Self::from_parts(cols, max_out, window, precision, val_shift)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.cols = self.cols.iter().map(|p| p.scale(c)).collect();
        out
    }

    /// `U - 1`.
    pub fn sub_identity(&self) -> Self {
        let mut out = self.clone();
        for (n, c) in out.cols.iter_mut().enumerate() {
            let mut p = &*c - &Polynomial::x_pow(n);
            if let Some(m) = self.modulus() {
                p = p.truncate(m);
            }
            *c = p;
        }
        if let Precision::Exact { raise } = &mut out.precision {
            *raise = (*raise).max(0);
            out.max_out = out.max_out.max(self.n_in());
        }
        out.val_shift = self.val_shift.map(|v| v.min(0));
        out
    }

    /// `p(x̂) U`: every column multiplied by `p`.
    pub fn left_mul_poly(&self, p: &Polynomial<S>) -> Self {
        let deg = p.degree().unwrap_or(0);
        let mut out = self.clone();
        out.cols = self.cols.iter().map(|c| c * p).collect();
        match &mut out.precision {
            Precision::Exact { raise } => {
                *raise += deg as i64;
                out.max_out += deg;
            }
            Precision::Modular => out.cols = out.cols.into_iter().map(|c| c.truncate(self.max_out)).collect(),
        }
        out.val_shift = self.val_shift.map(|v| v + p.valuation().unwrap_or(0) as i64);
        out
    }

    /// `x̂ U`
    pub fn mul_x(&self) -> Self {
        self.left_mul_poly(&Polynomial::x_pow(1))
    }

    /// `U x̂`: column `n` becomes `U x^(n+1)`; the window shrinks by one.
    pub fn right_mul_x(&self) -> Result<Self> {
        if self.n_in() == 0 || self.window == 0 {
            return Err(Error::WindowUnderflow { op: "right_mul_x", requested: 1, achievable: 0 });
        }
        let mut out = self.clone();
        out.cols.remove(0);
        out.window -= 1;
        if let Precision::Exact { raise } = &mut out.precision {
            *raise += 1;
        }
        out.val_shift = self.val_shift.map(|v| v + 1);
        Ok(out)
    }

    /// Window-restricted comparison; with `tol = 0` this is exact equality.
    pub fn compare_with(&self, other: &Self, tol: f64) -> Agreement {
        let window = self.window.min(other.window);
        let rows = min_opt(self.modulus(), other.modulus());
        let mut first = None;
        'outer: for n in 0..=window {
            let (a, b) = (&self.cols[n], &other.cols[n]);
            let len = a.coeffs().len().max(b.coeffs().len());
            let len = rows.map_or(len, |m| len.min(m + 1));
            for m in 0..len {
                let d = a.coeff(m) - b.coeff(m);
                let differs = if tol == 0.0 { !d.is_zero() } else { d.to_f64().abs() > tol };
                if differs {
                    first = Some(Discrepancy { col: n, coeff: m });
                    break 'outer;
                }
            }
        }
        Agreement { window, first_discrepancy: first }
    }

    pub fn compare(&self, other: &Self) -> Agreement {
        self.compare_with(other, 0.0)
    }

    /// True when every certified column vanishes.
    pub fn is_zero_on_window(&self) -> bool {
        self.cols[..=self.window].iter().all(Polynomial::is_zero)
    }

    pub fn zero_check(&self) -> Agreement {
        let first = self.cols[..=self.window].iter().enumerate().find_map(|(n, c)| {
            c.valuation().map(|m| Discrepancy { col: n, coeff: m })
        });
        Agreement { window: self.window, first_discrepancy: first }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n_in": self.n_in(),
            "window": self.window,
            "max_out": self.max_out,
            "modular": self.is_modular(),
            "cols": self.cols.iter().map(Polynomial::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse { position: 0, message: m.to_string() };
        let cols = v.get("cols").and_then(Value::as_array).ok_or_else(|| bad("missing `cols`"))?;
        if cols.is_empty() {
            return Err(bad("`cols` must be nonempty"));
        }
        let cols = cols.iter().map(Polynomial::from_json).collect::<Result<Vec<_>>>()?;
        let n_in = v.get("n_in").and_then(Value::as_u64).ok_or_else(|| bad("missing `n_in`"))? as usize;
        if n_in + 1 != cols.len() {
            return Err(bad("`cols` must have n_in + 1 entries"));
        }
        let window = v.get("window").and_then(Value::as_u64).ok_or_else(|| bad("missing `window`"))? as usize;
        if window > n_in {
            return Err(bad("`window` exceeds `n_in`"));
        }
        let modular = v.get("modular").and_then(Value::as_bool).unwrap_or(false);
        let mut op = Self::from_exact_columns(cols);
        op.window = window;
        if modular {
            let m = v.get("max_out").and_then(Value::as_u64).ok_or_else(|| bad("missing `max_out`"))? as usize;
            op = Self::from_parts(op.cols, m, window, Precision::Modular, None);
        }
        Ok(op)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    type Op = OperatorMatrix<Rational>;
    type P = Polynomial<Rational>;

    fn p(cs: &[i64]) -> P {
        P::new(cs.iter().map(|&c| Rational::from_i64(c)).collect())
    }

    fn d_op(n: usize) -> Op {
        Op::d_power(1, n)
    }

    fn x_op(n: usize) -> Op {
        Op::from_x_poly(&P::x_pow(1), n, n + 1).unwrap()
    }

    #[test]
    fn x_poly_operators() {
        assert_eq!(x_op(4).col(2), &P::x_pow(3));
        let id = Op::from_x_poly(&P::one(), 5, 5).unwrap();
        assert!(id.compare(&Op::identity(5)).holds());
        let x2 = Op::from_x_poly(&P::x_pow(2), 4, 6).unwrap();
        assert_eq!(x2.col(3), &P::x_pow(5));
        assert!(matches!(Op::from_x_poly(&P::x_pow(2), 4, 5), Err(Error::DegreeOverflow { .. })));
    }

    #[test]
    fn d_series_operators() {
        let d = Op::from_d_series(&TruncatedSeries::var(6), 6);
        assert_eq!(d.col(3), &p(&[0, 0, 3]));
        let a = Rational::from_i64(2);
        let shift = Op::from_d_series(&TruncatedSeries::var(8).scale(&a).exp_series().unwrap(), 6);
        for n in 0..=6 {
            assert_eq!(shift.col(n), &p(&[2, 1]).pow(n));
        }
        assert!(Op::from_d_series(&TruncatedSeries::one(5), 5).compare(&Op::identity(5)).holds());
        // window limited by series order
        assert_eq!(Op::from_d_series(&TruncatedSeries::var(3), 6).window(), 3);
    }

    #[test]
    fn apply_examples() {
        let q = p(&[1, -2, 0, 5]);
        assert_eq!(Op::identity(4).apply(&q).unwrap(), q);
        assert_eq!(d_op(4).apply(&P::x_pow(3)).unwrap(), p(&[0, 0, 3]));
        assert_eq!(x_op(4).apply(&p(&[1, 1])).unwrap(), p(&[0, 1, 1]));
        assert!(matches!(Op::identity(2).apply(&P::x_pow(3)), Err(Error::WindowUnderflow { .. })));
    }

    #[test]
    fn composition_and_weyl_relation() {
        let n = 8;
        let u = Op::from_d_series(&TruncatedSeries::new(vec![Rational::from_i64(1), Rational::from_i64(2)], 8), n);
        assert!(u.compose(&Op::identity(n)).unwrap().compare(&u).holds());
        let dx = d_op(n + 1).compose(&x_op(n)).unwrap();
        let xd = x_op(n).compose(&d_op(n)).unwrap();
        let comm = dx.sub(&xd);
        assert!(comm.compare(&Op::identity(n)).holds());
        assert!(comm.window() >= n - 1);
        for k in 0..=n {
            assert_eq!(xd.apply(&P::x_pow(k)).unwrap(), P::monomial(k, Rational::from_usize(k)));
        }
    }

    #[test]
    fn window_bookkeeping() {
        // x̂ on 0..=5 then x̂ on 0..=5: window shrinks by the raise
        let x = x_op(5);
        let xx = x.compose(&x).unwrap();
        assert_eq!(xx.window(), 4);
        assert_eq!(xx.precision(), Precision::Exact { raise: 2 });
        // D lowers degree, so composing with it keeps the window
        let dd = d_op(5).compose(&d_op(5)).unwrap();
        assert_eq!(dd.window(), 5);
        let x0 = Op::from_x_poly(&P::x_pow(1), 0, 1).unwrap();
        let big = Op::from_x_poly(&P::x_pow(3), 1, 4).unwrap();
        assert!(matches!(x0.compose(&big), Err(Error::WindowUnderflow { .. })));
    }

    #[test]
    fn composition_operators() {
        let o = 6;
        let t = TruncatedSeries::<Rational>::var(o);
        assert!(Op::composition(&t, o).unwrap().compare(&Op::identity(o)).holds());
        let lam = Rational::ratio(3, 2);
        let st = Op::composition(&t.scale(&lam), o).unwrap();
        for n in 0..=o {
            assert_eq!(st.col(n), &P::monomial(n, lam.powi(n as i64)));
        }
        let g = TruncatedSeries::new(vec![Rational::from_i64(0), Rational::from_i64(1), Rational::from_i64(1)], o);
        assert_eq!(Op::composition(&g, o).unwrap().col(2), &p(&[0, 0, 1, 2, 1]));
        // a modular right factor needs a valuation-preserving left factor
        let cg = Op::composition(&g, o).unwrap();
        assert!(matches!(d_op(o).compose(&cg), Err(Error::Truncation { .. })));
        assert!(cg.compose(&cg).is_ok());
    }

    #[test]
    fn json_schema() {
        let v = d_op(2).to_json();
        assert_eq!(v["n_in"], 2);
        assert_eq!(v["window"], 2);
        assert_eq!(v["cols"], serde_json::json!([[], ["1"], ["0", "2"]]));
        let back = Op::from_json(&v).unwrap();
        assert!(back.compare(&d_op(2)).holds());
    }
}
