//! Truncated formal power series in one indeterminate `t`.
//!
//! Coefficients are stored plainly: `coeffs[n]` is the coefficient of `t^n`
//! (not the exponential-generating-function weight `n! c_n`). A series of
//! order `N` carries exactly `N + 1` coefficients and every operation keeps
//! results exact up to `t^N`. Binary operations on mismatched orders
//! truncate to the smaller order; nothing ever extends an order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{format_terms, Polynomial};
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{factorial, gbinom, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Pads with zeros or truncates so that exactly `order + 1` coefficients remain.
    pub fn new(mut coeffs: Vec<S>, order: usize) -> Self {
        coeffs.resize(order + 1, S::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![S::one()], order)
    }

    /// The identity series `t`.
    pub fn var(order: usize) -> Self {
        Self::monomial(1, S::one(), order)
    }

    /// `c t^k`
    pub fn monomial(k: usize, c: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_polynomial(p: &Polynomial<S>, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    /// Parses the generator convention `c_1, c_2, ...` (constant term forced to zero).
    pub fn generator(coeffs: &[S], order: usize) -> Self {
        let mut c = Vec::with_capacity(coeffs.len() + 1);
        c.push(S::zero());
        c.extend(coeffs.iter().cloned());
        Self::new(c, order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> S {
        self.coeffs.get(n).cloned().unwrap_or_else(S::zero)
    }

    /// Index of the first nonzero coefficient; `None` for the zero series.
    pub fn ord(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.ord().is_none()
    }

    /// Re-truncates to `order`, which is clamped to the current order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs.clone(), order.min(self.order()))
    }

    /// The stored coefficients as a polynomial, forgetting the truncation.
    pub fn to_polynomial(&self) -> Polynomial<S> {
        Polynomial::new(self.coeffs.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|a| a.clone() * c).collect() }
    }

    /// Multiplication by `t^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        let n = self.order();
        let mut c = vec![S::zero(); k.min(n + 1)];
        c.extend(self.coeffs.iter().take((n + 1).saturating_sub(k)).cloned());
        TruncatedSeries { coeffs: c }
    }

    /// Division by `t^k`; the order drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::pre("shift_down", format!("series is not divisible by t^{k}")));
        }
        Ok(TruncatedSeries { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn pow(&self, e: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a unit series.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = self.coeff(0);
        if c0.is_zero() {
            return Err(Error::pre("reciprocal", "constant term is zero"));
        }
        let n = self.order();
        let mut inv = vec![S::zero(); n + 1];
        inv[0] = S::one() / &c0;
        for k in 1..=n {
            let mut acc = S::zero();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * &inv[k - i];
            }
            inv[k] = -(acc / &c0);
        }
        Ok(TruncatedSeries { coeffs: inv })
    }

    /// `self(g(t))`, exact up to the smaller of the two orders.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        if !g.coeff(0).is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order().min(g.order());
        let g = g.truncate(n);
        // Horner: f0 + g (f1 + g (f2 + ...)).
        let mut acc = TruncatedSeries::<S>::zero(n);
        for c in self.coeffs[..=n].iter().rev() {
            acc = &acc * &g;
            acc.coeffs[0] = acc.coeffs[0].clone() + c;
        }
        Ok(acc)
    }

    /// Compositional inverse by coefficient-wise triangular solve.
    pub fn comp_inverse(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::NotInvertible("f(0) != 0"));
        }
        let f1 = self.coeff(1);
        if f1.is_zero() {
            return Err(Error::NotInvertible("f'(0) = 0"));
        }
        let n = self.order();
        let mut g = Self::zero(n);
        if n >= 1 {
            g.coeffs[1] = S::one() / &f1;
        }
        for k in 2..=n {
            // [t^k] f(g) = f1 g_k + (terms in g_1..g_{k-1}); solve for g_k.
            let partial = self.truncate(k).compose(&g.truncate(k))?;
            g.coeffs[k] = -(partial.coeffs[k].clone() / &f1);
        }
        Ok(g)
    }

    /// Formal derivative; the order drops by one since `t^(N+1)` is unknown.
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: (1..=n).map(|k| self.coeffs[k].clone() * S::from_usize(k)).collect(),
        }
    }

    pub fn exp_series(&self) -> Result<Self> {
        if !self.coeff(0).is_zero() {
            return Err(Error::pre("exp_series", "f(0) must be 0"));
        }
        let n = self.order();
        let mut term = Self::one(n);
        let mut acc = Self::one(n);
        for k in 1..=n {
            term = (&term * self).scale(&(S::one() / S::from_usize(k)));
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `log(f)` for `f(0) = 1`.
    pub fn log1_series(&self) -> Result<Self> {
        let h = self.unit_offset("log1_series")?;
        let n = self.order();
        let mut pow = Self::one(n);
        let mut acc = Self::zero(n);
        for k in 1..=n {
            pow = &pow * &h;
            let c = S::from_i64(if k % 2 == 1 { 1 } else { -1 }) / S::from_usize(k);
            acc = &acc + &pow.scale(&c);
        }
        Ok(acc)
    }

    /// `f^alpha` for `f(0) = 1`, as the binomial series in `f - 1`.
    pub fn pow_scalar(&self, alpha: &S) -> Result<Self> {
        let h = self.unit_offset("pow_scalar")?;
        let n = self.order();
        let mut pow = Self::one(n);
        let mut acc = Self::one(n);
        for k in 1..=n {
            pow = &pow * &h;
            acc = &acc + &pow.scale(&gbinom(alpha, k));
        }
        Ok(acc)
    }

    fn unit_offset(&self, op: &'static str) -> Result<Self> {
        if !self.coeff(0).is_one() {
            return Err(Error::pre(op, "f(0) must be 1"));
        }
        let mut h = self.clone();
        h.coeffs[0] = S::zero();
        Ok(h)
    }

    /// Factorial-scaled weights `a_n = n! c_n`.
    pub fn to_egf_weights(&self) -> Vec<S> {
        self.coeffs.iter().enumerate().map(|(n, c)| c.clone() * factorial::<S>(n)).collect()
    }

    pub fn from_egf_weights(a: &[S], order: usize) -> Self {
        Self::new(a.iter().enumerate().map(|(n, c)| c.clone() / factorial::<S>(n)).collect(), order)
    }

    /// Coefficientwise comparison up to the smaller order; a discrepancy
    /// reports the power of `t` as `coeff`.
    pub fn compare(&self, other: &Self) -> Agreement {
        let window = self.order().min(other.order());
        let first = (0..=window)
            .find(|&n| self.coeffs[n] != other.coeffs[n])
            .map(|n| Discrepancy { col: 0, coeff: n });
        Agreement { window, first_discrepancy: first }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order(),
            "coeffs": self.coeffs.iter().map(Scalar::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse { position: 0, message: m.to_string() };
        let order = v.get("order").and_then(Value::as_u64).ok_or_else(|| bad("missing `order`"))? as usize;
        let coeffs = v
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing `coeffs`"))?;
        if coeffs.len() != order + 1 {
            return Err(bad("`coeffs` must have order + 1 entries"));
        }
        let coeffs = coeffs.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        Ok(TruncatedSeries { coeffs })
    }
}

impl<S: Scalar> fmt::Display for TruncatedSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = format_terms(self.coeffs.iter().enumerate(), "t");
        write!(f, "{body} + O(t^{})", self.order() + 1)
    }
}

impl<S: Scalar> serde::Serialize for TruncatedSeries<S> {
    fn serialize<Se: serde::Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de, S: Scalar> serde::Deserialize<'de> for TruncatedSeries<S> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        Self::from_json(&v).map_err(serde::de::Error::custom)
    }
}

impl<S: Scalar> Add for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;

    fn add(self, rhs: Self) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.coeffs[k].clone() + &rhs.coeffs[k]).collect() }
    }
}

impl<S: Scalar> Sub for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;

    fn sub(self, rhs: Self) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=n).map(|k| self.coeffs[k].clone() - &rhs.coeffs[k]).collect() }
    }
}

impl<S: Scalar> Mul for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;

    fn mul(self, rhs: Self) -> TruncatedSeries<S> {
        let n = self.order().min(rhs.order());
        let mut out = vec![S::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl<S: Scalar> Neg for &TruncatedSeries<S> {
    type Output = TruncatedSeries<S>;

    fn neg(self) -> TruncatedSeries<S> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}
