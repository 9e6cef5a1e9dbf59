//! Normal-ordered representation `U = sum a[j][k] x̂^j D^k` and the
//! `x̂ <-> D` anti-automorphism.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{OperatorMatrix, Precision};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{factorial, falling, gbinom, Scalar};

/// Coefficient table of `x̂^j D^k`.
///
/// `j_bound` / `k_bound` record how far the table is known: `None` means
/// complete in that index, `Some(b)` means entries beyond `b` are unknown
/// (not zero). Zero entries are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalForm<S> {
    entries: BTreeMap<(usize, usize), S>,
    j_bound: Option<usize>,
    k_bound: Option<usize>,
}

impl<S: Scalar> NormalForm<S> {
    /// A complete table from `(j, k, coefficient)` triples; repeated keys add up.
    pub fn from_entries(entries: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
        let mut nf = NormalForm { entries: BTreeMap::new(), j_bound: None, k_bound: None };
        for (j, k, c) in entries {
            nf.add_entry(j, k, c);
        }
        nf
    }

    fn add_entry(&mut self, j: usize, k: usize, c: S) {
        let v = self.entries.remove(&(j, k)).map_or(c.clone(), |old| old + &c);
        if !v.is_zero() {
            self.entries.insert((j, k), v);
        }
    }

    pub fn get(&self, j: usize, k: usize) -> S {
        self.entries.get(&(j, k)).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.entries.iter().map(|(&(j, k), c)| (j, k, c))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn j_bound(&self) -> Option<usize> {
        self.j_bound
    }

    pub fn k_bound(&self) -> Option<usize> {
        self.k_bound
    }

    /// Swaps the roles of `x̂` and `D`. Being anti-multiplicative, it sends the
    /// normal-ordered monomial `x̂^j D^k` to `x̂^k D^j`, again normal-ordered.
    pub fn l_transform(&self) -> Self {
        NormalForm {
            entries: self.entries.iter().map(|(&(j, k), c)| ((k, j), c.clone())).collect(),
            j_bound: self.k_bound,
            k_bound: self.j_bound,
        }
    }

    /// Sparse triple list `[[j, k, "p/q"], ...]`.
    pub fn to_json(&self) -> Value {
        Value::Array(self.entries().map(|(j, k, c)| json!([j, k, c.to_json()])).collect())
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse { position: 0, message: m.to_string() };
        let arr = v.as_array().ok_or_else(|| bad("normal form must be an array of triples"))?;
        let mut out = Vec::with_capacity(arr.len());
        for t in arr {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("expected [j, k, coeff]"))?;
            let j = t[0].as_u64().ok_or_else(|| bad("j must be a nonnegative integer"))? as usize;
            let k = t[1].as_u64().ok_or_else(|| bad("k must be a nonnegative integer"))? as usize;
            out.push((j, k, S::from_json(&t[2])?));
        }
        Ok(Self::from_entries(out))
    }
}

/// Extracts `a[j][k]` for `k <= k_max` from the columns `U x^0 .. U x^k_max`:
/// the `D^k` coefficient is `(1/k!) sum_i binom(k, i) (-x̂)^(k-i) U_i(x̂)`.
pub fn normal_form<S: Scalar>(u: &OperatorMatrix<S>, k_max: usize) -> Result<NormalForm<S>> {
    if k_max > u.window() {
        return Err(Error::WindowUnderflow { op: "normal_form", requested: k_max as i64, achievable: u.window() as i64 });
    }
    let modulus = match u.precision() {
        Precision::Modular => Some(u.max_out()),
        Precision::Exact { .. } => None,
    };
    let mut nf = NormalForm { entries: BTreeMap::new(), j_bound: modulus, k_bound: Some(k_max) };
    for k in 0..=k_max {
        let kk = S::from_usize(k);
        let mut p = Polynomial::zero();
        for i in 0..=k {
            let sign = if (k - i) % 2 == 0 { S::one() } else { -S::one() };
            let term = u.col(i).shift_up(k - i).scale(&(sign * gbinom(&kk, i)));
            p = &p + &term;
        }
        if let Some(m) = modulus {
            p = p.truncate(m);
        }
        let inv = S::one() / factorial::<S>(k);
        for (j, c) in p.coeffs().iter().enumerate() {
            if !c.is_zero() {
                nf.add_entry(j, k, c.clone() * &inv);
            }
        }
    }
    Ok(nf)
}

/// Rebuilds `sum a[j][k] x̂^j D^k` on inputs of degree `<= n_in`.
pub fn op_from_normal_form<S: Scalar>(nf: &NormalForm<S>, n_in: usize) -> OperatorMatrix<S> {
    let mut cols = vec![Polynomial::zero(); n_in + 1];
    for (n, col) in cols.iter_mut().enumerate() {
        let mut c: Vec<S> = Vec::new();
        for (j, k, a) in nf.entries() {
            if k > n {
                continue;
            }
            let deg = j + n - k;
            if let Some(m) = nf.j_bound {
                if deg > m {
                    continue;
                }
            }
            if c.len() <= deg {
                c.resize(deg + 1, S::zero());
            }
            c[deg] = c[deg].clone() + a.clone() * falling(&S::from_usize(n), k);
        }
        *col = Polynomial::new(c);
    }
    let window = nf.k_bound.map_or(n_in, |b| b.min(n_in));
    match nf.j_bound {
        Some(m) => OperatorMatrix::from_parts(cols, m, window, Precision::Modular, None),
        None => {
            let raise = nf.entries().map(|(j, k, _)| j as i64 - k as i64).max().unwrap_or(0);
            let max_out = cols.iter().filter_map(Polynomial::degree).max().unwrap_or(0);
            let val_shift = match nf.k_bound {
                None => Some(nf.entries().map(|(j, k, _)| j as i64 - k as i64).min().unwrap_or(0)),
                Some(_) => None,
            };
            OperatorMatrix::from_parts(cols, max_out, window, Precision::Exact { raise }, val_shift)
        }
    }
}
