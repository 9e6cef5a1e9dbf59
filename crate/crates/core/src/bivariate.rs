//! Polynomials in two variables, used to check binomial-type and
//! generating-function identities coefficient by coefficient.

use std::collections::BTreeMap;

use crate::poly::Polynomial;
use crate::report::{Agreement, Discrepancy};
use crate::scalar::{gbinom, Scalar};

/// `sum c[i][j] a^i b^j`; zero coefficients are not stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<S> {
    terms: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> BiPoly<S> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn add_term(&mut self, i: usize, j: usize, c: S) {
        if c.is_zero() {
            return;
        }
        let v = match self.terms.remove(&(i, j)) {
            Some(old) => old + &c,
            None => c,
        };
        if !v.is_zero() {
            self.terms.insert((i, j), v);
        }
    }

    pub fn coeff(&self, i: usize, j: usize) -> S {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(S::zero)
    }

    /// `p(a)`
    pub fn in_first(p: &Polynomial<S>) -> Self {
        let mut out = Self::zero();
        for (i, c) in p.coeffs().iter().enumerate() {
            out.add_term(i, 0, c.clone());
        }
        out
    }

    /// `p(b)`
    pub fn in_second(p: &Polynomial<S>) -> Self {
        let mut out = Self::zero();
        for (j, c) in p.coeffs().iter().enumerate() {
            out.add_term(0, j, c.clone());
        }
        out
    }

    /// `p(a + b)`
    pub fn of_sum(p: &Polynomial<S>) -> Self {
        let mut out = Self::zero();
        for (m, c) in p.coeffs().iter().enumerate() {
            let mm = S::from_usize(m);
            for i in 0..=m {
                out.add_term(i, m - i, c.clone() * gbinom(&mm, i));
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            for (&(k, l), b) in &other.terms {
                out.add_term(i + k, j + l, a.clone() * b);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero();
        for (&(i, j), a) in &self.terms {
            out.add_term(i, j, a.clone() * c);
        }
        out
    }

    /// Exact comparison; a discrepancy reports `(col, coeff) = (i, j)`.
    pub fn compare(&self, other: &Self, window: usize) -> Agreement {
        let keys: std::collections::BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).copied().collect();
        let first = keys
            .into_iter()
            .find(|&(i, j)| self.coeff(i, j) != other.coeff(i, j))
            .map(|(col, coeff)| Discrepancy { col, coeff });
        Agreement { window, first_discrepancy: first }
    }
}
