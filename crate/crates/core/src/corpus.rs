//! Generator corpora: the fixed manifest, manifest files, and a seeded
//! random extension.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::operator::{op_from_normal_form, NormalForm, OperatorMatrix};
use crate::poly::Polynomial;
use crate::scalar::{Rational, Scalar};
use crate::series::TruncatedSeries;

const DEFAULT_MANIFEST: &str = include_str!("../data/corpus.json");

#[derive(Clone, Debug)]
pub struct CorpusEntry<S> {
    pub name: String,
    pub f: TruncatedSeries<S>,
}

impl<S: Scalar> CorpusEntry<S> {
    pub fn q(&self) -> S {
        self.f.coeff(1)
    }
}

/// Parses `"c1,c2,..."`; errors carry the byte offset of the bad entry.
pub fn parse_coeffs<S: Scalar>(text: &str) -> Result<Vec<S>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for piece in text.split(',') {
        let lead = piece.len() - piece.trim_start().len();
        let token = piece.trim();
        if token.is_empty() {
            return Err(Error::Parse { position: offset + lead, message: "empty coefficient".into() });
        }
        let c = S::parse_scalar(token).map_err(|e| match e {
            Error::Parse { message, .. } => Error::Parse { position: offset + lead, message },
            other => other,
        })?;
        out.push(c);
        offset += piece.len() + 1;
    }
    Ok(out)
}

/// The generator `c1 t + c2 t^2 + ...` to the given order.
pub fn parse_generator<S: Scalar>(text: &str, order: usize) -> Result<TruncatedSeries<S>> {
    let cs = parse_coeffs::<S>(text)?;
    if cs.len() > order {
        return Err(Error::pre("parse_generator", format!("{} coefficients exceed order {order}", cs.len())));
    }
    Ok(TruncatedSeries::generator(&cs, order))
}

fn coeff_from_json<S: Scalar>(v: &Value) -> Result<S> {
    match v {
        Value::String(s) => S::parse_scalar(s),
        other => S::from_json(other),
    }
}

/// Reads a manifest `[{"name": ..., "coeffs": ["c1", "c2", ...]}, ...]`.
pub fn parse_manifest<S: Scalar>(text: &str, order: usize) -> Result<Vec<CorpusEntry<S>>> {
    let v: Value = serde_json::from_str(text)
        .map_err(|e| Error::Parse { position: e.column(), message: format!("manifest: {e}") })?;
    let items = v.as_array().ok_or_else(|| Error::Parse { position: 0, message: "manifest must be a list".into() })?;
    items
        .iter()
        .enumerate()
        .map(|(i, item)| {
            let bad = |m: &str| Error::Parse { position: i, message: format!("manifest entry {i}: {m}") };
            let name = item.get("name").and_then(Value::as_str).ok_or_else(|| bad("missing name"))?;
            let coeffs = item.get("coeffs").and_then(Value::as_array).ok_or_else(|| bad("missing coeffs"))?;
            let cs = coeffs.iter().map(coeff_from_json).collect::<Result<Vec<S>>>()?;
            if cs.len() > order {
                return Err(bad("more coefficients than the truncation order"));
            }
            Ok(CorpusEntry { name: name.to_string(), f: TruncatedSeries::generator(&cs, order) })
        })
        .collect()
}

pub fn load_manifest<S: Scalar>(path: &Path, order: usize) -> Result<Vec<CorpusEntry<S>>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse { position: 0, message: format!("{}: {e}", path.display()) })?;
    parse_manifest(&text, order)
}

/// The built-in corpus: five generators with `f'(0) = 1` and three without.
pub fn default_corpus<S: Scalar>(order: usize) -> Vec<CorpusEntry<S>> {
    parse_manifest(DEFAULT_MANIFEST, order.max(12)).expect("built-in manifest is valid")
        .into_iter()
        .map(|e| CorpusEntry { name: e.name, f: e.f.truncate(order) })
        .collect()
}

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

/// Deterministic random generators with `f'(0) = 1` and at most four nonzero higher terms.
pub fn random_corpus(seed: u64, count: usize, order: usize) -> Vec<CorpusEntry<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let mut cs = vec![Rational::one()];
            for _ in 2..=order.min(5) {
                cs.push(if rng.gen_bool(0.6) { small_rational(&mut rng) } else { Rational::zero() });
            }
            CorpusEntry { name: format!("random-{seed}-{i}"), f: TruncatedSeries::generator(&cs, order) }
        })
        .collect()
}

/// A random operator with normal form supported on `j, k <= 3`, on inputs of degree `<= n_in`.
pub fn random_sparse_operator(rng: &mut ChaCha8Rng, n_in: usize) -> OperatorMatrix<Rational> {
    let terms = rng.gen_range(1..=4);
    let entries: Vec<_> = (0..terms)
        .map(|_| (rng.gen_range(0..=3), rng.gen_range(0..=3), small_rational(rng)))
        .collect();
    op_from_normal_form(&NormalForm::from_entries(entries), n_in)
}

/// A random polynomial of degree at most 3.
pub fn random_polynomial(rng: &mut ChaCha8Rng) -> Polynomial<Rational> {
    Polynomial::new((0..=3).map(|_| small_rational(rng)).collect())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_corpus() {
        let c = default_corpus::<Rational>(12);
        assert_eq!(c.len(), 8);
        assert_eq!(c.iter().filter(|e| e.q().is_one()).count(), 5);
        assert!(c.iter().all(|e| e.f.order() == 12));
        let fl = default_corpus::<f64>(10);
        assert_eq!(fl[7].f.coeff(1), 1.0 / 3.0);
    }

    #[test]
    fn coefficient_lists() {
        let cs = parse_coeffs::<Rational>("1, 1/2,-1/3").unwrap();
        assert_eq!(cs, vec![Rational::one(), Rational::ratio(1, 2), Rational::ratio(-1, 3)]);
        match parse_coeffs::<Rational>("1,x") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_coeffs::<Rational>("1,0.5"), Err(Error::ModeMismatch { .. })));
        assert!(parse_coeffs::<Rational>("1,,2").is_err());
    }

    #[test]
    fn random_corpus_is_deterministic() {
        let a = random_corpus(7, 4, 10);
        let b = random_corpus(7, 4, 10);
        assert!(a.iter().zip(&b).all(|(x, y)| x.f == y.f && x.name == y.name));
        assert!(a.iter().all(|e| e.q().is_one()));
    }
}
