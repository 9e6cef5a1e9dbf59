//! Truncated power series: composition, inversion, real powers, JSON.
//!
//! cargo run --example series_basics

use umbral::{Rational, Scalar, TruncatedSeries};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    let f = TruncatedSeries::generator(&[r(1, 1), r(1, 1)], 8);
    println!("f         = {f}");

    let g = f.comp_inverse()?;
    println!("f^-1      = {g}");
    println!("f o f^-1  = {}", f.compose(&g)?);

    let one_minus = TruncatedSeries::new(vec![r(1, 1), r(0, 1), r(-2, 1)], 8);
    println!("(1-2t^2)^(1/2) = {}", one_minus.pow_scalar(&r(1, 2))?);

    let e = TruncatedSeries::<Rational>::var(8).exp_series()?;
    println!("exp(t)    = {e}");
    println!("json      = {}", g.to_json());
    Ok(())
}
