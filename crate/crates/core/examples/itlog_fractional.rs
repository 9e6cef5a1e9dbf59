//! Iterative logarithms, flows and fractional iterates.
//!
//! cargo run --example itlog_fractional

use umbral::umbral::{flow, fractional_iterate, itlog, julia_residual};
use umbral::{Rational, Scalar, TruncatedSeries};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    let f = TruncatedSeries::generator(&[r(1, 1), r(1, 1)], 8);
    let v = itlog(&f)?;
    println!("itlog(t + t^2) = {v}");
    println!("Julia residual = {}", julia_residual(&f, &v)?);

    let half = fractional_iterate(&f, &r(1, 2))?;
    println!("half iterate   = {half}");
    println!("squared        = {}", half.compose(&half)?);

    // exp(-s t^3 d/dt) t = t (1 + 2 s t^2)^(-1/2)
    let cubic = TruncatedSeries::monomial(3, r(-1, 1), 8);
    println!("flow of -t^3 at s = 1: {}", flow(&cubic, &Rational::one())?);

    let g = TruncatedSeries::new(vec![0.0, 2.0], 6);
    println!("float itlog(2t) = {}", itlog(&g)?);
    Ok(())
}
