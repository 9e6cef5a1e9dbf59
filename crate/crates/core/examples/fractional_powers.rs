//! Fractional powers of an umbral operator and the group laws they satisfy.
//!
//! cargo run --example fractional_powers

use umbral::umbral::{coeff_identity_table, delta_operator, frac_power, group_law_checks, UmbralSpec};
use umbral::{Rational, Scalar, TruncatedSeries};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    let geometric: Vec<_> = (1..=12).map(|k| r(if k % 2 == 1 { 1 } else { -1 }, 1)).collect();
    let spec = UmbralSpec::new(TruncatedSeries::generator(&geometric, 12), 8)?;

    let half = frac_power(&spec, &r(1, 2))?;
    for n in 0..=4 {
        println!("phi^(1/2) x^{n} = {}", half.basic(n));
    }
    println!("generated by f^[1/2] = {}", half.spec.f());
    println!("Q^[1] x^3 with Q^[1] = D/(1-D): {}", delta_operator(&spec, &Rational::one())?.col(3));

    for rep in group_law_checks(&spec, &r(1, 3), &r(-1, 1)) {
        println!("{:<40} {:?}", rep.identity, rep.status);
    }

    let q2 = UmbralSpec::new(TruncatedSeries::generator(&[r(2, 1), r(1, 1)], 12), 6)?;
    let bad = coeff_identity_table(&q2, &r(3, 1), 6)?.into_iter().filter(|c| !c.residual().is_zero()).count();
    println!("coefficient identity at q = 2, s = 3: {bad} nonzero residuals");
    Ok(())
}
