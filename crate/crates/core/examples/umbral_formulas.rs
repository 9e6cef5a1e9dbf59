//! The five constructions of an umbral operator, compared column by column.
//!
//! cargo run --example umbral_formulas

use umbral::umbral::{construct, umbral_inverse, Formula, UmbralSpec};
use umbral::{Rational, Scalar, TruncatedSeries};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    // t/(1+t), known exactly to the truncation order, and 2t + t^2
    let geometric: Vec<_> = (1..=12).map(|k| r(if k % 2 == 1 { 1 } else { -1 }, 1)).collect();
    for coeffs in [geometric, vec![r(2, 1), r(1, 1)]] {
        let spec = UmbralSpec::new(TruncatedSeries::generator(&coeffs, 12), 6)?;
        println!("f = {}", spec.f());
        let reference = construct(&spec, Formula::Garsia)?;
        for n in 0..=4 {
            println!("  phi_{n} = {}", reference.basic(n));
        }
        for fm in &Formula::CONSTRUCTORS[1..] {
            let a = construct(&spec, *fm)?.matrix.compare(&reference.matrix);
            println!("  {fm:<12} agrees with garsia on window {}: {}", a.window, a.holds());
        }
        let inv = umbral_inverse(&reference)?;
        println!("  inverse is generated by {}", inv.spec.f());
    }
    Ok(())
}
