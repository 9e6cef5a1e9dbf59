//! Normal forms, the x <-> D swap, and umbral operators as swapped composition operators.
//!
//! cargo run --example duality

use umbral::operator::{normal_form, op_from_normal_form};
use umbral::umbral::{umbral_bucc, UmbralSpec};
use umbral::{OperatorMatrix, Rational, Scalar, TruncatedSeries};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    let n = 6;
    let f = TruncatedSeries::generator(&[r(1, 1), r(1, 1)], 12);

    let c = OperatorMatrix::composition(&f, n)?;
    let nf = normal_form(&c, n)?;
    println!("C_f for f = {f}: {} normal-form terms, e.g.", nf.len());
    for (j, k, a) in nf.entries().take(6) {
        println!("  x^{j} D^{k} : {a}");
    }

    let swapped = op_from_normal_form(&nf.l_transform(), n);
    let phi = umbral_bucc(&UmbralSpec::new(f, n)?)?;
    println!("swapped C_f equals phi: {}", swapped.compare(&phi.matrix).holds());
    for k in 0..=3 {
        println!("  phi_{k} = {}", swapped.col(k));
    }
    Ok(())
}
