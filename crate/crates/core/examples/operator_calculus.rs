//! Operators as triangular matrices: the Weyl relation, Pincherle derivatives,
//! normal forms, and generalized exponentiation.
//!
//! cargo run --example operator_calculus

use umbral::operator::{boole_check, gen_pow, normal_form, pincherle_derivative};
use umbral::{OperatorMatrix, Polynomial, Rational, Scalar};

fn main() -> umbral::Result<()> {
    let n = 6;
    let d = OperatorMatrix::<Rational>::d_power(1, n);
    let x = OperatorMatrix::identity(n).mul_x();

    // [D, x] = 1
    let commutator = d.compose(&x)?.sub(&x.compose(&d)?);
    println!("[D, x] = 1 on window {}: {}", commutator.window(), commutator.compare(&OperatorMatrix::identity(n)).holds());

    // (D^3)' = 3 D^2
    let d3 = OperatorMatrix::d_power(3, n);
    let lhs = pincherle_derivative(&d3)?;
    let rhs = OperatorMatrix::d_power(2, n).scale(&Rational::from_i64(3));
    println!("(D^3)' = 3 D^2: {}", lhs.compare(&rhs).holds());

    // normal form of D x^2: x^2 D + 2x
    let x2 = OperatorMatrix::from_x_poly(&Polynomial::x_pow(2), n, n + 2)?;
    let nf = normal_form(&d.compose(&x2)?, 3)?;
    for (j, k, c) in nf.entries() {
        println!("  a[{j}][{k}] = {c}");
    }

    // 2^(xD) x^n = 2^n x^n
    let two = OperatorMatrix::identity(n).scale(&Rational::from_i64(2));
    let xd = OperatorMatrix::diagonal(n, Rational::from_usize);
    let stretch = gen_pow(&two, &xd, None)?;
    for k in 0..=3 {
        println!("  2^(xD) x^{k} = {}", stretch.col(k));
    }

    for k in 0..=4 {
        println!("Boole x^{k} D^{k} = (xD)_{k}: {}", boole_check::<Rational>(k, n).holds());
    }
    Ok(())
}
