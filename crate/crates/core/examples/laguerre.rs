//! Degenerate Laguerre polynomials: explicit sums, both operator routes, and
//! the fractional family.
//!
//! cargo run --example laguerre

use umbral::laguerre::{
    cross_sequence_check, degenerate_laguerre_explicit, degenerate_laguerre_operator, frac_laguerre,
    laguerre_genfun_check, laguerre_ode_residual, stretch_demo,
};
use umbral::{Rational, Scalar};

fn main() -> umbral::Result<()> {
    let r = Rational::ratio;
    for p in 1..=2 {
        for n in 0..=4 {
            let e = degenerate_laguerre_explicit(p, n, &r(1, 1));
            let op = degenerate_laguerre_operator(p, n, &r(1, 1))?;
            println!("L^(1)_({p},{n}) = {e}   operator route agrees: {}", e == op);
        }
    }
    println!("ODE residual p=2, n=6, alpha=1/2: {}", laguerre_ode_residual(2, 6, &r(1, 2)));
    println!("cross-sequence p=1, n=5: {}", cross_sequence_check(1, 5, &r(1, 1), &r(-1, 1)).holds());
    println!("generating function p=3 to t^7: {}", laguerre_genfun_check(3, &Rational::one(), 7)?.holds());
    println!("L^(1/2)_(1,3) = {}", frac_laguerre(1, 3, &r(1, 2)));
    let cols = stretch_demo(3)?;
    println!("p = 0 (float): {}", cols.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "));
    Ok(())
}
