//! Runs identity suites over the built-in corpus plus a seeded random extension.
//!
//! cargo run --example verify_suite -- [suite] [seed]

use umbral::verify::{run, Suite, VerifyConfig};

fn main() -> umbral::Result<()> {
    let mut args = std::env::args().skip(1);
    let suite: Suite = args.next().as_deref().unwrap_or("formulas").parse()?;
    let mut cfg = VerifyConfig::default();
    if let Some(seed) = args.next() {
        let seed = seed.parse().map_err(|e| umbral::Error::Parse { position: 0, message: format!("seed: {e}") })?;
        cfg = cfg.with_seed(seed);
    }
    let report = run(suite, &cfg);
    for item in &report.items {
        println!("{:<12} {}", format!("{:?}", item.status), item.identity);
    }
    println!("{} identities, all passed: {}", report.items.len(), report.passed());
    Ok(())
}
