//! `ρ_δ ∗ |φ̂|^{p-1}` and its H¹ distance to `|φ̂|^{p-1}` as δ shrinks.
//!
//! cargo run --example mollifier

use lifespan_lab::experiments::props::mollifier_errors;
use lifespan_lab::mollifier::{bump, bump_mass};

fn main() -> lifespan_lab::Result<()> {
    println!("bump mass = {:.16}, peak of rho = {:.10}", bump_mass(), bump(0.0) / bump_mass());
    let errs = mollifier_errors()?;
    for w in errs.windows(2) {
        println!(
            "delta {:<6} -> {:<6}: error {:.4e} -> {:.4e} (rate {:.2})",
            w[0].0,
            w[1].0,
            w[0].1,
            w[1].1,
            (w[0].1 / w[1].1).log2()
        );
    }
    Ok(())
}
