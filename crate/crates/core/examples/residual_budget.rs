//! `∫₀^{T_B} ‖R‖_X dt` by region over an ε ladder and the fitted regional
//! constants.
//!
//! cargo run --release --example residual_budget

use lifespan_lab::experiments::config::ResidualConfig;
use lifespan_lab::experiments::residual_scan;
use lifespan_lab::profile::ModelParams;

fn main() -> lifespan_lab::Result<()> {
    let scan = residual_scan(&ModelParams::canonical(0.1), &ResidualConfig::default())?;
    println!("{:>6} {:>12} {:>12} {:>12} {:>12}", "eps", "free", "blend", "profile", "total");
    for b in &scan.budgets {
        println!(
            "{:>6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            b.epsilon, b.free.value, b.blend.value, b.profile.value, b.total
        );
    }
    for c in &scan.constants {
        println!("{} ~ {}: {:?} (C = {:.3})", c.name, c.shape, c.per_eps, c.constant);
    }
    for c in scan.checks() {
        println!("{} {}", if c.passed { "pass" } else { "FAIL" }, c.name);
    }
    Ok(())
}
