//! `T_num(ε)` over the desk ladder, the log-log fit and the sweep checks,
//! written as CSV to stdout.
//!
//! cargo run --release --example lifespan_sweep

use lifespan_lab::experiments::{sweep_lifespan, write_records};
use lifespan_lab::profile::ModelParams;
use lifespan_lab::solver::LifespanOptions;

fn main() -> lifespan_lab::Result<()> {
    let eps = [0.5, 0.4, 0.3, 0.25, 0.2];
    let report = sweep_lifespan(&ModelParams::canonical(0.3), &eps, &LifespanOptions::default())?;
    write_records(std::io::stdout(), &report.records)?;
    if let Some(f) = report.fit {
        eprintln!("slope {:.4} (exponent {})", f.slope, report.expected_slope);
    }
    for c in report.checks() {
        eprintln!("{} {}: {:.4} vs {:.4}", if c.passed { "pass" } else { "FAIL" }, c.name, c.value, c.limit);
    }
    Ok(())
}
