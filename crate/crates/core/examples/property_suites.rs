//! Every property suite at its default size, run concurrently.
//!
//! Prints one line per fitted constant and per check, then the overall
//! verdict. Pass `--shrink` to scale every fitted constant by 0.1; the fitted
//! suites must then fail.
//!
//! cargo run --release --example property_suites [-- --shrink]

use lifespan_lab::experiments::{run_property_suites, PropsOptions};

fn main() -> lifespan_lab::Result<()> {
    let shrink = std::env::args().any(|a| a == "--shrink");
    let opts = PropsOptions {
        constant_scale: if shrink { 0.1 } else { 1.0 },
        ..Default::default()
    };
    let report = run_property_suites(&opts, 20_240_601)?;
    for suite in &report.suites {
        println!(
            "[{}] {} ({:.1}s)",
            if suite.passed { "pass" } else { "FAIL" },
            suite.name,
            suite.seconds
        );
        for c in &suite.constants {
            println!(
                "    C {:<22} = {:.4e}  cal max {:.4e}  holdout max {:.4e}  n = {}  violations = {}",
                c.name, c.constant, c.calibration_max, c.holdout_max, c.samples, c.violations
            );
        }
        for c in &suite.checks {
            println!("    {:<44} {:.4e} (limit {:.4e}) {}", c.name, c.value, c.limit, if c.passed { "ok" } else { "FAIL" });
        }
        if let Some(e) = &suite.error {
            println!("    error: {e}");
        }
    }
    println!("all suites passed: {}", report.passed);
    Ok(())
}
