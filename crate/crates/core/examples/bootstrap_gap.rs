//! `‖u_a(t) − u(t)‖_X / ε` along solver runs, up to `0.8·T_B`.
//!
//! cargo run --release --example bootstrap_gap

use lifespan_lab::experiments::config::BootstrapConfig;
use lifespan_lab::experiments::bootstrap_scan;
use lifespan_lab::profile::ModelParams;

fn main() -> lifespan_lab::Result<()> {
    let reports = bootstrap_scan(&ModelParams::canonical(0.3), &BootstrapConfig::default())?;
    for r in &reports {
        let series: Vec<String> = r.points.iter().map(|p| format!("{:.3}", p.gap_over_eps)).collect();
        println!("eps = {} (T_B = {:.2}): max gap/eps = {:.3}", r.epsilon, r.t_b, r.max_ratio);
        println!("    {}", series.join(" "));
    }
    Ok(())
}
