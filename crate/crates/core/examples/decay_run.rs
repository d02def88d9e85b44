//! Global regime: `Im λ < 0` gives no blow-up, the mass decays, and
//! `(1+t)^{1/2}‖u‖_∞` stays bounded by a multiple of `‖u‖_X`.
//!
//! cargo run --release --example decay_run

use lifespan_lab::profile::ModelParams;
use lifespan_lab::solver::{estimate_lifespan, evolve, lifespan_grid, LifespanOptions, SolverConfig, SolverSettings};
use num_complex::Complex64;

fn main() -> lifespan_lab::Result<()> {
    let mut params = ModelParams::canonical(0.5);
    params.lambda = Complex64::new(0.0, -1.0);
    let est = estimate_lifespan(&params, &LifespanOptions::default())?;
    println!("life span estimate: {} (horizon {})", est.label(), est.horizon);

    let t_end = 20.0;
    let config = SolverConfig {
        grid: lifespan_grid(&params, 2.0 * t_end, 0.05)?,
        params,
        settings: SolverSettings::default(),
        t_end,
        record_times: (0..=10).map(|k| 2.0 * k as f64).collect(),
    };
    for s in &evolve(&config)?.snapshots {
        let n = &s.norms;
        println!(
            "t = {:>5}: mass = {:.6}  X = {:.6}  (1+t)^(1/2)|u|_inf/X = {:.4}",
            s.t,
            n.l2 * n.l2,
            n.x_norm,
            (1.0 + s.t).sqrt() * n.l_inf / n.x_norm
        );
    }
    Ok(())
}
