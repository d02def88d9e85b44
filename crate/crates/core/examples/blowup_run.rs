//! One run to blow-up for `λ = i`, `p = 2`, `φ = e^{-x²/2}`: the amplitude
//! history and how the bracketed `T_num` compares with `t_of_s(A)`.
//!
//! cargo run --release --example blowup_run [-- eps]

use lifespan_lab::profile::{ModelParams, ProfileModel};
use lifespan_lab::solver::{estimate_lifespan, initial_data, lifespan_grid, LifespanOptions, Solver, SolverSettings};

fn main() -> lifespan_lab::Result<()> {
    let eps: f64 = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(0.3);
    let params = ModelParams::canonical(eps);
    let est = estimate_lifespan(&params, &LifespanOptions::default())?;
    let t_ode = ProfileModel::new(&params)?.t_of_s(1.0);
    println!(
        "eps = {eps}: T_num = {:?} ({}), ODE time t_of_s(A) = {t_ode:.4}, eps^2 T_num = {:?}",
        est.t_num,
        est.label(),
        est.t_num.map(|t| eps * eps * t)
    );
    // amplitude history up to 95% of T_num
    let t_end = 0.95 * est.t_num.unwrap_or(t_ode);
    let grid = lifespan_grid(&params, 2.0 * t_end, 0.04)?;
    let records: Vec<f64> = (0..=10).map(|k| t_end * k as f64 / 10.0).collect();
    let tr = Solver::new(&params, grid)?.evolve_from(&initial_data(&params, grid)?, &SolverSettings::default(), t_end, &records)?;
    for s in &tr.snapshots {
        println!("t = {:>8.4}  |u|_inf/eps = {:>9.4}  mass = {:.6}", s.t, s.norms.l_inf / eps, s.norms.l2 * s.norms.l2);
    }
    Ok(())
}
