//! `u_a` and its residual `R` in each of the three time regions, plus the
//! finite-difference check of `R`.
//!
//! cargo run --release --example approximate_solution

use lifespan_lab::approx::{observed_order, ApproxModel};
use lifespan_lab::profile::ModelParams;
use lifespan_lab::spectral::Grid1D;

fn main() -> lifespan_lab::Result<()> {
    let eps = 0.08;
    let model = ApproxModel::new(&ModelParams::canonical(eps))?;
    println!("eps = {eps}, delta = {}, T_B = {:.3}", model.params().delta(), model.t_b());
    for t in [0.5, 6.0, 18.75, 28.0] {
        let n = model.state(t)?.norms();
        println!(
            "t = {t:>6} [{:<7}]  |u_a|_X = {:.5}  |R|_X = {:.3e}  Q1 = {:?}  Q2 = {:?}",
            n.region.label(),
            n.ua,
            n.r,
            n.q1,
            n.q2
        );
    }
    for t in [6.0, 18.75, 28.0] {
        let ctx = model.grid_context(Grid1D::with_spacing(8.0 + 10.0 * t, 0.07)?)?;
        let checks = (0..3)
            .map(|k| model.residual_check(t, 0.01 * t / f64::from(1u32 << k), &ctx))
            .collect::<lifespan_lab::Result<Vec<_>>>()?;
        println!(
            "t = {t}: closed vs differenced R, gaps {:.2e} {:.2e} {:.2e}, order {:.2}",
            checks[0].gap_x,
            checks[1].gap_x,
            checks[2].gap_x,
            observed_order(&checks)
        );
    }
    Ok(())
}
