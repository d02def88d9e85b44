//! The closed-form profile `V(s, ξ) = W^{-1/(p-1)} e^{iG} e^{-iπ/4} φ̂(ξ)`,
//! the blow-up constant `A` and a cross-check against RK4.
//!
//! cargo run --example profile_ode

use lifespan_lab::profile::{rk4_oracle, ModelParams, ProfileModel};

fn main() -> lifespan_lab::Result<()> {
    let params = ModelParams::canonical(0.1);
    let model = ProfileModel::new(&params)?;
    let a = model.blowup_constant_a();
    let b = model.horizon_b();
    println!("A = {a}, B = {b}, T_B = {}", model.horizon_time());
    for k in 0..=4 {
        let s = b * k as f64 / 4.0;
        let ev = model.eval(s, false)?;
        let w_min = ev.w.iter().copied().fold(f64::INFINITY, f64::min);
        let peak = ev.v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let worst = rk4_oracle(&model, s, 64)?
            .into_iter()
            .map(|(j, v)| (v - ev.v[j]).norm())
            .fold(0.0, f64::max);
        println!("s = {s:.4}: min W = {w_min:.4}, sup|V| = {peak:.4}, |closed - rk4| = {worst:.2e}");
    }
    // |V(s, 0)| = 1/(1 - s) for p = 2, λ = i, φ̂(0) = 1
    let s = 0.5;
    println!("|V(0.5, 0)| = {} (exact 2)", model.v_at(s, 0.0, false).norm());
    Ok(())
}
