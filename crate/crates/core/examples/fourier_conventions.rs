//! The unitary transform `φ̂(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} φ(x) dx`, the free
//! flow `U(t)` and the operator `J = x + it∂ₓ` on the desk grid.
//!
//! cargo run --example fourier_conventions

use lifespan_lab::spectral::{Grid1D, Spectral};
use num_complex::Complex64;

fn main() -> lifespan_lab::Result<()> {
    let sp = Spectral::new(Grid1D::desk());
    let phi = sp.field_from_fn(0.0, |x| Complex64::new((-0.5 * x * x).exp(), 0.0))?;
    let hat = sp.fourier_transform(&phi)?;
    // e^{-x²/2} is its own transform in this normalization
    let peak = hat.max_abs();
    println!("sup|phi_hat| = {peak:.15} (exact 1)");
    println!("|phi|_2 = {:.15}, |phi_hat|_2 = {:.15}", phi.l2(), hat.l2());

    let sigma = sp.norms(&phi, 0.0)?.sigma;
    println!("Sigma norm = {sigma:.12} (exact pi^(1/4)(1+sqrt 2) = {:.12})", std::f64::consts::PI.powf(0.25) * (1.0 + 2f64.sqrt()));
    for t in [0.0, 1.0, 5.0] {
        let u = sp.free_propagate(&phi, t)?;
        println!("t = {t}: X norm of U(t)phi = {:.12}", sp.x_norm(&u, t)?);
    }

    // J U(t) = U(t) x
    let t = 0.7;
    let lhs = sp.apply_j(&sp.free_propagate(&phi, t)?, t)?;
    let xphi = sp.field_from_fn(0.0, |x| Complex64::new(x * (-0.5 * x * x).exp(), 0.0))?;
    let rhs = sp.free_propagate(&xphi, t)?;
    println!("|J U(t)phi - U(t)(x phi)|_2 = {:.3e}", lhs.sub(&rhs)?.l2());
    Ok(())
}
