//! `A` and `((3-p)A/2)^{2/(3-p)}` for a few `(p, λ)`, and the `p = 3`
//! logarithmic bound.
//!
//! cargo run --example theoretical_bound

use lifespan_lab::experiments::{sup_hat, theoretical_bound};
use lifespan_lab::profile::InitialProfile;
use num_complex::Complex64;

fn main() -> lifespan_lab::Result<()> {
    let sup = sup_hat(&InitialProfile::standard_gaussian())?;
    for (p, lambda) in [(2.0, Complex64::new(0.0, 1.0)), (2.5, Complex64::new(0.3, 2.0)), (3.0, Complex64::new(0.0, 1.0))] {
        let b = theoretical_bound(p, lambda, sup, Some(0.1), None)?;
        println!(
            "p = {p}, lambda = {lambda}: A = {}, liminf const = {:?}, T_B(0.1) = {:?}, p=3 log bound = {:?}",
            b.a, b.liminf_const, b.t_b, b.p3_log_bound
        );
    }
    let b = theoretical_bound(2.0, Complex64::new(0.0, -1.0), sup, None, None)?;
    println!("Im lambda < 0: A = {}", b.a);
    Ok(())
}
