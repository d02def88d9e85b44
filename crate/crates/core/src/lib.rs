//! Simulation and asymptotic analysis of the life span of
//!
//! ```text
//! i∂ₜu + ½∂ₓ²u = λ|u|^{p-1}u,   u(0) = εφ,   2 ≤ p < 3,
//! ```
//!
//! on the line. The crate pairs a split-step Fourier solver with blow-up
//! detection against the explicit approximate solution built from the
//! profile ODE `i∂ₛV = λ|V|^{p-1}V`, so that the measured life span `T(ε)`
//! can be compared with `((3-p)A/2)^{2/(3-p)} ε^{-2(p-1)/(3-p)}`.

pub mod approx;
pub mod error;
pub mod experiments;
pub mod mollifier;
pub mod numerics;
pub mod profile;
pub mod solver;
pub mod spectral;

pub use error::{LabError, Result};
