//! The smooth bump `ρ`, its rescalings `ρ_δ(x) = δ^{-1}ρ(x/δ)`, convolution
//! against `|φ̂|^{p-1}`, and the H¹ mollification error with its monotone
//! envelope `𝒪(δ)`.
//!
//! `ρ(x) = exp(-1/(1-x²)) / Z` on `(-1, 1)` with `Z = ∫₋₁¹ exp(-1/(1-x²)) dx`.
//! Its peak `e^{-1}/Z ≈ 0.8286` keeps `0 ≤ ρ ≤ 1`.
//!
//! Convolutions are direct sums over the kernel window; no FFT is used, so
//! nothing wraps around the ends of the frequency axis. Beyond the axis the
//! input is extended by its edge value.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::numerics;
use crate::spectral::XiGrid;

fn unnormalized_bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - x * x)).exp()
    }
}

/// `Z = ∫₋₁¹ exp(-1/(1-x²)) dx`.
pub fn bump_mass() -> f64 {
    static Z: OnceLock<f64> = OnceLock::new();
    *Z.get_or_init(|| numerics::integrate(unnormalized_bump, -1.0, 1.0, 256, 24))
}

/// The normalized bump `ρ` (unit mass, support `(-1, 1)`).
pub fn bump(x: f64) -> f64 {
    unnormalized_bump(x) / bump_mass()
}

/// `ρ_δ` sampled on a uniform axis, together with quadrature weights that sum
/// to one exactly (up to roundoff).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kernel {
    delta: f64,
    step: f64,
    /// `ρ_δ(k·step)` for `k = -m..=m`.
    samples: Vec<f64>,
    /// Normalized weights `step·ρ_δ(k·step) / Σ`.
    weights: Vec<f64>,
}

impl Kernel {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Raw trapezoid mass `step·Σ ρ_δ(x_k)` before renormalization.
    pub fn raw_mass(&self) -> f64 {
        self.step * self.samples.iter().sum::<f64>()
    }

    pub fn radius(&self) -> usize {
        self.samples.len() / 2
    }

    /// `(ρ_δ ∗ f)` for `f` sampled on the same spacing as the kernel.
    pub fn mollify(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let m = self.radius() as isize;
        let mut out = vec![0.0; n];
        if n == 0 {
            return out;
        }
        for (i, o) in out.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (k, w) in self.weights.iter().enumerate() {
                let j = (i as isize + k as isize - m).clamp(0, n as isize - 1) as usize;
                acc += w * f[j];
            }
            *o = acc;
        }
        out
    }

    /// `(ρ_δ′ ∗ f)`, the ξ-derivative of [`Self::mollify`], with the same
    /// normalization. Edges are clamped as in [`Self::mollify`].
    pub fn mollify_derivative(&self, f: &[f64]) -> Vec<f64> {
        let n = f.len();
        let m = self.radius() as isize;
        let total: f64 = self.samples.iter().sum();
        let dw: Vec<f64> = (0..self.samples.len())
            .map(|k| {
                let y = (k as isize - m) as f64 * self.step / self.delta;
                if y.abs() >= 1.0 {
                    0.0
                } else {
                    self.samples[k] * (-2.0 * y / (1.0 - y * y).powi(2)) / (self.delta * total)
                }
            })
            .collect();
        (0..n)
            .map(|i| {
                dw.iter()
                    .enumerate()
                    .map(|(k, w)| {
                        let j = (i as isize - (k as isize - m)).clamp(0, n as isize - 1) as usize;
                        w * f[j]
                    })
                    .sum()
            })
            .collect()
    }

    /// `(ρ_δ ∗ f)(ξ)` for a function evaluated at arbitrary points,
    /// with the same weights as [`Self::mollify`].
    pub fn convolve_at<F: Fn(f64) -> f64>(&self, xi: f64, f: F) -> f64 {
        let m = self.radius() as isize;
        self.weights
            .iter()
            .enumerate()
            .map(|(k, w)| w * f(xi - (k as isize - m) as f64 * self.step))
            .sum()
    }
}

/// `ρ_δ` on an axis of spacing `step`. The support `(-δ, δ)` must hold at
/// least six samples, i.e. `δ ≥ 3·step`.
pub fn bump_kernel(delta: f64, step: f64) -> Result<Kernel> {
    if !(delta.is_finite() && delta > 0.0 && step > 0.0) {
        return Err(LabError::InvalidParameter(format!(
            "kernel needs delta > 0 and step > 0 (delta {delta}, step {step})"
        )));
    }
    if delta < 3.0 * step {
        return Err(LabError::UnderResolvedKernel {
            delta,
            spacing: step,
            required_spacing: delta / 3.0,
        });
    }
    let m = (delta / step).floor() as isize;
    let samples: Vec<f64> = (-m..=m)
        .map(|k| bump(k as f64 * step / delta) / delta)
        .collect();
    let total: f64 = samples.iter().sum();
    let weights = samples.iter().map(|s| s / total).collect();
    Ok(Kernel {
        delta,
        step,
        samples,
        weights,
    })
}

/// `|φ̂|^{p-1}`.
pub fn power_amplitude(hat: &[Complex64], p: f64) -> Vec<f64> {
    hat.iter().map(|z| z.norm().powf(p - 1.0)).collect()
}

/// `∂ξ |φ̂|^{p-1} = (p-1)|φ̂|^{p-2} Re(e^{-i arg φ̂} ∂ξφ̂)`, set to zero where
/// `|φ̂| < 1e-300`.
pub fn power_amplitude_derivative(hat: &[Complex64], dhat: &[Complex64], p: f64) -> Vec<f64> {
    hat.iter()
        .zip(dhat)
        .map(|(z, dz)| power_amplitude_slope(*z, *dz, p))
        .collect()
}

/// Pointwise form of [`power_amplitude_derivative`].
pub fn power_amplitude_slope(z: Complex64, dz: Complex64, p: f64) -> f64 {
    let r = z.norm();
    if r < 1e-300 {
        0.0
    } else {
        (p - 1.0) * r.powf(p - 2.0) * (z.conj() / r * dz).re
    }
}

fn h1_norm(f: &[f64], df: &[f64], step: f64) -> f64 {
    let a: f64 = f.iter().map(|v| v * v).sum();
    let b: f64 = df.iter().map(|v| v * v).sum();
    ((a + b) * step).sqrt()
}

/// `‖ρ_δ ∗ |φ̂|^{p-1} − |φ̂|^{p-1}‖_{H¹}` for `φ̂`, `∂ξφ̂` sampled on `grid`.
/// The derivative of the mollified term is `ρ_δ ∗ ∂ξ|φ̂|^{p-1}`.
pub fn mollification_error(
    hat: &[Complex64],
    dhat: &[Complex64],
    grid: &XiGrid,
    p: f64,
    delta: f64,
) -> Result<f64> {
    if hat.len() != grid.len() || dhat.len() != grid.len() {
        return Err(LabError::GridMismatch("mollification_error inputs".into()));
    }
    let kernel = bump_kernel(delta, grid.step())?;
    let a = power_amplitude(hat, p);
    let da = power_amplitude_derivative(hat, dhat, p);
    let diff: Vec<f64> = kernel.mollify(&a).iter().zip(&a).map(|(m, v)| m - v).collect();
    let ddiff: Vec<f64> = kernel.mollify(&da).iter().zip(&da).map(|(m, v)| m - v).collect();
    Ok(h1_norm(&diff, &ddiff, grid.step()))
}

/// `‖|φ̂|^{p-1}‖_{H¹}`.
pub fn amplitude_h1(hat: &[Complex64], dhat: &[Complex64], grid: &XiGrid, p: f64) -> f64 {
    h1_norm(
        &power_amplitude(hat, p),
        &power_amplitude_derivative(hat, dhat, p),
        grid.step(),
    )
}

/// One rung of the `𝒪(δ)` ladder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopePoint {
    pub delta: f64,
    pub raw: f64,
    pub envelope: f64,
}

/// `𝒪(δ) = min{2‖|φ̂|^{p-1}‖_{H¹}, sup_{η ≤ δ} error(η)}` over a sampled ladder.
/// Returned in ascending δ.
pub fn error_envelope(
    hat: &[Complex64],
    dhat: &[Complex64],
    grid: &XiGrid,
    p: f64,
    deltas: &[f64],
) -> Result<Vec<EnvelopePoint>> {
    let cap = 2.0 * amplitude_h1(hat, dhat, grid, p);
    let mut sorted = deltas.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut running = 0.0f64;
    sorted
        .into_iter()
        .map(|delta| {
            let raw = mollification_error(hat, dhat, grid, p, delta)?;
            running = running.max(raw);
            Ok(EnvelopePoint {
                delta,
                raw,
                envelope: running.min(cap),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_mass_and_peak() {
        // independent check: trapezoid on a very fine grid (the integrand is flat at ±1)
        let n = 200_000;
        let h = 2.0 / n as f64;
        let z: f64 = (1..n).map(|k| unnormalized_bump(-1.0 + k as f64 * h)).sum::<f64>() * h;
        assert!((bump_mass() - z).abs() < 1e-12);
        assert!((bump_mass() - 0.443_993_816_168_079_4).abs() < 1e-12);
        let peak = bump(0.0);
        assert!((peak - 0.828_568_839_869_105_2).abs() < 1e-12, "{peak}");
        assert!(peak <= 1.0);
    }

    #[test]
    fn derivative_kernel_differentiates_the_mollification() {
        let step = 0.005;
        let k = bump_kernel(0.3, step).unwrap();
        let g: Vec<f64> = (0..2000).map(|i| (step * i as f64 - 5.0).sin()).collect();
        let mg = k.mollify(&g);
        let dmg = k.mollify_derivative(&g);
        for i in (200..1800).step_by(100) {
            let fd = (mg[i + 1] - mg[i - 1]) / (2.0 * step);
            assert!((dmg[i] - fd).abs() < 1e-5, "{i}: {} vs {fd}", dmg[i]);
        }
    }

    #[test]
    fn kernel_mass_support_and_scaling() {
        for delta in [0.5, 0.1] {
            let k = bump_kernel(delta, 0.005).unwrap();
            let mass: f64 = k.weights().iter().sum();
            assert!((mass - 1.0).abs() < 1e-12);
            assert!((k.raw_mass() - 1.0).abs() < 1e-5);
            // support strictly inside (-δ, δ)
            let m = k.radius() as f64;
            assert!(m * 0.005 <= delta);
            assert!((k.samples()[k.radius()] * delta - bump(0.0)).abs() < 1e-14);
        }
        assert_eq!(bump(1.0), 0.0);
        assert_eq!(bump(-1.3), 0.0);
    }

    #[test]
    fn under_resolved_kernel_is_rejected() {
        match bump_kernel(0.01, 0.005) {
            Err(LabError::UnderResolvedKernel {
                required_spacing, ..
            }) => assert!((required_spacing - 0.01 / 3.0).abs() < 1e-15),
            other => panic!("{other:?}"),
        }
        assert!(bump_kernel(0.015, 0.005).is_ok());
    }

    #[test]
    fn constants_and_lines_are_fixed_points() {
        let k = bump_kernel(0.2, 0.01).unwrap();
        let c = vec![3.5; 200];
        assert!(k.mollify(&c).iter().all(|v| (v - 3.5).abs() < 1e-12));
        let line: Vec<f64> = (0..200).map(|i| 0.3 * i as f64 - 2.0).collect();
        let out = k.mollify(&line);
        for i in 30..170 {
            assert!((out[i] - line[i]).abs() < 1e-11);
        }
    }
}
