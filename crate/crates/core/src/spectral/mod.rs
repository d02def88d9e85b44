//! Periodic grids, the Fourier conventions used throughout the crate, the free
//! propagator `U(t) = exp(itΔ/2)`, the multiplier `M(t) = exp(ix²/2t)`, the
//! vector field `J = x + it∂ₓ`, and the L², L∞, H¹, Σ and X norms.
//!
//! The transform is normalized as
//!
//! ```text
//! φ̂(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} φ(x) dx  ≈  (2π)^{-1/2} dx Σ_j e^{-i x_j ξ_k} φ(x_j)
//! ```
//!
//! and every module that needs `φ̂` goes through [`Spectral`] or
//! [`FOURIER_NORMALIZATION`]. `sup |φ̂|` enters the life-span constant, so the
//! factor is not cosmetic.

mod field;
mod grid;
mod norms;

use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub use field::{ComplexField, Spectrum};
pub use grid::{Grid1D, XiGrid};
pub use norms::{NormReport, XComponents};

use crate::error::{LabError, Result};

/// `(2π)^{-1/2}`.
pub const FOURIER_NORMALIZATION: f64 = 0.398_942_280_401_432_7;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// FFT plans and precomputed tables for one grid. Immutable after
/// construction; clone the `Arc`s freely across threads.
#[derive(Clone)]
pub struct Spectral {
    grid: Grid1D,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    xs: Arc<Vec<f64>>,
    k_fft: Arc<Vec<f64>>,
}

impl std::fmt::Debug for Spectral {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Spectral").field("grid", &self.grid).finish()
    }
}

impl Spectral {
    pub fn new(grid: Grid1D) -> Self {
        let mut planner = FftPlanner::new();
        let n = grid.len();
        Self {
            grid,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            xs: Arc::new(grid.xs()),
            k_fft: Arc::new(grid.xi_fft_order()),
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn field_from_fn<F: Fn(f64) -> Complex64>(&self, t: f64, f: F) -> Result<ComplexField> {
        ComplexField::from_fn(self.grid, t, f)
    }

    fn check(&self, field: &ComplexField) -> Result<()> {
        if *field.grid() != self.grid {
            return Err(LabError::GridMismatch(format!(
                "field grid {:?} vs engine grid {:?}",
                field.grid(),
                self.grid
            )));
        }
        Ok(())
    }

    /// Raw unnormalized FFT, result in FFT order.
    pub(crate) fn fft_raw(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.forward.process(&mut buf);
        buf
    }

    /// Inverse of [`Self::fft_raw`] including the `1/N`.
    pub(crate) fn ifft_raw(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut buf = values.to_vec();
        self.inverse.process(&mut buf);
        let scale = 1.0 / self.grid.len() as f64;
        buf.iter_mut().for_each(|z| *z *= scale);
        buf
    }

    /// Multiply by `symbol(ξ)` in Fourier space.
    pub(crate) fn apply_multiplier<F: Fn(f64) -> Complex64>(
        &self,
        values: &[Complex64],
        symbol: F,
    ) -> Vec<Complex64> {
        let mut hat = self.fft_raw(values);
        for (z, &k) in hat.iter_mut().zip(self.k_fft.iter()) {
            *z *= symbol(k);
        }
        self.ifft_raw(&hat)
    }

    /// Odd-order spectral derivative; the Nyquist mode is dropped.
    pub(crate) fn derivative_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        let nyq = self.grid.len() / 2;
        let mut hat = self.fft_raw(values);
        for (m, (z, &k)) in hat.iter_mut().zip(self.k_fft.iter()).enumerate() {
            *z *= if m == nyq { Complex64::new(0.0, 0.0) } else { I * k };
        }
        self.ifft_raw(&hat)
    }

    pub(crate) fn second_derivative_values(&self, values: &[Complex64]) -> Vec<Complex64> {
        self.apply_multiplier(values, |k| Complex64::new(-k * k, 0.0))
    }

    /// `φ̂(ξ_k)` on the ascending dual grid.
    pub fn fourier_transform(&self, field: &ComplexField) -> Result<Spectrum> {
        self.check(field)?;
        field.check_finite("fourier_transform")?;
        let n = self.grid.len();
        let raw = self.fft_raw(&field.values);
        let scale = self.grid.dx() * FOURIER_NORMALIZATION;
        let values = (0..n)
            .map(|k| {
                let kp = k as isize - (n / 2) as isize;
                let m = (k + n / 2) % n;
                let sign = if kp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                raw[m] * (scale * sign)
            })
            .collect();
        Spectrum::new(self.grid, values)
    }

    pub fn inverse_fourier_transform(&self, spectrum: &Spectrum, t: f64) -> Result<ComplexField> {
        if *spectrum.grid() != self.grid {
            return Err(LabError::GridMismatch("spectrum grid".into()));
        }
        let n = self.grid.len();
        let mut raw = vec![Complex64::new(0.0, 0.0); n];
        for (k, z) in spectrum.values.iter().enumerate() {
            let kp = k as isize - (n / 2) as isize;
            let sign = if kp.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            raw[(k + n / 2) % n] = z * sign;
        }
        // ifft_raw divides by N; undo the forward scale dx/√(2π).
        let scale = 1.0 / (self.grid.dx() * FOURIER_NORMALIZATION);
        let values = self.ifft_raw(&raw).into_iter().map(|z| z * scale).collect();
        let field = ComplexField::from_parts(self.grid, values, t);
        field.check_finite("inverse_fourier_transform")?;
        Ok(field)
    }

    /// Fraction of `‖φ̂‖₂²` carried by the top octave `|ξ| > ξ_max / 2`.
    pub fn spectral_tail(&self, field: &ComplexField) -> f64 {
        let hat = self.fft_raw(&field.values);
        let cut = 0.5 * self.grid.xi_max();
        let (mut top, mut total) = (0.0, 0.0);
        for (z, &k) in hat.iter().zip(self.k_fft.iter()) {
            let e = z.norm_sqr();
            total += e;
            if k.abs() > cut {
                top += e;
            }
        }
        if total == 0.0 {
            0.0
        } else {
            top / total
        }
    }

    pub fn check_resolved(&self, field: &ComplexField, tol: f64) -> Result<()> {
        let tail = self.spectral_tail(field);
        if tail > tol {
            return Err(LabError::Unresolved(format!(
                "top-octave energy fraction {tail:e} exceeds {tol:e}; refine dx"
            )));
        }
        Ok(())
    }

    /// `U(t) u`, i.e. the Fourier multiplier `e^{-itξ²/2}`. The result is
    /// stamped `u.t + t`.
    pub fn free_propagate(&self, field: &ComplexField, t: f64) -> Result<ComplexField> {
        self.check(field)?;
        field.check_finite("free_propagate")?;
        let values = self.apply_multiplier(&field.values, |k| {
            Complex64::from_polar(1.0, -0.5 * t * k * k)
        });
        Ok(ComplexField::from_parts(self.grid, values, field.t + t))
    }

    pub fn derivative(&self, field: &ComplexField) -> Result<ComplexField> {
        self.check(field)?;
        Ok(ComplexField::from_parts(
            self.grid,
            self.derivative_values(&field.values),
            field.t,
        ))
    }

    /// Pointwise multiplication by `exp(i·sign·x²/(2t))`.
    pub fn apply_m(&self, field: &ComplexField, t: f64, sign: i8) -> Result<ComplexField> {
        self.check(field)?;
        if !(t > 0.0) {
            return Err(LabError::ZeroTime(t));
        }
        let s = f64::from(sign.signum());
        let values = field
            .values
            .iter()
            .zip(self.xs.iter())
            .map(|(z, &x)| z * Complex64::from_polar(1.0, s * x * x / (2.0 * t)))
            .collect();
        Ok(ComplexField::from_parts(self.grid, values, field.t))
    }

    /// `J u = x u + i t ∂ₓ u`, with spectral `∂ₓ`.
    pub fn apply_j(&self, field: &ComplexField, t: f64) -> Result<ComplexField> {
        self.check(field)?;
        let values = self.j_values(&field.values, t);
        Ok(ComplexField::from_parts(self.grid, values, field.t))
    }

    /// `J u` through the conjugation `M(t) (it∂ₓ) M(-t) u`; requires `t > 0`.
    pub fn apply_j_conjugated(&self, field: &ComplexField, t: f64) -> Result<ComplexField> {
        let inner = self.apply_m(field, t, -1)?;
        let d = self.derivative(&inner)?;
        let scaled = d.scaled(I * t);
        self.apply_m(&scaled, t, 1)
    }

    pub(crate) fn j_values(&self, values: &[Complex64], t: f64) -> Vec<Complex64> {
        let d = self.derivative_values(values);
        values
            .iter()
            .zip(&d)
            .zip(self.xs.iter())
            .map(|((u, du), &x)| u * x + I * t * du)
            .collect()
    }

    /// `(u, ∂ₓu, Ju)` at time `t`.
    pub fn components(&self, field: &ComplexField, t: f64) -> Result<XComponents> {
        self.check(field)?;
        let du = self.derivative_values(&field.values);
        let ju = field
            .values
            .iter()
            .zip(&du)
            .zip(self.xs.iter())
            .map(|((u, d), &x)| u * x + I * t * d)
            .collect();
        Ok(XComponents {
            dx: self.grid.dx(),
            u: field.values.clone(),
            du,
            ju,
        })
    }

    /// All norms of `u` at time `t`. `sigma` treats the samples as initial
    /// data (`J` at `t = 0`).
    pub fn norms(&self, field: &ComplexField, t: f64) -> Result<NormReport> {
        self.check(field)?;
        let c = self.components(field, t)?;
        let x_weight: Vec<Complex64> = field
            .values
            .iter()
            .zip(self.xs.iter())
            .map(|(u, &x)| u * x)
            .collect();
        let dx = self.grid.dx();
        let l2 = norms::l2(&c.u, dx);
        let dx_part = norms::l2(&c.du, dx);
        let j_part = norms::l2(&c.ju, dx);
        let x_part = norms::l2(&x_weight, dx);
        Ok(NormReport {
            l2,
            l_inf: field.max_abs(),
            h1: (l2 * l2 + dx_part * dx_part).sqrt(),
            sigma: l2 + dx_part + x_part,
            x_norm: l2 + dx_part + j_part,
            l2_part: l2,
            dx_part,
            j_part,
        })
    }

    pub fn x_norm(&self, field: &ComplexField, t: f64) -> Result<f64> {
        Ok(self.components(field, t)?.x_norm())
    }
}
