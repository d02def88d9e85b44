use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Uniform periodic grid on `[-L, L)` with `N` (even) samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    half_width: f64,
    n_points: usize,
}

impl Grid1D {
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(LabError::InvalidParameter(format!(
                "half width must be positive, got {half_width}"
            )));
        }
        if n_points < 4 || n_points % 2 != 0 {
            return Err(LabError::InvalidParameter(format!(
                "grid size must be an even integer >= 4, got {n_points}"
            )));
        }
        Ok(Self {
            half_width,
            n_points,
        })
    }

    /// Smallest power-of-two grid with spacing at most `max_dx` covering `[-L, L)`.
    pub fn with_spacing(half_width: f64, max_dx: f64) -> Result<Self> {
        let needed = (2.0 * half_width / max_dx).ceil() as usize;
        Self::new(half_width, needed.next_power_of_two().max(4))
    }

    /// Default desk grid: L = 32, N = 2048.
    pub fn desk() -> Self {
        Self {
            half_width: 32.0,
            n_points: 2048,
        }
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n_points as f64
    }

    /// Spacing of the dual (angular) frequency grid, `2π / (N dx) = π / L`.
    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    pub fn x(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.x(j)).collect()
    }

    /// Dual frequencies in ascending order, spanning `[-π/dx, π/dx)`.
    pub fn xi_ascending(&self) -> Vec<f64> {
        let h = self.n_points as isize / 2;
        (0..self.n_points as isize)
            .map(|k| (k - h) as f64 * self.dxi())
            .collect()
    }

    /// Dual frequencies in FFT storage order.
    pub fn xi_fft_order(&self) -> Vec<f64> {
        let n = self.n_points;
        (0..n)
            .map(|m| {
                let k = if m < n / 2 { m as isize } else { m as isize - n as isize };
                k as f64 * self.dxi()
            })
            .collect()
    }

    pub fn xi_max(&self) -> f64 {
        PI / self.dx()
    }
}


/// Symmetric uniform frequency axis `ξ_k = (k − m)·step`, `k = 0..=2m`, used
/// for the profile `V(s, ξ)` and the mollifier. Independent of any x grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiGrid {
    step: f64,
    half_count: usize,
}

impl XiGrid {
    pub fn new(step: f64, half_count: usize) -> Result<Self> {
        if !(step.is_finite() && step > 0.0) || half_count < 4 {
            return Err(LabError::InvalidParameter(format!(
                "xi grid needs step > 0 and at least 4 points per side (step {step}, half {half_count})"
            )));
        }
        Ok(Self { step, half_count })
    }

    /// Grid covering `[-extent, extent]` with spacing at most `max_step`.
    pub fn covering(extent: f64, max_step: f64) -> Result<Self> {
        let half = (extent / max_step).ceil() as usize;
        Self::new(max_step, half.max(4))
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn len(&self) -> usize {
        2 * self.half_count + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn half_count(&self) -> usize {
        self.half_count
    }

    pub fn start(&self) -> f64 {
        -(self.half_count as f64) * self.step
    }

    pub fn extent(&self) -> f64 {
        self.half_count as f64 * self.step
    }

    pub fn xi(&self, k: usize) -> f64 {
        (k as f64 - self.half_count as f64) * self.step
    }

    pub fn xis(&self) -> Vec<f64> {
        (0..self.len()).map(|k| self.xi(k)).collect()
    }
}
