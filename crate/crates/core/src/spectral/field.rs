use num_complex::Complex64;

use super::Grid1D;
use crate::error::{LabError, Result};

/// Samples of `u(t, ·)` on a [`Grid1D`].
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    grid: Grid1D,
    pub values: Vec<Complex64>,
    pub t: f64,
}

impl ComplexField {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, t: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::GridMismatch(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let field = Self { grid, values, t };
        field.check_finite("ComplexField::new")?;
        Ok(field)
    }

    pub fn zeros(grid: Grid1D, t: f64) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            t,
        }
    }

    pub fn from_fn<F: Fn(f64) -> Complex64>(grid: Grid1D, t: f64, f: F) -> Result<Self> {
        let values = grid.xs().into_iter().map(f).collect();
        Self::new(grid, values, t)
    }

    pub(crate) fn from_parts(grid: Grid1D, values: Vec<Complex64>, t: f64) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values, t }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn check_finite(&self, context: &str) -> Result<()> {
        match self.values.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            Some(index) => Err(LabError::NonFinite {
                index,
                context: context.to_string(),
            }),
            None => Ok(()),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖u‖₂` by the rectangle rule (exact for trigonometric polynomials).
    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dx()).sqrt()
    }

    /// Largest |u| in the outer 1/64 of the domain on either side, relative to the peak.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.max_abs();
        if peak == 0.0 {
            return 0.0;
        }
        let band = (self.len() / 64).max(2);
        let n = self.len();
        let edge = self.values[..band]
            .iter()
            .chain(&self.values[n - band..])
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        edge / peak
    }

    pub fn check_boundary(&self, tol: f64) -> Result<()> {
        let ratio = self.boundary_ratio();
        if ratio > tol {
            Err(LabError::BoundaryLeak { t: self.t, ratio })
        } else {
            Ok(())
        }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        Self::from_parts(self.grid, self.values.iter().map(|z| z * c).collect(), self.t)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(LabError::GridMismatch("subtracting fields on different grids".into()));
        }
        Ok(Self::from_parts(
            self.grid,
            self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
            self.t,
        ))
    }
}

/// Samples of a transform on the dual grid, ascending in ξ.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid1D,
    pub values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid1D, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::GridMismatch("spectrum length".into()));
        }
        Ok(Self { grid, values })
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn xi(&self) -> Vec<f64> {
        self.grid.xi_ascending()
    }

    pub fn l2(&self) -> f64 {
        (self.values.iter().map(|z| z.norm_sqr()).sum::<f64>() * self.grid.dxi()).sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}
