use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{ComplexField, Grid1D, FOURIER_NORMALIZATION};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The initial profile `φ`, either a named analytic family (with closed-form
/// `φ̂`) or samples on a periodic grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialProfile {
    /// `a·exp(-(x-x₀)²/(2w²))·e^{ik₀x}`
    Gaussian {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
        #[serde(default)]
        center: f64,
        #[serde(default)]
        momentum: f64,
    },
    /// `a·sech(x/w)`
    Sech {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// `a·(x/w)·exp(-x²/(2w²))`; `φ̂` has a simple zero at `ξ = 0`.
    HermiteGauss {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        width: f64,
    },
    /// Samples `re + i·im` at `x_j = -L + j·2L/N`.
    Sampled {
        half_width: f64,
        re: Vec<f64>,
        im: Vec<f64>,
    },
}

fn one() -> f64 {
    1.0
}

impl Default for InitialProfile {
    fn default() -> Self {
        Self::standard_gaussian()
    }
}

impl InitialProfile {
    /// `φ(x) = e^{-x²/2}`, for which `φ̂(ξ) = e^{-ξ²/2}` and `sup|φ̂| = 1`.
    pub fn standard_gaussian() -> Self {
        Self::Gaussian {
            amplitude: 1.0,
            width: 1.0,
            center: 0.0,
            momentum: 0.0,
        }
    }

    pub fn from_field(field: &ComplexField) -> Self {
        Self::Sampled {
            half_width: field.grid().half_width(),
            re: field.values.iter().map(|z| z.re).collect(),
            im: field.values.iter().map(|z| z.im).collect(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(LabError::InvalidParameter(format!("initial profile: {what}")));
        match self {
            Self::Gaussian {
                amplitude,
                width,
                center,
                momentum,
            } => {
                if !(amplitude.is_finite() && center.is_finite() && momentum.is_finite()) {
                    return bad("non-finite gaussian parameter");
                }
                if !(*width > 0.0 && width.is_finite()) {
                    return bad("width must be positive");
                }
            }
            Self::Sech { amplitude, width } | Self::HermiteGauss { amplitude, width } => {
                if !amplitude.is_finite() || !(*width > 0.0 && width.is_finite()) {
                    return bad("amplitude finite and width positive required");
                }
            }
            Self::Sampled { half_width, re, im } => {
                if re.len() != im.len() {
                    return bad("re/im length mismatch");
                }
                Grid1D::new(*half_width, re.len())?;
                if re.iter().chain(im).any(|v| !v.is_finite()) {
                    return bad("non-finite sample");
                }
            }
        }
        Ok(())
    }

    fn sampled_grid(&self) -> Option<(Grid1D, Vec<Complex64>)> {
        match self {
            Self::Sampled { half_width, re, im } => Some((
                Grid1D::new(*half_width, re.len()).ok()?,
                re.iter().zip(im).map(|(&a, &b)| Complex64::new(a, b)).collect(),
            )),
            _ => None,
        }
    }

    /// `φ(x)`. Sampled data is interpolated linearly and is zero outside its domain.
    pub fn phi(&self, x: f64) -> Complex64 {
        match *self {
            Self::Gaussian {
                amplitude,
                width,
                center,
                momentum,
            } => {
                let y = (x - center) / width;
                Complex64::from_polar(amplitude * (-0.5 * y * y).exp(), momentum * x)
            }
            Self::Sech { amplitude, width } => {
                Complex64::new(amplitude / (x / width).cosh(), 0.0)
            }
            Self::HermiteGauss { amplitude, width } => {
                let y = x / width;
                Complex64::new(amplitude * y * (-0.5 * y * y).exp(), 0.0)
            }
            Self::Sampled { .. } => {
                let (grid, v) = self.sampled_grid().expect("validated sampled profile");
                let u = (x + grid.half_width()) / grid.dx();
                if u < 0.0 || u > (grid.len() - 1) as f64 {
                    return Complex64::new(0.0, 0.0);
                }
                let i = (u.floor() as usize).min(grid.len() - 2);
                let f = u - i as f64;
                v[i] * (1.0 - f) + v[i + 1] * f
            }
        }
    }

    /// `φ̂(ξ) = (2π)^{-1/2} ∫ e^{-ixξ} φ(x) dx`; for sampled data the
    /// rectangle-rule sum over the samples.
    pub fn hat(&self, xi: f64) -> Complex64 {
        match *self {
            Self::Gaussian {
                amplitude,
                width,
                center,
                momentum,
            } => {
                let q = xi - momentum;
                Complex64::from_polar(
                    amplitude * width * (-0.5 * width * width * q * q).exp(),
                    -center * q,
                )
            }
            Self::Sech { amplitude, width } => Complex64::new(
                amplitude * width * (PI / 2.0).sqrt() / (0.5 * PI * width * xi).cosh(),
                0.0,
            ),
            Self::HermiteGauss { amplitude, width } => {
                -I * (amplitude * width * width * xi * (-0.5 * width * width * xi * xi).exp())
            }
            Self::Sampled { .. } => self.direct_sum(xi, false),
        }
    }

    /// `∂ξ φ̂(ξ)`.
    pub fn dhat(&self, xi: f64) -> Complex64 {
        match *self {
            Self::Gaussian {
                width,
                center,
                momentum,
                ..
            } => {
                let q = xi - momentum;
                self.hat(xi) * (Complex64::new(-width * width * q, -center))
            }
            Self::Sech { amplitude, width } => {
                let a = 0.5 * PI * width;
                let c = (a * xi).cosh();
                Complex64::new(
                    -amplitude * width * (PI / 2.0).sqrt() * a * (a * xi).tanh() / c,
                    0.0,
                )
            }
            Self::HermiteGauss { amplitude, width } => {
                let w2 = width * width;
                -I * (amplitude * w2 * (1.0 - w2 * xi * xi) * (-0.5 * w2 * xi * xi).exp())
            }
            Self::Sampled { .. } => self.direct_sum(xi, true),
        }
    }

    /// `φ̂` and its first three ξ-derivatives.
    pub fn hat_jet(&self, xi: f64) -> [Complex64; 4] {
        let re = |v: f64| Complex64::new(v, 0.0);
        match *self {
            Self::Gaussian {
                width,
                center,
                momentum,
                ..
            } => {
                let h = self.hat(xi);
                let l1 = Complex64::new(-width * width * (xi - momentum), -center);
                let l2 = -width * width;
                [h, h * l1, h * (l1 * l1 + l2), h * (l1 * l1 * l1 + 3.0 * l1 * l2)]
            }
            Self::Sech { amplitude, width } => {
                let c = amplitude * width * (PI / 2.0).sqrt();
                let u = 0.5 * PI * width;
                let sech = 1.0 / (u * xi).cosh();
                let tanh = (u * xi).tanh();
                let s2 = sech * sech;
                [
                    re(c * sech),
                    re(-c * u * sech * tanh),
                    re(c * u * u * sech * (1.0 - 2.0 * s2)),
                    re(-c * u.powi(3) * sech * tanh * (1.0 - 6.0 * s2)),
                ]
            }
            Self::HermiteGauss { amplitude, width } => {
                let w2 = width * width;
                let g = (-0.5 * w2 * xi * xi).exp();
                let gj = [
                    g,
                    -w2 * xi * g,
                    (w2 * w2 * xi * xi - w2) * g,
                    (-w2 * w2 * w2 * xi.powi(3) + 3.0 * w2 * w2 * xi) * g,
                ];
                // φ̂ = c·ξ·g, so the k-th derivative is c(ξ g⁽ᵏ⁾ + k g⁽ᵏ⁻¹⁾)
                let c = -I * (amplitude * w2);
                [
                    c * (xi * gj[0]),
                    c * (xi * gj[1] + gj[0]),
                    c * (xi * gj[2] + 2.0 * gj[1]),
                    c * (xi * gj[3] + 3.0 * gj[2]),
                ]
            }
            Self::Sampled { .. } => {
                let (grid, v) = self.sampled_grid().expect("validated sampled profile");
                let mut out = [Complex64::new(0.0, 0.0); 4];
                for (j, z) in v.iter().enumerate() {
                    let x = grid.x(j);
                    let mut term = z * Complex64::from_polar(1.0, -x * xi);
                    for o in out.iter_mut() {
                        *o += term;
                        term *= -I * x;
                    }
                }
                out.map(|z| z * (grid.dx() * FOURIER_NORMALIZATION))
            }
        }
    }

    fn direct_sum(&self, xi: f64, weighted: bool) -> Complex64 {
        let (grid, v) = self.sampled_grid().expect("validated sampled profile");
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, z) in v.iter().enumerate() {
            let x = grid.x(j);
            let term = z * Complex64::from_polar(1.0, -x * xi);
            acc += if weighted { term * (-I * x) } else { term };
        }
        acc * (grid.dx() * FOURIER_NORMALIZATION)
    }

    /// `φ` on `grid`. Sampled data must live on the same grid.
    pub fn sample(&self, grid: Grid1D) -> Result<ComplexField> {
        if let Some((own, v)) = self.sampled_grid() {
            if own != grid {
                return Err(LabError::GridMismatch(format!(
                    "sampled profile lives on {own:?}, requested {grid:?}"
                )));
            }
            return ComplexField::new(grid, v, 0.0);
        }
        ComplexField::from_fn(grid, 0.0, |x| self.phi(x))
    }

    /// Smallest `Ξ` with `|φ̂(ξ)| ≤ tol·sup|φ̂|` for all `|ξ| ≥ Ξ`, found by a
    /// coarse scan out to `xi_limit`.
    pub fn xi_extent(&self, tol: f64, xi_limit: f64) -> f64 {
        let n = 4000;
        let h = xi_limit / n as f64;
        let mags: Vec<(f64, f64)> = (0..=n)
            .flat_map(|k| {
                let xi = k as f64 * h;
                [(xi, self.hat(xi).norm()), (xi, self.hat(-xi).norm())]
            })
            .collect();
        let peak = mags.iter().map(|m| m.1).fold(0.0, f64::max);
        mags.iter()
            .filter(|(_, m)| *m > tol * peak)
            .map(|(xi, _)| *xi + h)
            .fold(h, f64::max)
    }

    /// Half width in ξ holding `fraction` of `‖φ̂‖₂²`. Mass at frequency ξ
    /// travels at speed ξ, so this bounds how fast the solution spreads.
    pub fn spectral_radius(&self, fraction: f64) -> f64 {
        let limit = self.xi_extent(1e-16, 200.0);
        let n = 8000;
        let h = limit / n as f64;
        let dens: Vec<f64> = (0..=n)
            .map(|k| {
                let xi = k as f64 * h;
                self.hat(xi).norm_sqr() + if k > 0 { self.hat(-xi).norm_sqr() } else { 0.0 }
            })
            .collect();
        let total: f64 = dens.iter().sum();
        let mut acc = 0.0;
        for (k, d) in dens.iter().enumerate() {
            acc += d;
            if acc >= fraction * total {
                return k as f64 * h;
            }
        }
        limit
    }
}
