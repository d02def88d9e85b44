use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use super::ModelParams;
use crate::error::{LabError, Result};
use crate::mollifier::{self, Kernel};
use crate::numerics;
use crate::spectral::XiGrid;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Blow-up floor for `W`; below it the profile is reported as blown up.
pub const W_FLOOR: f64 = 1e-9;

/// Default spacing of the profile's ξ axis.
pub const DEFAULT_XI_STEP: f64 = 0.005;

/// `s(t) = ∫₀ᵗ (ε τ^{-1/2})^{p-1} dτ = 2ε^{p-1} t^{(3-p)/2} / (3-p)`.
pub fn s_of_t(t: f64, p: f64, epsilon: f64) -> f64 {
    2.0 * epsilon.powf(p - 1.0) * t.max(0.0).powf(0.5 * (3.0 - p)) / (3.0 - p)
}

/// Inverse of [`s_of_t`].
pub fn t_of_s(s: f64, p: f64, epsilon: f64) -> f64 {
    ((3.0 - p) * s.max(0.0) / (2.0 * epsilon.powf(p - 1.0))).powf(2.0 / (3.0 - p))
}

/// `A = 1 / ((p-1) Im λ sup|φ̂|^{p-1})`, `+∞` when `Im λ ≤ 0` or `φ̂ ≡ 0`.
pub fn blowup_constant(p: f64, lambda: Complex64, sup_hat: f64) -> f64 {
    let denom = (p - 1.0) * lambda.im * sup_hat.powf(p - 1.0);
    if denom > 0.0 {
        1.0 / denom
    } else {
        f64::INFINITY
    }
}

/// `T_B(ε) = ((3-p)B / (2ε^{p-1}))^{2/(3-p)}`, i.e. `t_of_s(B)`.
pub fn horizon_time(b: f64, p: f64, epsilon: f64) -> f64 {
    t_of_s(b, p, epsilon)
}

/// `∫₀ˢ dσ / (1 - cσ)` without cancellation for small `cs`.
pub(crate) fn inverse_w_integral(c: f64, s: f64) -> f64 {
    if c == 0.0 {
        s
    } else {
        -(-c * s).ln_1p() / c
    }
}

/// Discrete maximum of `|f|` refined by a parabola through the peak sample
/// and its neighbours.
pub fn refined_sup(values: &[f64]) -> f64 {
    let (i, &y1) = match values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
    {
        Some(v) => v,
        None => return 0.0,
    };
    if i == 0 || i + 1 == values.len() {
        return y1;
    }
    let (y0, y2) = (values[i - 1], values[i + 1]);
    let curv = y0 - 2.0 * y1 + y2;
    if curv >= 0.0 {
        return y1;
    }
    (y1 - (y2 - y0).powi(2) / (8.0 * curv)).max(y1)
}

/// `W`, `G`, `V` and the derivatives of `V` on the profile's ξ axis at one `s`.
#[derive(Debug, Clone, Serialize)]
pub struct ProfileEval {
    pub s: f64,
    pub mollified: bool,
    pub xi: Vec<f64>,
    pub w: Vec<f64>,
    pub g: Vec<f64>,
    pub v: Vec<Complex64>,
    pub dv: Vec<Complex64>,
    pub d2v: Vec<Complex64>,
    pub dsv: Vec<Complex64>,
}

/// `V_δ` and the `Q₁` profile at one `(s, ξ)`, from the smooth amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointJet {
    /// `V_δ, ∂ξV_δ, ∂ξ²V_δ, ∂ξ³V_δ`.
    pub v: [Complex64; 4],
    /// `H = W_δ^{-p/(p-1)} e^{iG_δ} φ̂ (ã − a)` and `∂ξH`, so that
    /// `Q₁ = λ ε^p M(t) t^{-p/2} H(s(t), x/t)`.
    pub q1: [Complex64; 2],
}

/// Derivatives of the mollified envelope at one `(s, ξ)`; see
/// [`ProfileModel::envelope_jet`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeJet {
    pub w: f64,
    /// `∂ξᵐ F`, `m = 0..=3`.
    pub f: [Complex64; 4],
    /// `∂ξᵐ ∂ₛF`, `m = 0..=3`.
    pub ds_f: [Complex64; 4],
    /// `∂ξᵐ (W^{-p/(p-1)} e^{iG})`, `m = 0, 1`.
    pub fp: [Complex64; 2],
}

/// ξ-derivatives of `Φ(ã(ξ))` from the ã-derivatives `d` of `Φ` and the
/// jet of `ã` (Faà di Bruno to third order).
fn chain3(d: [Complex64; 4], am: [f64; 4]) -> [Complex64; 4] {
    [
        d[0],
        d[1] * am[1],
        d[2] * am[1] * am[1] + d[1] * am[2],
        d[3] * am[1].powi(3) + 3.0 * d[2] * am[1] * am[2] + d[1] * am[3],
    ]
}

/// `i∂ₛV_δ − N(V_δ)` by central differences in `s` (`lhs`) and in closed form
/// (`rhs`).
#[derive(Debug, Clone)]
pub struct ProfileResidual {
    pub s: f64,
    pub h: f64,
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
}

impl ProfileResidual {
    pub fn max_gap(&self) -> f64 {
        self.lhs
            .iter()
            .zip(&self.rhs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// The profile `V_δ(s, ξ) = W_δ^{-1/(p-1)} e^{iG_δ} φ̂` precomputed on a ξ axis.
#[derive(Debug, Clone)]
pub struct ProfileModel {
    params: ModelParams,
    grid: XiGrid,
    kernel: Kernel,
    hat: Vec<Complex64>,
    dhat: Vec<Complex64>,
    amp: Vec<f64>,
    amp_mollified: Vec<f64>,
    /// `∂ξ(ρ_δ ∗ a)` and `∂ξ²(ρ_δ ∗ a)` on the axis.
    moll_slope: Vec<f64>,
    moll_curv: Vec<f64>,
    sup_hat: f64,
    a_const: f64,
}

impl ProfileModel {
    pub fn new(params: &ModelParams) -> Result<Self> {
        Self::with_step(params, DEFAULT_XI_STEP)
    }

    pub fn with_step(params: &ModelParams, xi_step: f64) -> Result<Self> {
        params.validate()?;
        let delta = params.delta();
        let extent = params.profile.xi_extent(1e-15, 400.0) + delta + 8.0 * xi_step;
        let grid = XiGrid::covering(extent, xi_step)?;
        Self::on_grid(params, grid)
    }

    pub fn on_grid(params: &ModelParams, grid: XiGrid) -> Result<Self> {
        params.validate()?;
        let xis = grid.xis();
        let hat: Vec<Complex64> = xis.iter().map(|&x| params.profile.hat(x)).collect();
        let dhat: Vec<Complex64> = xis.iter().map(|&x| params.profile.dhat(x)).collect();
        let mags: Vec<f64> = hat.iter().map(|z| z.norm()).collect();
        let sup_hat = refined_sup(&mags);
        let edge = mags[0].max(mags[mags.len() - 1]);
        if sup_hat > 0.0 && edge > 1e-12 * sup_hat {
            return Err(LabError::Unresolved(format!(
                "|φ̂| at the edge of the ξ axis (±{}) is {:e} of its peak",
                grid.extent(),
                edge / sup_hat
            )));
        }
        let kernel = mollifier::bump_kernel(params.delta(), grid.step())?;
        let amp = mollifier::power_amplitude(&hat, params.p);
        let amp_mollified = kernel.mollify(&amp);
        let slope = mollifier::power_amplitude_derivative(&hat, &dhat, params.p);
        let moll_slope = kernel.mollify(&slope);
        let moll_curv = kernel.mollify_derivative(&slope);
        let a_const = blowup_constant(params.p, params.lambda, sup_hat);
        Ok(Self {
            params: params.clone(),
            grid,
            kernel,
            hat,
            dhat,
            amp,
            amp_mollified,
            moll_slope,
            moll_curv,
            sup_hat,
            a_const,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn grid(&self) -> &XiGrid {
        &self.grid
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn hat(&self) -> &[Complex64] {
        &self.hat
    }

    pub fn dhat(&self) -> &[Complex64] {
        &self.dhat
    }

    pub fn amplitude(&self, mollified: bool) -> &[f64] {
        if mollified {
            &self.amp_mollified
        } else {
            &self.amp
        }
    }

    pub fn sup_hat(&self) -> f64 {
        self.sup_hat
    }

    /// `A ∈ (0, ∞]`.
    pub fn blowup_constant_a(&self) -> f64 {
        self.a_const
    }

    /// `B = (B/A)·A`; infinite when `A` is.
    pub fn horizon_b(&self) -> f64 {
        self.params.b_fraction * self.a_const
    }

    pub fn s_of_t(&self, t: f64) -> f64 {
        s_of_t(t, self.params.p, self.params.epsilon)
    }

    pub fn t_of_s(&self, s: f64) -> f64 {
        t_of_s(s, self.params.p, self.params.epsilon)
    }

    /// `T_B(ε)`.
    pub fn horizon_time(&self) -> f64 {
        self.t_of_s(self.horizon_b())
    }

    fn check_s(&self, s: f64) -> Result<()> {
        if s < 0.0 {
            return Err(LabError::InvalidParameter(format!("s must be >= 0, got {s}")));
        }
        let b = self.horizon_b();
        if s > b * (1.0 + 1e-12) {
            return Err(LabError::Horizon { s, b });
        }
        Ok(())
    }

    fn c_coeff(&self) -> f64 {
        (self.params.p - 1.0) * self.params.lambda.im
    }

    /// `(W, G)` for amplitude `a` at profile time `s`.
    fn w_and_g(&self, a: f64, s: f64) -> (f64, f64) {
        let c = self.c_coeff() * a;
        let w = 1.0 - c * s;
        let g = -self.params.lambda.re * a * inverse_w_integral(c, s) - FRAC_PI_4;
        (w, g)
    }

    /// `W^{-e/(p-1)} e^{iG}` with `e = 1` for `V`'s envelope and `e = p` for
    /// the `Q₁` envelope.
    fn factor(&self, a: f64, s: f64, exponent: f64) -> (Complex64, f64) {
        let (w, g) = self.w_and_g(a, s);
        (
            Complex64::from_polar(w.powf(-exponent / (self.params.p - 1.0)), g),
            w,
        )
    }

    fn check_w(&self, s: f64, w: &[f64]) -> Result<()> {
        if let Some((k, &wk)) = w.iter().enumerate().find(|(_, &v)| !(v > W_FLOOR)) {
            return Err(LabError::ProfileBlowUp {
                s,
                xi: self.grid.xi(k),
                w: wk,
            });
        }
        Ok(())
    }

    /// Envelope `W_δ^{-e/(p-1)} e^{iG_δ}` on the axis (no `φ̂`).
    pub fn envelope(&self, s: f64, exponent: f64, mollified: bool) -> Result<Vec<Complex64>> {
        self.check_s(s)?;
        self.envelope_unchecked(s, exponent, mollified)
    }

    fn envelope_unchecked(&self, s: f64, exponent: f64, mollified: bool) -> Result<Vec<Complex64>> {
        let amp = self.amplitude(mollified);
        let mut out = Vec::with_capacity(amp.len());
        let mut w = Vec::with_capacity(amp.len());
        for &a in amp {
            let (f, wk) = self.factor(a, s, exponent);
            out.push(f);
            w.push(wk);
        }
        self.check_w(s, &w)?;
        Ok(out)
    }

    /// `∂ₛ(W_δ^{-1/(p-1)} e^{iG_δ}) = -iλ a_δ W_δ^{-1} · (W_δ^{-1/(p-1)} e^{iG_δ})`.
    pub fn envelope_ds(&self, s: f64, mollified: bool) -> Result<Vec<Complex64>> {
        let env = self.envelope(s, 1.0, mollified)?;
        let lambda = self.params.lambda;
        Ok(self
            .amplitude(mollified)
            .iter()
            .zip(&env)
            .map(|(&a, f)| {
                let (w, _) = self.w_and_g(a, s);
                -I * lambda * (a / w) * f
            })
            .collect())
    }

    fn v_unchecked(&self, s: f64, mollified: bool) -> Result<(Vec<f64>, Vec<f64>, Vec<Complex64>)> {
        let amp = self.amplitude(mollified);
        let n = amp.len();
        let (mut w, mut g, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n), Vec::with_capacity(n));
        for (&a, h) in amp.iter().zip(&self.hat) {
            let (wk, gk) = self.w_and_g(a, s);
            w.push(wk);
            g.push(gk);
            v.push(Complex64::from_polar(wk.powf(-1.0 / (self.params.p - 1.0)), gk) * h);
        }
        self.check_w(s, &w)?;
        Ok((w, g, v))
    }

    /// Closed-form profile and its derivatives at `s ∈ [0, B]`. ξ-derivatives
    /// are 4th-order centered differences on the axis; `∂ₛV = -iλ a W^{-1} V`
    /// is exact.
    pub fn eval(&self, s: f64, mollified: bool) -> Result<ProfileEval> {
        self.check_s(s)?;
        let (w, g, v) = self.v_unchecked(s, mollified)?;
        let h = self.grid.step();
        let dv = numerics::d1_grid(&v, h);
        let d2v = numerics::d2_grid(&v, h);
        let lambda = self.params.lambda;
        let dsv = self
            .amplitude(mollified)
            .iter()
            .zip(&w)
            .zip(&v)
            .map(|((&a, &wk), vk)| -I * lambda * (a / wk) * vk)
            .collect();
        Ok(ProfileEval {
            s,
            mollified,
            xi: self.grid.xis(),
            w,
            g,
            v,
            dv,
            d2v,
            dsv,
        })
    }

    /// `|φ̂(ξ)|^{p-1}` or its mollification at an arbitrary ξ.
    pub fn amplitude_at(&self, xi: f64, mollified: bool) -> f64 {
        let p = self.params.p;
        let profile = &self.params.profile;
        if mollified {
            self.kernel.convolve_at(xi, |eta| profile.hat(eta).norm().powf(p - 1.0))
        } else {
            profile.hat(xi).norm().powf(p - 1.0)
        }
    }

    /// `V_δ(s, ξ)` at an arbitrary ξ, without interpolation.
    pub fn v_at(&self, s: f64, xi: f64, mollified: bool) -> Complex64 {
        let a = self.amplitude_at(xi, mollified);
        let (f, _) = self.factor(a, s, 1.0);
        f * self.params.profile.hat(xi)
    }

    /// `[ã, ã', ã'', ã''']` where `ã` is the C² quintic Hermite interpolant
    /// of `(ρ_δ ∗ a, ∂ξ(ρ_δ ∗ a), ∂ξ²(ρ_δ ∗ a))` on the axis, constant at the
    /// edge value beyond it.
    pub fn smooth_amplitude(&self, xi: f64) -> [f64; 4] {
        let h = self.grid.step();
        let u = (xi - self.grid.start()) / h;
        let n = self.grid.len();
        if !(u >= 0.0) {
            return [self.amp_mollified[0], 0.0, 0.0, 0.0];
        }
        if u >= (n - 1) as f64 {
            return [self.amp_mollified[n - 1], 0.0, 0.0, 0.0];
        }
        let i = (u.floor() as usize).min(n - 2);
        let node = |k: usize| [self.amp_mollified[k], self.moll_slope[k], self.moll_curv[k]];
        numerics::quintic_hermite(h, node(i), node(i + 1), u - i as f64)
    }

    /// `|φ̂|^{p-1}` and its slope from `φ̂`, `∂ξφ̂`.
    pub fn raw_amplitude(&self, hat: Complex64, dhat: Complex64) -> [f64; 2] {
        let p = self.params.p;
        [hat.norm().powf(p - 1.0), mollifier::power_amplitude_slope(hat, dhat, p)]
    }

    /// [`PointJet`]s at `s ≤ B` for each ξ. With `mollified = false` the exact
    /// amplitude is used; it has no second derivative in general, so
    /// `∂ξ²V` and `∂ξ³V` come out NaN.
    pub fn jets(&self, s: f64, xis: &[f64], mollified: bool) -> Result<Vec<PointJet>> {
        self.check_s(s)?;
        let lambda = self.params.lambda;
        let c = self.c_coeff();
        Ok(xis
            .iter()
            .map(|&xi| {
                let hj = self.params.profile.hat_jet(xi);
                let raw = self.raw_amplitude(hj[0], hj[1]);
                let am = if mollified {
                    self.smooth_amplitude(xi)
                } else {
                    [raw[0], raw[1], f64::NAN, f64::NAN]
                };
                // F(a) = W^{-1/(p-1)}e^{iG}: ∂ₐF = Fℓ with ℓ = -iλs/W, ∂ₐℓ = ℓq, ∂ₐq = q²
                let (f, w) = self.factor(am[0], s, 1.0);
                let l = -I * lambda * s / w;
                let q = c * s / w;
                let fa = f * l;
                let faa = f * (l * l + l * q);
                let faaa = f * (l * l * l + 3.0 * l * l * q + 2.0 * l * q * q);
                let e = chain3([f, fa, faa, faaa], am);
                let v = [
                    e[0] * hj[0],
                    e[1] * hj[0] + e[0] * hj[1],
                    e[2] * hj[0] + 2.0 * e[1] * hj[1] + e[0] * hj[2],
                    e[3] * hj[0] + 3.0 * e[2] * hj[1] + 3.0 * e[1] * hj[2] + e[0] * hj[3],
                ];
                let fp = f / w;
                let gap = am[0] - raw[0];
                let q1 = [
                    fp * gap * hj[0],
                    fp * (l + q) * am[1] * gap * hj[0]
                        + fp * (am[1] - raw[1]) * hj[0]
                        + fp * gap * hj[1],
                ];
                PointJet { v, q1 }
            })
            .collect())
    }

    /// ξ-derivatives up to order 3 of `F = W_δ^{-1/(p-1)} e^{iG_δ}` and of
    /// `∂ₛF = −iλ ã F / W_δ`, plus `W_δ^{-p/(p-1)} e^{iG_δ}` and its first
    /// ξ-derivative, at one `(s, ξ)`.
    pub fn envelope_jet(&self, s: f64, xi: f64) -> Result<EnvelopeJet> {
        self.check_s(s)?;
        let lambda = self.params.lambda;
        let c = self.c_coeff();
        let am = self.smooth_amplitude(xi);
        let (f, w) = self.factor(am[0], s, 1.0);
        let l = -I * lambda * s / w;
        let q = c * s / w;
        let fa = [
            f,
            f * l,
            f * (l * l + l * q),
            f * (l * l * l + 3.0 * l * l * q + 2.0 * l * q * q),
        ];
        // ∂ₛF = F u with u = −iλã/W; ∂ₐu = −iλ/W², ∂ₐ²u = −2iλcs/W³, ∂ₐ³u = −6iλc²s²/W⁴
        let u = [
            -I * lambda * am[0] / w,
            -I * lambda / (w * w),
            -2.0 * I * lambda * c * s / w.powi(3),
            -6.0 * I * lambda * (c * s).powi(2) / w.powi(4),
        ];
        let ds = [
            fa[0] * u[0],
            fa[1] * u[0] + fa[0] * u[1],
            fa[2] * u[0] + 2.0 * fa[1] * u[1] + fa[0] * u[2],
            fa[3] * u[0] + 3.0 * fa[2] * u[1] + 3.0 * fa[1] * u[2] + fa[0] * u[3],
        ];
        let fp = f / w;
        Ok(EnvelopeJet {
            w,
            f: chain3(fa, am),
            ds_f: chain3(ds, am),
            fp: [fp, fp * (l + q) * am[1]],
        })
    }

    /// `i∂ₛV_δ − λ|V_δ|^{p-1}V_δ` two ways: central difference of step `h`
    /// in `s` (left) and `λ W_δ^{-p/(p-1)} e^{iG_δ} φ̂ (ρ_δ∗|φ̂|^{p-1} − |φ̂|^{p-1})`
    /// (right).
    pub fn residual(&self, s: f64, h: f64, mollified: bool) -> Result<ProfileResidual> {
        self.check_s(s)?;
        let (_, _, v) = self.v_unchecked(s, mollified)?;
        let (_, _, vp) = self.v_unchecked(s + h, mollified)?;
        let (_, _, vm) = self.v_unchecked(s - h, mollified)?;
        let (p, lambda) = (self.params.p, self.params.lambda);
        let lhs = (0..v.len())
            .map(|k| I * (vp[k] - vm[k]) / (2.0 * h) - lambda * v[k].norm().powf(p - 1.0) * v[k])
            .collect();
        let amp = self.amplitude(mollified);
        let rhs = (0..v.len())
            .map(|k| {
                let (f, _) = self.factor(amp[k], s, p);
                lambda * f * self.hat[k] * (amp[k] - self.amp[k])
            })
            .collect();
        Ok(ProfileResidual { s, h, lhs, rhs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::InitialProfile;

    #[test]
    fn s_and_t_are_inverse() {
        assert_eq!(s_of_t(0.0, 2.0, 0.3), 0.0);
        assert!((s_of_t(1.0, 2.0, 0.5) - 1.0).abs() < 1e-15);
        let eps = 0.3;
        assert!((t_of_s(1.0, 2.0, eps) - 1.0 / (4.0 * eps * eps)).abs() < 1e-12);
        for &(p, t) in &[(2.0, 3.7), (2.5, 0.4), (2.9, 123.0)] {
            assert!((t_of_s(s_of_t(t, p, 0.2), p, 0.2) - t).abs() < 1e-10 * t);
        }
    }

    #[test]
    fn blowup_constant_cases() {
        let i = Complex64::new(0.0, 1.0);
        assert_eq!(blowup_constant(2.0, i, 1.0), 1.0);
        assert!((blowup_constant(2.5, 2.0 * i, 1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!(blowup_constant(2.0, -i, 1.0).is_infinite());
        assert!(blowup_constant(2.0, i, 0.0).is_infinite());
        let model = ProfileModel::new(&ModelParams::canonical(0.2)).unwrap();
        assert_eq!(model.sup_hat(), 1.0);
        assert_eq!(model.blowup_constant_a(), 1.0);
    }

    #[test]
    fn refined_sup_finds_off_grid_peak() {
        let f = |x: f64| 1.0 - (x - 0.03) * (x - 0.03);
        let v: Vec<f64> = (-5..=5).map(|k| f(k as f64 * 0.1)).collect();
        assert!((refined_sup(&v) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn profile_at_zero_is_rotated_data() {
        let model = ProfileModel::new(&ModelParams::canonical(0.2)).unwrap();
        let ev = model.eval(0.0, true).unwrap();
        let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
        for (v, h) in ev.v.iter().zip(model.hat()) {
            assert!((v - rot * h).norm() < 1e-15);
        }
    }

    #[test]
    fn pure_gain_profile_at_the_peak() {
        let model = ProfileModel::new(&ModelParams::canonical(0.2)).unwrap();
        let mid = model.grid().half_count();
        for s in [0.1, 0.5, 0.85] {
            let ev = model.eval(s, false).unwrap();
            assert!((ev.w[mid] - (1.0 - s)).abs() < 1e-15);
            assert!((ev.v[mid].norm() - 1.0 / (1.0 - s)).abs() < 1e-12);
            assert!(ev.g.iter().all(|g| (g + FRAC_PI_4).abs() < 1e-15));
        }
    }

    #[test]
    fn horizon_and_blowup_errors() {
        let model = ProfileModel::new(&ModelParams::canonical(0.2)).unwrap();
        assert!(matches!(model.eval(0.95, true), Err(LabError::Horizon { .. })));
        let mut p = ModelParams::canonical(0.2);
        p.b_fraction = 0.999_999_999_9;
        let m = ProfileModel::new(&p).unwrap();
        match m.eval(0.999_999_999_5, false) {
            Err(LabError::ProfileBlowUp { xi, .. }) => assert!(xi.abs() < 1e-3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn mollified_w_respects_floor_bound() {
        let mut p = ModelParams::canonical(0.1);
        p.profile = InitialProfile::HermiteGauss {
            amplitude: 1.5,
            width: 1.0,
        };
        p.lambda = Complex64::new(0.7, 1.3);
        let model = ProfileModel::new(&p).unwrap();
        let (a, b) = (model.blowup_constant_a(), model.horizon_b());
        for k in 0..=10 {
            let s = b * k as f64 / 10.0;
            let ev = model.eval(s, true).unwrap();
            assert!(ev.w.iter().all(|w| 1.0 / w <= a / (a - b) * (1.0 + 1e-12)));
            for ((v, w), h) in ev.v.iter().zip(&ev.w).zip(model.hat()) {
                let expect = w.powf(-1.0 / (p.p - 1.0)) * h.norm();
                assert!((v.norm() - expect).abs() <= 1e-13 * expect.max(1e-300));
            }
        }
    }

    #[test]
    fn pointwise_matches_grid() {
        let mut p = ModelParams::canonical(0.1);
        p.lambda = Complex64::new(-0.4, 0.8);
        p.p = 2.4;
        let model = ProfileModel::new(&p).unwrap();
        let ev = model.eval(0.5 * model.horizon_b(), true).unwrap();
        for k in (0..model.grid().len()).step_by(97) {
            let xi = model.grid().xi(k);
            let z = model.v_at(ev.s, xi, true);
            assert!((z - ev.v[k]).norm() < 1e-12, "xi {xi}");
        }
    }

    #[test]
    fn jets_agree_with_grid_and_differences() {
        let mut p = ModelParams::canonical(0.05);
        p.lambda = Complex64::new(0.6, 1.1);
        p.p = 2.4;
        let model = ProfileModel::new(&p).unwrap();
        let s = 0.7 * model.horizon_b();
        let ev = model.eval(s, true).unwrap();
        let ks: Vec<usize> = (0..model.grid().len()).step_by(131).collect();
        let xis: Vec<f64> = ks.iter().map(|&k| model.grid().xi(k)).collect();
        let jets = model.jets(s, &xis, true).unwrap();
        for (j, &k) in jets.iter().zip(&ks) {
            assert!((j.v[0] - ev.v[k]).norm() < 1e-13);
        }
        let h = 1e-4;
        for &xi in &[-1.234, -0.3, 0.0123, 0.8, 2.1] {
            let at = |x: f64| model.jets(s, &[x], true).unwrap()[0];
            let (jp, jm, j0) = (at(xi + h), at(xi - h), at(xi));
            for k in 1..4 {
                let fd = (jp.v[k - 1] - jm.v[k - 1]) / (2.0 * h);
                let tol = 1e-6 * (1.0 + j0.v[k].norm());
                assert!((j0.v[k] - fd).norm() < tol, "order {k} at {xi}: {} vs {fd}", j0.v[k]);
            }
            let fd = (jp.q1[0] - jm.q1[0]) / (2.0 * h);
            assert!((j0.q1[1] - fd).norm() < 1e-7, "q1' at {xi}");
        }
        // the Q₁ profile is the right side of the residual identity
        let r = model.residual(s, 1e-3, true).unwrap();
        for (j, &k) in jets.iter().zip(&ks) {
            assert!((p.lambda * j.q1[0] - r.rhs[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn envelope_jet_matches_differences() {
        let mut p = ModelParams::canonical(0.05);
        p.lambda = Complex64::new(-0.4, 0.9);
        p.p = 2.3;
        let model = ProfileModel::new(&p).unwrap();
        let s = 0.6 * model.horizon_b();
        let h = 1e-4;
        for &xi in &[-0.9, 0.05, 0.7, 1.6] {
            let j0 = model.envelope_jet(s, xi).unwrap();
            let jp = model.envelope_jet(s, xi + h).unwrap();
            let jm = model.envelope_jet(s, xi - h).unwrap();
            for k in 1..4 {
                let fd = (jp.f[k - 1] - jm.f[k - 1]) / (2.0 * h);
                assert!((j0.f[k] - fd).norm() < 1e-6 * (1.0 + j0.f[k].norm()), "f{k} at {xi}");
                let fd = (jp.ds_f[k - 1] - jm.ds_f[k - 1]) / (2.0 * h);
                assert!((j0.ds_f[k] - fd).norm() < 1e-6 * (1.0 + j0.ds_f[k].norm()), "dsf{k} at {xi}");
            }
            let fd = (jp.fp[0] - jm.fp[0]) / (2.0 * h);
            assert!((j0.fp[1] - fd).norm() < 1e-7);
            let sp = model.envelope_jet(s + h, xi).unwrap();
            let sm = model.envelope_jet(s - h, xi).unwrap();
            for k in 0..4 {
                let fd = (sp.f[k] - sm.f[k]) / (2.0 * h);
                assert!((j0.ds_f[k] - fd).norm() < 1e-6 * (1.0 + fd.norm()), "ds at order {k}");
            }
            assert!((j0.fp[0] * j0.w - j0.f[0]).norm() < 1e-14);
        }
    }

    #[test]
    fn unmollified_residual_vanishes() {
        let mut p = ModelParams::canonical(0.1);
        p.lambda = Complex64::new(0.5, 1.0);
        let model = ProfileModel::new(&p).unwrap();
        let r = model.residual(0.4, 1e-4, false).unwrap();
        assert!(r.rhs.iter().all(|z| z.norm() == 0.0));
        assert!(r.max_gap() < 1e-6, "{}", r.max_gap());
    }

    #[test]
    fn mollified_residual_converges_at_second_order() {
        let mut p = ModelParams::canonical(0.1).with_delta(0.3);
        p.lambda = Complex64::new(0.5, 1.0);
        let model = ProfileModel::new(&p).unwrap();
        let s = 0.6;
        let gaps: Vec<f64> = [0.02, 0.01, 0.005]
            .iter()
            .map(|&h| model.residual(s, h, true).unwrap().max_gap())
            .collect();
        for w in gaps.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.9, "order {order}, gaps {gaps:?}");
        }
    }
}
