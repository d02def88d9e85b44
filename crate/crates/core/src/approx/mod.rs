//! The approximate solution
//!
//! ```text
//! u_a(t) = χ(εt) U(t)(εφ) + (1 − χ(εt)) m(t),   m(t, x) = ε M(t) t^{-1/2} V_δ(s(t), x/t),
//! ```
//!
//! its residual `R = 𝓛u_a − N(u_a)` (with `𝓛 = i∂ₜ + ½∂ₓ²`) in the three
//! time regions, the matching gap `U(t)(εφ) − m(t)` and the integrated
//! residual budget.
//!
//! Every field here has the form `M(t) g(x/t)` once `t ≥ 1`, so two
//! representations are offered. On an x grid ([`GridContext`]) fields are
//! sampled pointwise. In the reduced picture the same field is stored as `g`
//! on a ξ axis; with `ξ = x/t`
//!
//! ```text
//! u = M g,   ∂ₓu = M (iξ g + g'/t),   Ju = M i g',   dx = t dξ,
//! ```
//!
//! so X norms at large `t` cost nothing extra and need no huge x grid.

mod bootstrap;
mod budget;

use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bootstrap::{bootstrap_gap, BootstrapPoint, BootstrapReport};
pub use budget::{
    matching_gap, residual_budget, BudgetOptions, BudgetSample, MatchingGap, RegionIntegral,
    ResidualBudget,
};

use crate::error::{LabError, Result};
use crate::mollifier;
use crate::numerics;
use crate::profile::{ModelParams, ProfileModel};
use crate::spectral::{ComplexField, Grid1D, Spectral, XComponents};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn bump01(y: f64) -> f64 {
    if y <= 0.0 || y >= 1.0 {
        0.0
    } else {
        (-1.0 / (y * (1.0 - y))).exp()
    }
}

fn bump01_integral(y: f64) -> f64 {
    numerics::integrate(bump01, 0.0, y, 16, 20)
}

fn bump01_mass() -> f64 {
    static MASS: OnceLock<f64> = OnceLock::new();
    *MASS.get_or_init(|| bump01_integral(1.0))
}

/// `χ(τ) = 1 − ∫₀^{τ-1} b / ∫₀¹ b` with `b(y) = exp(−1/(y(1−y)))` on `(0, 1)`.
/// Equal to 1 for `τ ≤ 1`, 0 for `τ ≥ 2`, symmetric about `τ = 3/2`.
pub fn cutoff_chi(tau: f64) -> f64 {
    let y = tau - 1.0;
    if y <= 0.0 {
        return 1.0;
    }
    if y >= 1.0 {
        return 0.0;
    }
    // integrate over the shorter side so that χ(3/2 + h) = 1 − χ(3/2 − h) to roundoff
    if y <= 0.5 {
        1.0 - bump01_integral(y) / bump01_mass()
    } else {
        bump01_integral(1.0 - y) / bump01_mass()
    }
}

/// `χ'(τ) = −b(τ − 1) / ∫₀¹ b`.
pub fn cutoff_chi_prime(tau: f64) -> f64 {
    -bump01(tau - 1.0) / bump01_mass()
}

/// Which formula for `u_a` and `R` applies at time `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    /// `εt ≤ 1`: `u_a = U(t)(εφ)`.
    Free,
    /// `1 < εt < 2`: both pieces present.
    Blend,
    /// `εt ≥ 2`: `u_a = m`.
    Profile,
}

impl Region {
    pub fn of(t: f64, epsilon: f64) -> Self {
        let tau = epsilon * t;
        if tau <= 1.0 {
            Region::Free
        } else if tau >= 2.0 {
            Region::Profile
        } else {
            Region::Blend
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Region::Free => "free",
            Region::Blend => "blend",
            Region::Profile => "profile",
        }
    }

    pub const ALL: [Region; 3] = [Region::Free, Region::Blend, Region::Profile];
}

/// How the fields of an [`ApproxState`] are sampled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Representation {
    Grid,
    Reduced,
}

/// `u_a`, its ingredients and `R` at one time, as X-norm components.
#[derive(Debug, Clone)]
pub struct ApproxState {
    pub t: f64,
    pub region: Region,
    pub representation: Representation,
    pub chi: f64,
    /// `ε χ'(εt)`, the time derivative of `χ(εt)`.
    pub chi_rate: f64,
    /// Absent in the profile region.
    pub u_free: Option<XComponents>,
    /// Absent in the free region.
    pub m: Option<XComponents>,
    pub ua: XComponents,
    pub r: XComponents,
    /// `Q₁`, `Q₂`; absent in the free region.
    pub q1: Option<XComponents>,
    pub q2: Option<XComponents>,
}

/// X norms of the pieces of an [`ApproxState`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateNorms {
    pub t: f64,
    pub region: Region,
    pub ua: f64,
    pub r: f64,
    pub u_free: Option<f64>,
    pub m: Option<f64>,
    pub q1: Option<f64>,
    pub q2: Option<f64>,
}

impl ApproxState {
    pub fn norms(&self) -> StateNorms {
        StateNorms {
            t: self.t,
            region: self.region,
            ua: self.ua.x_norm(),
            r: self.r.x_norm(),
            u_free: self.u_free.as_ref().map(XComponents::x_norm),
            m: self.m.as_ref().map(XComponents::x_norm),
            q1: self.q1.as_ref().map(XComponents::x_norm),
            q2: self.q2.as_ref().map(XComponents::x_norm),
        }
    }
}

/// An x grid together with `εφ` sampled on it.
#[derive(Debug, Clone)]
pub struct GridContext {
    spectral: Spectral,
    u0: ComplexField,
}

impl GridContext {
    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    pub fn grid(&self) -> &Grid1D {
        self.spectral.grid()
    }

    pub fn initial(&self) -> &ComplexField {
        &self.u0
    }
}

/// Sample points for one evaluation: the ξ values, the phase `M(t, x)` when
/// sampling on an x grid, and the x spacing.
struct Frame {
    t: f64,
    xis: Vec<f64>,
    phase: Option<Vec<Complex64>>,
    dx: f64,
}

impl Frame {
    /// Components of `M(t) g(x/t)` from `g`, `g'` at the frame's ξ values.
    fn lift(&self, g: &[Complex64], dg: &[Complex64]) -> XComponents {
        let n = self.xis.len();
        let mut u = Vec::with_capacity(n);
        let mut du = Vec::with_capacity(n);
        let mut ju = Vec::with_capacity(n);
        for k in 0..n {
            let ph = self.phase.as_ref().map_or(Complex64::new(1.0, 0.0), |p| p[k]);
            u.push(ph * g[k]);
            du.push(ph * (I * self.xis[k] * g[k] + dg[k] / self.t));
            ju.push(ph * I * dg[k]);
        }
        XComponents { dx: self.dx, u, du, ju }
    }
}

/// The approximate solution for one parameter set.
#[derive(Debug, Clone)]
pub struct ApproxModel {
    params: ModelParams,
    profile: ProfileModel,
    aux: GridContext,
}

impl ApproxModel {
    /// Needs `ε < 1`, since `m` is only defined for `t > 1` and the blend
    /// region starts at `t = 1/ε`.
    pub fn new(params: &ModelParams) -> Result<Self> {
        params.validate()?;
        if params.epsilon >= 1.0 {
            return Err(LabError::InvalidParameter(format!(
                "the approximate solution needs epsilon < 1 (got {})",
                params.epsilon
            )));
        }
        let profile = ProfileModel::new(params)?;
        let grid = match params.profile {
            crate::profile::InitialProfile::Sampled { half_width, ref re, .. } => {
                Grid1D::new(half_width, re.len())?
            }
            _ => Grid1D::new(128.0, 4096)?,
        };
        let spectral = Spectral::new(grid);
        let phi = params.profile.sample(grid)?;
        let u0 = phi.scaled(Complex64::new(params.epsilon, 0.0));
        Ok(Self {
            params: params.clone(),
            profile,
            aux: GridContext { spectral, u0 },
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn profile(&self) -> &ProfileModel {
        &self.profile
    }

    pub fn epsilon(&self) -> f64 {
        self.params.epsilon
    }

    /// `T_B = t(B)`.
    pub fn t_b(&self) -> f64 {
        self.profile.horizon_time()
    }

    pub fn region(&self, t: f64) -> Region {
        Region::of(t, self.params.epsilon)
    }

    /// The grid used for the reduced picture and for early times.
    pub fn aux_context(&self) -> &GridContext {
        &self.aux
    }

    pub fn grid_context(&self, grid: Grid1D) -> Result<GridContext> {
        let phi = self.params.profile.sample(grid)?;
        Ok(GridContext {
            spectral: Spectral::new(grid),
            u0: phi.scaled(Complex64::new(self.params.epsilon, 0.0)),
        })
    }

    /// `𝒪(δ)`: running max of the H¹ mollification error over `δ·2^{-k}`,
    /// `k = 0..=3`, keeping rungs the ξ axis resolves.
    pub fn o_delta(&self) -> Result<f64> {
        let delta = self.params.delta();
        let step = self.profile.grid().step();
        let ladder: Vec<f64> = (0..4)
            .map(|k| delta / f64::from(1u32 << k))
            .filter(|&d| d >= 3.0 * step)
            .collect();
        let env = mollifier::error_envelope(
            self.profile.hat(),
            self.profile.dhat(),
            self.profile.grid(),
            self.params.p,
            &ladder,
        )?;
        Ok(env.last().map_or(0.0, |e| e.envelope))
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(LabError::InvalidParameter(format!("time must be >= 0, got {t}")));
        }
        let tb = self.t_b();
        if t > tb * (1.0 + 1e-12) {
            return Err(LabError::Horizon {
                s: self.profile.s_of_t(t),
                b: self.profile.horizon_b(),
            });
        }
        Ok(())
    }

    /// The state at `t`: on the auxiliary x grid for `t < 1`, reduced after.
    pub fn state(&self, t: f64) -> Result<ApproxState> {
        if t < 1.0 {
            self.state_on_grid(t, &self.aux)
        } else {
            self.state_reduced(t)
        }
    }

    pub fn state_on_grid(&self, t: f64, ctx: &GridContext) -> Result<ApproxState> {
        self.check_time(t)?;
        let region = self.region(t);
        let free = if region == Region::Profile {
            None
        } else {
            let field = ctx.spectral.free_propagate(&ctx.u0, t)?;
            Some(ctx.spectral.components(&field, t)?)
        };
        let frame = if region == Region::Free {
            None
        } else {
            if t <= 0.0 {
                return Err(LabError::ZeroTime(t));
            }
            let xs = ctx.spectral.xs();
            Some(Frame {
                t,
                xis: xs.iter().map(|x| x / t).collect(),
                phase: Some(xs.iter().map(|x| Complex64::from_polar(1.0, x * x / (2.0 * t))).collect()),
                dx: ctx.grid().dx(),
            })
        };
        self.assemble(t, Representation::Grid, free, frame.as_ref())
    }

    /// The state at `t ≥ 1` in the reduced picture on the auxiliary ξ axis.
    pub fn state_reduced(&self, t: f64) -> Result<ApproxState> {
        self.check_time(t)?;
        if t < 1.0 {
            return Err(LabError::InvalidParameter(format!(
                "the reduced picture is used for t >= 1 only (t = {t})"
            )));
        }
        let region = self.region(t);
        let frame = self.reduced_frame(t);
        let free = if region == Region::Profile {
            None
        } else {
            let (g, dg) = self.free_reduced(t)?;
            Some(frame.lift(&g, &dg))
        };
        let profile_frame = (region != Region::Free).then_some(&frame);
        self.assemble(t, Representation::Reduced, free, profile_frame)
    }

    fn reduced_frame(&self, t: f64) -> Frame {
        let grid = self.aux.grid();
        Frame {
            t,
            xis: grid.xi_ascending(),
            phase: None,
            dx: t * grid.dxi(),
        }
    }

    /// `g`, `g'` with `U(t)(εφ) = M(t) g(x/t)`:
    /// `g = (it)^{-1/2} F[M(t)εφ]`, `g' = (it)^{-1/2} F[−iy M(t)εφ]`.
    fn free_reduced(&self, t: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
        let sp = &self.aux.spectral;
        let chirped = sp.apply_m(&self.aux.u0, t, 1)?;
        let weighted = ComplexField::new(
            *sp.grid(),
            chirped.values.iter().zip(sp.xs()).map(|(z, &y)| -I * y * z).collect(),
            t,
        )?;
        let c = Complex64::from_polar(t.powf(-0.5), -FRAC_PI_4);
        let g = sp.fourier_transform(&chirped)?.values.iter().map(|z| c * z).collect();
        let dg = sp.fourier_transform(&weighted)?.values.iter().map(|z| c * z).collect();
        Ok((g, dg))
    }

    /// `m`, `Q₁`, `Q₂` on `frame`:
    ///
    /// ```text
    /// m  = ε t^{-1/2} M V_δ,
    /// Q₁ = λ ε^p t^{-p/2} M H,         H = W_δ^{-p/(p-1)} e^{iG_δ} φ̂ (ρ_δ∗|φ̂|^{p-1} − |φ̂|^{p-1}),
    /// Q₂ = ε t^{-5/2} M ∂ξ²V_δ / 2.
    /// ```
    fn profile_parts(&self, frame: &Frame) -> Result<[XComponents; 3]> {
        let t = frame.t;
        let (eps, p, lambda) = (self.params.epsilon, self.params.p, self.params.lambda);
        let s = self.profile.s_of_t(t);
        let jets = self.profile.jets(s, &frame.xis, true)?;
        let cm = eps * t.powf(-0.5);
        let c1 = lambda * eps.powf(p) * t.powf(-0.5 * p);
        let c2 = 0.5 * eps * t.powf(-2.5);
        let pick = |f: &dyn Fn(&crate::profile::PointJet) -> Complex64| -> Vec<Complex64> {
            jets.iter().map(f).collect()
        };
        let m = frame.lift(&pick(&|j| cm * j.v[0]), &pick(&|j| cm * j.v[1]));
        let q1 = frame.lift(&pick(&|j| c1 * j.q1[0]), &pick(&|j| c1 * j.q1[1]));
        let q2 = frame.lift(&pick(&|j| c2 * j.v[2]), &pick(&|j| c2 * j.v[3]));
        Ok([m, q1, q2])
    }

    fn assemble(
        &self,
        t: f64,
        representation: Representation,
        free: Option<XComponents>,
        frame: Option<&Frame>,
    ) -> Result<ApproxState> {
        let (eps, p, lambda) = (self.params.epsilon, self.params.p, self.params.lambda);
        let region = self.region(t);
        let chi = cutoff_chi(eps * t);
        let chi_rate = eps * cutoff_chi_prime(eps * t);
        let one = Complex64::new(1.0, 0.0);
        let re = |x: f64| Complex64::new(x, 0.0);
        let state = match region {
            Region::Free => {
                let u = free.ok_or_else(|| LabError::InvalidParameter("free part missing".into()))?;
                let r = u.nonlinearity(lambda, p).scale(-one);
                ApproxState {
                    t,
                    region,
                    representation,
                    chi,
                    chi_rate,
                    ua: u.clone(),
                    u_free: Some(u),
                    m: None,
                    r,
                    q1: None,
                    q2: None,
                }
            }
            Region::Blend | Region::Profile => {
                let frame = frame.ok_or_else(|| LabError::InvalidParameter("profile frame missing".into()))?;
                let [m, q1, q2] = self.profile_parts(frame)?;
                let q = q1.combine(one, &q2, one);
                if region == Region::Profile {
                    ApproxState {
                        t,
                        region,
                        representation,
                        chi,
                        chi_rate,
                        ua: m.clone(),
                        u_free: None,
                        m: Some(m),
                        r: q,
                        q1: Some(q1),
                        q2: Some(q2),
                    }
                } else {
                    let u = free.ok_or_else(|| LabError::InvalidParameter("free part missing".into()))?;
                    let ua = u.combine(re(chi), &m, re(1.0 - chi));
                    let n_ua = ua.nonlinearity(lambda, p);
                    let n_m = m.nonlinearity(lambda, p);
                    // iεχ'(u_free − m) + (1−χ)(N(m) − N(u_a)) − χN(u_a) + (1−χ)Q
                    let r = u
                        .combine(I * chi_rate, &m, -I * chi_rate)
                        .combine(one, &n_m.combine(one, &n_ua, -one), re(1.0 - chi))
                        .combine(one, &n_ua, re(-chi))
                        .combine(one, &q, re(1.0 - chi));
                    ApproxState {
                        t,
                        region,
                        representation,
                        chi,
                        chi_rate,
                        ua,
                        u_free: Some(u),
                        m: Some(m),
                        r,
                        q1: Some(q1),
                        q2: Some(q2),
                    }
                }
            }
        };
        Ok(state)
    }

    /// Values of `u_a(t)` on the context grid.
    pub fn ua_on_grid(&self, t: f64, ctx: &GridContext) -> Result<ComplexField> {
        let state = self.state_on_grid(t, ctx)?;
        ComplexField::new(*ctx.grid(), state.ua.u, t)
    }

    /// Closed-form `R(t)` against `i∂ₜu_a + ½∂ₓ²u_a − N(u_a)` with a
    /// five-point stencil of step `h` in `t` and spectral `∂ₓ²`.
    pub fn residual_check(&self, t: f64, h: f64, ctx: &GridContext) -> Result<ResidualCheck> {
        if !(h > 0.0) || t - 2.0 * h < 0.0 {
            return Err(LabError::InvalidParameter(format!(
                "finite-difference step h = {h} must be positive with t - 2h >= 0 (t = {t})"
            )));
        }
        let state = self.state_on_grid(t, ctx)?;
        let at = |tt: f64| self.state_on_grid(tt, ctx).map(|s| s.ua.u);
        let (p2, p1, m1, m2) = (at(t + 2.0 * h)?, at(t + h)?, at(t - h)?, at(t - 2.0 * h)?);
        let sp = &ctx.spectral;
        let lap = sp.second_derivative_values(&state.ua.u);
        let (p, lambda) = (self.params.p, self.params.lambda);
        let fd: Vec<Complex64> = (0..lap.len())
            .map(|k| {
                let dt = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
                let w = state.ua.u[k];
                I * dt + 0.5 * lap[k] - lambda * w.norm().powf(p - 1.0) * w
            })
            .collect();
        let diff = ComplexField::new(
            *ctx.grid(),
            fd.iter().zip(&state.r.u).map(|(a, b)| a - b).collect(),
            t,
        )?;
        let gap = sp.x_norm(&diff, t)?;
        let closed = state.r.x_norm();
        Ok(ResidualCheck {
            t,
            h,
            region: state.region,
            closed_x: closed,
            gap_x: gap,
            relative: gap / closed,
        })
    }
}

/// One finite-difference comparison of `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualCheck {
    pub t: f64,
    pub h: f64,
    pub region: Region,
    pub closed_x: f64,
    pub gap_x: f64,
    pub relative: f64,
}

/// Observed order `log₂(e(h)/e(h/2))` from successive halvings; the minimum
/// over consecutive pairs.
pub fn observed_order(checks: &[ResidualCheck]) -> f64 {
    checks
        .windows(2)
        .map(|w| (w[0].gap_x / w[1].gap_x).log2() / (w[0].h / w[1].h).log2())
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests;
