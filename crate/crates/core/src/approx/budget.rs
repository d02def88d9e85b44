use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ApproxModel, Region};
use crate::error::{LabError, Result};
use crate::spectral::ComplexField;

/// `U(t)(εφ) − m(t)` in the blend region and its split `f₁ + f₂`:
///
/// ```text
/// f₁ = ε M t^{-1/2} (V_δ(0, x/t) − V_δ(s(t), x/t)),
/// f₂ = ε M (it)^{-1/2} (F[M(t)φ] − φ̂)(x/t).
/// ```
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchingGap {
    pub t: f64,
    pub epsilon: f64,
    pub gap_x: f64,
    pub f1_x: f64,
    pub f2_x: f64,
    /// `‖(f₁ + f₂) − gap‖_X`, zero up to roundoff.
    pub split_defect: f64,
    /// `ε^p t^{(3-p)/2}`
    pub f1_budget: f64,
    /// `ε/t`
    pub f2_budget: f64,
    /// `ε^{3/2}`
    pub eps_three_halves: f64,
}

pub fn matching_gap(model: &ApproxModel, t: f64) -> Result<MatchingGap> {
    let eps = model.epsilon();
    if model.region(t) != Region::Blend {
        return Err(LabError::InvalidParameter(format!(
            "matching gap is defined for 1/eps < t < 2/eps (t = {t}, eps = {eps})"
        )));
    }
    let state = model.state_reduced(t)?;
    let (free, m) = match (&state.u_free, &state.m) {
        (Some(f), Some(m)) => (f, m),
        _ => return Err(LabError::InvalidParameter("blend state without both pieces".into())),
    };
    let one = Complex64::new(1.0, 0.0);
    let gap = free.combine(one, m, -one);

    let frame = model.reduced_frame(t);
    let profile = model.profile();
    let s = profile.s_of_t(t);
    let now = profile.jets(s, &frame.xis, true)?;
    let start = profile.jets(0.0, &frame.xis, true)?;
    let c = eps * t.powf(-0.5);
    let g1: Vec<Complex64> = start.iter().zip(&now).map(|(a, b)| c * (a.v[0] - b.v[0])).collect();
    let dg1: Vec<Complex64> = start.iter().zip(&now).map(|(a, b)| c * (a.v[1] - b.v[1])).collect();
    let f1 = frame.lift(&g1, &dg1);

    let (g, dg) = model.free_reduced(t)?;
    let (h0, dh0) = initial_hat(model, t)?;
    let g2: Vec<Complex64> = g.iter().zip(&h0).map(|(a, b)| a - b).collect();
    let dg2: Vec<Complex64> = dg.iter().zip(&dh0).map(|(a, b)| a - b).collect();
    let f2 = frame.lift(&g2, &dg2);

    let defect = f1.combine(one, &f2, one).combine(one, &gap, -one).x_norm();
    let p = model.params().p;
    Ok(MatchingGap {
        t,
        epsilon: eps,
        gap_x: gap.x_norm(),
        f1_x: f1.x_norm(),
        f2_x: f2.x_norm(),
        split_defect: defect,
        f1_budget: eps.powf(p) * t.powf(0.5 * (3.0 - p)),
        f2_budget: eps / t,
        eps_three_halves: eps.powf(1.5),
    })
}

/// `(it)^{-1/2} ε φ̂` and its ξ-derivative on the reduced axis, by the same
/// transform that produces the free part.
fn initial_hat(model: &ApproxModel, t: f64) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let sp = &model.aux.spectral;
    let u0 = &model.aux.u0;
    let weighted = ComplexField::new(
        *sp.grid(),
        u0.values.iter().zip(sp.xs()).map(|(z, &y)| -super::I * y * z).collect(),
        0.0,
    )?;
    let c = Complex64::from_polar(t.powf(-0.5), -FRAC_PI_4);
    let h = sp.fourier_transform(u0)?.values.iter().map(|z| c * z).collect();
    let dh = sp.fourier_transform(&weighted)?.values.iter().map(|z| c * z).collect();
    Ok((h, dh))
}

/// Quadrature settings for [`residual_budget`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetOptions {
    /// Nodes per region on the first pass (at least 200).
    pub nodes: usize,
    /// Accept when one doubling moves a region's integral by at most this.
    pub rel_tol: f64,
    pub max_doublings: u32,
    /// The free-region ladder starts at `first_node · min(1/ε, T_B)`.
    pub first_node: f64,
}

impl Default for BudgetOptions {
    fn default() -> Self {
        Self {
            nodes: 200,
            rel_tol: 0.01,
            max_doublings: 4,
            first_node: 1e-3,
        }
    }
}

/// X norms at one quadrature node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetSample {
    pub t: f64,
    pub region: Region,
    pub r_x: f64,
    pub ua_x: f64,
    pub q1_x: Option<f64>,
    pub q2_x: Option<f64>,
    /// `‖U(t)(εφ) − m(t)‖_X`, blend region only.
    pub gap_x: Option<f64>,
}

/// `∫‖R‖_X dt` over one region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionIntegral {
    pub region: Region,
    pub start: f64,
    pub end: f64,
    pub value: f64,
    /// The value one refinement earlier.
    pub coarse: f64,
    pub samples: Vec<BudgetSample>,
}

impl RegionIntegral {
    fn empty(region: Region, start: f64) -> Self {
        Self {
            region,
            start,
            end: start,
            value: 0.0,
            coarse: 0.0,
            samples: Vec::new(),
        }
    }
}

/// `∫₀^{T_B} ‖R(t)‖_X dt` split by region.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualBudget {
    pub epsilon: f64,
    pub delta: f64,
    pub o_delta: f64,
    pub t_b: f64,
    pub free: RegionIntegral,
    pub blend: RegionIntegral,
    pub profile: RegionIntegral,
    pub total: f64,
}

impl ResidualBudget {
    pub fn samples(&self) -> impl Iterator<Item = &BudgetSample> {
        self.free
            .samples
            .iter()
            .chain(&self.blend.samples)
            .chain(&self.profile.samples)
    }
}

fn sample(model: &ApproxModel, t: f64) -> Result<BudgetSample> {
    let state = model.state(t)?;
    let norms = state.norms();
    let gap_x = match (&state.u_free, &state.m) {
        (Some(f), Some(m)) => {
            let one = Complex64::new(1.0, 0.0);
            Some(f.combine(one, m, -one).x_norm())
        }
        _ => None,
    };
    Ok(BudgetSample {
        t,
        region: state.region,
        r_x: norms.r,
        ua_x: norms.ua,
        q1_x: norms.q1,
        q2_x: norms.q2,
        gap_x,
    })
}

fn log_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    let ratio = b / a;
    (0..n)
        .map(|k| {
            if k + 1 == n {
                b
            } else {
                a * ratio.powf(k as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

fn trapezoid(samples: &[BudgetSample]) -> f64 {
    samples
        .windows(2)
        .map(|w| 0.5 * (w[1].t - w[0].t) * (w[0].r_x + w[1].r_x))
        .sum()
}

/// Trapezoid rule on `n` log-spaced nodes over `[a, b]`, doubled until two
/// passes agree. `with_origin` adds a node at `t = 0`.
fn integrate_region(
    model: &ApproxModel,
    region: Region,
    a: f64,
    b: f64,
    with_origin: bool,
    opts: &BudgetOptions,
) -> Result<RegionIntegral> {
    let eval = |ts: &[f64]| -> Result<Vec<BudgetSample>> {
        ts.par_iter().map(|&t| sample(model, t)).collect()
    };
    let origin = if with_origin { Some(sample(model, 0.0)?) } else { None };
    let mut n = opts.nodes.max(200);
    let mut nodes = log_nodes(a, b, n);
    let mut samples = eval(&nodes)?;
    let total = |s: &[BudgetSample]| -> f64 {
        let head = origin.map_or(0.0, |o| 0.5 * s[0].t * (o.r_x + s[0].r_x));
        head + trapezoid(s)
    };
    let mut value = total(&samples);
    for _ in 0..opts.max_doublings {
        // the refined ladder interleaves midpoints (in log t) with the old nodes
        let fine_n = 2 * n - 1;
        let fine = log_nodes(a, b, fine_n);
        let fresh: Vec<f64> = fine.iter().skip(1).step_by(2).copied().collect();
        let fresh_samples = eval(&fresh)?;
        let mut merged = Vec::with_capacity(fine_n);
        for k in 0..n {
            merged.push(samples[k]);
            if k < fresh_samples.len() {
                merged.push(fresh_samples[k]);
            }
        }
        let refined = total(&merged);
        let coarse = value;
        value = refined;
        samples = merged;
        nodes = fine;
        n = fine_n;
        if (refined - coarse).abs() <= opts.rel_tol * refined.abs() {
            let mut all = Vec::with_capacity(samples.len() + 1);
            all.extend(origin);
            all.extend(samples);
            return Ok(RegionIntegral {
                region,
                start: if with_origin { 0.0 } else { a },
                end: b,
                value,
                coarse,
                samples: all,
            });
        }
    }
    Err(LabError::Quadrature {
        what: format!("{} region on [{a}, {b}] after {} doublings", region.label(), opts.max_doublings),
        nodes,
    })
}

/// `I_free + I_blend + I_profile = ∫₀^{T_B} ‖R(t)‖_X dt`. Needs `Im λ > 0`
/// (finite `T_B`). Regions cut off by `T_B` are truncated or empty.
pub fn residual_budget(model: &ApproxModel, opts: &BudgetOptions) -> Result<ResidualBudget> {
    let eps = model.epsilon();
    let tb = model.t_b();
    if !tb.is_finite() {
        return Err(LabError::InvalidParameter(
            "the residual budget needs Im(lambda) > 0 so that T_B is finite".into(),
        ));
    }
    let (t1, t2) = (1.0 / eps, 2.0 / eps);
    let free_end = t1.min(tb);
    let free = integrate_region(model, Region::Free, opts.first_node * free_end, free_end, true, opts)?;
    let blend = if tb > t1 {
        integrate_region(model, Region::Blend, t1, t2.min(tb), false, opts)?
    } else {
        RegionIntegral::empty(Region::Blend, t1)
    };
    let profile = if tb > t2 {
        integrate_region(model, Region::Profile, t2, tb, false, opts)?
    } else {
        RegionIntegral::empty(Region::Profile, t2)
    };
    let total = free.value + blend.value + profile.value;
    Ok(ResidualBudget {
        epsilon: eps,
        delta: model.params().delta(),
        o_delta: model.o_delta()?,
        t_b: tb,
        free,
        blend,
        profile,
        total,
    })
}
