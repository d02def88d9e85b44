use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{worker_pool, BootstrapConfig, ResidualConfig};
use super::harness::Check;
use crate::approx::{
    bootstrap_gap, observed_order, residual_budget, ApproxModel, BootstrapReport, Region, ResidualBudget,
    ResidualCheck,
};
use crate::error::{LabError, Result};
use crate::numerics::{fit_power_law, LineFit};
use crate::profile::ModelParams;
use crate::solver::{initial_data, lifespan_grid, Solver};
use crate::spectral::Grid1D;

/// Per-ε constant of one regional bound and the ε-independence verdict:
/// every `r(ε)` must stay within `slack · r(ε_max)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionalConstant {
    pub name: String,
    /// The bound's shape, as a formula.
    pub shape: String,
    /// `(ε, sup_t quantity/shape)`, ε descending; ε without samples are left out.
    pub per_eps: Vec<(f64, f64)>,
    pub constant: f64,
    pub passed: bool,
}

pub const EPS_SLACK: f64 = 1.5;

fn regional(name: &str, shape: &str, per_eps: Vec<(f64, f64)>) -> RegionalConstant {
    let constant = EPS_SLACK * per_eps.first().map_or(f64::NAN, |e| e.1);
    let passed = per_eps.len() >= 2 && per_eps.iter().all(|&(_, r)| r.is_finite() && r <= constant);
    RegionalConstant {
        name: name.to_string(),
        shape: shape.to_string(),
        per_eps,
        constant,
        passed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualScan {
    /// ε descending.
    pub budgets: Vec<ResidualBudget>,
    /// Log-log fit of `I_total` against `ε`.
    pub fit: Option<LineFit>,
    pub constants: Vec<RegionalConstant>,
}

impl ResidualScan {
    /// `I_total` decreasing as ε decreases, slope ≥ 1.2, and every regional
    /// constant ε-independent.
    pub fn checks(&self) -> Vec<Check> {
        let decreasing = self.budgets.windows(2).all(|w| w[1].total < w[0].total);
        let mut out = vec![
            Check::holds("I_total decreases with eps", decreasing),
            Check::at_least("log-log slope of I_total", self.fit.map_or(f64::NAN, |f| f.slope), 1.2),
        ];
        for c in &self.constants {
            let worst = c.per_eps.iter().map(|e| e.1).fold(0.0, f64::max);
            out.push(Check {
                name: format!("{} within {EPS_SLACK} x its value at the largest eps", c.name),
                value: worst,
                limit: c.constant,
                passed: c.passed,
            });
        }
        out
    }
}

fn sup_ratio<F: Fn(&crate::approx::BudgetSample) -> Option<f64>>(b: &ResidualBudget, f: F) -> Option<f64> {
    let v: Vec<f64> = b.samples().filter_map(f).collect();
    if v.is_empty() {
        None
    } else {
        Some(v.into_iter().fold(0.0, f64::max))
    }
}

/// Residual budgets over an ε ladder (each must be `< 1`), with the regional
/// constants
///
/// ```text
/// free:  ‖R‖_X       / (ε^p (1+t)^{-(p-1)/2})
/// blend: ‖U(t)εφ − m‖_X / ε^{3/2}
/// Q₁:    ‖Q₁‖_X      / (ε^p t^{-(p-1)/2} 𝒪(δ))
/// Q₂:    ‖Q₂‖_X      / (ε t^{-2} δ^{-2})
/// ```
pub fn residual_scan(params: &ModelParams, config: &ResidualConfig) -> Result<ResidualScan> {
    let mut eps = config.eps.clone();
    eps.sort_by(|a, b| b.total_cmp(a));
    let pool = worker_pool()?;
    let budgets: Vec<ResidualBudget> = pool.install(|| {
        eps.par_iter()
            .map(|&e| {
                let model = ApproxModel::new(&params.with_epsilon(e))?;
                residual_budget(&model, &config.quadrature)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let p = params.p;
    let (xs, ys): (Vec<f64>, Vec<f64>) = budgets.iter().map(|b| (b.epsilon, b.total)).unzip();
    let fit = fit_power_law(&xs, &ys);
    let collect = |f: &dyn Fn(&ResidualBudget) -> Option<f64>| -> Vec<(f64, f64)> {
        budgets.iter().filter_map(|b| f(b).map(|r| (b.epsilon, r))).collect()
    };
    let free = collect(&|b| {
        let e = b.epsilon;
        sup_ratio(b, |s| {
            (s.region == Region::Free).then(|| s.r_x / (e.powf(p) * (1.0 + s.t).powf(-0.5 * (p - 1.0))))
        })
    });
    let gap = collect(&|b| sup_ratio(b, |s| s.gap_x.map(|g| g / b.epsilon.powf(1.5))));
    let q1 = collect(&|b| {
        let e = b.epsilon;
        sup_ratio(b, |s| s.q1_x.map(|q| q / (e.powf(p) * s.t.powf(-0.5 * (p - 1.0)) * b.o_delta)))
    });
    let q2 = collect(&|b| {
        let e = b.epsilon;
        sup_ratio(b, |s| s.q2_x.map(|q| q / (e * s.t.powi(-2) * b.delta.powi(-2))))
    });
    Ok(ResidualScan {
        budgets,
        fit,
        constants: vec![
            regional("free residual", "eps^p (1+t)^{-(p-1)/2}", free),
            regional("matching gap", "eps^{3/2}", gap),
            regional("Q1", "eps^p t^{-(p-1)/2} O(delta)", q1),
            regional("Q2", "eps t^{-2} delta^{-2}", q2),
        ],
    })
}

/// Finite-difference check of the closed-form residual at one time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfCheckPoint {
    pub t: f64,
    pub region: Region,
    pub grid: Grid1D,
    pub checks: Vec<ResidualCheck>,
    pub order: f64,
}

/// One time per region: `0.5/ε`, `1.5/ε`, `min(2.24/ε, 0.9 T_B)`, on
/// `x`-grids of half-width `8 + t(Ξ + 1)` (`Ξ` the ξ extent of `φ̂`) and
/// steps `h = 0.01 t · 2^{-k}`, `k = 0, 1, 2`. Times past `T_B` are skipped.
pub fn residual_self_check(params: &ModelParams) -> Result<Vec<SelfCheckPoint>> {
    let model = ApproxModel::new(params)?;
    let eps = params.epsilon;
    let tb = model.t_b();
    let xi = params.profile.xi_extent(1e-15, 400.0);
    let times = [0.5 / eps, 1.5 / eps, (2.24 / eps).min(0.9 * tb)];
    let pool = worker_pool()?;
    pool.install(|| {
        times
            .par_iter()
            .filter(|&&t| t < tb)
            .map(|&t| {
                let grid = Grid1D::with_spacing(8.0 + t * (xi + 1.0), 0.07)?;
                let ctx = model.grid_context(grid)?;
                let checks = (0..3)
                    .map(|k| model.residual_check(t, 0.01 * t / f64::from(1u32 << k), &ctx))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SelfCheckPoint {
                    t,
                    region: checks[0].region,
                    grid,
                    order: observed_order(&checks),
                    checks,
                })
            })
            .collect()
    })
}

/// `‖u_a − u‖_X` along solver runs up to `fraction · T_B`, one run per ε.
pub fn bootstrap_scan(params: &ModelParams, config: &BootstrapConfig) -> Result<Vec<BootstrapReport>> {
    let pool = worker_pool()?;
    pool.install(|| {
        config
            .eps
            .par_iter()
            .map(|&e| bootstrap_run(&params.with_epsilon(e), config))
            .collect()
    })
}

pub fn bootstrap_run(params: &ModelParams, config: &BootstrapConfig) -> Result<BootstrapReport> {
    let model = ApproxModel::new(params)?;
    let tb = model.t_b();
    if !tb.is_finite() {
        return Err(LabError::InvalidParameter("the bootstrap scan needs Im(lambda) > 0".into()));
    }
    let t_end = config.fraction * tb;
    // the true solution outruns u_a; size the box for half again the window
    let grid = lifespan_grid(params, 1.5 * t_end, config.max_dx)?;
    let records: Vec<f64> = (0..=config.samples)
        .map(|k| t_end * k as f64 / config.samples as f64)
        .collect();
    let u0 = initial_data(params, grid)?;
    let tr = Solver::new(params, grid)?.evolve_from(&u0, &config.solver, t_end, &records)?;
    bootstrap_gap(&model, &tr)
}

pub fn bootstrap_checks(reports: &[BootstrapReport]) -> Vec<Check> {
    reports
        .iter()
        .map(|r| Check::at_most(&format!("max gap/eps at eps = {}", r.epsilon), r.max_ratio, 0.5))
        .collect()
}
