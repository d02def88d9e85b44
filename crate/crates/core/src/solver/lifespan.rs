use serde::{Deserialize, Serialize};

use super::{initial_data, Solver, SolverSettings, Termination};
use crate::error::{LabError, Result};
use crate::profile::{ModelParams, ProfileModel};
use crate::spectral::Grid1D;

/// How a life-span run is sized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LifespanOptions {
    pub solver: SolverSettings,
    /// Give up after `horizon_factor · t_of_s(A)`.
    pub horizon_factor: f64,
    pub max_dx: f64,
    /// Overrides the sizing rule when set.
    pub grid: Option<Grid1D>,
}

impl Default for LifespanOptions {
    fn default() -> Self {
        Self {
            solver: SolverSettings::default(),
            horizon_factor: 4.0,
            max_dx: 0.04,
            grid: None,
        }
    }
}

/// Result of one life-span measurement. `t_num` is the operational blow-up
/// time (threshold plus bisection), not the true life span.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifespanEstimate {
    pub epsilon: f64,
    pub t_num: Option<f64>,
    /// `None` for the global-existence sentinel.
    pub termination: Option<Termination>,
    /// `t_of_s(A)`, the time at which the profile ODE blows up.
    pub t_expected: f64,
    pub horizon: f64,
    pub grid: Grid1D,
    pub settings: SolverSettings,
    pub steps: usize,
}

impl LifespanEstimate {
    pub fn label(&self) -> &'static str {
        self.termination.map_or("no_blowup", |t| t.label())
    }
}

/// `L = 8 + 4·T·ξ_eff` (at least 16), `ξ_eff` the radius holding 99.9% of
/// `‖φ̂‖₂²`, and the smallest power-of-two `N` with `dx ≤ max_dx`. The
/// estimator passes the horizon as `T`: the solution keeps spreading until it
/// actually blows up, which at finite ε is well after `t_of_s(A)`.
pub fn lifespan_grid(params: &ModelParams, t_expected: f64, max_dx: f64) -> Result<Grid1D> {
    let xi_eff = params.profile.spectral_radius(0.999);
    let l = (8.0 + 4.0 * t_expected * xi_eff).max(16.0);
    Grid1D::with_spacing(l, max_dx)
}

/// Measure `T_num(ε)`. With `Im λ ≤ 0` no run is made and the sentinel
/// "no blow-up" is returned.
pub fn estimate_lifespan(params: &ModelParams, options: &LifespanOptions) -> Result<LifespanEstimate> {
    params.validate()?;
    options.solver.validate()?;
    let model = ProfileModel::new(params)?;
    let a = model.blowup_constant_a();
    let t_expected = model.t_of_s(a);
    if !t_expected.is_finite() {
        return Ok(LifespanEstimate {
            epsilon: params.epsilon,
            t_num: None,
            termination: None,
            t_expected,
            horizon: f64::INFINITY,
            grid: options.grid.unwrap_or_else(Grid1D::desk),
            settings: options.solver,
            steps: 0,
        });
    }
    let horizon = options.horizon_factor * t_expected;
    let grid = match options.grid {
        Some(g) => g,
        None => lifespan_grid(params, horizon, options.max_dx)?,
    };
    let solver = Solver::new(params, grid)?;
    let u0 = initial_data(params, grid)?;
    let tr = match solver.evolve_from(&u0, &options.solver, horizon, &[]) {
        Err(LabError::BoundaryLeak { t, ratio }) => {
            return Err(LabError::HorizonExhausted {
                horizon,
                hint: format!(
                    "solution reached the edge of [-{0}, {0}) at t = {t} (ratio {ratio:e}); enlarge L",
                    grid.half_width()
                ),
            })
        }
        other => other?,
    };
    match tr.termination {
        Termination::ReachedEnd => Err(LabError::HorizonExhausted {
            horizon,
            hint: format!(
                "no firing of the K_b = {} criterion by {horizon}; raise horizon_factor or ε",
                options.solver.k_b
            ),
        }),
        term => Ok(LifespanEstimate {
            epsilon: params.epsilon,
            t_num: term.time(),
            termination: Some(term),
            t_expected,
            horizon,
            grid,
            settings: options.solver,
            steps: tr.steps,
        }),
    }
}
