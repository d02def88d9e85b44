use serde::{Deserialize, Serialize};

use super::ApproxModel;
use crate::error::{LabError, Result};
use crate::solver::Trajectory;

/// `‖u_a(t) − u(t)‖_X` at one recorded time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapPoint {
    pub t: f64,
    pub gap_x: f64,
    pub gap_over_eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    pub epsilon: f64,
    pub t_b: f64,
    pub points: Vec<BootstrapPoint>,
    /// Largest `gap/ε` over the series.
    pub max_ratio: f64,
    /// `gap ≤ ε/2` at every recorded time. Observed, not proved.
    pub within_half_eps: bool,
}

/// Compare the recorded states of a solver run with `u_a` on the same grid.
/// Snapshots past `T_B` are skipped; the run must start from `εφ` for the
/// model's parameters.
pub fn bootstrap_gap(model: &ApproxModel, trajectory: &Trajectory) -> Result<BootstrapReport> {
    let first = trajectory
        .snapshots
        .first()
        .ok_or_else(|| LabError::InvalidParameter("trajectory has no snapshots".into()))?;
    let ctx = model.grid_context(*first.field.grid())?;
    let expected = ctx.initial().max_abs();
    if (trajectory.initial_sup - expected).abs() > 1e-12 * expected {
        return Err(LabError::GridMismatch(format!(
            "trajectory started from sup {} but eps*phi has sup {expected}",
            trajectory.initial_sup
        )));
    }
    let eps = model.epsilon();
    let tb = model.t_b();
    let sp = ctx.spectral();
    let mut points = Vec::new();
    for snap in trajectory.snapshots.iter().filter(|s| s.t <= tb) {
        if snap.field.grid() != ctx.grid() {
            return Err(LabError::GridMismatch(format!("snapshot at t = {} changes grid", snap.t)));
        }
        let ua = model.ua_on_grid(snap.t, &ctx)?;
        let gap = sp.x_norm(&snap.field.sub(&ua)?, snap.t)?;
        points.push(BootstrapPoint {
            t: snap.t,
            gap_x: gap,
            gap_over_eps: gap / eps,
        });
    }
    let max_ratio = points.iter().map(|p| p.gap_over_eps).fold(0.0, f64::max);
    Ok(BootstrapReport {
        epsilon: eps,
        t_b: tb,
        within_half_eps: max_ratio <= 0.5,
        max_ratio,
        points,
    })
}
