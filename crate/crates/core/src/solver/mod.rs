//! Strang-split Fourier integrator for `i∂ₜu + ½∂ₓ²u = λ|u|^{p-1}u` with an
//! exact nonlinear substep, adaptive stepping, blow-up detection and the
//! operational life-span estimate `T_num`.

mod lifespan;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::profile::{inverse_w_integral, ModelParams, W_FLOOR};
use crate::spectral::{ComplexField, Grid1D, NormReport, Spectral};

pub use lifespan::{estimate_lifespan, lifespan_grid, LifespanEstimate, LifespanOptions};

/// Numerical knobs of a run. Everything has a default.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverSettings {
    pub dt_initial: f64,
    pub dt_floor: f64,
    /// Blow-up threshold `K_b`: the run stops once `‖u‖_∞ ≥ K_b ‖u(0)‖_∞`.
    pub k_b: f64,
    /// Target nonlinear phase per step once the nonlinearity dominates.
    pub tau_scale: f64,
    /// Relative width at which the blow-up bracket is accepted.
    pub bracket_rel: f64,
    pub boundary_tol: f64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            dt_initial: 0.01,
            dt_floor: 1e-9,
            k_b: 50.0,
            tau_scale: 0.1,
            bracket_rel: 1e-3,
            boundary_tol: 1e-12,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(LabError::InvalidParameter(m.into()));
        if !(self.dt_floor > 0.0 && self.dt_floor < self.dt_initial) {
            return bad("need 0 < dt_floor < dt_initial");
        }
        if !(self.k_b > 1.0) {
            return bad("K_b must exceed 1");
        }
        if !(self.tau_scale > 0.0 && self.bracket_rel > 0.0 && self.boundary_tol > 0.0) {
            return bad("tau_scale, bracket_rel and boundary_tol must be positive");
        }
        Ok(())
    }
}

/// A run: model, grid, knobs and the times at which to keep snapshots.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub params: ModelParams,
    pub grid: Grid1D,
    pub settings: SolverSettings,
    pub t_end: f64,
    pub record_times: Vec<f64>,
}

/// Where the nonlinear substep found `W_loc ≤ 1e-9`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlowupSignal {
    pub x: f64,
    pub w_loc: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trigger {
    Amplitude,
    WFloor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Termination {
    ReachedEnd,
    /// Blow-up bracketed in `(last_good, t_num]`.
    Blowup {
        t_num: f64,
        last_good: f64,
        trigger: Trigger,
    },
    DtUnderflow { t_num: f64 },
}

impl Termination {
    pub fn label(&self) -> &'static str {
        match self {
            Self::ReachedEnd => "reached_end",
            Self::Blowup {
                trigger: Trigger::Amplitude,
                ..
            } => "blowup_amplitude",
            Self::Blowup {
                trigger: Trigger::WFloor,
                ..
            } => "blowup_w_floor",
            Self::DtUnderflow { .. } => "dt_underflow",
        }
    }

    pub fn time(&self) -> Option<f64> {
        match *self {
            Self::ReachedEnd => None,
            Self::Blowup { t_num, .. } | Self::DtUnderflow { t_num } => Some(t_num),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub t: f64,
    pub field: ComplexField,
    pub norms: NormReport,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub snapshots: Vec<Snapshot>,
    pub termination: Termination,
    /// Last state that passed every check.
    pub last: ComplexField,
    pub steps: usize,
    pub initial_sup: f64,
}

enum Fired {
    No(ComplexField),
    Yes(Trigger),
}

/// The integrator for one grid and one model.
#[derive(Debug, Clone)]
pub struct Solver {
    spectral: Spectral,
    p: f64,
    lambda: Complex64,
}

impl Solver {
    pub fn new(params: &ModelParams, grid: Grid1D) -> Result<Self> {
        params.validate()?;
        Ok(Self {
            spectral: Spectral::new(grid),
            p: params.p,
            lambda: params.lambda,
        })
    }

    /// A solver for `λ = 0`; only [`Self::strang_step`] semantics change.
    pub fn with_lambda(&self, lambda: Complex64) -> Self {
        Self {
            lambda,
            ..self.clone()
        }
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Exact flow of `i∂ₜu = λ|u|^{p-1}u` over `dt`, pointwise.
    pub fn nonlinear_substep(
        &self,
        field: &ComplexField,
        dt: f64,
    ) -> std::result::Result<ComplexField, BlowupSignal> {
        let (p, lambda) = (self.p, self.lambda);
        let mut out = field.clone();
        for (j, z) in out.values.iter_mut().enumerate() {
            let a = z.norm().powf(p - 1.0);
            let c = (p - 1.0) * lambda.im * a;
            let w = 1.0 - c * dt;
            if !(w > W_FLOOR) {
                return Err(BlowupSignal {
                    x: field.grid().x(j),
                    w_loc: w,
                });
            }
            let theta = -lambda.re * a * inverse_w_integral(c, dt);
            *z *= Complex64::from_polar(w.powf(-1.0 / (p - 1.0)), theta);
        }
        out.t += dt;
        Ok(out)
    }

    /// `K(dt/2)·NL(dt)·K(dt/2)`.
    pub fn strang_step(
        &self,
        field: &ComplexField,
        dt: f64,
    ) -> Result<std::result::Result<ComplexField, BlowupSignal>> {
        let half = self.spectral.free_propagate(field, 0.5 * dt)?;
        let mut nl = match self.nonlinear_substep(&half, dt) {
            Ok(f) => f,
            Err(sig) => return Ok(Err(sig)),
        };
        nl.t = half.t;
        let out = self.spectral.free_propagate(&nl, 0.5 * dt)?;
        out.check_finite("strang_step")?;
        Ok(Ok(out))
    }

    /// `n` equal Strang steps up to `t_end`.
    pub fn integrate_fixed(&self, field: &ComplexField, t_end: f64, n: usize) -> Result<ComplexField> {
        let dt = (t_end - field.t) / n as f64;
        let mut u = field.clone();
        for _ in 0..n {
            u = self.strang_step(&u, dt)?.map_err(|sig| {
                LabError::InvalidParameter(format!(
                    "fixed-step run hit the blow-up floor at x = {} (W = {:e})",
                    sig.x, sig.w_loc
                ))
            })?;
        }
        Ok(u)
    }

    /// `dt_initial / (1 + |λ|‖u‖_∞^{p-1}·dt_initial/τ)`: the plain step while
    /// the nonlinearity is weak, a phase of about `τ` per step once it is not.
    pub fn adaptive_dt(&self, settings: &SolverSettings, sup: f64) -> f64 {
        let freq = self.lambda.norm() * sup.powf(self.p - 1.0);
        settings.dt_initial / (1.0 + freq * settings.dt_initial / settings.tau_scale)
    }

    fn try_step(&self, u: &ComplexField, dt: f64, threshold: f64) -> Result<Fired> {
        Ok(match self.strang_step(u, dt)? {
            Err(_) => Fired::Yes(Trigger::WFloor),
            Ok(next) if next.max_abs() >= threshold => Fired::Yes(Trigger::Amplitude),
            Ok(next) => Fired::No(next),
        })
    }

    fn check_mass(&self, before: f64, after: f64, t: f64) -> Result<()> {
        let im = self.lambda.im;
        let rel = (after - before) / before.max(f64::MIN_POSITIVE);
        let ok = if im == 0.0 {
            rel.abs() <= 1e-8
        } else if im > 0.0 {
            rel >= -1e-12
        } else {
            rel <= 1e-12
        };
        if ok {
            Ok(())
        } else {
            Err(LabError::Unresolved(format!(
                "mass law violated at t = {t}: relative change {rel:e} with Im λ = {im}"
            )))
        }
    }

    /// Run from `u0` to `t_end` with adaptive steps, stopping at each record
    /// time. A firing step (amplitude threshold or `W` floor) is bisected
    /// until the bracket is narrower than `bracket_rel` relative.
    pub fn evolve_from(
        &self,
        u0: &ComplexField,
        settings: &SolverSettings,
        t_end: f64,
        record_times: &[f64],
    ) -> Result<Trajectory> {
        settings.validate()?;
        u0.check_finite("initial data")?;
        let mut records: Vec<f64> = record_times
            .iter()
            .copied()
            .filter(|&t| t >= u0.t && t <= t_end)
            .collect();
        records.sort_by(f64::total_cmp);
        records.dedup();
        let initial_sup = u0.max_abs();
        let threshold = settings.k_b * initial_sup;
        let mut snapshots = Vec::new();
        let mut u = u0.clone();
        let mut next_record = 0;
        let mut steps = 0;
        let mut mass = u.l2();
        let snapshot = |u: &ComplexField| -> Result<Snapshot> {
            u.check_boundary(settings.boundary_tol)?;
            Ok(Snapshot {
                t: u.t,
                field: u.clone(),
                norms: self.spectral.norms(u, u.t)?,
            })
        };
        if records.first() == Some(&u.t) {
            snapshots.push(snapshot(&u)?);
            next_record = 1;
        }
        let termination = loop {
            if u.t >= t_end {
                break Termination::ReachedEnd;
            }
            let dt = self.adaptive_dt(settings, u.max_abs());
            if dt < settings.dt_floor {
                break Termination::DtUnderflow { t_num: u.t };
            }
            let mut stop = (u.t + dt).min(t_end);
            if let Some(&r) = records.get(next_record) {
                stop = stop.min(r);
            }
            let h = stop - u.t;
            steps += 1;
            match self.try_step(&u, h, threshold)? {
                Fired::No(mut next) => {
                    next.t = stop;
                    u = next;
                }
                Fired::Yes(trigger) => {
                    break self.bisect(&mut u, stop, threshold, settings, trigger, &mut steps)?;
                }
            }
            if records.get(next_record) == Some(&u.t) {
                let snap = snapshot(&u)?;
                let m = snap.norms.l2;
                self.check_mass(mass, m, u.t)?;
                mass = m;
                snapshots.push(snap);
                next_record += 1;
            }
        };
        if !matches!(termination, Termination::ReachedEnd) || snapshots.is_empty() {
            u.check_boundary(settings.boundary_tol)?;
        }
        Ok(Trajectory {
            snapshots,
            termination,
            last: u,
            steps,
            initial_sup,
        })
    }

    /// Narrow `(u.t, hi]` where `hi` is known to fire, advancing `u` through
    /// non-firing half steps.
    fn bisect(
        &self,
        u: &mut ComplexField,
        mut hi: f64,
        threshold: f64,
        settings: &SolverSettings,
        mut trigger: Trigger,
        steps: &mut usize,
    ) -> Result<Termination> {
        loop {
            let width = hi - u.t;
            if width <= settings.bracket_rel * hi {
                return Ok(Termination::Blowup {
                    t_num: hi,
                    last_good: u.t,
                    trigger,
                });
            }
            let h = 0.5 * width;
            if h < settings.dt_floor {
                return Ok(Termination::DtUnderflow { t_num: u.t });
            }
            *steps += 1;
            match self.try_step(u, h, threshold)? {
                Fired::Yes(tr) => {
                    hi = u.t + h;
                    trigger = tr;
                }
                Fired::No(mut next) => {
                    next.t = u.t + h;
                    *u = next;
                }
            }
        }
    }

    /// [`Self::evolve_from`] on `u(0) = εφ` sampled on the solver's grid.
    pub fn evolve(&self, config: &SolverConfig) -> Result<Trajectory> {
        if *self.spectral.grid() != config.grid {
            return Err(LabError::GridMismatch("solver and config grids differ".into()));
        }
        let u0 = initial_data(&config.params, config.grid)?;
        self.evolve_from(&u0, &config.settings, config.t_end, &config.record_times)
    }
}

/// `εφ` on `grid`.
pub fn initial_data(params: &ModelParams, grid: Grid1D) -> Result<ComplexField> {
    let phi = params.profile.sample(grid)?;
    Ok(phi.scaled(Complex64::new(params.epsilon, 0.0)))
}

/// One-call convenience for [`Solver::evolve`].
pub fn evolve(config: &SolverConfig) -> Result<Trajectory> {
    Solver::new(&config.params, config.grid)?.evolve(config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::{rk4_point, InitialProfile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn solver(p: f64, lambda: Complex64) -> Solver {
        let mut params = ModelParams::canonical(0.2);
        params.p = p;
        params.lambda = lambda;
        Solver::new(&params, Grid1D::desk()).unwrap()
    }

    #[test]
    fn real_lambda_substep_is_gauge_rotation() {
        let s = solver(2.5, Complex64::new(1.3, 0.0));
        let u = s.spectral().field_from_fn(0.0, |x| Complex64::new(1.0, 0.5 * x).scale(0.2)).unwrap();
        let v = s.nonlinear_substep(&u, 0.3).unwrap();
        for (a, b) in u.values.iter().zip(&v.values) {
            assert!((a.norm() - b.norm()).abs() < 1e-14 * a.norm().max(1.0));
            let expect = a * Complex64::from_polar(1.0, -1.3 * a.norm().powf(1.5) * 0.3);
            assert!((b - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn scalar_gain_substep() {
        let s = solver(2.0, Complex64::new(0.0, 1.0));
        let u = ComplexField::new(Grid1D::new(1.0, 4).unwrap(), vec![Complex64::new(1.0, 0.0); 4], 0.0).unwrap();
        let v = s.nonlinear_substep(&u, 0.5).unwrap();
        assert!(v.values.iter().all(|z| (z - Complex64::new(2.0, 0.0)).norm() < 1e-15));
        assert!(s.nonlinear_substep(&u, 1.0).is_err());
    }

    #[test]
    fn substep_matches_rk4() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let p = rng.gen_range(2.0..2.9);
            let lambda = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let s = solver(p, lambda);
            let z = Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let u = ComplexField::new(Grid1D::new(1.0, 4).unwrap(), vec![z; 4], 0.0).unwrap();
            let v = s.nonlinear_substep(&u, 1e-2).unwrap().values[0];
            let w = rk4_point(lambda, p, z, 1e-2, 1e-14).unwrap();
            assert!((v - w).norm() <= 1e-10, "{v} vs {w}");
        }
    }

    #[test]
    fn zero_lambda_is_free_flow() {
        let s = solver(2.0, Complex64::new(0.0, 0.0));
        let u = InitialProfile::standard_gaussian().sample(Grid1D::desk()).unwrap();
        let a = s.strang_step(&u, 0.37).unwrap().unwrap();
        let b = s.spectral().free_propagate(&u, 0.37).unwrap();
        let gap = a.values.iter().zip(&b.values).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(gap < 1e-13, "{gap}");
    }

    #[test]
    fn strang_is_second_order() {
        let mut params = ModelParams::canonical(0.5);
        params.lambda = Complex64::new(0.7, -1.0);
        params.p = 2.5;
        let grid = Grid1D::new(24.0, 1024).unwrap();
        let s = Solver::new(&params, grid).unwrap();
        let u0 = initial_data(&params, grid).unwrap();
        let run = |n| s.integrate_fixed(&u0, 2.0, n).unwrap();
        let (a, b, c) = (run(20), run(40), run(80));
        let e1 = a.sub(&b).unwrap().l2();
        let e2 = b.sub(&c).unwrap().l2();
        let order = (e1 / e2).log2();
        assert!((1.9..=2.1).contains(&order), "order {order}");
    }

    #[test]
    fn real_lambda_conserves_mass() {
        let mut params = ModelParams::canonical(0.2);
        params.lambda = Complex64::new(1.0, 0.0);
        let grid = Grid1D::new(64.0, 4096).unwrap();
        let config = SolverConfig {
            params,
            grid,
            settings: SolverSettings::default(),
            t_end: 5.0,
            record_times: vec![0.0, 1.0, 2.5, 5.0],
        };
        let tr = evolve(&config).unwrap();
        assert_eq!(tr.termination, Termination::ReachedEnd);
        let m0 = tr.snapshots[0].norms.l2;
        for s in &tr.snapshots {
            assert!((s.norms.l2 - m0).abs() <= 1e-10 * m0);
        }
        assert_eq!(tr.snapshots.len(), 4);
        assert_eq!(tr.last.t, 5.0);
    }

    #[test]
    fn gain_blows_up_and_bisects() {
        let params = ModelParams::canonical(0.5);
        let grid = lifespan_grid(&params, 10.0, 0.05).unwrap();
        let config = SolverConfig {
            params,
            grid,
            settings: SolverSettings::default(),
            t_end: 10.0,
            record_times: vec![0.25, 0.5],
        };
        let tr = evolve(&config).unwrap();
        match tr.termination {
            Termination::Blowup { t_num, last_good, .. } => {
                assert!(t_num.is_finite() && t_num > 0.5);
                assert!(t_num - last_good <= 1e-3 * t_num);
            }
            other => panic!("{other:?}"),
        }
        assert!(tr.last.max_abs() < 50.0 * tr.initial_sup);
        for w in tr.snapshots.windows(2) {
            assert!(w[1].norms.l2 >= w[0].norms.l2);
        }
    }

    #[test]
    fn settings_json_is_strict() {
        let s: SolverSettings = serde_json::from_str(r#"{"k_b": 20}"#).unwrap();
        assert_eq!(s.k_b, 20.0);
        assert!(serde_json::from_str::<SolverSettings>(r#"{"kb": 20}"#).is_err());
    }
}
