use std::path::Path;

use serde::{Deserialize, Serialize};

use super::props::PropsOptions;
use crate::approx::BudgetOptions;
use crate::error::{LabError, Result};
use crate::profile::ModelParams;
use crate::solver::{LifespanOptions, SolverSettings};
use crate::spectral::Grid1D;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Everything a command needs, as one JSON document. Unknown keys anywhere
/// are rejected; every section has defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// `ε` here is used by `simulate` and `lifespan`.
    pub model: ModelParams,
    pub lifespan: LifespanOptions,
    pub sweep: SweepConfig,
    pub residual: ResidualConfig,
    pub bootstrap: BootstrapConfig,
    pub simulate: SimulateConfig,
    pub props: PropsOptions,
    /// Seed for the property suites.
    pub seed: u64,
    pub out_dir: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            schema_version: CONFIG_SCHEMA_VERSION,
            model: ModelParams::canonical(0.3),
            lifespan: LifespanOptions::default(),
            sweep: SweepConfig::default(),
            residual: ResidualConfig::default(),
            bootstrap: BootstrapConfig::default(),
            simulate: SimulateConfig::default(),
            props: PropsOptions::default(),
            seed: 20_240_601,
            out_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub eps: Vec<f64>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            eps: vec![0.5, 0.4, 0.3, 0.25, 0.2],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ResidualConfig {
    /// Budget ladder. The profile region exists only once `2/ε < T_B`.
    pub eps: Vec<f64>,
    pub quadrature: BudgetOptions,
    /// `ε` for the finite-difference self-check.
    pub check_eps: f64,
}

impl Default for ResidualConfig {
    fn default() -> Self {
        Self {
            eps: vec![0.08, 0.04, 0.02, 0.01],
            quadrature: BudgetOptions::default(),
            check_eps: 0.08,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BootstrapConfig {
    pub eps: Vec<f64>,
    /// Compare up to `fraction · T_B`.
    pub fraction: f64,
    pub samples: usize,
    pub max_dx: f64,
    pub solver: SolverSettings,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        Self {
            eps: vec![0.3, 0.2, 0.1],
            fraction: 0.8,
            samples: 16,
            max_dx: 0.05,
            solver: SolverSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub t_end: f64,
    /// Number of equally spaced records on `[0, t_end]`.
    pub records: usize,
    /// Sized like a life-span run over `2·t_end` when absent.
    pub grid: Option<Grid1D>,
    pub solver: SolverSettings,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            t_end: 5.0,
            records: 11,
            grid: None,
            solver: SolverSettings::default(),
        }
    }
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text).map_err(|e| match e {
            LabError::Config(m) => LabError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checked before any compute.
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(LabError::Config(format!(
                "schema_version {} is not supported (expected {CONFIG_SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        self.model.validate()?;
        self.lifespan.solver.validate()?;
        self.simulate.solver.validate()?;
        self.bootstrap.solver.validate()?;
        let ladder = |name: &str, eps: &[f64], below_one: bool| -> Result<()> {
            if eps.is_empty() {
                return Err(LabError::Config(format!("{name}: empty epsilon list")));
            }
            if let Some(e) = eps.iter().find(|&&e| !(e > 0.0 && e.is_finite()) || (below_one && e >= 1.0)) {
                return Err(LabError::Config(format!("{name}: bad epsilon {e}")));
            }
            Ok(())
        };
        ladder("sweep.eps", &self.sweep.eps, false)?;
        ladder("residual.eps", &self.residual.eps, true)?;
        ladder("bootstrap.eps", &self.bootstrap.eps, true)?;
        ladder("residual.check_eps", &[self.residual.check_eps], true)?;
        if !(self.bootstrap.fraction > 0.0 && self.bootstrap.fraction <= 1.0) {
            return Err(LabError::Config("bootstrap.fraction must lie in (0, 1]".into()));
        }
        if self.bootstrap.samples < 1 || self.simulate.records < 2 {
            return Err(LabError::Config("need at least 1 bootstrap sample and 2 records".into()));
        }
        if !(self.simulate.t_end > 0.0) {
            return Err(LabError::Config("simulate.t_end must be positive".into()));
        }
        if self.residual.quadrature.nodes < 200 {
            return Err(LabError::Config("residual.quadrature.nodes must be at least 200".into()));
        }
        self.props.validate()
    }
}

/// Worker count from `LIFESPAN_LAB_THREADS` (all cores when unset).
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("LIFESPAN_LAB_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(LabError::Config(format!(
                "LIFESPAN_LAB_THREADS must be a positive integer, got {v:?}"
            ))),
        },
    }
}

/// A rayon pool honoring [`thread_cap`].
pub fn worker_pool() -> Result<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap()? {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))
}
