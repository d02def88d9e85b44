//! Sweeps, residual and bootstrap scans, property suites, the closed-form
//! bound and plotting: everything the command line and the examples drive.

pub mod analysis;
pub mod bound;
pub mod config;
pub mod harness;
pub mod plot;
pub mod props;
pub mod sweep;

pub use analysis::{
    bootstrap_checks, bootstrap_run, bootstrap_scan, residual_scan, residual_self_check, RegionalConstant,
    ResidualScan, SelfCheckPoint,
};
pub use bound::{sup_hat, theoretical_bound, TheoreticalBound};
pub use config::{thread_cap, worker_pool, RunConfig};
pub use harness::{Check, FitRule, FittedConstant};
pub use plot::{loglog_svg, scaled_svg};
pub use props::{run_property_suites, run_suite, run_suites, PropsOptions, PropsReport, Suite, SuiteResult};
pub use sweep::{read_records, sweep_lifespan, write_records, LifespanRecord, SweepReport};
