use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lifespan_lab::experiments::{
    bootstrap_checks, bootstrap_scan, loglog_svg, read_records, residual_scan, residual_self_check,
    run_property_suites, run_suites, scaled_svg, sup_hat, sweep_lifespan, theoretical_bound, write_records,
    Check, LifespanRecord, PropsReport, RunConfig, Suite,
};
use lifespan_lab::solver::{estimate_lifespan, evolve, lifespan_grid, SolverConfig};
use lifespan_lab::{LabError, Result};

#[derive(Parser)]
#[command(name = "lifespan-lab", version, about = "Life span of 1-D NLS with a sub-critical power nonlinearity")]
struct Cli {
    /// JSON run configuration (unknown keys are rejected).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (default: `out_dir` from the config, else `out`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for the property suites.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Comma-separated ε values; replaces the ladder of the command.
    #[arg(long, global = true, value_delimiter = ',')]
    eps: Option<Vec<f64>>,
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// One solver run with norm records.
    Simulate,
    /// Measure T_num at one ε.
    Lifespan,
    /// Life span over the ε ladder, CSV plus power-law fit.
    Sweep,
    /// Residual budgets over the ε ladder and the finite-difference self-check.
    Residual {
        /// Also compare solver runs with u_a up to a fraction of T_B.
        #[arg(long)]
        bootstrap: bool,
    },
    /// Profile suites: RK4 oracle, ODE identity, derivative bounds, mollifier.
    ProfileCheck,
    /// Every property suite.
    Props,
    /// The closed-form constants A and ((3-p)A/2)^{2/(3-p)}.
    Bound,
    /// SVG figures from a sweep CSV.
    Plot {
        /// Defaults to `<out>/sweep.csv`.
        csv: Option<PathBuf>,
    },
}

/// All file output goes through here.
struct Writer {
    dir: PathBuf,
    quiet: bool,
}

impl Writer {
    fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    fn text(&self, name: &str, body: &str) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        fs::write(self.path(name), body)?;
        self.say(&format!("wrote {}", self.path(name).display()));
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<()> {
        self.text(name, &(serde_json::to_string_pretty(value)? + "\n"))
    }

    fn records(&self, name: &str, rows: &[LifespanRecord]) -> Result<()> {
        fs::create_dir_all(&self.dir)?;
        write_records(fs::File::create(self.path(name))?, rows)?;
        self.say(&format!("wrote {}", self.path(name).display()));
        Ok(())
    }

    fn say(&self, line: &str) {
        if !self.quiet {
            println!("{line}");
        }
    }

    fn checks(&self, checks: &[Check]) -> bool {
        for c in checks {
            self.say(&format!(
                "{} {}: {} (limit {})",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.value,
                c.limit
            ));
        }
        checks.iter().all(|c| c.passed)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// `Ok(false)` when the command ran but a check failed.
fn run(cli: Cli) -> Result<bool> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(eps) = &cli.eps {
        if eps.is_empty() {
            return Err(LabError::Config("--eps needs at least one value".into()));
        }
        cfg.sweep.eps = eps.clone();
        cfg.residual.eps = eps.clone();
        cfg.bootstrap.eps = eps.clone();
        cfg.model.epsilon = eps[0];
    }
    cfg.validate()?;
    let out = Writer {
        dir: cli
            .out
            .clone()
            .or_else(|| cfg.out_dir.clone().map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("out")),
        quiet: cli.quiet,
    };
    match cli.command {
        Command::Simulate => simulate(&cfg, &out),
        Command::Lifespan => lifespan(&cfg, &out),
        Command::Sweep => sweep(&cfg, &out),
        Command::Residual { bootstrap } => residual(&cfg, &out, bootstrap),
        Command::ProfileCheck => props(&out, run_suites(&Suite::PROFILE, &cfg.props, cfg.seed)?, "profile_check.json"),
        Command::Props => props(&out, run_property_suites(&cfg.props, cfg.seed)?, "props.json"),
        Command::Bound => bound(&cfg, &out, cli.eps.is_some()),
        Command::Plot { csv } => plot(&cfg, &out, csv.as_deref()),
    }
}

fn simulate(cfg: &RunConfig, out: &Writer) -> Result<bool> {
    let sim = &cfg.simulate;
    let n = sim.records - 1;
    let config = SolverConfig {
        params: cfg.model.clone(),
        grid: match sim.grid {
            Some(g) => g,
            None => lifespan_grid(&cfg.model, 2.0 * sim.t_end, cfg.lifespan.max_dx)?,
        },
        settings: sim.solver,
        t_end: sim.t_end,
        record_times: (0..=n).map(|k| sim.t_end * k as f64 / n as f64).collect(),
    };
    let tr = evolve(&config)?;
    let mut body = String::from("t,l2,l_inf,h1,sigma,x_norm\n");
    for s in &tr.snapshots {
        let r = &s.norms;
        body.push_str(&format!("{},{},{},{},{},{}\n", s.t, r.l2, r.l_inf, r.h1, r.sigma, r.x_norm));
        out.say(&format!("t = {:<8} |u|_inf = {:<24} X = {}", s.t, r.l_inf, r.x_norm));
    }
    out.say(&format!("termination: {} after {} steps", tr.termination.label(), tr.steps));
    out.text("simulate.csv", &body)?;
    Ok(true)
}

fn lifespan(cfg: &RunConfig, out: &Writer) -> Result<bool> {
    let p = &cfg.model;
    let bound = theoretical_bound(p.p, p.lambda, sup_hat(&p.profile)?, Some(p.epsilon), Some(p.b_fraction))?;
    let est = estimate_lifespan(p, &cfg.lifespan)?;
    let row = LifespanRecord::from_estimate(&est, p.p, &bound);
    out.say(&format!(
        "eps = {}  T_num = {:?}  scaled = {:?}  bound_const = {}  termination = {}",
        row.eps, row.t_num, row.scaled, row.bound_const, row.termination
    ));
    out.records("lifespan.csv", &[row])?;
    Ok(true)
}

fn sweep(cfg: &RunConfig, out: &Writer) -> Result<bool> {
    let report = sweep_lifespan(&cfg.model, &cfg.sweep.eps, &cfg.lifespan)?;
    for r in &report.records {
        out.say(&format!(
            "eps = {:<6} T_num = {:<22} scaled = {:<22} ratio = {:?}",
            r.eps,
            r.t_num.map_or("-".into(), |t| t.to_string()),
            r.scaled.map_or("-".into(), |t| t.to_string()),
            r.ratio
        ));
    }
    out.records("sweep.csv", &report.records)?;
    out.json("sweep_summary.json", &report)?;
    if let Some(f) = report.fit {
        out.say(&format!("slope = {} (expected {})", f.slope, report.expected_slope));
    }
    if let Some(why) = &report.partial {
        out.say(&format!("PARTIAL: {why}"));
    }
    Ok(out.checks(&report.checks()) && report.partial.is_none())
}

fn residual(cfg: &RunConfig, out: &Writer, bootstrap: bool) -> Result<bool> {
    let scan = residual_scan(&cfg.model, &cfg.residual)?;
    let mut body = String::from("eps,delta,o_delta,T_B,I_free,I_blend,I_profile,I_total\n");
    for b in &scan.budgets {
        body.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            b.epsilon, b.delta, b.o_delta, b.t_b, b.free.value, b.blend.value, b.profile.value, b.total
        ));
        out.say(&format!("eps = {:<6} I_total = {}", b.epsilon, b.total));
    }
    out.text("residual.csv", &body)?;
    let mut ok = out.checks(&scan.checks());
    let check_params = cfg.model.with_epsilon(cfg.residual.check_eps);
    let self_check = residual_self_check(&check_params)?;
    for p in &self_check {
        let c = Check::at_least(&format!("{} region FD order at t = {}", p.region.label(), p.t), p.order, 1.9);
        ok &= out.checks(&[c]);
    }
    out.json("residual.json", &(&scan, &self_check))?;
    if bootstrap {
        let reports = bootstrap_scan(&cfg.model, &cfg.bootstrap)?;
        // reported, not required
        out.checks(&bootstrap_checks(&reports));
        out.json("bootstrap.json", &reports)?;
    }
    Ok(ok)
}

fn props(out: &Writer, report: PropsReport, name: &str) -> Result<bool> {
    for s in &report.suites {
        out.say(&format!("{} {} ({:.1}s)", if s.passed { "PASS" } else { "FAIL" }, s.name, s.seconds));
        for c in &s.constants {
            out.say(&format!(
                "    {} = {} (n = {}, violations = {})",
                c.name, c.constant, c.samples, c.violations
            ));
        }
        if let Some(e) = &s.error {
            out.say(&format!("    error: {e}"));
        }
    }
    out.json(name, &report)?;
    Ok(report.passed)
}

fn bound(cfg: &RunConfig, out: &Writer, with_eps: bool) -> Result<bool> {
    let p = &cfg.model;
    let eps = with_eps.then_some(p.epsilon);
    let b = theoretical_bound(p.p, p.lambda, sup_hat(&p.profile)?, eps, Some(p.b_fraction))?;
    out.say(&format!("A = {}", b.a));
    match (b.liminf_const, b.p3_log_bound) {
        (Some(c), _) => out.say(&format!("liminf_const = {c}")),
        (None, Some(l)) => out.say(&format!("p3_log_bound = {l}")),
        _ => {}
    }
    if let Some(t) = b.t_b {
        out.say(&format!("T_B = {t}"));
    }
    out.json("bound.json", &b)?;
    Ok(true)
}

fn plot(cfg: &RunConfig, out: &Writer, csv: Option<&Path>) -> Result<bool> {
    let src = csv.map_or_else(|| out.path("sweep.csv"), Path::to_path_buf);
    let rows = read_records(fs::File::open(&src)?)?;
    out.text("sweep_loglog.svg", &loglog_svg(&rows, cfg.model.p)?)?;
    out.text("sweep_scaled.svg", &scaled_svg(&rows)?)?;
    Ok(true)
}
