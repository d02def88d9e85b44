use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bound::{sup_hat, theoretical_bound, TheoreticalBound};
use super::config::worker_pool;
use super::harness::Check;
use crate::error::{LabError, Result};
use crate::numerics::{fit_power_law, LineFit};
use crate::profile::ModelParams;
use crate::solver::{estimate_lifespan, LifespanEstimate, LifespanOptions};

pub const CSV_SCHEMA_VERSION: u32 = 1;

/// Termination label of the trailer row written when a sweep aborts.
pub const PARTIAL: &str = "PARTIAL";

/// One row of a sweep. `T_num` is the operational blow-up time (threshold
/// plus bisection), not the exact life span.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LifespanRecord {
    pub eps: f64,
    #[serde(rename = "T_num")]
    pub t_num: Option<f64>,
    /// `ε^{2(p-1)/(3-p)} T_num`
    pub scaled: Option<f64>,
    pub bound_const: f64,
    pub ratio: Option<f64>,
    pub termination: String,
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    #[serde(rename = "N")]
    pub n_points: Option<usize>,
    pub dt_floor: Option<f64>,
    #[serde(rename = "K_b")]
    pub k_b: Option<f64>,
    #[serde(rename = "B_over_A")]
    pub b_over_a: f64,
    pub schema_version: u32,
}

impl LifespanRecord {
    pub fn from_estimate(est: &LifespanEstimate, p: f64, bound: &TheoreticalBound) -> Self {
        let bound_const = bound.liminf_const.unwrap_or(f64::NAN);
        let scaled = est.t_num.map(|t| scaled_lifespan(est.epsilon, p, t));
        Self {
            eps: est.epsilon,
            t_num: est.t_num,
            scaled,
            bound_const,
            ratio: scaled.filter(|_| bound_const.is_finite()).map(|s| s / bound_const),
            termination: est.label().to_string(),
            half_width: Some(est.grid.half_width()),
            n_points: Some(est.grid.len()),
            dt_floor: Some(est.settings.dt_floor),
            k_b: Some(est.settings.k_b),
            b_over_a: bound.b_over_a,
            schema_version: CSV_SCHEMA_VERSION,
        }
    }

    fn partial(eps: f64, bound: &TheoreticalBound) -> Self {
        Self {
            eps,
            t_num: None,
            scaled: None,
            bound_const: bound.liminf_const.unwrap_or(f64::NAN),
            ratio: None,
            termination: PARTIAL.to_string(),
            half_width: None,
            n_points: None,
            dt_floor: None,
            k_b: None,
            b_over_a: bound.b_over_a,
            schema_version: CSV_SCHEMA_VERSION,
        }
    }

    pub fn is_partial_marker(&self) -> bool {
        self.termination == PARTIAL
    }
}

/// `ε^{2(p-1)/(3-p)} T`.
pub fn scaled_lifespan(eps: f64, p: f64, t: f64) -> f64 {
    eps.powf(2.0 * (p - 1.0) / (3.0 - p)) * t
}

/// Rows in input order, the log-log fit of `T_num` against `ε`, and the
/// first failure if the sweep was cut short.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub p: f64,
    pub bound: TheoreticalBound,
    pub records: Vec<LifespanRecord>,
    pub fit: Option<LineFit>,
    /// `−2(p-1)/(3-p)`
    pub expected_slope: f64,
    /// Set when a run failed; the CSV then ends with a `PARTIAL` row.
    pub partial: Option<String>,
}

impl SweepReport {
    fn finished(&self) -> Vec<&LifespanRecord> {
        self.records
            .iter()
            .filter(|r| !r.is_partial_marker() && r.scaled.is_some())
            .collect()
    }

    /// The desk-scale expectations for the sweep:
    /// slope within 0.3 of the exponent, `scaled ∈ [0.8, 2]·bound_const`,
    /// `|scaled − bound_const|` non-increasing as ε decreases, and
    /// `ratio ≥ 0.8` at the two smallest ε.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        let slope = self.fit.map_or(f64::NAN, |f| f.slope);
        out.push(Check::at_least("slope >= exponent - 0.3", slope, self.expected_slope - 0.3));
        out.push(Check::at_most("slope <= exponent + 0.3", slope, self.expected_slope + 0.3));
        let mut rows = self.finished();
        rows.sort_by(|a, b| b.eps.total_cmp(&a.eps));
        let c = self.bound.liminf_const.unwrap_or(f64::NAN);
        let scaled: Vec<f64> = rows.iter().filter_map(|r| r.scaled).collect();
        let hi = scaled.iter().copied().fold(f64::NAN, f64::max);
        let lo = scaled.iter().copied().fold(f64::NAN, f64::min);
        out.push(Check::at_least("min scaled >= 0.8 * bound_const", lo, 0.8 * c));
        out.push(Check::at_most("max scaled <= 2 * bound_const", hi, 2.0 * c));
        let monotone = scaled.windows(2).all(|w| (w[1] - c).abs() <= (w[0] - c).abs());
        out.push(Check::holds("|scaled - bound_const| shrinks as eps decreases", monotone));
        let tail_ratio = rows
            .iter()
            .rev()
            .take(2)
            .map(|r| r.ratio.unwrap_or(f64::NAN))
            .fold(f64::INFINITY, f64::min);
        out.push(Check::at_least("ratio at the two smallest eps", tail_ratio, 0.8));
        out.push(Check::holds("sweep complete", self.partial.is_none() && rows.len() == self.records.len()));
        out
    }
}

/// Run one life-span measurement per `ε` in a worker pool (capped by
/// `LIFESPAN_LAB_THREADS`). Requires `Im λ > 0`.
pub fn sweep_lifespan(params: &ModelParams, eps: &[f64], options: &LifespanOptions) -> Result<SweepReport> {
    params.validate()?;
    if !(params.lambda.im > 0.0) {
        return Err(LabError::InvalidParameter(
            "a life-span sweep needs Im(lambda) > 0".into(),
        ));
    }
    let bound = theoretical_bound(params.p, params.lambda, sup_hat(&params.profile)?, None, Some(params.b_fraction))?;
    let pool = worker_pool()?;
    let results: Vec<Result<LifespanEstimate>> = pool.install(|| {
        eps.par_iter()
            .map(|&e| estimate_lifespan(&params.with_epsilon(e), options))
            .collect()
    });
    let mut records = Vec::with_capacity(eps.len());
    let mut partial = None;
    for (e, r) in eps.iter().zip(results) {
        match r {
            Ok(est) => records.push(LifespanRecord::from_estimate(&est, params.p, &bound)),
            Err(err) => {
                if partial.is_none() {
                    partial = Some(format!("eps = {e}: {err}"));
                    records.push(LifespanRecord::partial(*e, &bound));
                }
            }
        }
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = records
        .iter()
        .filter_map(|r| r.t_num.map(|t| (r.eps, t)))
        .unzip();
    let fit = fit_power_law(&xs, &ys);
    Ok(SweepReport {
        p: params.p,
        bound,
        records,
        fit,
        expected_slope: -2.0 * (params.p - 1.0) / (3.0 - params.p),
        partial,
    })
}

/// Header plus one row per record; floats in shortest round-trip form.
pub fn write_records<W: Write>(writer: W, records: &[LifespanRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<LifespanRecord>> {
    let mut rd = csv::Reader::from_reader(reader);
    let mut out = Vec::new();
    for row in rd.deserialize() {
        let rec: LifespanRecord = row?;
        if rec.schema_version != CSV_SCHEMA_VERSION {
            return Err(LabError::Config(format!(
                "CSV schema_version {} is not supported",
                rec.schema_version
            )));
        }
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Grid1D;

    fn record(eps: f64, t: Option<f64>, term: &str) -> LifespanRecord {
        LifespanRecord {
            eps,
            t_num: t,
            scaled: t.map(|t| eps * eps * t),
            bound_const: 0.25,
            ratio: t.map(|t| eps * eps * t / 0.25),
            termination: term.into(),
            half_width: Some(40.0),
            n_points: Some(2048),
            dt_floor: Some(1e-9),
            k_b: Some(50.0),
            b_over_a: 0.9,
            schema_version: CSV_SCHEMA_VERSION,
        }
    }

    #[test]
    fn csv_header_and_round_trip() {
        let rows = vec![
            record(0.3, Some(5.623_456_789_012_345), "blowup_amplitude"),
            record(0.1, None, PARTIAL),
        ];
        let mut buf = Vec::new();
        write_records(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text.lines().next().unwrap(),
            "eps,T_num,scaled,bound_const,ratio,termination,L,N,dt_floor,K_b,B_over_A,schema_version"
        );
        assert_eq!(read_records(buf.as_slice()).unwrap(), rows);
        assert!(text.contains("5.623456789012345"));
    }

    #[test]
    fn rejects_non_gain_sweeps() {
        let mut p = ModelParams::canonical(0.3);
        p.lambda = num_complex::Complex64::new(0.0, -1.0);
        assert!(sweep_lifespan(&p, &[0.3], &LifespanOptions::default()).is_err());
    }

    #[test]
    fn failed_runs_leave_a_partial_marker() {
        let opts = LifespanOptions {
            horizon_factor: 0.5,
            grid: Some(Grid1D::new(32.0, 1024).unwrap()),
            ..Default::default()
        };
        let report = sweep_lifespan(&ModelParams::canonical(0.5), &[0.5, 0.45], &opts).unwrap();
        assert!(report.partial.is_some());
        assert!(report.records.last().unwrap().is_partial_marker());
        assert!(report.checks().iter().any(|c| !c.passed));
    }
}
