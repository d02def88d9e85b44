use serde::{Deserialize, Serialize};

/// A constant `C` for a bound `quantity ≤ C·shape`, fitted on calibration
/// ratios `quantity/shape` and then checked on held-out ratios.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedConstant {
    pub name: String,
    /// `slack · scale · max(calibration)`: the constant the check uses.
    pub constant: f64,
    pub calibration_max: f64,
    pub holdout_max: f64,
    pub samples: usize,
    pub violations: usize,
    pub passed: bool,
}

/// How constants are fitted. `scale < 1` deliberately shrinks every fitted
/// constant; the harness must then report failures.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitRule {
    pub slack: f64,
    pub scale: f64,
}

impl FitRule {
    pub fn new(slack: f64, scale: f64) -> Self {
        Self { slack, scale }
    }

    pub fn fit(&self, name: &str, calibration: &[f64], holdout: &[f64]) -> FittedConstant {
        let max_of = |v: &[f64]| v.iter().copied().fold(0.0, f64::max);
        let bad = calibration.iter().chain(holdout).filter(|r| !r.is_finite()).count();
        let calibration_max = max_of(calibration);
        let constant = self.slack * self.scale * calibration_max;
        let over = calibration
            .iter()
            .chain(holdout)
            .filter(|&&r| r.is_finite() && r > constant)
            .count();
        let violations = bad + over;
        let samples = calibration.len() + holdout.len();
        FittedConstant {
            name: name.to_string(),
            constant,
            calibration_max,
            holdout_max: max_of(holdout),
            samples,
            violations,
            passed: samples > 0 && constant.is_finite() && violations == 0,
        }
    }

    /// Alternate samples between calibration and holdout.
    pub fn fit_interleaved(&self, name: &str, ratios: &[f64]) -> FittedConstant {
        let cal: Vec<f64> = ratios.iter().step_by(2).copied().collect();
        let hold: Vec<f64> = ratios.iter().skip(1).step_by(2).copied().collect();
        self.fit(name, &cal, &hold)
    }
}

/// A pass/fail comparison against a fixed limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            limit,
            passed: value <= limit,
        }
    }

    pub fn at_least(name: &str, value: f64, limit: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            limit,
            passed: value >= limit,
        }
    }

    /// Boolean outcome, recorded as 1/0 against limit 1.
    pub fn holds(name: &str, ok: bool) -> Self {
        Self {
            name: name.to_string(),
            value: if ok { 1.0 } else { 0.0 },
            limit: 1.0,
            passed: ok,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_passes_then_fails_when_shrunk() {
        let ratios: Vec<f64> = (0..100).map(|k| 1.0 - 1.0 / (k as f64 + 2.0)).collect();
        let ok = FitRule::new(1.25, 1.0).fit_interleaved("r", &ratios);
        assert!(ok.passed, "{ok:?}");
        assert_eq!(ok.samples, 100);
        let shrunk = FitRule::new(1.25, 0.1).fit_interleaved("r", &ratios);
        assert!(!shrunk.passed);
        assert!(shrunk.violations > 90);
    }

    #[test]
    fn non_finite_ratios_are_violations() {
        let f = FitRule::new(2.0, 1.0).fit("r", &[1.0], &[f64::NAN, 0.5]);
        assert_eq!(f.violations, 1);
        assert!(!f.passed);
    }
}
