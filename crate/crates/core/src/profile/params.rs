use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::InitialProfile;
use crate::error::{LabError, Result};

/// Largest admissible exponent. `2/(3-p)` appears as a power in the
/// life-span constant, so `p` must stay measurably below 3.
pub const P_MAX: f64 = 3.0 - 1e-6;

fn default_b_fraction() -> f64 {
    0.9
}

/// `p`, `λ`, `ε`, `δ`, `B/A` and `φ`: everything the equation and the
/// approximate solution depend on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub p: f64,
    /// `[re, im]`
    pub lambda: Complex64,
    pub epsilon: f64,
    /// Mollification width; `ε^{1/4}` when absent.
    #[serde(default)]
    pub delta: Option<f64>,
    /// Profile horizon `B` as a fraction of `A`.
    #[serde(default = "default_b_fraction")]
    pub b_fraction: f64,
    #[serde(default)]
    pub profile: InitialProfile,
}

impl ModelParams {
    pub fn new(p: f64, lambda: Complex64, epsilon: f64, profile: InitialProfile) -> Self {
        Self {
            p,
            lambda,
            epsilon,
            delta: None,
            b_fraction: default_b_fraction(),
            profile,
        }
    }

    /// `p = 2`, `λ = i`, `φ = e^{-x²/2}`.
    pub fn canonical(epsilon: f64) -> Self {
        Self::new(2.0, Complex64::new(0.0, 1.0), epsilon, InitialProfile::standard_gaussian())
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self {
            epsilon,
            ..self.clone()
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = Some(delta);
        self
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or_else(|| self.epsilon.powf(0.25))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(LabError::InvalidParameter(m));
        if !(self.p >= 2.0 && self.p <= P_MAX) {
            return bad(format!("p must lie in [2, 3) (at most {P_MAX}), got {}", self.p));
        }
        if !(self.lambda.re.is_finite() && self.lambda.im.is_finite()) {
            return bad("lambda must be finite".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        let d = self.delta();
        if !(d > 0.0 && d.is_finite()) {
            return bad(format!("delta must be positive, got {d}"));
        }
        if !(self.b_fraction > 0.0 && self.b_fraction < 1.0) {
            return bad(format!("B/A must lie in (0, 1), got {}", self.b_fraction));
        }
        self.profile.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_validation() {
        let m = ModelParams::canonical(0.0625);
        m.validate().unwrap();
        assert!((m.delta() - 0.5).abs() < 1e-15);
        assert!(ModelParams::canonical(0.1).with_delta(0.2).delta() == 0.2);
        let mut bad = ModelParams::canonical(0.1);
        bad.p = 3.0 - 1e-9;
        assert!(bad.validate().is_err());
        bad.p = 1.5;
        assert!(bad.validate().is_err());
        bad.p = 2.5;
        bad.validate().unwrap();
        assert!(ModelParams::canonical(0.0).validate().is_err());
    }

    #[test]
    fn json_schema_is_strict() {
        let m: ModelParams =
            serde_json::from_str(r#"{"p":2.0,"lambda":[0.0,1.0],"epsilon":0.3}"#).unwrap();
        assert_eq!(m, ModelParams::canonical(0.3));
        assert!(serde_json::from_str::<ModelParams>(
            r#"{"p":2.0,"lambda":[0.0,1.0],"epsilon":0.3,"eps":1}"#
        )
        .is_err());
    }
}
