use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::profile::{horizon_time, refined_sup, InitialProfile};
use crate::spectral::XiGrid;

/// The constants of the life-span lower bound for one `(p, λ, sup|φ̂|)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoreticalBound {
    pub p: f64,
    pub lambda: Complex64,
    pub sup_hat: f64,
    /// `A = 1/((p-1) Im λ sup|φ̂|^{p-1})`, `+∞` when `Im λ ≤ 0`.
    pub a: f64,
    /// `((3-p)A/2)^{2/(3-p)}` for `p < 3`; absent at `p = 3`.
    pub liminf_const: Option<f64>,
    pub b_over_a: f64,
    /// `T_B(ε)` when `ε` was given and `p < 3`.
    pub t_b: Option<f64>,
    /// At `p = 3`: lower bound `1/(2 Im λ sup|φ̂|²)` for `ε² log T(ε)`.
    pub p3_log_bound: Option<f64>,
}

/// Closed-form substitution; `p` must lie in `[2, 3]` (`p = 3` gives the
/// logarithmic bound instead of the power law).
pub fn theoretical_bound(
    p: f64,
    lambda: Complex64,
    sup_hat: f64,
    epsilon: Option<f64>,
    b_over_a: Option<f64>,
) -> Result<TheoreticalBound> {
    if !(2.0..=3.0).contains(&p) {
        return Err(LabError::InvalidParameter(format!("p must lie in [2, 3], got {p}")));
    }
    if !(sup_hat >= 0.0 && sup_hat.is_finite()) {
        return Err(LabError::InvalidParameter(format!("sup|φ̂| must be finite and >= 0, got {sup_hat}")));
    }
    let b_over_a = b_over_a.unwrap_or(0.9);
    let denom = (p - 1.0) * lambda.im * sup_hat.powf(p - 1.0);
    let a = if denom > 0.0 { 1.0 / denom } else { f64::INFINITY };
    if p == 3.0 {
        return Ok(TheoreticalBound {
            p,
            lambda,
            sup_hat,
            a,
            liminf_const: None,
            b_over_a,
            t_b: None,
            p3_log_bound: Some(a),
        });
    }
    let liminf_const = ((3.0 - p) * a / 2.0).powf(2.0 / (3.0 - p));
    let t_b = match epsilon {
        Some(eps) if eps > 0.0 => Some(horizon_time(b_over_a * a, p, eps)),
        Some(eps) => {
            return Err(LabError::InvalidParameter(format!("epsilon must be positive, got {eps}")))
        }
        None => None,
    };
    Ok(TheoreticalBound {
        p,
        lambda,
        sup_hat,
        a,
        liminf_const: Some(liminf_const),
        b_over_a,
        t_b,
        p3_log_bound: None,
    })
}

/// `sup|φ̂|` on a uniform ξ axis of step 0.005 with parabolic refinement.
pub fn sup_hat(profile: &InitialProfile) -> Result<f64> {
    profile.validate()?;
    let extent = profile.xi_extent(1e-15, 400.0);
    let grid = XiGrid::covering(extent, 0.005)?;
    let mags: Vec<f64> = grid.xis().into_iter().map(|x| profile.hat(x).norm()).collect();
    Ok(refined_sup(&mags))
}

#[cfg(test)]
mod tests {
    use super::*;

    const I: Complex64 = Complex64::new(0.0, 1.0);

    #[test]
    fn canonical_constants_are_exact() {
        let sup = sup_hat(&InitialProfile::standard_gaussian()).unwrap();
        assert_eq!(sup, 1.0);
        let b = theoretical_bound(2.0, I, sup, Some(0.2), None).unwrap();
        assert_eq!(b.a, 1.0);
        assert_eq!(b.liminf_const, Some(0.25));
        // T_B = (B/(2ε))² with B = 0.9
        assert!((b.t_b.unwrap() - (0.9f64 / 0.4).powi(2)).abs() < 1e-12);
    }

    #[test]
    fn infinite_conventions() {
        let b = theoretical_bound(2.5, -I, 1.0, None, None).unwrap();
        assert!(b.a.is_infinite());
        assert!(b.liminf_const.unwrap().is_infinite());
        let b = theoretical_bound(2.0, Complex64::new(1.0, 0.0), 1.0, None, None).unwrap();
        assert!(b.liminf_const.unwrap().is_infinite());
    }

    #[test]
    fn cubic_case_gives_the_log_bound() {
        let b = theoretical_bound(3.0, I, 1.0, Some(0.1), None).unwrap();
        assert_eq!(b.p3_log_bound, Some(0.5));
        assert!(b.liminf_const.is_none());
    }

    #[test]
    fn liminf_matches_t_of_a() {
        // ε^{2(p-1)/(3-p)} t_of_s(A) is ε-free and equals the liminf constant
        let b = theoretical_bound(2.5, 2.0 * I, 1.0, None, Some(1.0)).unwrap();
        for eps in [0.3, 0.01] {
            let t = horizon_time(b.a, 2.5, eps);
            let scaled = eps.powf(2.0 * 1.5 / 0.5) * t;
            assert!((scaled - b.liminf_const.unwrap()).abs() < 1e-12 * scaled);
        }
    }

    #[test]
    fn rejects_p_outside_range() {
        assert!(theoretical_bound(1.9, I, 1.0, None, None).is_err());
        assert!(theoretical_bound(3.1, I, 1.0, None, None).is_err());
    }
}
