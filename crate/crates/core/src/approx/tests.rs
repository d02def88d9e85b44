use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::*;
use crate::profile::ModelParams;
use crate::spectral::Grid1D;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

#[test]
fn cutoff_constraints() {
    assert_eq!(cutoff_chi(0.5), 1.0);
    assert_eq!(cutoff_chi(1.0), 1.0);
    assert_eq!(cutoff_chi(2.0), 0.0);
    assert_eq!(cutoff_chi(3.0), 0.0);
    assert!((cutoff_chi(1.5) - 0.5).abs() < 1e-14);
    let mut prev = 1.0;
    for k in 0..=400 {
        let tau = 0.9 + k as f64 * 0.003;
        let c = cutoff_chi(tau);
        assert!((0.0..=1.0).contains(&c));
        assert!(c <= prev + 1e-15);
        prev = c;
    }
    // symmetry of the bump
    for &h in &[0.1, 0.27, 0.44] {
        assert!((cutoff_chi(1.5 + h) - (1.0 - cutoff_chi(1.5 - h))).abs() < 1e-14);
    }
}

#[test]
fn cutoff_derivative_matches_differences_and_is_flat_at_the_ends() {
    let h = 1e-5;
    for &tau in &[1.1, 1.37, 1.5, 1.8, 1.95] {
        let fd = (cutoff_chi(tau + h) - cutoff_chi(tau - h)) / (2.0 * h);
        assert!((fd - cutoff_chi_prime(tau)).abs() < 1e-8, "{tau}");
    }
    // every difference quotient dies at the matching points
    for &d in &[0.02, 0.01, 0.005] {
        assert!(cutoff_chi_prime(1.0 + d).abs() < 1e-20);
        assert!(cutoff_chi_prime(2.0 - d).abs() < 1e-20);
        assert!((1.0 - cutoff_chi(1.0 + d)).abs() < 1e-20);
    }
}

#[test]
fn regions_follow_eps_t() {
    assert_eq!(Region::of(0.5 / 0.3, 0.3), Region::Free);
    assert_eq!(Region::of(1.5 / 0.3, 0.3), Region::Blend);
    assert_eq!(Region::of(3.0 / 0.3, 0.3), Region::Profile);
}

#[test]
fn rejects_eps_at_least_one() {
    assert!(ApproxModel::new(&ModelParams::canonical(1.0)).is_err());
    assert!(ApproxModel::new(&ModelParams::canonical(0.99)).is_ok());
}

#[test]
fn rejects_times_past_the_horizon() {
    let model = ApproxModel::new(&ModelParams::canonical(0.3)).unwrap();
    assert!(matches!(
        model.state(model.t_b() * 1.01),
        Err(LabError::Horizon { .. })
    ));
}

#[test]
fn free_part_keeps_the_sigma_norm() {
    let eps = 0.08;
    let model = ApproxModel::new(&ModelParams::canonical(eps)).unwrap();
    let sigma = std::f64::consts::PI.powf(0.25) * (1.0 + std::f64::consts::SQRT_2);
    for &t in &[0.0, 0.5, 1.0, 5.0, 12.0] {
        let st = model.state(t).unwrap();
        assert_eq!(st.region, Region::Free);
        let nx = st.ua.x_norm();
        assert!(rel(nx, eps * sigma) < 1e-9, "t = {t}: {nx}");
        assert_eq!(st.ua, *st.u_free.as_ref().unwrap());
        assert!(st.m.is_none());
    }
}

#[test]
fn reduced_and_grid_pictures_agree() {
    let model = ApproxModel::new(&ModelParams::canonical(0.08)).unwrap();
    for &t in &[3.0, 16.0, 28.0] {
        let grid = Grid1D::with_spacing(8.0 + 10.0 * t, 0.07).unwrap();
        let ctx = model.grid_context(grid).unwrap();
        let a = model.state_on_grid(t, &ctx).unwrap().norms();
        let b = model.state_reduced(t).unwrap().norms();
        assert_eq!(a.region, b.region);
        assert!(rel(a.ua, b.ua) < 1e-9, "{t}: {} vs {}", a.ua, b.ua);
        assert!(rel(a.r, b.r) < 1e-8, "{t}: {} vs {}", a.r, b.r);
        if let (Some(x), Some(y)) = (a.q2, b.q2) {
            assert!(rel(x, y) < 1e-7);
        }
    }
}

#[test]
fn profile_region_is_pure_m_with_r_equal_q() {
    let model = ApproxModel::new(&ModelParams::canonical(0.08)).unwrap();
    let st = model.state(27.0).unwrap();
    assert_eq!(st.region, Region::Profile);
    let m = st.m.as_ref().unwrap();
    assert_eq!(st.ua, *m);
    let one = Complex64::new(1.0, 0.0);
    let q = st.q1.as_ref().unwrap().combine(one, st.q2.as_ref().unwrap(), one);
    assert_eq!(st.r, q);
    assert!(st.u_free.is_none());
}

#[test]
fn modulus_and_phase_of_m() {
    let eps = 0.1;
    let model = ApproxModel::new(&ModelParams::canonical(eps)).unwrap();
    let t = 15.0;
    let grid = Grid1D::new(64.0, 2048).unwrap();
    let ctx = model.grid_context(grid).unwrap();
    let st = model.state_on_grid(t, &ctx).unwrap();
    let m = st.m.as_ref().unwrap();
    let s = model.profile().s_of_t(t);
    let mid = grid.len() / 2;
    for (j, &x) in ctx.spectral().xs().iter().enumerate().step_by(97) {
        let xi = x / t;
        let a = model.profile().smooth_amplitude(xi)[0];
        // W_δ = 1 − (p−1) Im λ ã s with p = 2, λ = i
        let expect = eps / t.sqrt() * (-0.5 * xi * xi).exp() / (1.0 - a * s);
        assert!((m.u[j].norm() - expect).abs() < 1e-12 * eps, "{x}");
    }
    // Re λ = 0: no nonlinear phase, so arg m(t, 0) = −π/4
    assert!((m.u[mid].arg() + FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn blend_mixes_with_chi() {
    let eps = 0.08;
    let model = ApproxModel::new(&ModelParams::canonical(eps)).unwrap();
    let t = 1.3 / eps;
    let st = model.state(t).unwrap();
    assert_eq!(st.region, Region::Blend);
    let chi = cutoff_chi(1.3);
    assert_eq!(st.chi, chi);
    let (f, m) = (st.u_free.as_ref().unwrap(), st.m.as_ref().unwrap());
    for k in (0..st.ua.u.len()).step_by(50) {
        let expect = chi * f.u[k] + (1.0 - chi) * m.u[k];
        assert!((st.ua.u[k] - expect).norm() < 1e-15);
    }
}

#[test]
fn q1_vanishes_without_mollification() {
    let model = ApproxModel::new(&ModelParams::canonical(0.08)).unwrap();
    let xis: Vec<f64> = (-40..=40).map(|k| k as f64 * 0.1).collect();
    for jet in model.profile().jets(0.5, &xis, false).unwrap() {
        assert_eq!(jet.q1[0], Complex64::new(0.0, 0.0));
    }
    let smooth = model.profile().jets(0.5, &xis, true).unwrap();
    assert!(smooth.iter().any(|j| j.q1[0].norm() > 0.0));
}

#[test]
fn residual_matches_finite_differences_in_every_region() {
    let model = ApproxModel::new(&ModelParams::canonical(0.08)).unwrap();
    for &(t, region) in &[(6.0, Region::Free), (18.75, Region::Blend), (28.0, Region::Profile)] {
        let grid = Grid1D::with_spacing(8.0 + 10.0 * t, 0.07).unwrap();
        let ctx = model.grid_context(grid).unwrap();
        let checks: Vec<ResidualCheck> = (0..3)
            .map(|k| model.residual_check(t, 0.01 * t / f64::from(1u32 << k), &ctx).unwrap())
            .collect();
        assert_eq!(checks[0].region, region);
        let order = observed_order(&checks);
        assert!(order >= 1.9, "{region:?}: order {order} ({checks:?})");
        assert!(checks[2].relative < 1e-2);
    }
}

#[test]
fn matching_gap_splits_exactly() {
    let model = ApproxModel::new(&ModelParams::canonical(0.08)).unwrap();
    let g = matching_gap(&model, 1.5 / 0.08).unwrap();
    assert!(g.split_defect < 1e-12 * g.gap_x);
    assert!(g.f2_x < g.f1_x);
    assert!(matching_gap(&model, 0.5 / 0.08).is_err());
    assert!(matching_gap(&model, 2.5 / 0.08).is_err());
}

#[test]
fn matching_gap_is_continuous_in_t() {
    let eps = 0.04;
    let model = ApproxModel::new(&ModelParams::canonical(eps)).unwrap();
    let ts: Vec<f64> = (1..40).map(|k| (1.0 + k as f64 / 40.0) / eps).collect();
    let gaps: Vec<f64> = ts.iter().map(|&t| matching_gap(&model, t).unwrap().gap_x).collect();
    for w in gaps.windows(2) {
        assert!(rel(w[1], w[0]) < 0.05, "{w:?}");
    }
}

#[test]
fn budget_converges_and_decreases() {
    let opts = BudgetOptions::default();
    let big = residual_budget(&ApproxModel::new(&ModelParams::canonical(0.08)).unwrap(), &opts).unwrap();
    let small = residual_budget(&ApproxModel::new(&ModelParams::canonical(0.04)).unwrap(), &opts).unwrap();
    assert!(small.total < big.total);
    for b in [&big, &small] {
        assert!((b.total - (b.free.value + b.blend.value + b.profile.value)).abs() < 1e-15);
        for r in [&b.free, &b.blend, &b.profile] {
            assert!(r.samples.len() >= 200);
            assert!((r.value - r.coarse).abs() <= 0.01 * r.value);
        }
        assert_eq!(b.free.start, 0.0);
        assert!((b.profile.end - b.t_b).abs() < 1e-12 * b.t_b);
    }
}

#[test]
fn budget_truncates_regions_at_the_horizon() {
    // ε = 0.4: T_B = 0.81/(4·0.16) < 1/ε, only the free region is present
    let model = ApproxModel::new(&ModelParams::canonical(0.4)).unwrap();
    let b = residual_budget(&model, &BudgetOptions::default()).unwrap();
    assert!(b.free.value > 0.0);
    assert_eq!(b.blend.value, 0.0);
    assert_eq!(b.profile.value, 0.0);
    assert!((b.free.end - model.t_b()).abs() < 1e-12);
}
