use lifespan_lab::experiments::props::power_ratios;
use lifespan_lab::spectral::{ComplexField, Grid1D, Spectral};
use num_complex::Complex64;
use proptest::prelude::*;

fn bump(grid: Grid1D, c: f64, w: f64, k: f64, amp: f64) -> ComplexField {
    ComplexField::from_fn(grid, 0.0, |x| {
        let y = (x - c) / w;
        Complex64::from_polar(amp * (-0.5 * y * y).exp(), k * x)
    })
    .unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(re, im)| Complex64::new(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // both power-difference ratios are bounded by 2 for q in [2, 3]
    #[test]
    fn power_ratios_bounded(a in complex(), b in complex(), q in 2.0f64..3.0) {
        if let Some(r) = power_ratios(a, b, q) {
            prop_assert!(r[0] <= 2.0 * (1.0 + 1e-9), "{r:?}");
            prop_assert!(r[1] <= 2.0 * (1.0 + 1e-9), "{r:?}");
        }
    }

    #[test]
    fn fourier_round_trip_and_plancherel(c in -4.0f64..4.0, w in 0.7f64..3.0, k in -3.0f64..3.0, amp in 0.1f64..2.0) {
        let sp = Spectral::new(Grid1D::new(40.0, 1024).unwrap());
        let u = bump(*sp.grid(), c, w, k, amp);
        let hat = sp.fourier_transform(&u).unwrap();
        prop_assert!((hat.l2() - u.l2()).abs() <= 1e-10 * u.l2());
        let back = sp.inverse_fourier_transform(&hat, 0.0).unwrap();
        prop_assert!(back.sub(&u).unwrap().max_abs() <= 1e-12 * amp.max(1.0));
    }

    #[test]
    fn free_flow_is_unitary_and_invertible(c in -2.0f64..2.0, w in 0.8f64..2.0, t in 0.1f64..3.0) {
        let sp = Spectral::new(Grid1D::new(60.0, 2048).unwrap());
        let u = bump(*sp.grid(), c, w, 0.0, 1.0);
        let v = sp.free_propagate(&u, t).unwrap();
        prop_assert!((v.l2() - u.l2()).abs() <= 1e-12 * u.l2());
        let back = sp.free_propagate(&v, -t).unwrap();
        prop_assert!(back.sub(&u).unwrap().max_abs() <= 1e-12);
    }

    #[test]
    fn m_factors_are_inverse(c in -2.0f64..2.0, t in 0.2f64..10.0) {
        let sp = Spectral::new(Grid1D::new(20.0, 512).unwrap());
        let u = bump(*sp.grid(), c, 1.0, 0.5, 1.0);
        let back = sp.apply_m(&sp.apply_m(&u, t, 1).unwrap(), t, -1).unwrap();
        prop_assert!(back.sub(&u).unwrap().max_abs() <= 1e-14);
    }
}

// J commutes with the free flow: J(t) U(t) = U(t) x
#[test]
fn j_intertwines_free_flow() {
    let sp = Spectral::new(Grid1D::new(60.0, 2048).unwrap());
    let u = bump(*sp.grid(), 0.5, 1.0, 0.3, 1.0);
    let xu = ComplexField::from_fn(*sp.grid(), 0.0, |x| {
        let y = x - 0.5;
        Complex64::from_polar(x * (-0.5 * y * y).exp(), 0.3 * x)
    })
    .unwrap();
    let t = 2.0;
    let lhs = sp.apply_j(&sp.free_propagate(&u, t).unwrap(), t).unwrap();
    let rhs = sp.free_propagate(&xu, t).unwrap();
    assert!(lhs.sub(&rhs).unwrap().max_abs() < 1e-10);
}
