use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;

use super::ProfileModel;
use crate::error::{LabError, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_STEPS: usize = 1 << 22;

fn rhs(lambda: Complex64, p: f64, v: Complex64) -> Complex64 {
    -I * lambda * v.norm().powf(p - 1.0) * v
}

fn integrate(lambda: Complex64, p: f64, v0: Complex64, s_end: f64, n: usize) -> Complex64 {
    let h = s_end / n as f64;
    let mut v = v0;
    for _ in 0..n {
        let k1 = rhs(lambda, p, v);
        let k2 = rhs(lambda, p, v + 0.5 * h * k1);
        let k3 = rhs(lambda, p, v + 0.5 * h * k2);
        let k4 = rhs(lambda, p, v + h * k3);
        v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    v
}

/// Classical RK4 for the scalar equation `i V' = λ|V|^{p-1}V` from `v0` to
/// `s_end`, doubling the step count until the answer moves by less than
/// `tol·max(1, |V|)`.
pub fn rk4_point(lambda: Complex64, p: f64, v0: Complex64, s_end: f64, tol: f64) -> Result<Complex64> {
    if s_end == 0.0 {
        return Ok(v0);
    }
    let mut n = 32;
    let mut prev = integrate(lambda, p, v0, s_end, n);
    loop {
        n *= 2;
        if n > MAX_STEPS {
            return Err(LabError::StepUnderflow {
                s: s_end,
                xi: f64::NAN,
            });
        }
        let next = integrate(lambda, p, v0, s_end, n);
        if !(next.re.is_finite() && next.im.is_finite()) {
            return Err(LabError::StepUnderflow {
                s: s_end,
                xi: f64::NAN,
            });
        }
        // Richardson: the finer value is off by about |next - prev| / 15.
        if (next - prev).norm() < tol * next.norm().max(1.0) {
            return Ok(next);
        }
        prev = next;
    }
}

/// Unmollified profile at `s_end` on every `stride`-th point of the model's ξ
/// axis, integrated numerically from `e^{-iπ/4}φ̂` without using the closed
/// form. Returns `(index, V)` pairs.
pub fn rk4_oracle(model: &ProfileModel, s_end: f64, stride: usize) -> Result<Vec<(usize, Complex64)>> {
    let a = model.blowup_constant_a();
    if !(s_end >= 0.0 && s_end < a * (1.0 - 1e-3)) {
        return Err(LabError::InvalidParameter(format!(
            "oracle needs 0 <= s < A(1 - 1e-3); s = {s_end}, A = {a}"
        )));
    }
    let params = model.params();
    let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
    let hat = model.hat();
    (0..hat.len())
        .step_by(stride.max(1))
        .map(|k| {
            rk4_point(params.lambda, params.p, rot * hat[k], s_end, 1e-11)
                .map(|v| (k, v))
                .map_err(|_| LabError::StepUnderflow {
                    s: s_end,
                    xi: model.grid().xi(k),
                })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::ModelParams;

    #[test]
    fn scalar_gain_closed_form() {
        let rot = Complex64::from_polar(1.0, -FRAC_PI_4);
        let v = rk4_point(I, 2.0, rot, 0.5, 1e-12).unwrap();
        assert!((v.norm() - 2.0).abs() < 1e-8);
        assert!((v.arg() + FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn real_lambda_keeps_modulus() {
        let v0 = Complex64::new(0.3, -0.8);
        let v = rk4_point(Complex64::new(1.7, 0.0), 2.6, v0, 5.0, 1e-12).unwrap();
        assert!((v.norm() - v0.norm()).abs() < 1e-10);
        let theta = -1.7 * v0.norm().powf(1.6) * 5.0;
        assert!((v - v0 * Complex64::from_polar(1.0, theta)).norm() < 1e-9);
    }

    #[test]
    fn agrees_with_closed_form() {
        let mut params = ModelParams::canonical(0.1);
        params.lambda = Complex64::new(-0.6, 1.2);
        params.p = 2.3;
        let model = ProfileModel::new(&params).unwrap();
        let s = model.horizon_b();
        let ev = model.eval(s, false).unwrap();
        let scale = ev.v.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (k, v) in rk4_oracle(&model, s, 64).unwrap() {
            assert!((v - ev.v[k]).norm() <= 1e-8 * scale, "k {k}");
        }
    }

    #[test]
    fn rejects_near_blowup() {
        let model = ProfileModel::new(&ModelParams::canonical(0.1)).unwrap();
        assert!(rk4_oracle(&model, 0.9995, 1).is_err());
    }
}
