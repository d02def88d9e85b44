//! Small numerical building blocks shared by every module: finite-difference
//! stencils, Gauss-Legendre rules, cubic interpolation and least squares.

use num_complex::Complex64;

/// First derivative, 4th-order centered stencil, on a uniform grid.
/// The two points nearest each edge fall back to lower-order one-sided
/// differences.
pub fn d1_grid(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 5 {
        return out;
    }
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - f[i - 1] * 8.0 + f[i + 1] * 8.0 - f[i + 2]) / (12.0 * h);
    }
    out[0] = (f[1] - f[0]) / h;
    out[1] = (f[2] - f[0]) / (2.0 * h);
    out[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    out[n - 1] = (f[n - 1] - f[n - 2]) / h;
    out
}

/// Second derivative, 4th-order centered stencil.
pub fn d2_grid(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 5 {
        return out;
    }
    let h2 = h * h;
    for i in 2..n - 2 {
        out[i] = (-f[i - 2] + f[i - 1] * 16.0 - f[i] * 30.0 + f[i + 1] * 16.0 - f[i + 2])
            / (12.0 * h2);
    }
    out[1] = (f[0] - f[1] * 2.0 + f[2]) / h2;
    out[n - 2] = (f[n - 3] - f[n - 2] * 2.0 + f[n - 1]) / h2;
    out
}

/// Third derivative, 4th-order centered 7-point stencil.
pub fn d3_grid(f: &[Complex64], h: f64) -> Vec<Complex64> {
    let n = f.len();
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    if n < 7 {
        return out;
    }
    let h3 = h * h * h;
    for i in 3..n - 3 {
        out[i] = (f[i - 3] - f[i - 2] * 8.0 + f[i - 1] * 13.0 - f[i + 1] * 13.0
            + f[i + 2] * 8.0
            - f[i + 3])
            / (8.0 * h3);
    }
    out
}

/// Real-valued first derivative, same stencil as [`d1_grid`].
pub fn d1_grid_real(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 5 {
        return out;
    }
    for i in 2..n - 2 {
        out[i] = (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h);
    }
    out[0] = (f[1] - f[0]) / h;
    out[1] = (f[2] - f[0]) / (2.0 * h);
    out[n - 2] = (f[n - 1] - f[n - 3]) / (2.0 * h);
    out[n - 1] = (f[n - 1] - f[n - 2]) / h;
    out
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre quadrature of `f` over [a, b].
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut sum = 0.0;
    for k in 0..panels {
        let mid = a + (k as f64 + 0.5) * h;
        for (xi, wi) in x.iter().zip(&w) {
            sum += wi * f(mid + 0.5 * h * xi);
        }
    }
    sum * 0.5 * h
}

/// Catmull-Rom style cubic (Keys, a = -1/2) interpolation on a uniform grid
/// starting at `x0` with spacing `h`. Outside the grid the value is `outside`.
pub fn cubic_interp(values: &[Complex64], x0: f64, h: f64, x: f64, outside: Complex64) -> Complex64 {
    let n = values.len();
    let u = (x - x0) / h;
    if !(u >= 0.0 && u <= (n - 1) as f64) {
        return outside;
    }
    let i = (u.floor() as usize).min(n - 2);
    let t = u - i as f64;
    let at = |k: isize| -> Complex64 {
        let j = i as isize + k;
        if j < 0 {
            // linear extrapolation keeps the stencil exact for linear data
            values[0] * 2.0 - values[1]
        } else if j as usize >= n {
            values[n - 1] * 2.0 - values[n - 2]
        } else {
            values[j as usize]
        }
    };
    let (p0, p1, p2, p3) = (at(-1), at(0), at(1), at(2));
    let t2 = t * t;
    let t3 = t2 * t;
    p1 + (p2 - p0) * (0.5 * t)
        + (p0 * 2.0 - p1 * 5.0 + p2 * 4.0 - p3) * (0.5 * t2)
        + (-p0 + p1 * 3.0 - p2 * 3.0 + p3) * (0.5 * t3)
}

/// Quintic Hermite interpolation through `(f, f', f'')` at two nodes a
/// distance `h` apart, evaluated at fraction `u ∈ [0, 1]` of the cell.
/// Returns the value and the first three derivatives (per unit length). The
/// piecewise interpolant is C².
pub fn quintic_hermite(h: f64, left: [f64; 3], right: [f64; 3], u: f64) -> [f64; 4] {
    let c0 = left[0];
    let c1 = h * left[1];
    let c2 = 0.5 * h * h * left[2];
    let f1 = right[0] - (c0 + c1 + c2);
    let d1 = h * right[1] - (c1 + 2.0 * c2);
    let s1 = h * h * right[2] - 2.0 * c2;
    let c3 = 10.0 * f1 - 4.0 * d1 + 0.5 * s1;
    let c4 = -15.0 * f1 + 7.0 * d1 - s1;
    let c5 = 6.0 * f1 - 3.0 * d1 + 0.5 * s1;
    let v = c0 + u * (c1 + u * (c2 + u * (c3 + u * (c4 + u * c5))));
    let d = c1 + u * (2.0 * c2 + u * (3.0 * c3 + u * (4.0 * c4 + u * 5.0 * c5)));
    let dd = 2.0 * c2 + u * (6.0 * c3 + u * (12.0 * c4 + u * 20.0 * c5));
    let ddd = 6.0 * c3 + u * (24.0 * c4 + u * 60.0 * c5);
    [v, d / h, dd / (h * h), ddd / (h * h * h)]
}

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let n = x.len();
    if n < 2 || y.len() != n {
        return None;
    }
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LineFit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Log-log fit of `y` against `x`.
pub fn fit_power_law(x: &[f64], y: &[f64]) -> Option<LineFit> {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    fit_line(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = w.iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
        // degree 18 monomial: integral 2/19
        let m: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((m - 2.0 / 19.0).abs() < 1e-14);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!(x1, vec![0.0]);
        assert!((w1[0] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn integrate_exponential() {
        let v = integrate(f64::exp, 0.0, 1.0, 4, 16);
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn stencils_on_a_polynomial() {
        let h = 0.1;
        let f: Vec<Complex64> = (0..20)
            .map(|i| {
                let x = i as f64 * h;
                Complex64::new(x.powi(3), -x * x)
            })
            .collect();
        let d1 = d1_grid(&f, h);
        let d2 = d2_grid(&f, h);
        let d3 = d3_grid(&f, h);
        let x = 10.0 * h;
        assert!((d1[10] - Complex64::new(3.0 * x * x, -2.0 * x)).norm() < 1e-12);
        assert!((d2[10] - Complex64::new(6.0 * x, -2.0)).norm() < 1e-10);
        assert!((d3[10] - Complex64::new(6.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn cubic_interp_reproduces_quadratics() {
        let h = 0.5;
        let v: Vec<Complex64> = (0..10).map(|i| Complex64::new((i as f64 * h).powi(2), 1.0)).collect();
        let z = cubic_interp(&v, 0.0, h, 2.3, Complex64::new(0.0, 0.0));
        assert!((z - Complex64::new(2.3f64.powi(2), 1.0)).norm() < 1e-12);
        assert_eq!(cubic_interp(&v, 0.0, h, -1.0, Complex64::new(7.0, 0.0)).re, 7.0);
    }

    #[test]
    fn quintic_hermite_is_exact_for_quintics() {
        let f = |x: f64| [
            1.0 - 2.0 * x + 0.5 * x.powi(3) + 0.3 * x.powi(5),
            -2.0 + 1.5 * x * x + 1.5 * x.powi(4),
            3.0 * x + 6.0 * x.powi(3),
            3.0 + 18.0 * x * x,
        ];
        let (a, h) = (0.4, 0.25);
        let (l, r) = (f(a), f(a + h));
        for u in [0.0, 0.3, 0.77, 1.0] {
            let got = quintic_hermite(h, [l[0], l[1], l[2]], [r[0], r[1], r[2]], u);
            let want = f(a + u * h);
            for k in 0..4 {
                assert!((got[k] - want[k]).abs() < 1e-11, "k {k} u {u}");
            }
        }
    }

    #[test]
    fn line_fit_recovers_power_law() {
        let x = [0.5, 0.4, 0.3, 0.2];
        let y: Vec<f64> = x.iter().map(|e: &f64| 0.25 * e.powf(-2.0)).collect();
        let fit = fit_power_law(&x, &y).unwrap();
        assert!((fit.slope + 2.0).abs() < 1e-12);
        assert!((fit.intercept - 0.25f64.ln()).abs() < 1e-12);
    }
}
