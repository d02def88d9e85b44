use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// L², L∞, H¹, Σ and X norms of one field, plus the three X components.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct NormReport {
    pub l2: f64,
    pub l_inf: f64,
    pub h1: f64,
    pub sigma: f64,
    pub x_norm: f64,
    pub l2_part: f64,
    pub dx_part: f64,
    pub j_part: f64,
}

/// `(u, ∂ₓu, Ju)` sampled on a grid of spacing `dx`; enough to evaluate the
/// X norm and to push the X norm through pointwise nonlinear maps by the
/// chain rule.
#[derive(Debug, Clone, PartialEq)]
pub struct XComponents {
    pub dx: f64,
    pub u: Vec<Complex64>,
    pub du: Vec<Complex64>,
    pub ju: Vec<Complex64>,
}

impl XComponents {
    pub fn x_norm(&self) -> f64 {
        l2(&self.u, self.dx) + l2(&self.du, self.dx) + l2(&self.ju, self.dx)
    }

    pub fn parts(&self) -> (f64, f64, f64) {
        (l2(&self.u, self.dx), l2(&self.du, self.dx), l2(&self.ju, self.dx))
    }

    pub fn sup(&self) -> f64 {
        self.u.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `a·self + b·other`, componentwise.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Self {
        let mix = |x: &[Complex64], y: &[Complex64]| -> Vec<Complex64> {
            x.iter().zip(y).map(|(p, q)| p * a + q * b).collect()
        };
        Self {
            dx: self.dx,
            u: mix(&self.u, &other.u),
            du: mix(&self.du, &other.du),
            ju: mix(&self.ju, &other.ju),
        }
    }

    pub fn scale(&self, a: Complex64) -> Self {
        let s = |x: &[Complex64]| x.iter().map(|p| p * a).collect();
        Self {
            dx: self.dx,
            u: s(&self.u),
            du: s(&self.du),
            ju: s(&self.ju),
        }
    }

    /// Components of `N(w) = λ|w|^{p-1}w`:
    ///
    /// ```text
    /// ∂N = λ[(p+1)/2 |w|^{p-1} ∂w + (p-1)/2 |w|^{p-3} w² conj(∂w)]
    /// JN = λ[(p+1)/2 |w|^{p-1} Jw − (p-1)/2 |w|^{p-3} w² conj(Jw)]
    /// ```
    ///
    /// Only pointwise products are formed, so no derivative of the
    /// non-smooth `|w|^{p-1}` is ever taken numerically.
    pub fn nonlinearity(&self, lambda: Complex64, p: f64) -> Self {
        let n = self.u.len();
        let mut u = Vec::with_capacity(n);
        let mut du = Vec::with_capacity(n);
        let mut ju = Vec::with_capacity(n);
        let (cp, cm) = (0.5 * (p + 1.0), 0.5 * (p - 1.0));
        for i in 0..n {
            let w = self.u[i];
            let r = w.norm();
            let a = r.powf(p - 1.0);
            // |w|^{p-3} w² = |w|^{p-1} e^{2i arg w}
            let b = if r > 0.0 { (w / r) * (w / r) * a } else { Complex64::new(0.0, 0.0) };
            u.push(lambda * a * w);
            du.push(lambda * (self.du[i] * (cp * a) + b * self.du[i].conj() * cm));
            ju.push(lambda * (self.ju[i] * (cp * a) - b * self.ju[i].conj() * cm));
        }
        Self {
            dx: self.dx,
            u,
            du,
            ju,
        }
    }
}

pub(crate) fn l2(values: &[Complex64], dx: f64) -> f64 {
    (values.iter().map(|z| z.norm_sqr()).sum::<f64>() * dx).sqrt()
}
