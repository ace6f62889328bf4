//! Coefficients `scale · y^μ · (log y)^j · c(log y) · Π_i b_i(x_i)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::profile::Profile;

use super::FormError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTerm {
    pub scale: Complex64,
    /// Power of `y`.
    pub mu: Complex64,
    /// Power of `log y`.
    pub logpow: u32,
    /// Profile in `t = log y`.
    pub c: Profile,
    /// One profile per x-axis; `b[i - 1]` acts on `x_i`.
    pub b: Vec<Profile>,
}

impl CoefficientTerm {
    /// `y^mu` on `R^n × (0, ∞)`.
    pub fn power(n: u32, mu: Complex64) -> Self {
        Self {
            scale: Complex64::new(1.0, 0.0),
            mu,
            logpow: 0,
            c: Profile::one(),
            b: vec![Profile::one(); n as usize],
        }
    }

    pub fn constant(n: u32, value: Complex64) -> Self {
        Self::power(n, Complex64::new(0.0, 0.0)).scaled(value)
    }

    pub fn ambient(&self) -> u32 {
        self.b.len() as u32
    }

    pub fn with_c(mut self, c: Profile) -> Self {
        self.c = c;
        self
    }

    /// Replace the profile on axis `i` (1-based).
    pub fn with_b(mut self, i: u32, b: Profile) -> Self {
        self.b[(i - 1) as usize] = b;
        self
    }

    pub fn with_logpow(mut self, j: u32) -> Self {
        self.logpow = j;
        self
    }

    pub fn scaled(mut self, s: Complex64) -> Self {
        self.scale *= s;
        self
    }

    /// Multiply by `y^a`.
    pub fn shifted(mut self, a: Complex64) -> Self {
        self.mu += a;
        self
    }

    /// Same monomial up to scale.
    ///
    /// Exponents are compared with a relative tolerance of `1e-13`: the same
    /// power reached through different shift chains may differ in the last bits.
    pub fn like(&self, other: &Self) -> bool {
        (self.mu - other.mu).norm() <= 1e-13 * (1.0 + self.mu.norm())
            && self.logpow == other.logpow && self.c == other.c && self.b == other.b
    }

    pub fn is_pure_power(&self) -> bool {
        self.logpow == 0 && self.c.is_one() && self.b.iter().all(Profile::is_one)
    }

    /// `∂/∂y`, as up to three terms carrying `y^{μ-1}`.
    pub fn d_y(&self) -> Vec<CoefficientTerm> {
        let base = self.clone().shifted(Complex64::new(-1.0, 0.0));
        let mut out = Vec::with_capacity(3);
        if self.mu != Complex64::new(0.0, 0.0) {
            out.push(base.clone().scaled(self.mu));
        }
        if self.logpow > 0 {
            let mut t = base.clone().scaled(Complex64::new(f64::from(self.logpow), 0.0));
            t.logpow -= 1;
            out.push(t);
        }
        if let Some(dc) = self.c.derivative() {
            out.push(base.with_c(dc));
        }
        out
    }

    /// `∂/∂x_i` for `i` in `1..=N`.
    pub fn d_x(&self, i: u32) -> Option<CoefficientTerm> {
        let db = self.b[(i - 1) as usize].derivative()?;
        Some(self.clone().with_b(i, db))
    }

    /// Derivative along coordinate `a` (`0 = y`).
    pub fn d(&self, a: u32) -> Vec<CoefficientTerm> {
        if a == 0 {
            self.d_y()
        } else {
            self.d_x(a).into_iter().collect()
        }
    }

    pub fn check_evaluable(&self) -> Result<(), FormError> {
        if self.c.evaluable() && self.b.iter().all(Profile::evaluable) {
            Ok(())
        } else {
            Err(FormError::Unsupported(
                "profile derivative order exceeds the available jet order".into(),
            ))
        }
    }

    /// y-dependent factor times `y^w`, evaluated at `t = log y`.
    ///
    /// `y^{μ+w}` is formed as `exp((μ+w)t)` so that very small `y` does not
    /// underflow before the weight is applied.
    pub fn t_factor(&self, t: f64, w: f64) -> Complex64 {
        let c = self.c.eval(t);
        if c == Complex64::new(0.0, 0.0) {
            return c;
        }
        let tj = t.powi(self.logpow as i32);
        self.scale * ((self.mu + w) * t).exp() * tj * c
    }

    pub fn x_factor(&self, x: &[f64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (b, &xi) in self.b.iter().zip(x) {
            if b.is_one() {
                continue;
            }
            acc *= b.eval(xi);
            if acc == Complex64::new(0.0, 0.0) {
                break;
            }
        }
        acc
    }

    /// Value at `(x, y)`.
    pub fn eval(&self, x: &[f64], y: f64) -> Complex64 {
        self.t_factor(y.ln(), 0.0) * self.x_factor(x)
    }
}

/// Add like terms and drop exact zeros, keeping first-occurrence order.
pub fn merge_terms<K: PartialEq + Clone>(
    terms: impl IntoIterator<Item = (CoefficientTerm, K)>,
) -> Vec<(CoefficientTerm, K)> {
    let mut out: Vec<(CoefficientTerm, K)> = Vec::new();
    for (t, k) in terms {
        if t.scale == Complex64::new(0.0, 0.0) {
            continue;
        }
        match out.iter_mut().find(|(u, l)| *l == k && u.like(&t)) {
            Some((u, _)) => u.scale += t.scale,
            None => out.push((t, k)),
        }
    }
    out.retain(|(t, _)| t.scale != Complex64::new(0.0, 0.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn numeric_dy(t: &CoefficientTerm, x: &[f64], y: f64) -> Complex64 {
        let h = 1e-5 * y;
        (t.eval(x, y + h) - t.eval(x, y - h)) / (2.0 * h)
    }

    #[test]
    fn y_derivative_of_log_power() {
        let term = CoefficientTerm::power(2, c(1.5, 0.7))
            .with_logpow(2)
            .with_c(Profile::plateau(-3.0, 3.0, 1.0))
            .with_b(1, Profile::bump(0.0, 1.0));
        let x = [0.3, -0.2];
        for y in [0.1, 0.3, 0.9, 2.5] {
            let exact: Complex64 = term.d_y().iter().map(|t| t.eval(&x, y)).sum();
            let approx = numeric_dy(&term, &x, y);
            assert!((exact - approx).norm() < 1e-6 * (1.0 + exact.norm()), "y={y}");
        }
    }

    #[test]
    fn x_derivative_and_vanishing() {
        let term = CoefficientTerm::power(2, c(1.0, 0.0)).with_b(2, Profile::bump(0.0, 2.0));
        assert!(term.d_x(1).is_none());
        let d = term.d_x(2).unwrap();
        let h = 1e-6;
        let fd = (term.eval(&[0.0, 0.4 + h], 1.0) - term.eval(&[0.0, 0.4 - h], 1.0)) / (2.0 * h);
        assert!((d.eval(&[0.0, 0.4], 1.0) - fd).norm() < 1e-8);
    }

    #[test]
    fn pure_power_has_single_derivative_term() {
        let t = CoefficientTerm::power(3, c(2.0, 0.0));
        let d = t.d_y();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].mu, c(1.0, 0.0));
        assert_eq!(d[0].scale, c(2.0, 0.0));
        assert!(CoefficientTerm::power(3, c(0.0, 0.0)).d_y().is_empty());
    }

    #[test]
    fn merge_cancels() {
        let a = CoefficientTerm::power(1, c(1.0, 0.0));
        let b = a.clone().scaled(c(-1.0, 0.0));
        let k = a.clone().shifted(c(1.0, 0.0));
        let merged = merge_terms(vec![(a, 0u8), (k.clone(), 0u8), (b, 0u8)]);
        assert_eq!(merged, vec![(k, 0u8)]);
    }

    #[test]
    fn weighted_t_factor_avoids_underflow() {
        let t = CoefficientTerm::power(1, c(3.0, 0.0));
        // y^3 · y^{-3} at y = e^{-400}
        assert!((t.t_factor(-400.0, -3.0) - 1.0).norm() < 1e-12);
    }
}
