//! One-variable lemmas used by the functional calculus: Taylor's formula with
//! integral remainder, Fourier decay of `1/(w² + c²)` and symbol estimates for
//! `g(w) = 1/(w - z²)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::quad::{integrate, wynn_epsilon};
use crate::report::CheckReport;

/// A scalar function with derivatives: `eval(j, s) = g^{(j)}(s)`.
pub trait Derivatives {
    fn eval(&self, j: u32, s: f64) -> Complex64;
}

/// `g(s) = 1/(s - a)` for complex `a`.
#[derive(Debug, Clone, Copy)]
pub struct Resolvent(pub Complex64);

impl Derivatives for Resolvent {
    fn eval(&self, j: u32, s: f64) -> Complex64 {
        let fact: f64 = (1..=j).map(f64::from).product();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sign * fact / (Complex64::new(s, 0.0) - self.0).powu(j + 1)
    }
}

/// Real polynomial `Σ c_i s^i`.
#[derive(Debug, Clone)]
pub struct Polynomial(pub Vec<f64>);

impl Derivatives for Polynomial {
    fn eval(&self, j: u32, s: f64) -> Complex64 {
        let v: f64 = self
            .0
            .iter()
            .enumerate()
            .filter(|(i, _)| *i as u32 >= j)
            .map(|(i, &c)| {
                let i = i as u32;
                let falling: f64 = ((i - j + 1)..=i).map(f64::from).product();
                c * falling * s.powi((i - j) as i32)
            })
            .sum();
        Complex64::new(v, 0.0)
    }
}

fn complex_integral(f: impl Fn(f64) -> Complex64, a: f64, b: f64) -> Result<Complex64, KernelError> {
    let re = integrate(|t| f(t).re, a, b, 1e-15, 1e-14).map_err(|e| KernelError::Quadrature(e.to_string()))?;
    let im = integrate(|t| f(t).im, a, b, 1e-15, 1e-14).map_err(|e| KernelError::Quadrature(e.to_string()))?;
    Ok(Complex64::new(re.value, im.value))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaylorResult {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub remainder: Complex64,
    pub residual: f64,
}

/// `g(x) = Σ_{j<N} (-1)^j α^j/j! g^{(j)}(x+α) + (-1)^N b_N` with
/// `b_N = α^N/(N-1)! ∫₀¹ g^{(N)}(x+tα) t^{N-1} dt`.
pub fn taylor_remainder(g: &impl Derivatives, alpha: f64, n_terms: u32, x: f64) -> Result<TaylorResult, KernelError> {
    if !(alpha > 0.0) || n_terms == 0 {
        return Err(KernelError::InvalidParameter(format!("need α > 0, N >= 1: α={alpha} N={n_terms}")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut coef = 1.0;
    for j in 0..n_terms {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        sum += sign * coef * g.eval(j, x + alpha);
        coef *= alpha / f64::from(j + 1);
    }
    let fact: f64 = (1..n_terms).map(f64::from).product();
    let integral = complex_integral(|t| g.eval(n_terms, x + t * alpha) * t.powi(n_terms as i32 - 1), 0.0, 1.0)?;
    let b = alpha.powi(n_terms as i32) / fact * integral;
    let sign = if n_terms % 2 == 0 { 1.0 } else { -1.0 };
    let lhs = g.eval(0, x);
    let rhs = sum + sign * b;
    Ok(TaylorResult { lhs, rhs, remainder: b, residual: (lhs - rhs).norm() })
}

/// `σ̂(ξ) = ∫ e^{-iξw} /(w² + c²) dw`, by half-period panels and Wynn acceleration.
pub fn sigma_hat(c: f64, xi: f64) -> Result<f64, KernelError> {
    if !(c > 0.0) {
        return Err(KernelError::InvalidParameter(format!("c={c} must be positive")));
    }
    let xi = xi.abs();
    let q = |a: f64, b: f64, f: &dyn Fn(f64) -> f64| {
        integrate(f, a, b, 1e-15, 1e-13).map(|i| i.value).map_err(|e| KernelError::Quadrature(e.to_string()))
    };
    if xi == 0.0 {
        // [0,1] directly and [1,∞) through w = 1/u
        let head = q(0.0, 1.0, &|w| 1.0 / (w * w + c * c))?;
        let tail = q(0.0, 1.0, &|u| 1.0 / (1.0 + c * c * u * u))?;
        return Ok(2.0 * (head + tail));
    }
    let panel = PI / xi;
    let f = |w: f64| (xi * w).cos() / (w * w + c * c);
    let mut partial = Vec::with_capacity(60);
    let mut acc = 0.0;
    for k in 0..60 {
        acc += q(k as f64 * panel, (k + 1) as f64 * panel, &f)?;
        partial.push(acc);
    }
    Ok(2.0 * wynn_epsilon(&partial))
}

/// Quadrature against the closed form `(π/c) e^{-c|ξ|}` on `ξ ∈ [0, 10]`, and the
/// decay bound `|σ̂(ξ)| <= (π/c) e^{-(γ₀/2 + ε₀/2) ξ}`.
pub fn fourier_decay_check(c: f64, gamma0: f64, eps0: f64) -> Result<Vec<CheckReport>, KernelError> {
    if !(c > gamma0 / 2.0 + eps0) {
        return Err(KernelError::InvalidParameter(format!("need c > γ₀/2 + ε₀: c={c}")));
    }
    let start = std::time::Instant::now();
    let mut worst_err: f64 = 0.0;
    let mut worst_bound: f64 = 0.0;
    for i in 0..=40 {
        let xi = 0.25 * f64::from(i);
        let v = sigma_hat(c, xi)?;
        let exact = PI / c * (-c * xi).exp();
        worst_err = worst_err.max((v - exact).abs());
        worst_bound = worst_bound.max(v.abs() / (PI / c * (-(gamma0 / 2.0 + eps0 / 2.0) * xi).exp()));
    }
    Ok(vec![
        CheckReport::close(
            &format!("Fourier transform of 1/(w^2+c^2), c={c}: max error on [0,10]"),
            "Fourier decay of the holomorphic symbol",
            worst_err,
            0.0,
            1e-6,
        )
        .timed(start),
        CheckReport::at_most(
            &format!("Fourier decay bound c={c} gamma0={gamma0} eps0={eps0}"),
            "Fourier decay of the holomorphic symbol",
            worst_bound,
            1.0 + 1e-6,
        ),
    ])
}

/// `j`-th derivative of `g(x) = 1/(x - z²)` at complex `x` by the Cauchy integral
/// over a circle of radius `ρ`, trapezoid rule with `m` nodes.
pub fn cauchy_derivative(z: Complex64, j: u32, x: Complex64, rho: f64, m: usize) -> Complex64 {
    let z2 = z * z;
    let fact: f64 = (1..=j).map(f64::from).product();
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let e = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64);
        let zeta = x + rho * e;
        acc += 1.0 / (zeta - z2) / (rho * e).powu(j);
    }
    acc * fact / m as f64
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolRow {
    pub j: u32,
    /// `sup |g^{(j)}(w²)| (1+|w|)^j` over the strip grid.
    pub sup: f64,
    /// The same supremum restricted to `|w| >= 10`, with `|w|^j` in place of `(1+|w|)^j`.
    pub far_sup: f64,
}

/// Strip grid `w = u + iv`, `|u| <= 50`, `|v| <= |Im z|/2`.
fn strip_grid(z: Complex64) -> Vec<Complex64> {
    let vmax = 0.5 * z.im.abs();
    let mut pts = Vec::new();
    for a in -500..=500 {
        for b in -4..=4 {
            pts.push(Complex64::new(0.1 * f64::from(a), vmax * f64::from(b) / 4.0));
        }
    }
    pts
}

/// Grid suprema for `j <= j_max`, with derivatives from the Cauchy integral.
pub fn symbol_sups(z: Complex64, j_max: u32) -> Result<Vec<SymbolRow>, KernelError> {
    if z.im == 0.0 {
        return Err(KernelError::InvalidParameter("Im z must be nonzero".into()));
    }
    let z2 = z * z;
    let grid = strip_grid(z);
    Ok((0..=j_max)
        .map(|j| {
            let mut sup: f64 = 0.0;
            let mut far: f64 = 0.0;
            for &w in &grid {
                let x = w * w;
                let rho = 0.5 * (x - z2).norm();
                let d = cauchy_derivative(z, j, x, rho, 64).norm();
                sup = sup.max(d * (1.0 + w.norm()).powi(j as i32));
                if w.norm() >= 10.0 {
                    far = far.max(d * w.norm().powi(j as i32));
                }
            }
            SymbolRow { j, sup, far_sup: far }
        })
        .collect())
}

pub fn symbol_decay_check(z: Complex64, j_max: u32) -> Result<Vec<CheckReport>, KernelError> {
    let start = std::time::Instant::now();
    let rows = symbol_sups(z, j_max)?;
    let mut out: Vec<CheckReport> = rows
        .iter()
        .map(|r| {
            CheckReport::holds(
                &format!("symbol estimate j={}: grid sup finite", r.j),
                "derivative bounds |g^(j)(w^2)| <= C_j/(1+|w|)^j",
                r.sup.is_finite() && r.far_sup.is_finite(),
            )
            .with_note(format!("C'_j = {:.6e}, far-field sup = {:.6e}", r.sup, r.far_sup))
        })
        .collect();
    // closed form g'(x) = -1/(x - z²)² on the same grid
    let z2 = z * z;
    let closed = strip_grid(z)
        .iter()
        .map(|&w| (1.0 / (w * w - z2).powu(2)).norm() * (1.0 + w.norm()))
        .fold(0.0, f64::max);
    if let Some(r1) = rows.iter().find(|r| r.j == 1) {
        out.push(CheckReport::close(
            "symbol estimate j=1: Cauchy-integral sup vs closed form",
            "derivative bounds |g^(j)(w^2)| <= C_j/(1+|w|)^j",
            r1.sup / closed,
            1.0,
            1e-2,
        ));
    }
    if let Some(first) = out.first_mut() {
        *first = first.clone().timed(start);
    }
    Ok(out)
}

/// Taylor identity checks for the three reference functions and `N ∈ {1, 2, 4}`.
pub fn taylor_checks() -> Result<Vec<CheckReport>, KernelError> {
    let z = Complex64::new(0.5, 1.0);
    let cases: Vec<(&str, Box<dyn Fn(u32) -> Result<TaylorResult, KernelError>>)> = vec![
        ("1/(s - z^2), z = 0.5+i", Box::new(move |n| taylor_remainder(&Resolvent(z * z), 1.0, n, 1.0))),
        ("1/(s + 1)", Box::new(|n| taylor_remainder(&Resolvent(Complex64::new(-1.0, 0.0)), 1.0, n, 1.0))),
        (
            "1 - 2s + s^3/2",
            Box::new(|n| taylor_remainder(&Polynomial(vec![1.0, -2.0, 0.0, 0.5]), 0.7, n, -0.3)),
        ),
    ];
    let mut out = Vec::new();
    for (label, run) in &cases {
        for n in [1u32, 2, 4] {
            let r = run(n)?;
            out.push(CheckReport::at_most(
                &format!("Taylor remainder identity g = {label}, N = {n}"),
                "Taylor formula with integral remainder",
                r.residual,
                1e-8,
            ));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn taylor_first_order_is_difference() {
        let g = Resolvent(Complex64::new(-1.0, 0.0));
        let r = taylor_remainder(&g, 1.0, 1, 1.0).unwrap();
        // b₁ = g(x+α) - g(x)
        assert!((r.remainder - (g.eval(0, 2.0) - g.eval(0, 1.0))).norm() < 1e-14);
        assert!(r.residual < 1e-14);
    }

    #[test]
    fn taylor_reference_case() {
        let r = taylor_remainder(&Resolvent(Complex64::new(-1.0, 0.0)), 1.0, 4, 1.0).unwrap();
        assert!(r.residual <= 1e-10, "{r:?}");
    }

    #[test]
    fn taylor_exact_for_low_degree_polynomials() {
        // degree 3 < N = 4: the remainder vanishes identically
        let p = Polynomial(vec![1.0, -2.0, 0.0, 0.5]);
        let r = taylor_remainder(&p, 0.7, 4, -0.3).unwrap();
        assert_eq!(r.remainder.norm(), 0.0);
        assert!(r.residual < 1e-14);
        assert_eq!(p.eval(2, 2.0).re, 6.0);
        assert!(taylor_checks().unwrap().iter().all(|c| c.pass));
    }

    #[test]
    fn fourier_values() {
        let v = sigma_hat(2.0, 1.0).unwrap();
        assert!((v - PI / 2.0 * (-2.0f64).exp()).abs() < 1e-6, "{v}");
        assert!((sigma_hat(2.0, 0.0).unwrap() - PI / 2.0).abs() < 1e-12);
        assert!(fourier_decay_check(2.0, 1.0, 0.5).unwrap().iter().all(|c| c.pass));
        assert!(fourier_decay_check(1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn cauchy_matches_closed_form() {
        let z = Complex64::new(0.3, 0.8);
        let x = Complex64::new(2.0, 0.1);
        for j in 0..=4u32 {
            let fact: f64 = (1..=j).map(f64::from).product();
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let want = sign * fact / (x - z * z).powu(j + 1);
            let got = cauchy_derivative(z, j, x, 0.5 * (x - z * z).norm(), 64);
            assert!((got - want).norm() < 1e-10 * want.norm(), "j={j}");
        }
    }

    #[test]
    fn symbol_estimates() {
        let reps = symbol_decay_check(Complex64::new(0.5, 1.0), 4).unwrap();
        assert!(reps.iter().all(|c| c.pass), "{reps:?}");
        let rows = symbol_sups(Complex64::new(0.5, 1.0), 2).unwrap();
        // far field decays like |w|^{-j-2}
        assert!(rows.iter().all(|r| r.far_sup < 1e-2));
        assert!(symbol_sups(Complex64::new(1.0, 0.0), 1).is_err());
    }
}
