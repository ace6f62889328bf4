//! The radial eigen-equation on the ball model of `H^{N+1}`:
//!
//! `φ'' + (N-2k) coth r · φ' - λ/sinh²r · φ + Λφ = 0`,
//!
//! with `λ` a sphere eigenvalue and `Λ = x + iy` the spectral parameter.

pub mod growth;
pub mod integrate;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use growth::{growth_exponent, GrowthData};
pub use integrate::{global_defect, integrate, IntegrateOptions, RadialProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("degree k={k} out of range for N={n}")]
    DegreeOutOfRange { n: u32, k: u32 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step size underflow at r={r}: tolerance {tol} unreachable")]
    StepFailure { r: f64, tol: f64 },
    #[error("fit window [{lo}, {hi}] lies outside the profile")]
    WindowOutsideProfile { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SphereMode {
    Closed,
    Coclosed,
}

/// Eigenvalues of the Hodge Laplacian on `k`-forms of the unit `N`-sphere:
/// closed `(s+k)(s+N-k+1)`, co-closed `(N-k+s)(s+k+1)`.
pub fn sphere_eigenvalue(n: u32, k: u32, s: u32, mode: SphereMode) -> Result<f64, RadialError> {
    if k > n {
        return Err(RadialError::DegreeOutOfRange { n, k });
    }
    let (n, k, s) = (f64::from(n), f64::from(k), f64::from(s));
    Ok(match mode {
        SphereMode::Closed => (s + k) * (s + n - k + 1.0),
        SphereMode::Coclosed => (n - k + s) * (s + k + 1.0),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialProblem {
    #[serde(rename = "N")]
    pub n: u32,
    pub k: u32,
    /// Sphere eigenvalue `λ`.
    pub lambda: f64,
    /// Spectral parameter `Λ`.
    pub spectral: Complex64,
}

impl RadialProblem {
    pub fn new(n: u32, k: u32, lambda: f64, spectral: Complex64) -> Result<Self, RadialError> {
        if k > n {
            return Err(RadialError::DegreeOutOfRange { n, k });
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(RadialError::InvalidParameter(format!("λ={lambda} must be finite and >= 0")));
        }
        if !(spectral.re.is_finite() && spectral.im.is_finite()) {
            return Err(RadialError::InvalidParameter("Λ must be finite".into()));
        }
        Ok(Self {
            n,
            k,
            lambda,
            spectral,
        })
    }

    /// `m = (N - 2k)/2`.
    pub fn m(&self) -> f64 {
        (f64::from(self.n) - 2.0 * f64::from(self.k)) / 2.0
    }

    /// Coefficient `N - 2k` of `coth r · φ'`.
    pub fn drift(&self) -> f64 {
        f64::from(self.n) - 2.0 * f64::from(self.k)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrobeniusData {
    pub alpha: Complex64,
    /// `c_0, c_1, ...` with `φ = r^α Σ c_j r^j`, `c_0 = 1`.
    pub series: Vec<Complex64>,
}

/// Larger root of `α(α-1) + (N-2k)α - λ = 0`.
pub fn frobenius_index(n: u32, k: u32, lambda: f64) -> Result<f64, RadialError> {
    if k > n {
        return Err(RadialError::DegreeOutOfRange { n, k });
    }
    if !(lambda >= 0.0) {
        return Err(RadialError::InvalidParameter(format!("λ={lambda} must be >= 0")));
    }
    let c = f64::from(n) - 2.0 * f64::from(k) - 1.0;
    Ok((-c + (c * c + 4.0 * lambda).sqrt()) / 2.0)
}

pub fn indicial_residual(n: u32, k: u32, lambda: f64, alpha: f64) -> f64 {
    alpha * (alpha - 1.0) + (f64::from(n) - 2.0 * f64::from(k)) * alpha - lambda
}

/// Taylor coefficients of `r coth r` and `r²/sinh²r` up to `r^order`.
pub fn singular_coefficient_series(order: usize) -> (Vec<f64>, Vec<f64>) {
    // r cosh r / sinh r as a quotient of power series in r
    let mut num = vec![0.0; order + 1];
    let mut den = vec![0.0; order + 1];
    let mut fact = 1.0;
    for i in 0..=order + 1 {
        if i > 0 {
            fact *= i as f64;
        }
        if i % 2 == 0 && i <= order {
            num[i] = 1.0 / fact;
        }
        if i % 2 == 1 && i - 1 <= order {
            den[i - 1] = 1.0 / fact;
        }
    }
    let mut p = vec![0.0; order + 1];
    for j in 0..=order {
        let acc: f64 = (1..=j).map(|i| den[i] * p[j - i]).sum();
        p[j] = (num[j] - acc) / den[0];
    }
    // r²/sinh²r = -r² d/dr coth r = Σ (1 - j) p_j r^j
    let q = p.iter().enumerate().map(|(j, &pj)| (1.0 - j as f64) * pj).collect();
    (p, q)
}

/// Frobenius coefficients of the recessive-at-0 solution, `c_0 = 1`.
pub fn frobenius_series(problem: &RadialProblem, terms: usize) -> FrobeniusData {
    let alpha = frobenius_index(problem.n, problem.k, problem.lambda).expect("validated problem");
    let (p, q) = singular_coefficient_series(terms);
    let drift = problem.drift();
    let indicial = |s: f64| s * (s - 1.0) + drift * s - problem.lambda;
    let mut c = vec![Complex64::new(0.0, 0.0); terms + 1];
    c[0] = Complex64::new(1.0, 0.0);
    for n in 1..=terms {
        let s = n as f64 + alpha;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 1..=n {
            let coeff = drift * p[j] * (s - j as f64) - problem.lambda * q[j];
            acc += coeff * c[n - j];
        }
        if n >= 2 {
            acc += problem.spectral * c[n - 2];
        }
        c[n] = -acc / indicial(s);
    }
    FrobeniusData {
        alpha: Complex64::new(alpha, 0.0),
        series: c,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaO {
    pub a: f64,
    pub b: f64,
}

/// `λ_o = √(m² - x - iy) = a + ib` with `a >= 0`.
///
/// `a² = ½[m² - x + √((m² - x)² + y²)]`, `b = -y/(2a)`; on the ray `y = 0`,
/// `x > m²` the root is `i√(x - m²)`.
pub fn lambda_o(spectral: Complex64, m: f64) -> LambdaO {
    let u = m * m - spectral.re;
    let y = spectral.im;
    let r = u.hypot(y);
    if u >= 0.0 {
        let a = ((u + r) / 2.0).sqrt();
        let b = if a > 0.0 { -y / (2.0 * a) } else { 0.0 };
        LambdaO { a, b }
    } else {
        // avoid the cancellation in u + r when u < 0
        let bb = ((r - u) / 2.0).sqrt();
        let a = y.abs() / (2.0 * bb);
        let b = if y == 0.0 { bb } else { -y.signum() * bb };
        LambdaO { a, b }
    }
}

/// Threshold `N(1/2 - 1/p)` on `a`.
pub fn integrability_bound(n: u32, p: f64) -> f64 {
    f64::from(n) * (0.5 - 1.0 / p)
}

/// Radial eigenforms with parameter `Λ` lie in `L^p` (for `p > 2`) when `a < N(1/2 - 1/p)`.
///
/// Agrees with interior membership in `Q_{p,k}` for `k <= (N+1)/2`.
pub fn is_lp_integrable(spectral: Complex64, p: f64, n: u32, k: u32) -> Result<bool, RadialError> {
    is_lp_integrable_scaled(spectral, p, n, k, 1.0)
}

/// As [`is_lp_integrable`] with the threshold multiplied by `factor`.
pub fn is_lp_integrable_scaled(
    spectral: Complex64,
    p: f64,
    n: u32,
    k: u32,
    factor: f64,
) -> Result<bool, RadialError> {
    if !(p > 2.0) {
        return Err(RadialError::InvalidParameter(format!("criterion needs p > 2, got {p}")));
    }
    if k > n {
        return Err(RadialError::DegreeOutOfRange { n, k });
    }
    let m = (f64::from(n) - 2.0 * f64::from(k)) / 2.0;
    Ok(lambda_o(spectral, m).a < factor * integrability_bound(n, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regions::{contains_with_margin, Membership, RegionSpec, SpectralPoint};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn sphere_eigenvalue_examples() {
        assert_eq!(sphere_eigenvalue(3, 1, 0, SphereMode::Coclosed), Ok(4.0));
        assert_eq!(sphere_eigenvalue(3, 1, 0, SphereMode::Closed), Ok(3.0));
        assert_eq!(sphere_eigenvalue(3, 0, 1, SphereMode::Closed), Ok(5.0));
        assert_eq!(sphere_eigenvalue(5, 2, 1, SphereMode::Coclosed), Ok(16.0));
        assert!(sphere_eigenvalue(3, 4, 0, SphereMode::Closed).is_err());
        for n in 2..8 {
            for k in 1..n {
                for s in 0..5 {
                    assert!(sphere_eigenvalue(n, k, s, SphereMode::Coclosed).unwrap() > 0.0);
                }
            }
        }
    }

    #[test]
    fn frobenius_index_examples() {
        assert_eq!(frobenius_index(3, 1, 4.0), Ok(2.0));
        assert_eq!(frobenius_index(3, 0, 0.0), Ok(0.0));
        assert_eq!(frobenius_index(5, 2, 16.0), Ok(4.0));
        for n in 1..9u32 {
            for k in 0..=n {
                for s in 0..6 {
                    let lam = sphere_eigenvalue(n, k, s, SphereMode::Coclosed).unwrap();
                    let a = frobenius_index(n, k, lam).unwrap();
                    assert!((a - f64::from(k + 1 + s)).abs() < 1e-12);
                    assert!(indicial_residual(n, k, lam, a).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn singular_series_values() {
        let (p, q) = singular_coefficient_series(24);
        let expect_p = [1.0, 0.0, 1.0 / 3.0, 0.0, -1.0 / 45.0, 0.0, 2.0 / 945.0];
        for (a, b) in p.iter().zip(expect_p) {
            assert!((a - b).abs() < 1e-15);
        }
        let r: f64 = 0.3;
        let qs: f64 = q.iter().enumerate().map(|(j, v)| v * r.powi(j as i32)).sum();
        assert!((qs - (r / r.sinh()).powi(2)).abs() < 1e-9);
    }

    #[test]
    fn lambda_o_examples() {
        let m = 0.5;
        assert_eq!(lambda_o(c(0.25, 0.0), m).a, 0.0);
        let l = lambda_o(c(0.25 - 1.0, 0.0), m);
        assert!((l.a - 1.0).abs() < 1e-15 && l.b == 0.0);
        let t = 1e-6;
        let l = lambda_o(c(0.25, t), m);
        assert!((l.a - (t / 2.0).sqrt()).abs() < 1e-15);
        let l = lambda_o(c(-1.0, 0.0), m);
        assert!((l.a - 1.25f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lambda_o_squares_back() {
        for (x, y) in [(3.0, 1.0), (-2.0, 0.5), (0.1, -4.0), (50.0, 1e-3), (2.0, 0.0)] {
            let m = 1.5;
            let l = lambda_o(c(x, y), m);
            let z = c(l.a, l.b);
            assert!((z * z - c(m * m - x, -y)).norm() < 1e-12 * (1.0 + x.abs()));
            let u = m * m - x;
            let closed = 0.5 * (u + (u * u + y * y).sqrt());
            assert!((l.a * l.a - closed).abs() <= 1e-12 * (1.0 + closed.abs()));
        }
    }

    #[test]
    fn integrability_examples() {
        assert_eq!(is_lp_integrable(c(0.25, 0.0), 4.0, 3, 1), Ok(true));
        assert_eq!(is_lp_integrable(c(0.0, 0.0), 4.0, 3, 1), Ok(true));
        assert_eq!(is_lp_integrable(c(0.0, 0.0), 3.0, 3, 1), Ok(false));
        assert!(is_lp_integrable(c(0.0, 0.0), 2.0, 3, 1).is_err());
    }

    #[test]
    fn integrability_matches_region_interior_on_a_grid() {
        for (n, k) in [(3u32, 0u32), (3, 1), (4, 2), (5, 1)] {
            for p in [2.5, 3.0, 4.0] {
                let spec = RegionSpec::new(n, k, p).unwrap();
                for i in -20..=40 {
                    for j in -20..=20 {
                        let lam = SpectralPoint::new(0.25 * f64::from(i), 0.3 * f64::from(j)).unwrap();
                        let inside = contains_with_margin(&spec, lam, Membership::Interior, 1e-3);
                        let outside = !contains_with_margin(&spec, lam, Membership::Closed, 1e-3);
                        if !(inside || outside) {
                            continue;
                        }
                        let got = is_lp_integrable(lam.as_complex(), p, n, k).unwrap();
                        assert_eq!(got, inside, "N={n} k={k} p={p} λ={lam:?}");
                    }
                }
            }
        }
    }
}
