//! Harmonic middle-degree forms on `H^{N+1}` (`N` odd) and their L^p tails.
//!
//! The radial profile of the family is
//! `w_k(r) = tanh(r/2)^{√λ_k - 1/2} / cosh(r/2)` and the pointwise norm is
//! `sinh(r)^{-N/2} w_k(r)` up to an r-independent spherical factor, so
//! `‖ω‖_p^p` over `r >= 1` is a constant times
//! `I(R) = ∫₁^R w_k(r)^p sinh(r)^{N - Np/2} dr` as `R → ∞`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hyp::{log_cosh, log_sinh};
use crate::quad::integrate_pieces;
use crate::radial::{sphere_eigenvalue, SphereMode};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MiddleError {
    #[error("N={0} must be odd")]
    EvenDimension(u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature failed: {0}")]
    Quadrature(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiddleFamily {
    #[serde(rename = "N")]
    pub n: u32,
    pub lambda_k: f64,
    pub p: f64,
}

impl MiddleFamily {
    /// Family built on the `s`-th co-closed `(N-1)/2`-eigenvalue of the sphere.
    pub fn from_sphere(n: u32, s: u32, p: f64) -> Result<Self, MiddleError> {
        if n % 2 == 0 {
            return Err(MiddleError::EvenDimension(n));
        }
        let lambda = sphere_eigenvalue(n, (n - 1) / 2, s, SphereMode::Coclosed)
            .map_err(|e| MiddleError::InvalidParameter(e.to_string()))?;
        Self::with_lambda(n, lambda, p)
    }

    pub fn with_lambda(n: u32, lambda_k: f64, p: f64) -> Result<Self, MiddleError> {
        if n % 2 == 0 {
            return Err(MiddleError::EvenDimension(n));
        }
        if !(lambda_k > 0.0 && lambda_k.is_finite()) {
            return Err(MiddleError::InvalidParameter(format!("λ_k={lambda_k} must be positive")));
        }
        if !(p >= 1.0 && p.is_finite()) {
            return Err(MiddleError::InvalidParameter(format!("p={p} must be finite and >= 1")));
        }
        Ok(Self { n, lambda_k, p })
    }

    /// `log` of the tail integrand `w_k^p sinh^{N - Np/2}` at `r`.
    pub fn log_integrand(&self, r: f64) -> f64 {
        let n = f64::from(self.n);
        self.p * log_wk(r, self.lambda_k) + (n - n * self.p / 2.0) * log_sinh(r)
    }
}

pub fn log_wk(r: f64, lambda_k: f64) -> f64 {
    (lambda_k.sqrt() - 0.5) * (r / 2.0).tanh().ln() - log_cosh(r / 2.0)
}

/// `w_k(r) = tanh(r/2)^{√λ_k - 1/2} / cosh(r/2)`.
pub fn wk(r: f64, lambda_k: f64) -> f64 {
    if r == 0.0 {
        return if lambda_k > 0.25 { 0.0 } else { f64::NAN };
    }
    log_wk(r, lambda_k).exp()
}

/// Asymptotic exponent `e(p) = -p/2 + N(1 - p/2)` of the tail integrand.
pub fn tail_exponent(n: u32, p: f64) -> f64 {
    -p / 2.0 + f64::from(n) * (1.0 - p / 2.0)
}

/// `2N/(N+1)`.
pub fn threshold(n: u32) -> Result<f64, MiddleError> {
    if n % 2 == 0 {
        return Err(MiddleError::EvenDimension(n));
    }
    let n = f64::from(n);
    Ok(2.0 * n / (n + 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailIntegral {
    #[serde(rename = "R")]
    pub r: f64,
    pub value: f64,
    /// Growth rate of the increments of `I` near `R`.
    pub exponent_estimate: f64,
}

fn integral_between(family: &MiddleFamily, a: f64, b: f64) -> Result<f64, MiddleError> {
    let mut breaks = vec![a];
    let mut x = a;
    while x * 2.0 < b {
        x *= 2.0;
        breaks.push(x);
    }
    breaks.push(b);
    integrate_pieces(|r| family.log_integrand(r).exp(), &breaks, 0.0, 1e-11)
        .map(|i| i.value)
        .map_err(|e| MiddleError::Quadrature(e.to_string()))
}

/// `I(R) = ∫₁^R w_k^p sinh^{N - Np/2} dr` and the growth rate of its increments
/// over the last two quarters of `[1, R]`.
pub fn lp_tail(family: &MiddleFamily, r: f64) -> Result<TailIntegral, MiddleError> {
    if !(r >= 2.0 && r.is_finite()) {
        return Err(MiddleError::InvalidParameter(format!("R={r} must be >= 2")));
    }
    let value = integral_between(family, 1.0, r)?;
    let delta = (r - 1.0) / 4.0;
    let late = integral_between(family, r - delta, r)?;
    let early = integral_between(family, r - 2.0 * delta, r - delta)?;
    Ok(TailIntegral {
        r,
        value,
        exponent_estimate: (late / early).ln() / delta,
    })
}

/// Central-difference derivative of the log integrand at `r`.
pub fn measured_log_slope(family: &MiddleFamily, r: f64) -> f64 {
    let h = 1e-3;
    (family.log_integrand(r + h) - family.log_integrand(r - h)) / (2.0 * h)
}

/// Bisection on `p ∈ [lo, hi]` for the sign change of the measured tail exponent at radius `r`.
pub fn measured_threshold(n: u32, lambda_k: f64, r: f64, lo: f64, hi: f64) -> Result<f64, MiddleError> {
    let rate = |p: f64| -> Result<f64, MiddleError> {
        Ok(lp_tail(&MiddleFamily::with_lambda(n, lambda_k, p)?, r)?.exponent_estimate)
    };
    let (mut a, mut b) = (lo, hi);
    let (ra, rb) = (rate(a)?, rate(b)?);
    if !(ra > 0.0 && rb < 0.0) {
        return Err(MiddleError::InvalidParameter(format!(
            "no sign change of the tail exponent on [{lo}, {hi}]: {ra}, {rb}"
        )));
    }
    while b - a > 1e-6 {
        let mid = 0.5 * (a + b);
        if rate(mid)? > 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// `J(R) = ∫₁^R tanh(r/2)^{√λ} / (1 + r) dr`.
pub fn pairing_divergence(lambda: f64, r: f64) -> Result<f64, MiddleError> {
    if !(lambda > 0.0) || !(r >= 2.0) {
        return Err(MiddleError::InvalidParameter(format!("need λ > 0, R >= 2: λ={lambda} R={r}")));
    }
    let root = lambda.sqrt();
    let mut breaks = vec![1.0];
    while breaks.last().unwrap() * 2.0 < r {
        let next = breaks.last().unwrap() * 2.0;
        breaks.push(next);
    }
    breaks.push(r);
    integrate_pieces(|x| (x / 2.0).tanh().powf(root) / (1.0 + x), &breaks, 0.0, 1e-12)
        .map(|i| i.value)
        .map_err(|e| MiddleError::Quadrature(e.to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub p: f64,
    pub exponent: f64,
    pub converges: bool,
}

/// Measured tail exponents over a list of `p`.
pub fn exponent_sweep(n: u32, lambda_k: f64, r: f64, ps: &[f64]) -> Result<Vec<ExponentRow>, MiddleError> {
    ps.iter()
        .map(|&p| {
            let t = lp_tail(&MiddleFamily::with_lambda(n, lambda_k, p)?, r)?;
            Ok(ExponentRow {
                p,
                exponent: t.exponent_estimate,
                converges: t.exponent_estimate < 0.0,
            })
        })
        .collect()
}
