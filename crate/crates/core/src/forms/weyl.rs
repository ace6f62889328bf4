//! Approximate eigenforms `ω_n = c_n(log y) b(x) y^{N/p-k+is} dx^J` for boundary points of `Q_{p,k}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::profile::Profile;
use crate::regions::{boundary_point, RegionSpec, SpectralPoint};

use super::basis::BasisForm;
use super::coefficient::CoefficientTerm;
use super::norm::{lp_norm, QuadratureGrid};
use super::template::TemplateForm;
use super::FormError;

/// `Δ(y^{N/p-k+is} dx^J)` has eigenvalue `boundary_point(spec, SIGN · s)`.
///
/// Checked by `eigenvalue_matches_boundary_parametrisation`; the parameter
/// carries over without a sign flip.
pub const BOUNDARY_PARAMETER_SIGN: f64 = 1.0;

/// Width of the smooth ramps of `c_n`.
pub const RAMP: f64 = 1.0;

/// Exponent `μ = N/p - k + is`.
pub fn weyl_exponent(spec: &RegionSpec, s: f64) -> Complex64 {
    let n = f64::from(spec.n);
    Complex64::new(n * spec.p.reciprocal() - f64::from(spec.k), s)
}

/// `λ = -μ(μ + 2k - N)`.
pub fn weyl_eigenvalue(spec: &RegionSpec, s: f64) -> Complex64 {
    let mu = weyl_exponent(spec, s);
    -mu * (mu + 2.0 * f64::from(spec.k) - f64::from(spec.n))
}

pub fn weyl_target(spec: &RegionSpec, s: f64) -> SpectralPoint {
    boundary_point(spec, BOUNDARY_PARAMETER_SIGN * s)
}

fn check(n: u32, spec: &RegionSpec) -> Result<(), FormError> {
    if n < 2 {
        return Err(FormError::InvalidParameter(format!("sequence index n={n} must be >= 2")));
    }
    if spec.p.value() > 2.0 {
        return Err(FormError::InvalidParameter("the construction needs p <= 2".into()));
    }
    if spec.k > spec.n {
        return Err(FormError::DegreeTooLarge { n: spec.n, k: spec.k });
    }
    Ok(())
}

/// Support of `c_n` in `log y`: `[-n^{3p}, log n]`.
pub fn weyl_log_support(n: u32, spec: &RegionSpec) -> (f64, f64) {
    let nf = f64::from(n);
    (-nf.powf(3.0 * spec.p.value()), nf.ln())
}

pub fn weyl_form(n: u32, spec: &RegionSpec, s: f64) -> Result<TemplateForm, FormError> {
    check(n, spec)?;
    let (lo, hi) = weyl_log_support(n, spec);
    let mut coef = CoefficientTerm::power(spec.n, weyl_exponent(spec, s)).with_c(Profile::plateau(lo, hi, RAMP));
    for i in 1..=spec.n {
        coef = coef.with_b(i, Profile::bump(0.0, 1.0));
    }
    let j: Vec<u32> = (1..=spec.k).collect();
    TemplateForm::single(spec.n, coef, BasisForm::dx(&j)?)
}

/// `Δω_n - λω_n`.
pub fn weyl_residual(n: u32, spec: &RegionSpec, s: f64) -> Result<TemplateForm, FormError> {
    let omega = weyl_form(n, spec, s)?;
    omega.laplacian().sub(&omega.scaled(weyl_eigenvalue(spec, s)))
}

pub fn weyl_grid(n: u32, spec: &RegionSpec, s: f64) -> Result<QuadratureGrid, FormError> {
    QuadratureGrid::covering(&weyl_form(n, spec, s)?, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylQuotient {
    pub n: u32,
    pub quotient: f64,
    pub form_norm: f64,
    pub residual_norm: f64,
    pub warnings: Vec<String>,
}

/// `‖Δω_n - λω_n‖_p / ‖ω_n‖_p`.
pub fn weyl_quotient(
    n: u32,
    spec: &RegionSpec,
    s: f64,
    grid: &QuadratureGrid,
) -> Result<WeylQuotient, FormError> {
    let omega = weyl_form(n, spec, s)?;
    let residual = weyl_residual(n, spec, s)?;
    let p = spec.p.value();
    let a = lp_norm(&omega, p, grid)?;
    let b = lp_norm(&residual, p, grid)?;
    let mut warnings = a.warnings;
    warnings.extend(b.warnings);
    warnings.sort();
    warnings.dedup();
    Ok(WeylQuotient {
        n,
        quotient: b.value / a.value,
        form_norm: a.value,
        residual_norm: b.value,
        warnings,
    })
}

/// Least-squares slope of `log q` against `log n`.
pub fn decay_exponent(points: &[(f64, f64)]) -> f64 {
    let logs: Vec<(f64, f64)> = points.iter().map(|(n, q)| (n.ln(), q.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
