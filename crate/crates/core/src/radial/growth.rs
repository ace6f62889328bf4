//! Exponential growth rate of radial solutions from a windowed-maximum envelope.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::integrate::{integrate, IntegrateOptions, RadialProfile};
use super::{lambda_o, RadialError, RadialProblem};

/// RMS residual of the envelope fit above which the window is reported as too oscillatory.
pub const FIT_RESIDUAL_LIMIT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeFit {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub chunks: usize,
}

/// Least-squares slope of `log|φ|` maxima over consecutive chunks of length `period` in `[lo, hi]`.
pub fn growth_exponent(
    profile: &RadialProfile,
    window: (f64, f64),
    period: f64,
) -> Result<EnvelopeFit, RadialError> {
    let (lo, hi) = window;
    let (first, last) = match (profile.r.first(), profile.r.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => return Err(RadialError::WindowOutsideProfile { lo, hi }),
    };
    if !(lo >= first && hi <= last + 1e-9 && hi > lo) {
        return Err(RadialError::WindowOutsideProfile { lo, hi });
    }
    let chunks = ((hi - lo) / period).floor().max(1.0) as usize;
    let width = (hi - lo) / chunks as f64;
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(chunks);
    for c in 0..chunks {
        let a = lo + c as f64 * width;
        let b = a + width;
        let best = (0..profile.len())
            .filter(|&i| profile.r[i] >= a && profile.r[i] <= b)
            .map(|i| (profile.r[i], profile.log_abs_phi(i)))
            .max_by(|x, y| x.1.total_cmp(&y.1));
        if let Some(p) = best {
            pts.push(p);
        }
    }
    if pts.len() < 2 {
        return Err(RadialError::WindowOutsideProfile { lo, hi });
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(EnvelopeFit {
        slope,
        intercept,
        residual_rms: (rss / m).sqrt(),
        chunks: pts.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthData {
    pub a: f64,
    pub b: f64,
    /// `-m + a`
    pub predicted_slope: f64,
    pub fitted_slope: f64,
    pub fit_window: (f64, f64),
    pub fit_residual: f64,
    pub warning: Option<String>,
}

/// Envelope chunk length: one oscillation period `π/|b|`, at least ten output samples, at most 1.
pub fn envelope_period(b: f64, output_step: f64) -> f64 {
    let natural = if b.abs() > 1e-12 { PI / b.abs() } else { 1.0 };
    natural.min(1.0).max(10.0 * output_step)
}

/// Integrate and fit over `[R/2, R]`, comparing with `-m + a` from `λ_o`.
pub fn growth_data(problem: &RadialProblem, opts: &IntegrateOptions) -> Result<GrowthData, RadialError> {
    let prof = integrate(problem, opts)?;
    let l = lambda_o(problem.spectral, problem.m());
    let window = (opts.r_max / 2.0, opts.r_max);
    let fit = growth_exponent(&prof, window, envelope_period(l.b, opts.output_step))?;
    let warning = (fit.residual_rms > FIT_RESIDUAL_LIMIT).then(|| {
        format!(
            "envelope fit residual {:.3e} exceeds {FIT_RESIDUAL_LIMIT}; window too oscillatory",
            fit.residual_rms
        )
    });
    Ok(GrowthData {
        a: l.a,
        b: l.b,
        predicted_slope: -problem.m() + l.a,
        fitted_slope: fit.slope,
        fit_window: window,
        fit_residual: fit.residual_rms,
        warning,
    })
}
