//! Geodesic ball volumes of `H^{N+1}` and their exponential growth rate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::KernelError;
use crate::hyp::log_sinh;
use crate::quad::integrate_pieces;
use crate::report::CheckReport;

/// `ln ω_N`, the log area of the unit sphere `S^N`.
pub fn log_sphere_area(n: u32) -> f64 {
    let h = 0.5 * f64::from(n + 1);
    std::f64::consts::LN_2 + h * PI.ln() - ln_gamma(h)
}

/// `ln vol(B_R)` in `H^{N+1}`, i.e. `ln(ω_N ∫₀^R sinh^N ρ dρ)`, accumulated in log space.
pub fn log_ball_volume(n: u32, r: f64) -> Result<f64, KernelError> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(KernelError::InvalidParameter(format!("radius {r} must be positive")));
    }
    if n == 0 {
        return Ok(log_sphere_area(0) + r.ln());
    }
    let nf = f64::from(n);
    let top = log_sinh(r);
    let mut breaks: Vec<f64> = (0..=8).map(|i| r * f64::from(i) / 8.0).collect();
    // the integrand lives within ~40/N of R once R is large
    if r > 2.0 {
        breaks.push((r - 40.0 / nf).max(0.0));
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
    }
    let scaled = integrate_pieces(
        |rho| if rho <= 0.0 { 0.0 } else { (nf * (log_sinh(rho) - top)).exp() },
        &breaks,
        0.0,
        1e-13,
    )
    .map_err(|e| KernelError::Quadrature(e.to_string()))?;
    Ok(log_sphere_area(n) + nf * top + scaled.value.ln())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VolumeRow {
    #[serde(rename = "R")]
    pub r: f64,
    pub log_vol: f64,
    /// `ln vol(B_R) / R`
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VolumeProfile {
    #[serde(rename = "N")]
    pub n: u32,
    pub rows: Vec<VolumeRow>,
}

impl VolumeProfile {
    pub fn new(n: u32, radii: &[f64]) -> Result<Self, KernelError> {
        let rows = radii
            .iter()
            .map(|&r| {
                let log_vol = log_ball_volume(n, r)?;
                Ok(VolumeRow { r, log_vol, rate: log_vol / r })
            })
            .collect::<Result<Vec<_>, KernelError>>()?;
        if rows.windows(2).any(|w| !(w[1].r > w[0].r)) {
            return Err(KernelError::InvalidParameter("radii must be increasing".into()));
        }
        Ok(Self { n, rows })
    }

    /// Slope of `ln vol` between the last two radii.
    pub fn tail_slope(&self) -> f64 {
        let k = self.rows.len();
        let (a, b) = (self.rows[k - 2], self.rows[k - 1]);
        (b.log_vol - a.log_vol) / (b.r - a.r)
    }

    /// Smallest `C` with `vol(B_R) <= C e^{(γ+ε)R}` on the grid.
    pub fn fitted_constant(&self, gamma: f64, eps: f64) -> f64 {
        self.rows
            .iter()
            .map(|row| row.log_vol - (gamma + eps) * row.r)
            .fold(f64::NEG_INFINITY, f64::max)
            .exp()
    }
}

/// Rate and growth-bound checks at radius `r_check` (the last grid point is used for the tail slope).
pub fn volume_growth(n: u32, radii: &[f64], r_check: f64, eps: f64) -> Result<Vec<CheckReport>, KernelError> {
    if radii.len() < 2 {
        return Err(KernelError::InvalidParameter("need at least two radii".into()));
    }
    let prof = VolumeProfile::new(n, radii)?;
    let gamma = f64::from(n);
    let rate = log_ball_volume(n, r_check)? / r_check;
    let c = prof.fitted_constant(gamma, eps);
    // validate on a finer grid spanning the same range
    let (lo, hi) = (radii[0], *radii.last().expect("non-empty"));
    let fine: Vec<f64> = (0..=400).map(|i| lo + (hi - lo) * f64::from(i) / 400.0).collect();
    let worst = VolumeProfile::new(n, &fine)?
        .rows
        .iter()
        .map(|row| (row.log_vol - (gamma + eps) * row.r - c.ln()).exp())
        .fold(0.0, f64::max);
    Ok(vec![
        CheckReport::close(
            &format!("volume rate N={n} R={r_check}"),
            "volume growth rate of hyperbolic balls equals N",
            rate,
            gamma,
            1e-2,
        ),
        CheckReport::at_most(
            &format!("volume growth bound N={n} eps={eps}"),
            "vol(B_R) <= C(eps) exp((gamma+eps) R)",
            worst,
            1.0 + 1e-2,
        )
        .with_note(format!("fitted C(eps) = {c:.6e}")),
        CheckReport::at_most(
            &format!("volume entropy N={n}"),
            "limsup of ln vol(B_R)/R is at most the growth rate",
            prof.tail_slope(),
            gamma + 1e-2,
        ),
    ])
}
