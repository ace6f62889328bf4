//! Heat and resolvent kernels of the function Laplacian on `H³`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::volume::log_ball_volume;
use super::KernelError;
use crate::hyp::log_sinh;
use crate::quad::integrate_pieces;
use crate::report::CheckReport;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatEval {
    pub t: f64,
    pub r: f64,
    pub value: f64,
}

/// `ln h(t, r)` for `h = (4πt)^{-3/2} (r/sinh r) e^{-t - r²/4t}`.
pub fn log_h3_heat(t: f64, r: f64) -> f64 {
    let ratio = if r < 1e-4 { -r * r / 6.0 } else { r.ln() - log_sinh(r) };
    -1.5 * (4.0 * PI * t).ln() + ratio - t - r * r / (4.0 * t)
}

pub fn h3_heat(t: f64, r: f64) -> f64 {
    log_h3_heat(t, r).exp()
}

pub fn heat_eval(t: f64, r: f64) -> Result<HeatEval, KernelError> {
    if !(t > 0.0 && r >= 0.0) {
        return Err(KernelError::InvalidParameter(format!("need t > 0, r >= 0: t={t} r={r}")));
    }
    Ok(HeatEval { t, r, value: h3_heat(t, r) })
}

/// `4π sinh² r`, the area of the geodesic sphere of radius `r` in `H³`.
fn log_shell(r: f64) -> f64 {
    (4.0 * PI).ln() + 2.0 * log_sinh(r)
}

/// Breakpoints on `[0, r_max]` that resolve a kernel peaked near `centre` with width `width`.
fn radial_breaks(centre: f64, width: f64, r_max: f64) -> Vec<f64> {
    let mut b = vec![0.0, r_max];
    for k in -6..=6 {
        let x = centre + f64::from(k) * width;
        if x > 0.0 && x < r_max {
            b.push(x);
        }
    }
    b.sort_by(f64::total_cmp);
    b.dedup();
    b
}

/// `∫₀^∞ f(r) h(t, r) 4π sinh² r dr` for a radial weight `f` given in log form.
fn radial_integral(t: f64, log_f: impl Fn(f64) -> f64) -> Result<f64, KernelError> {
    // h sinh² r ∝ r sinh r e^{-r²/4t} peaks near r = 2t + √(2t)
    let width = (2.0 * t).sqrt();
    let r_max = 2.0 * t + 40.0 * width + 40.0;
    integrate_pieces(
        |r| {
            if r <= 0.0 {
                0.0
            } else {
                (log_h3_heat(t, r) + log_shell(r) + log_f(r)).exp()
            }
        },
        &radial_breaks(2.0 * t + width, width, r_max),
        0.0,
        1e-12,
    )
    .map(|i| i.value)
    .map_err(|e| KernelError::Quadrature(e.to_string()))
}

/// `∫ h(t, x, y) dy` over `H³`.
pub fn heat_mass(t: f64) -> Result<f64, KernelError> {
    if !(t > 0.0) {
        return Err(KernelError::InvalidParameter(format!("t={t} must be positive")));
    }
    radial_integral(t, |_| 0.0)
}

/// `∫ h(s, o, y) h(t, y, o) dy`, which the semigroup law equates with `h(s+t, 0)`.
pub fn semigroup_at_origin(s: f64, t: f64) -> Result<f64, KernelError> {
    if !(s > 0.0 && t > 0.0) {
        return Err(KernelError::InvalidParameter(format!("need s, t > 0: s={s} t={t}")));
    }
    // integrate against the narrower kernel
    let (a, b) = if s <= t { (s, t) } else { (t, s) };
    radial_integral(a, |r| log_h3_heat(b, r))
}

/// Cap on the prefactor `C₁` when searching for the smallest feasible `C₂`.
pub const C1_CAP: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianConstants {
    pub c1: f64,
    pub c2: f64,
    /// Largest `h / bound` on the validation grid.
    pub validation_ratio: f64,
}

/// `ln` of `h · vol(B(√t)) e^{-√(2t)} e^{r²/(C₂t)}`: the `C₁` needed at one grid point.
fn log_needed_c1(t: f64, r: f64, c2: f64) -> Result<f64, KernelError> {
    Ok(log_h3_heat(t, r) + log_ball_volume(2, t.sqrt())? - (2.0 * t).sqrt() + r * r / (c2 * t))
}

fn needed_c1(ts: &[f64], rs: &[f64], c2: f64) -> Result<f64, KernelError> {
    let mut worst = f64::NEG_INFINITY;
    for &t in ts {
        for &r in rs {
            worst = worst.max(log_needed_c1(t, r, c2)?);
        }
    }
    Ok(worst.exp())
}

/// Smallest `C₂ ∈ [1, 100]` (to `1e-4`) such that
/// `h(t,r) <= C₁ vol(B(√t))^{-1} e^{√(2t)} e^{-r²/(C₂t)}` holds on the grid with
/// `C₁ <= C1_CAP`, then the bound with those constants on `validation`.
pub fn gaussian_constants(
    ts: &[f64],
    rs: &[f64],
    validation: (&[f64], &[f64]),
) -> Result<GaussianConstants, KernelError> {
    if ts.is_empty() || rs.is_empty() || ts.iter().any(|&t| !(t > 0.0)) || rs.iter().any(|&r| !(r >= 0.0)) {
        return Err(KernelError::InvalidParameter("grids must be non-empty, t > 0, r >= 0".into()));
    }
    let feasible = |c2: f64| -> Result<bool, KernelError> { Ok(needed_c1(ts, rs, c2)? <= C1_CAP) };
    let (mut lo, mut hi) = (1.0, 100.0);
    if !feasible(hi)? {
        return Err(KernelError::Infeasible(format!(
            "no C₂ <= 100 with C₁ <= {C1_CAP} on the grid"
        )));
    }
    if feasible(lo)? {
        hi = lo;
    }
    while hi - lo > 1e-4 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let c2 = hi;
    let c1 = needed_c1(ts, rs, c2)?;
    let ratio = needed_c1(validation.0, validation.1, c2)? / c1;
    Ok(GaussianConstants { c1, c2, validation_ratio: ratio })
}

/// Log-spaced `t` grid on `[t_lo, t_hi]` and uniform `r` grid on `[0, r_hi]`.
pub fn heat_grid(t_lo: f64, t_hi: f64, nt: usize, r_hi: f64, nr: usize) -> (Vec<f64>, Vec<f64>) {
    let ts = (0..nt)
        .map(|i| t_lo * (t_hi / t_lo).powf(i as f64 / (nt - 1).max(1) as f64))
        .collect();
    let rs = (0..nr).map(|i| r_hi * i as f64 / (nr - 1).max(1) as f64).collect();
    (ts, rs)
}

pub fn gaussian_bound_check(ts: &[f64], rs: &[f64], c2_limit: f64) -> Result<Vec<CheckReport>, KernelError> {
    let start = std::time::Instant::now();
    let (t_lo, t_hi) = (ts[0], *ts.last().expect("non-empty"));
    let r_hi = *rs.last().expect("non-empty");
    let (vt, vr) = heat_grid(t_lo, t_hi, 3 * ts.len(), r_hi, 3 * rs.len());
    let g = gaussian_constants(ts, rs, (&vt, &vr))?;
    Ok(vec![
        CheckReport::at_most(
            "heat Gaussian bound: smallest feasible C2",
            "heat kernel Gaussian upper bound",
            g.c2,
            c2_limit,
        )
        .with_note(format!("C1 = {:.6e} (cap {C1_CAP})", g.c1))
        .timed(start),
        // the fitted sup may sit between grid nodes; allow 1% for that
        CheckReport::at_most(
            "heat Gaussian bound on validation grid",
            "heat kernel Gaussian upper bound",
            g.validation_ratio,
            1.01,
        ),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolventParams {
    pub m_pow: f64,
    pub xi: f64,
}

impl ResolventParams {
    pub fn new(m_pow: f64, xi: f64) -> Result<Self, KernelError> {
        if !(m_pow > 0.0 && xi > 0.0 && m_pow.is_finite() && xi.is_finite()) {
            return Err(KernelError::InvalidParameter(format!("need m > 0, ξ > 0: m={m_pow} ξ={xi}")));
        }
        Ok(Self { m_pow, xi })
    }

    /// `ln(1/Γ(m))`
    pub fn log_normalization(&self) -> f64 {
        -ln_gamma(self.m_pow)
    }
}

/// `(1/Γ(m)) ∫₀^∞ t^{m-1} e^{-ξ²t} h(t, r) dt`, integrated in `u = ln t`.
pub fn resolvent_kernel(params: &ResolventParams, r: f64) -> Result<f64, KernelError> {
    if !(r > 0.0) && params.m_pow <= 1.5 {
        return Err(KernelError::InvalidParameter(format!(
            "the kernel is singular at r=0 for m={} <= 3/2",
            params.m_pow
        )));
    }
    let (m, xi2) = (params.m_pow, params.xi * params.xi);
    let a = (1.0 + xi2).sqrt();
    let log_integrand = |u: f64| {
        let t = u.exp();
        m * u - xi2 * t + log_h3_heat(t, r)
    };
    // the integrand peaks where r²/4t balances (1+ξ²)t, or at t ≈ (m - 3/2)/(1+ξ²) when r = 0
    let peak = if r > 0.0 { r / (2.0 * a) } else { (m - 1.5) / (1.0 + xi2) };
    let lo = if r > 0.0 { (r * r / 3000.0).ln() } else { peak.ln() - 80.0 / (m - 1.5) };
    let hi = ((m + 1.0) * 60.0 / (1.0 + xi2) + 4.0 * peak).ln();
    let mut breaks: Vec<f64> = (-6..=6).map(|k| peak.ln() + 0.5 * f64::from(k)).collect();
    breaks.retain(|&u| u > lo && u < hi);
    breaks.push(lo);
    breaks.push(hi);
    breaks.sort_by(f64::total_cmp);
    let v = integrate_pieces(|u| log_integrand(u).exp(), &breaks, 0.0, 1e-12)
        .map_err(|e| KernelError::Quadrature(e.to_string()))?;
    Ok(v.value * params.log_normalization().exp())
}

/// `∫ g_{m,ξ} dV` over `H³`, by quadrature over `r` of the quadrature over `t`.
pub fn resolvent_mass(params: &ResolventParams) -> Result<f64, KernelError> {
    let a = (1.0 + params.xi * params.xi).sqrt();
    // g sinh² r decays like r^{m-1} e^{-(a-1)r}
    let rate = a - 1.0;
    let r_max = (45.0 + 2.0 * params.m_pow * (1.0 + 1.0 / rate).ln().max(0.0)) / rate;
    let mut breaks = vec![0.0];
    let mut x = 1e-3;
    while x < r_max {
        breaks.push(x);
        x *= 2.0;
    }
    breaks.push(r_max);
    let mut err = None;
    let v = integrate_pieces(
        |r| {
            if r <= 0.0 {
                return 0.0;
            }
            match resolvent_kernel(params, r) {
                Ok(g) => g * (log_shell(r)).exp(),
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            }
        },
        &breaks,
        0.0,
        1e-10,
    )
    .map_err(|e| KernelError::Quadrature(e.to_string()))?;
    match err {
        Some(e) => Err(e),
        None => Ok(v.value),
    }
}

/// Whether `-d²/(4C₂t) - σ²t <= -C₂^{-1/2} σ d` (up to rounding).
pub fn impo_check(sigma: f64, d: f64, t: f64, c2: f64) -> bool {
    let lhs = -d * d / (4.0 * c2 * t) - sigma * sigma * t;
    let rhs = -sigma * d / c2.sqrt();
    lhs <= rhs + 1e-12 * (lhs.abs() + rhs.abs()).max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heat_values() {
        let want = (4.0 * PI).powf(-1.5) * (-1.0f64).exp();
        assert!((h3_heat(1.0, 0.0) - want).abs() < 1e-16);
        let r: f64 = 2.0;
        let direct = (4.0 * PI * 0.5f64).powf(-1.5) * r / r.sinh() * (-0.5 - r * r / 2.0f64).exp();
        assert!((h3_heat(0.5, r) - direct).abs() < 1e-15);
        assert!(heat_eval(0.0, 1.0).is_err());
        assert!(log_h3_heat(1.0, 300.0).is_finite());
    }

    #[test]
    fn heat_is_stochastically_complete() {
        for t in [0.01, 0.1, 1.0, 10.0, 50.0] {
            let m = heat_mass(t).unwrap();
            assert!((m - 1.0).abs() < 1e-9, "t={t}: {m}");
        }
    }

    #[test]
    fn semigroup_at_the_origin() {
        for (s, t) in [(0.3, 0.7), (1.0, 2.0), (0.05, 5.0)] {
            let v = semigroup_at_origin(s, t).unwrap();
            let w = h3_heat(s + t, 0.0);
            assert!(((v - w) / w).abs() < 1e-8, "{s},{t}: {v} vs {w}");
        }
    }

    #[test]
    fn resolvent_matches_closed_form_for_m_one() {
        // (Δ + ξ²)^{-1} on H³ has kernel e^{-√(1+ξ²) r}/(4π sinh r)
        for xi in [0.5, 1.0, 2.0] {
            let p = ResolventParams::new(1.0, xi).unwrap();
            let a = (1.0 + xi * xi).sqrt();
            for r in [0.01, 0.5, 3.0, 20.0] {
                let r: f64 = r;
                let want = (-a * r).exp() / (4.0 * PI * r.sinh());
                let got = resolvent_kernel(&p, r).unwrap();
                assert!(((got - want) / want).abs() < 1e-9, "ξ={xi} r={r}: {got} vs {want}");
            }
        }
    }

    #[test]
    fn resolvent_mass_identity() {
        for (m, xi) in [(1.0, 2.0), (0.5, 1.0), (2.0, 4.0)] {
            let p = ResolventParams::new(m, xi).unwrap();
            let mass = resolvent_mass(&p).unwrap();
            assert!((mass - xi.powf(-2.0 * m)).abs() < 1e-6, "m={m} ξ={xi}: {mass}");
        }
    }

    #[test]
    fn resolvent_decreases_in_r() {
        let p = ResolventParams::new(2.0, 1.0).unwrap();
        let mut last = resolvent_kernel(&p, 0.0).unwrap();
        for i in 1..40 {
            let v = resolvent_kernel(&p, 0.25 * f64::from(i)).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(resolvent_kernel(&ResolventParams::new(1.0, 1.0).unwrap(), 0.0).is_err());
        assert!(ResolventParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn impo_examples() {
        assert!(impo_check(1.0, 2.0, 1.0, 4.0));
        assert!(impo_check(1.3, 0.0, 2.0, 4.0));
        // equality at t = d/(2σ√C₂)
        let (s, d, c2) = (0.7, 3.0, 5.0);
        let t = d / (2.0 * s * f64::sqrt(c2));
        let lhs = -d * d / (4.0 * c2 * t) - s * s * t;
        assert!((lhs + s * d / c2.sqrt()).abs() < 1e-14);
        assert!(impo_check(s, d, t, c2));
    }

    #[test]
    fn small_time_gaussian_constant_is_four() {
        let (ts, rs) = heat_grid(1e-3, 0.1, 12, 3.0, 61);
        let (vt, vr) = heat_grid(1e-3, 0.1, 30, 3.0, 181);
        let g = gaussian_constants(&ts, &rs, (&vt, &vr)).unwrap();
        assert!(g.c2 <= 4.0 + 1e-3 && g.c2 > 3.5, "{g:?}");
        assert!(g.validation_ratio <= 1.01, "{g:?}");
        // r = 0 row: on-diagonal bound h <= C₁ vol(B(√t))^{-1} e^{√(2t)}
        for &t in &vt {
            let bound = g.c1 * (-log_ball_volume(2, t.sqrt()).unwrap() + (2.0 * t).sqrt()).exp();
            assert!(h3_heat(t, 0.0) <= bound * 1.01);
        }
    }
}
