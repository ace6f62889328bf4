//! Frobenius start plus adaptive Dormand–Prince 5(4) continuation of the radial equation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{frobenius_series, RadialError, RadialProblem};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegrateOptions {
    pub r0: f64,
    pub r_max: f64,
    /// Local error tolerance (absolute and relative).
    pub tol: f64,
    /// Output spacing beyond `r = 1`; below it samples are geometric.
    pub output_step: f64,
    /// Multiplier on the Frobenius start.
    pub start_scale: Complex64,
    /// `|φ|` above which the state is rescaled.
    pub renorm_threshold: f64,
}

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self {
            r0: 1e-3,
            r_max: 60.0,
            tol: 1e-10,
            output_step: 0.02,
            start_scale: Complex64::new(1.0, 0.0),
            renorm_threshold: 1e100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub r: Vec<f64>,
    /// Stored values; the solution is `φ · e^{log_scale}`.
    pub phi: Vec<Complex64>,
    pub dphi: Vec<Complex64>,
    pub log_scale: Vec<f64>,
    pub frobenius_terms: usize,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
}

impl RadialProfile {
    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// `log |φ(r_i)|` including the renormalisation bookkeeping.
    pub fn log_abs_phi(&self, i: usize) -> f64 {
        self.phi[i].norm().ln() + self.log_scale[i]
    }

    /// `φ(r_i)` with the bookkeeping applied (may overflow for long runs).
    pub fn value(&self, i: usize) -> Complex64 {
        self.phi[i] * self.log_scale[i].exp()
    }
}

/// `coth r`, with the Laurent series near 0.
pub fn coth_stable(r: f64) -> f64 {
    if r < 1e-2 {
        let r2 = r * r;
        1.0 / r + r / 3.0 - r * r2 / 45.0 + 2.0 * r * r2 * r2 / 945.0
    } else {
        1.0 / r.tanh()
    }
}

/// `1/sinh² r` without overflow for large `r`.
pub fn inv_sinh_sq(r: f64) -> f64 {
    if r > 20.0 {
        let e = (-2.0 * r).exp();
        4.0 * e / ((1.0 - e) * (1.0 - e))
    } else {
        1.0 / r.sinh().powi(2)
    }
}

type State = [Complex64; 2];

fn rhs(problem: &RadialProblem, r: f64, y: &State) -> State {
    let drift = problem.drift();
    [
        y[1],
        -drift * coth_stable(r) * y[1] + (problem.lambda * inv_sinh_sq(r) - problem.spectral) * y[0],
    ]
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const B5: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// One Dormand–Prince step: fifth-order solution and error-estimate norm.
/// `atol_scale` sets the absolute part of the tolerance, so that the step
/// sequence is invariant under scaling of the initial data.
///
/// The error is controlled per unit step (`tol * h`, with `h` clamped to `[0.01, 1]` so tiny
/// steps near the origin do not push the target below roundoff), which keeps each
/// local error below `tol` and makes the global error proportional to `tol`
/// rather than to `tol^{4/5}`.
fn dopri_step(problem: &RadialProblem, r: f64, y: &State, h: f64, tol: f64, atol_scale: f64) -> (State, f64) {
    let mut k = [[Complex64::new(0.0, 0.0); 2]; 7];
    for s in 0..7 {
        let mut ys = *y;
        for (j, kj) in k.iter().enumerate().take(s) {
            let a = A[s][j];
            if a != 0.0 {
                ys[0] += h * a * kj[0];
                ys[1] += h * a * kj[1];
            }
        }
        k[s] = rhs(problem, r + C[s] * h, &ys);
    }
    let mut y5 = *y;
    let mut err = [Complex64::new(0.0, 0.0); 2];
    for s in 0..7 {
        for i in 0..2 {
            y5[i] += h * B5[s] * k[s][i];
            err[i] += h * (B5[s] - B4[s]) * k[s][i];
        }
    }
    let mut acc = 0.0;
    for i in 0..2 {
        let sc = tol * h.clamp(1e-2, 1.0) * (atol_scale + y[i].norm().max(y5[i].norm()));
        acc += (err[i].norm() / sc).powi(2);
    }
    (y5, (acc / 2.0).sqrt())
}

fn output_grid(r0: f64, r_max: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let knee = 1.0f64.min(r_max);
    let geometric = 40;
    let ratio = (knee / r0).ln() / geometric as f64;
    for i in 0..=geometric {
        out.push(r0 * (ratio * i as f64).exp());
    }
    let mut r = knee;
    while r + step < r_max - 1e-12 {
        r += step;
        out.push(r);
    }
    if *out.last().expect("non-empty") < r_max {
        out.push(r_max);
    }
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    out
}

/// Recessive-at-0 solution from a truncated Frobenius series at `r0`, continued to `r_max`.
pub fn integrate(problem: &RadialProblem, opts: &IntegrateOptions) -> Result<RadialProfile, RadialError> {
    if !(opts.r0 > 0.0 && opts.r0 < opts.r_max && opts.tol > 0.0 && opts.output_step > 0.0) {
        return Err(RadialError::InvalidParameter(format!(
            "need 0 < r0 < R, tol > 0: r0={} R={} tol={}",
            opts.r0, opts.r_max, opts.tol
        )));
    }
    let (mut y, terms) = frobenius_start(problem, opts.r0);
    y[0] *= opts.start_scale;
    y[1] *= opts.start_scale;

    let grid = output_grid(opts.r0, opts.r_max, opts.output_step);
    let mut prof = RadialProfile {
        r: vec![grid[0]],
        phi: vec![y[0]],
        dphi: vec![y[1]],
        log_scale: vec![0.0],
        frobenius_terms: terms,
        accepted_steps: 0,
        rejected_steps: 0,
    };
    let mut log_scale = 0.0;
    let mut atol_scale = y[0].norm().max(y[1].norm());
    let mut r = grid[0];
    let mut h = 0.1 * opts.r0;
    for &target in &grid[1..] {
        while r < target {
            let h_try = h.min(target - r);
            let (y_new, err) = dopri_step(problem, r, &y, h_try, opts.tol, atol_scale);
            let finite = y_new.iter().all(|v| v.re.is_finite() && v.im.is_finite());
            if finite && err <= 1.0 {
                r = if h_try == target - r { target } else { r + h_try };
                y = y_new;
                prof.accepted_steps += 1;
                let mag = y[0].norm().max(y[1].norm());
                if mag > opts.renorm_threshold {
                    y[0] /= mag;
                    y[1] /= mag;
                    log_scale += mag.ln();
                    atol_scale /= mag;
                }
            } else {
                prof.rejected_steps += 1;
            }
            let factor = if finite && err > 0.0 {
                (0.9 * err.powf(-0.25)).clamp(0.2, 5.0)
            } else if finite {
                5.0
            } else {
                0.2
            };
            // only grow the step from a full attempt, so landing on output points does not shrink it
            if !(finite && err <= 1.0 && h_try < h) {
                h = h_try * factor;
            }
            if h < 1e-14 * r.max(1.0) {
                return Err(RadialError::StepFailure { r, tol: opts.tol });
            }
        }
        prof.r.push(target);
        prof.phi.push(y[0]);
        prof.dphi.push(y[1]);
        prof.log_scale.push(log_scale);
    }
    Ok(prof)
}

/// Largest relative deviation of the run at `opts.tol` from a reference run at
/// `1e-13`, over the common output points (the global defect of the solution).
pub fn global_defect(problem: &RadialProblem, opts: &IntegrateOptions) -> Result<f64, RadialError> {
    let run = integrate(problem, opts)?;
    let reference = integrate(problem, &IntegrateOptions { tol: 1e-13, ..*opts })?;
    Ok((0..run.len())
        .map(|i| {
            let a = run.phi[i] * (run.log_scale[i] - reference.log_scale[i]).exp();
            (a - reference.phi[i]).norm() / reference.phi[i].norm()
        })
        .fold(0.0, f64::max))
}

/// `(φ(r0), φ'(r0))` from the Frobenius series.
///
/// Summation stops once two consecutive terms are below `1e-14` relative
/// (odd-order coefficients vanish, so a single small term says nothing).
pub fn frobenius_start(problem: &RadialProblem, r0: f64) -> (State, usize) {
    const MAX_TERMS: usize = 80;
    let data = frobenius_series(problem, MAX_TERMS);
    let alpha = data.alpha.re;
    let mut phi = Complex64::new(0.0, 0.0);
    let mut dphi = Complex64::new(0.0, 0.0);
    let mut used = 0;
    let mut small_run = 0;
    for (j, c) in data.series.iter().enumerate() {
        let e = j as f64 + alpha;
        let term = c * r0.powf(e);
        phi += term;
        dphi += c * e * r0.powf(e - 1.0);
        used = j + 1;
        if j > 0 && term.norm() < 1e-14 * phi.norm() {
            small_run += 1;
            if small_run == 2 {
                break;
            }
        } else {
            small_run = 0;
        }
    }
    ([phi, dphi], used)
}
