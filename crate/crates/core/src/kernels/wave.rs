//! Radial waves `u_tt = u_rr + N coth r u_r` on `H^{N+1}` and the finite speed of propagation.
//!
//! The spatial operator is discretized in divergence form with weights
//! `sinh^N`, so the scheme conserves a discrete energy and treats `r = 0`
//! by symmetry (the weight vanishes there). Time stepping is leapfrog.

use serde::{Deserialize, Serialize};

use super::KernelError;
use crate::hyp::log_sinh;
use crate::report::CheckReport;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveState {
    pub h: f64,
    pub r: Vec<f64>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub t: f64,
    /// Neumann by symmetry at `r = 0`; Neumann at the outer end (never reached before `T`).
    pub boundary: String,
}

/// Smooth bump `exp(1 - 1/(1 - x²))` on `|x| < 1`.
pub fn bump(x: f64) -> f64 {
    if x.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - x * x)).exp()
    }
}

/// Weights scaled by `sinh^N(R)` to stay representable.
struct Operator {
    /// `sinh^N` at the half points `r_{i+1/2}`
    edge: Vec<f64>,
    /// `∫ sinh^N` over the dual cell of node `i`
    mass: Vec<f64>,
    h: f64,
}

impl Operator {
    fn new(n: u32, nodes: usize, h: f64) -> Self {
        let nf = f64::from(n);
        let top = nf * log_sinh(h * (nodes - 1) as f64);
        let w = |r: f64| if r <= 0.0 { if n == 0 { 1.0 } else { 0.0 } } else { (nf * log_sinh(r) - top).exp() };
        let edge: Vec<f64> = (0..nodes - 1).map(|i| w((i as f64 + 0.5) * h)).collect();
        // two-point Gauss on each half cell
        let g = 0.5 / 3f64.sqrt();
        let half = |a: f64, b: f64| 0.5 * (b - a) * (w(0.5 * (a + b) - g * (b - a)) + w(0.5 * (a + b) + g * (b - a)));
        let mass = (0..nodes)
            .map(|i| {
                let r = i as f64 * h;
                let left = if i > 0 { half(r - 0.5 * h, r) } else { 0.0 };
                let right = if i + 1 < nodes { half(r, r + 0.5 * h) } else { 0.0 };
                left + right
            })
            .collect();
        Self { edge, mass, h }
    }

    /// `M⁻¹ (-K u)`, the discrete `u_rr + N coth r u_r`.
    fn accel(&self, u: &[f64], out: &mut [f64]) {
        let n = u.len();
        for i in 0..n {
            let mut flux = 0.0;
            if i + 1 < n {
                flux += self.edge[i] * (u[i + 1] - u[i]);
            }
            if i > 0 {
                flux -= self.edge[i - 1] * (u[i] - u[i - 1]);
            }
            out[i] = flux / (self.h * self.mass[i]);
        }
    }

    /// Gershgorin bound on the largest eigenvalue of `M⁻¹K`.
    fn spectral_bound(&self) -> f64 {
        let n = self.mass.len();
        (0..n)
            .map(|i| {
                let s = if i + 1 < n { self.edge[i] } else { 0.0 } + if i > 0 { self.edge[i - 1] } else { 0.0 };
                2.0 * s / (self.h * self.mass[i])
            })
            .fold(0.0, f64::max)
    }

    /// Kinetic energy per node and potential energy per edge.
    fn energy_parts(&self, u: &[f64], v: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let kin = v.iter().zip(&self.mass).map(|(v, m)| 0.5 * m * v * v).collect();
        let pot = (0..u.len() - 1)
            .map(|i| 0.5 * self.edge[i] * (u[i + 1] - u[i]).powi(2) / self.h)
            .collect();
        (kin, pot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeResult {
    pub h: f64,
    pub dt: f64,
    pub steps: usize,
    /// Energy outside the cone over the initial energy.
    pub outside_fraction: f64,
    /// Relative change of the total discrete energy.
    pub energy_drift: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WaveSetup {
    #[serde(rename = "N")]
    pub n: u32,
    /// Outer radius of the grid.
    #[serde(rename = "R")]
    pub r_max: f64,
    /// Final time.
    #[serde(rename = "T")]
    pub t_end: f64,
    /// Bump centre and half-width.
    pub r0: f64,
    pub delta: f64,
    /// Resolution margin `ε_h` around the cone, in grid cells.
    pub margin_cells: f64,
}

impl Default for WaveSetup {
    fn default() -> Self {
        Self { n: 3, r_max: 12.0, t_end: 3.0, r0: 5.0, delta: 1.0, margin_cells: 2.0 }
    }
}

/// Evolves the bump `u(0) = bump((r - r0)/δ)`, `u_t(0) = 0` to `T` and measures the
/// energy outside `[r0 - δ - T - ε_h, r0 + δ + T + ε_h]`.
pub fn wave_cone_check(setup: &WaveSetup, h: f64) -> Result<ConeResult, KernelError> {
    let WaveSetup { n, r_max, t_end, r0, delta, margin_cells } = *setup;
    if !(h > 0.0 && t_end >= 0.0 && delta > 0.0 && r0 > delta) {
        return Err(KernelError::InvalidParameter(format!("need h > 0, T >= 0, r0 > δ > 0: {setup:?} h={h}")));
    }
    if t_end >= r_max - (r0 + delta) - 1.0 {
        return Err(KernelError::InvalidParameter(format!(
            "T={t_end} reaches within 1 of the outer boundary R={r_max}"
        )));
    }
    let nodes = (r_max / h).round() as usize + 1;
    let op = Operator::new(n, nodes, h);
    let lam = op.spectral_bound();
    let steps = ((t_end / (0.5 * h)).ceil() as usize).max(((t_end * lam.sqrt() / 1.8).ceil()) as usize);
    let dt = if steps == 0 { 0.0 } else { t_end / steps as f64 };
    if dt > 0.5 * h + 1e-15 || dt * dt * lam > 4.0 {
        return Err(KernelError::InvalidParameter(format!("CFL violated: dt={dt} h={h}")));
    }

    let r: Vec<f64> = (0..nodes).map(|i| i as f64 * h).collect();
    let mut u: Vec<f64> = r.iter().map(|&x| bump((x - r0) / delta)).collect();
    let mut v = vec![0.0; nodes];
    let mut a = vec![0.0; nodes];
    let total = |u: &[f64], v: &[f64]| {
        let (k, p) = op.energy_parts(u, v);
        k.iter().sum::<f64>() + p.iter().sum::<f64>()
    };
    let e0 = total(&u, &v);

    // velocity Verlet
    op.accel(&u, &mut a);
    for _ in 0..steps {
        for i in 0..nodes {
            v[i] += 0.5 * dt * a[i];
            u[i] += dt * v[i];
        }
        op.accel(&u, &mut a);
        for i in 0..nodes {
            v[i] += 0.5 * dt * a[i];
        }
    }

    let eps = margin_cells * h;
    let (lo, hi) = (r0 - delta - t_end - eps, r0 + delta + t_end + eps);
    let (kin, pot) = op.energy_parts(&u, &v);
    let outside_nodes: f64 = (0..nodes).filter(|&i| r[i] < lo || r[i] > hi).map(|i| kin[i]).sum();
    let outside_edges: f64 = (0..nodes - 1)
        .filter(|&i| r[i + 1] < lo || r[i] > hi)
        .map(|i| pot[i])
        .sum();
    let e1 = total(&u, &v);
    Ok(ConeResult {
        h,
        dt,
        steps,
        outside_fraction: (outside_nodes + outside_edges) / e0,
        energy_drift: (e1 - e0).abs() / e0,
    })
}

/// Final state of the evolution, for plotting.
pub fn wave_state(setup: &WaveSetup, h: f64) -> Result<WaveState, KernelError> {
    let res = wave_cone_check(setup, h)?;
    let nodes = (setup.r_max / h).round() as usize + 1;
    let op = Operator::new(setup.n, nodes, h);
    let r: Vec<f64> = (0..nodes).map(|i| i as f64 * h).collect();
    let mut u: Vec<f64> = r.iter().map(|&x| bump((x - setup.r0) / setup.delta)).collect();
    let mut v = vec![0.0; nodes];
    let mut a = vec![0.0; nodes];
    op.accel(&u, &mut a);
    for _ in 0..res.steps {
        for i in 0..nodes {
            v[i] += 0.5 * res.dt * a[i];
            u[i] += res.dt * v[i];
        }
        op.accel(&u, &mut a);
        for i in 0..nodes {
            v[i] += 0.5 * res.dt * a[i];
        }
    }
    Ok(WaveState { h, r, u, v, t: setup.t_end, boundary: "neumann at 0 and R".into() })
}

/// Outside-cone fraction at `h_fine` and its improvement over successive halvings.
pub fn wave_reports(setup: &WaveSetup, hs: &[f64]) -> Result<Vec<CheckReport>, KernelError> {
    let start = std::time::Instant::now();
    let runs: Vec<ConeResult> = hs.iter().map(|&h| wave_cone_check(setup, h)).collect::<Result<_, _>>()?;
    let finest = runs.last().expect("at least one mesh");
    let mut out = vec![CheckReport::at_most(
        &format!("wave outside-cone energy fraction h={}", finest.h),
        "finite propagation speed at most 1",
        finest.outside_fraction,
        1e-6,
    )
    .timed(start)];
    for w in runs.windows(2) {
        let gain = w[0].outside_fraction / w[1].outside_fraction;
        out.push(
            CheckReport::at_least(
                &format!("wave outside-cone improvement h={} -> {}", w[0].h, w[1].h),
                "finite propagation speed at most 1",
                gain,
                4.0,
            )
            .with_note(format!("fractions {:.3e} -> {:.3e}", w[0].outside_fraction, w[1].outside_fraction)),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nothing_outside_at_time_zero() {
        let s = WaveSetup { t_end: 0.0, ..Default::default() };
        let r = wave_cone_check(&s, 1e-2).unwrap();
        assert_eq!(r.outside_fraction, 0.0);
        assert_eq!(r.steps, 0);
    }

    #[test]
    fn energy_is_conserved() {
        // leapfrog conserves a modified energy, so the plain energy drifts at O(h²)
        let a = wave_cone_check(&WaveSetup::default(), 1e-2).unwrap();
        let b = wave_cone_check(&WaveSetup::default(), 5e-3).unwrap();
        assert!(a.energy_drift < 2e-4, "{a:?}");
        assert!(b.energy_drift < a.energy_drift / 3.5, "{a:?} {b:?}");
        assert!(a.dt <= 0.5 * a.h);
    }

    #[test]
    fn leakage_falls_quickly_with_the_mesh() {
        let reps = wave_reports(&WaveSetup::default(), &[8e-3, 4e-3]).unwrap();
        assert!(reps.iter().all(|r| r.pass), "{reps:?}");
    }

    #[test]
    fn bad_setups() {
        assert!(wave_cone_check(&WaveSetup { t_end: 6.0, ..Default::default() }, 1e-2).is_err());
        assert!(wave_cone_check(&WaveSetup::default(), 0.0).is_err());
    }

    #[test]
    fn flat_space_limit_matches_dalembert() {
        // N = 0 is the line: u(t, r) = (f(r - t) + f(r + t))/2 away from r = 0
        let s = WaveSetup { n: 0, t_end: 2.0, ..Default::default() };
        let st = wave_state(&s, 2e-3).unwrap();
        let f = |x: f64| bump((x - 5.0) / 1.0);
        let err = st
            .r
            .iter()
            .zip(&st.u)
            .map(|(&x, &u)| (u - 0.5 * (f(x - 2.0) + f(x + 2.0))).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-4, "{err}");
    }
}
