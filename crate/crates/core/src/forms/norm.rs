//! L^p norms of template forms against `dv = y^{-N-1} dy dx`.
//!
//! The y-direction is integrated in `t = log y`, where `y^{-N-1} dy = y^{-N} dt`.
//! With `|f e_K| = |f| y^k` the integrand becomes
//! `(Σ_K |F_K y^{k-N/p}|²)^{p/2} dt dx`, which stays O(1) for the forms of
//! interest even when `y` itself spans hundreds of orders of magnitude.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quad::{pairwise_sum, GaussLegendre};

use super::basis::BasisForm;
use super::template::TemplateForm;
use super::FormError;

/// Relative size of the boundary integrand above which coverage is flagged.
pub const COVERAGE_TOL: f64 = 1e-10;

/// Tensor-product quadrature over `[-L, L]^N × [t_min, t_max]`, `t = log y`.
///
/// The y-range is stored as `log y` because the lower ends used for the
/// approximate eigenforms (`y = e^{-n^{3p}}`) are not representable as `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureGrid {
    pub half_width: f64,
    pub x_cells: usize,
    pub x_order: usize,
    pub t_min: f64,
    pub t_max: f64,
    /// Extra cell boundaries in `t` (profile ramps, support ends).
    pub t_breaks: Vec<f64>,
    pub t_order: usize,
    /// First cell width next to each breakpoint; widths double away from it.
    pub t_first_cell: f64,
    pub t_max_cell: f64,
}

impl QuadratureGrid {
    pub fn new(half_width: f64, t_min: f64, t_max: f64) -> Self {
        Self {
            half_width,
            x_cells: 4,
            x_order: 16,
            t_min,
            t_max,
            t_breaks: Vec::new(),
            t_order: 16,
            t_first_cell: 0.25,
            t_max_cell: f64::INFINITY,
        }
    }

    /// Smallest grid enclosing every profile support of `form`, widened by `margin`.
    pub fn covering(form: &TemplateForm, margin: f64) -> Result<Self, FormError> {
        let mut t_lo = f64::INFINITY;
        let mut t_hi = f64::NEG_INFINITY;
        let mut x_half: f64 = 0.0;
        let mut breaks = Vec::new();
        for term in &form.terms {
            let (a, b) = term.coef.c.support().ok_or_else(|| {
                FormError::Unsupported("covering grid needs compactly supported y-profiles".into())
            })?;
            t_lo = t_lo.min(a);
            t_hi = t_hi.max(b);
            breaks.extend(term.coef.c.breakpoints());
            for prof in &term.coef.b {
                if prof.is_one() {
                    continue;
                }
                let (a, b) = prof.support().ok_or_else(|| {
                    FormError::Unsupported("covering grid needs compactly supported x-profiles".into())
                })?;
                x_half = x_half.max(a.abs()).max(b.abs());
            }
        }
        if form.terms.is_empty() {
            return Ok(Self::new(1.0, -1.0, 1.0));
        }
        let mut g = Self::new(x_half.max(1e-3) + margin, t_lo - margin, t_hi + margin);
        g.t_breaks = breaks;
        Ok(g)
    }

    pub fn y_min(&self) -> f64 {
        self.t_min.exp()
    }

    pub fn y_max(&self) -> f64 {
        self.t_max.exp()
    }

    /// Composite Gauss nodes and weights along one x-axis.
    pub fn x_rule(&self) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.x_order);
        let h = 2.0 * self.half_width / self.x_cells as f64;
        (0..self.x_cells)
            .flat_map(|i| {
                let a = -self.half_width + i as f64 * h;
                gl.on(a, a + h).collect::<Vec<_>>()
            })
            .collect()
    }

    /// Cell boundaries in `t`: graded from every breakpoint.
    pub fn t_cells(&self) -> Vec<(f64, f64)> {
        let mut pts: Vec<f64> = self
            .t_breaks
            .iter()
            .copied()
            .filter(|&b| b > self.t_min && b < self.t_max)
            .chain([self.t_min, self.t_max])
            .collect();
        pts.sort_by(f64::total_cmp);
        pts.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
        let mut cells = Vec::new();
        for w in pts.windows(2) {
            graded_cells(w[0], w[1], self.t_first_cell, self.t_max_cell, &mut cells);
        }
        cells
    }

    pub fn t_rule(&self) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.t_order);
        self.t_cells()
            .into_iter()
            .flat_map(|(a, b)| gl.on(a, b).collect::<Vec<_>>())
            .collect()
    }
}

fn graded_cells(a: f64, b: f64, first: f64, max: f64, out: &mut Vec<(f64, f64)>) {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let (mut l, mut r, mut w) = (a, b, first);
    loop {
        let gap = r - l;
        if gap <= 2.0 * w {
            let pieces = (gap / w).ceil().max(1.0) as usize;
            let h = gap / pieces as f64;
            for i in 0..pieces {
                left.push((l + i as f64 * h, l + (i + 1) as f64 * h));
            }
            break;
        }
        left.push((l, l + w));
        right.push((r - w, r));
        l += w;
        r -= w;
        w = (2.0 * w).min(max);
    }
    out.extend(left);
    out.extend(right.into_iter().rev());
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpNorm {
    pub p: f64,
    /// `‖ω‖_p`
    pub value: f64,
    /// `‖ω‖_p^p`
    pub integral: f64,
    pub warnings: Vec<String>,
}

/// Terms grouped by basis form and x-profile, so each x-factor is tabulated once.
struct Group {
    basis: usize,
    x_values: Vec<Complex64>,
    members: Vec<usize>,
}

pub fn lp_norm(form: &TemplateForm, p: f64, grid: &QuadratureGrid) -> Result<LpNorm, FormError> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(FormError::InvalidParameter(format!("exponent p={p} must be finite and >= 1")));
    }
    form.check_evaluable()?;
    if form.is_zero() {
        return Ok(LpNorm {
            p,
            value: 0.0,
            integral: 0.0,
            warnings: Vec::new(),
        });
    }
    let n = form.n as usize;
    let w = f64::from(form.degree) - f64::from(form.n) / p;
    let mut warnings = coverage_warnings(form, grid);

    let axis = grid.x_rule();
    let points = x_points(&axis, n);
    let bases: Vec<&BasisForm> = {
        let mut v: Vec<&BasisForm> = Vec::new();
        for t in &form.terms {
            if !v.contains(&&t.basis) {
                v.push(&t.basis);
            }
        }
        v
    };
    let mut groups: Vec<Group> = Vec::new();
    for (idx, t) in form.terms.iter().enumerate() {
        let basis = bases.iter().position(|b| **b == t.basis).expect("collected above");
        let found = groups
            .iter_mut()
            .find(|g| g.basis == basis && form.terms[g.members[0]].coef.b == t.coef.b);
        match found {
            Some(g) => g.members.push(idx),
            None => {
                let x_values = points.iter().map(|(x, _)| t.coef.x_factor(x)).collect();
                groups.push(Group {
                    basis,
                    x_values,
                    members: vec![idx],
                });
            }
        }
    }
    let x_weights: Vec<f64> = points.iter().map(|(_, w)| *w).collect();

    let slice = |t: f64| -> f64 {
        let coeffs: Vec<Complex64> = groups
            .iter()
            .map(|g| g.members.iter().map(|&i| form.terms[i].coef.t_factor(t, w)).sum())
            .collect();
        if coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0)) {
            return 0.0;
        }
        let mut acc = vec![Complex64::new(0.0, 0.0); points.len() * bases.len()];
        for (g, c) in groups.iter().zip(&coeffs) {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let row = &mut acc[g.basis * points.len()..(g.basis + 1) * points.len()];
            for (a, x) in row.iter_mut().zip(&g.x_values) {
                *a += c * x;
            }
        }
        let vals: Vec<f64> = (0..points.len())
            .map(|j| {
                let sq: f64 = (0..bases.len()).map(|b| acc[b * points.len() + j].norm_sqr()).sum();
                x_weights[j] * pow_half(sq, p)
            })
            .collect();
        pairwise_sum(&vals)
    };

    let t_rule = grid.t_rule();
    let contributions: Vec<f64> = t_rule.par_iter().map(|&(t, wt)| wt * slice(t)).collect();
    let integral = pairwise_sum(&contributions);
    if !integral.is_finite() {
        return Err(FormError::InvalidParameter("norm integral is not finite".into()));
    }

    let edge = slice(grid.t_min).max(slice(grid.t_max));
    let peak = contributions
        .iter()
        .zip(&t_rule)
        .map(|(c, (_, wt))| c / wt)
        .fold(0.0, f64::max);
    if peak > 0.0 && edge > COVERAGE_TOL * peak {
        warnings.push(format!(
            "integrand at the t-range ends is {:.3e} of its peak; the grid may not cover the form",
            edge / peak
        ));
    }
    Ok(LpNorm {
        p,
        value: integral.powf(1.0 / p),
        integral,
        warnings,
    })
}

fn pow_half(sq: f64, p: f64) -> f64 {
    if p == 2.0 {
        sq
    } else if p == 1.0 {
        sq.sqrt()
    } else {
        sq.powf(0.5 * p)
    }
}

fn x_points(axis: &[(f64, f64)], n: usize) -> Vec<(Vec<f64>, f64)> {
    let mut pts = vec![(Vec::with_capacity(n), 1.0)];
    for _ in 0..n {
        let mut next = Vec::with_capacity(pts.len() * axis.len());
        for (x, w) in &pts {
            for &(xi, wi) in axis {
                let mut v = x.clone();
                v.push(xi);
                next.push((v, w * wi));
            }
        }
        pts = next;
    }
    pts
}

fn coverage_warnings(form: &TemplateForm, grid: &QuadratureGrid) -> Vec<String> {
    let mut out = Vec::new();
    for term in &form.terms {
        if let Some((a, b)) = term.coef.c.support() {
            if a < grid.t_min - 1e-12 || b > grid.t_max + 1e-12 {
                out.push(format!(
                    "y-support log range [{a}, {b}] exceeds grid [{}, {}]",
                    grid.t_min, grid.t_max
                ));
            }
        }
        for (i, prof) in term.coef.b.iter().enumerate() {
            if let Some((a, b)) = prof.support() {
                if a < -grid.half_width - 1e-12 || b > grid.half_width + 1e-12 {
                    out.push(format!(
                        "x_{} support [{a}, {b}] exceeds grid half-width {}",
                        i + 1,
                        grid.half_width
                    ));
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}
