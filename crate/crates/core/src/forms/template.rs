//! Template forms and their exterior calculus on the half-space model.
//!
//! The metric is `y^{-2}(dx² + dy²)` on `R^N × (0, ∞)`. Two independent
//! routes to the Hodge Laplacian are provided: the product rule
//! `Δ(fη) = fΔη − 2∇_{∇f}η + (Δf)η` on top of the eigen-actions of
//! `y^μ · basis`, and `dδ + δd` from coordinate formulas for `d` and `δ`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::basis::{BasisForm, Coord, Y};
use super::coefficient::{merge_terms, CoefficientTerm};
use super::FormError;

fn re(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FormTerm {
    pub coef: CoefficientTerm,
    pub basis: BasisForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TemplateForm {
    /// Ambient `N` (the space is `H^{N+1}`).
    #[serde(rename = "N")]
    pub n: u32,
    pub degree: u32,
    pub terms: Vec<FormTerm>,
}

/// Where the product rule splits a term `y^μ g · e` into `f · η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Split {
    /// `η = y^μ e`, `f` is the rest: uses the eigen-actions at exponent `μ`.
    Power,
    /// `η = e`, `f` carries the full coefficient.
    Bare,
}

impl TemplateForm {
    pub fn zero(n: u32, degree: u32) -> Self {
        Self {
            n,
            degree,
            terms: Vec::new(),
        }
    }

    pub fn single(n: u32, coef: CoefficientTerm, basis: BasisForm) -> Result<Self, FormError> {
        let degree = basis.degree();
        Self::from_terms(n, degree, vec![(coef, basis)])
    }

    pub fn from_terms(
        n: u32,
        degree: u32,
        terms: Vec<(CoefficientTerm, BasisForm)>,
    ) -> Result<Self, FormError> {
        if n == 0 {
            return Err(FormError::ZeroDimension);
        }
        if degree > n + 1 {
            return Err(FormError::DegreeTooLarge { n, k: degree });
        }
        for (c, b) in &terms {
            if b.degree() != degree {
                return Err(FormError::MixedDegree {
                    expected: degree,
                    found: b.degree(),
                });
            }
            if b.max_index() > n {
                return Err(FormError::InvalidMultiIndex(b.indices.clone()));
            }
            if c.ambient() != n {
                return Err(FormError::AmbientMismatch {
                    expected: n,
                    found: c.ambient(),
                });
            }
        }
        Ok(Self::assemble(n, degree, terms))
    }

    fn assemble(n: u32, degree: u32, terms: Vec<(CoefficientTerm, BasisForm)>) -> Self {
        let terms = merge_terms(terms)
            .into_iter()
            .map(|(coef, basis)| FormTerm { coef, basis })
            .collect();
        Self { n, degree, terms }
    }

    fn pairs(&self) -> impl Iterator<Item = (&CoefficientTerm, &BasisForm)> {
        self.terms.iter().map(|t| (&t.coef, &t.basis))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        let terms = self
            .pairs()
            .map(|(c, b)| (c.clone().scaled(s), b.clone()))
            .collect();
        Self::assemble(self.n, self.degree, terms)
    }

    pub fn add(&self, other: &Self) -> Result<Self, FormError> {
        if other.n != self.n {
            return Err(FormError::AmbientMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        if other.degree != self.degree && !other.is_zero() && !self.is_zero() {
            return Err(FormError::MixedDegree {
                expected: self.degree,
                found: other.degree,
            });
        }
        let degree = if self.is_zero() { other.degree } else { self.degree };
        let terms = self
            .pairs()
            .chain(other.pairs())
            .map(|(c, b)| (c.clone(), b.clone()))
            .collect();
        Ok(Self::assemble(self.n, degree, terms))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, FormError> {
        self.add(&other.scaled(re(-1.0)))
    }

    /// When every term is a multiple of a term of `base`, the common factor.
    pub fn eigen_multiple_of(&self, base: &TemplateForm) -> Option<Complex64> {
        if base.terms.len() != 1 {
            return None;
        }
        let b = &base.terms[0];
        match self.terms.as_slice() {
            [] => Some(re(0.0)),
            [t] if t.basis == b.basis && t.coef.like(&b.coef) => Some(t.coef.scale / b.coef.scale),
            _ => None,
        }
    }

    pub fn check_evaluable(&self) -> Result<(), FormError> {
        self.terms.iter().try_for_each(|t| t.coef.check_evaluable())
    }

    /// Coefficients per basis form at `(x, y)`.
    pub fn eval(&self, x: &[f64], y: f64) -> BTreeMap<BasisForm, Complex64> {
        let mut out = BTreeMap::new();
        for (c, b) in self.pairs() {
            *out.entry(b.clone()).or_insert(re(0.0)) += c.eval(x, y);
        }
        out
    }

    /// Hyperbolic pointwise norm `|ω|` at `(x, y)`; basis forms are orthogonal with `|e| = y^k`.
    pub fn pointwise_norm(&self, x: &[f64], y: f64) -> f64 {
        let s: f64 = self.eval(x, y).values().map(|v| v.norm_sqr()).sum();
        s.sqrt() * y.powi(self.degree as i32)
    }

    /// Exterior derivative.
    pub fn exterior_derivative(&self) -> Self {
        let mut out = Vec::new();
        for (c, e) in self.pairs() {
            for a in 0..=self.n {
                let Some((sign, eb)) = e.wedge_left(a) else {
                    continue;
                };
                for g in c.d(a) {
                    out.push((g.scaled(re(sign)), eb.clone()));
                }
            }
        }
        Self::assemble(self.n, self.degree + 1, out)
    }

    /// Codifferential, the formal L²-adjoint of `d`.
    ///
    /// Per term of degree `k`:
    /// `δ(f e_K) = −y^{N+3−2k} Σ_{a∈K} (−1)^{pos(a)} ∂_a(y^{2k−N−1} f) e_{K∖a}`.
    pub fn codifferential(&self) -> Self {
        if self.degree == 0 {
            return Self::zero(self.n, 0);
        }
        let k = f64::from(self.degree);
        let n = f64::from(self.n);
        let mut out = Vec::new();
        for (c, e) in self.pairs() {
            let g = c.clone().shifted(re(2.0 * k - n - 1.0));
            for a in e.coords() {
                let (sign, eb) = e.contract(a).expect("coordinate taken from the form");
                for h in g.d(a) {
                    out.push((h.shifted(re(n + 3.0 - 2.0 * k)).scaled(re(-sign)), eb.clone()));
                }
            }
        }
        Self::assemble(self.n, self.degree - 1, out)
    }

    /// `dδ + δd`.
    pub fn hodge_laplacian(&self) -> Self {
        let a = self.codifferential().exterior_derivative();
        let b = self.exterior_derivative().codifferential();
        let terms = a
            .pairs()
            .chain(b.pairs())
            .map(|(c, e)| (c.clone(), e.clone()))
            .collect();
        Self::assemble(self.n, self.degree, terms)
    }

    /// Laplacian through the product rule with the default split.
    pub fn laplacian(&self) -> Self {
        self.laplacian_product_rule(Split::Power)
    }

    pub fn laplacian_product_rule(&self, split: Split) -> Self {
        let n = f64::from(self.n);
        let mut out = Vec::new();
        for (c, e) in self.pairs() {
            let k = f64::from(e.degree());
            let (mu_b, f) = match split {
                Split::Power => {
                    let mut f = c.clone();
                    f.mu = re(0.0);
                    (c.mu, f)
                }
                Split::Bare => (re(0.0), c.clone()),
            };
            // fΔη
            let lam = base_eigenvalue(self.n, e, mu_b);
            out.push((f.clone().shifted(mu_b).scaled(lam), e.clone()));
            // −2∇_{∇f}η, with ∇f = y²(f_y ∂y + Σ f_i ∂x_i)
            let fy = f.d_y();
            for g in &fy {
                out.push((g.clone().shifted(mu_b + 1.0).scaled(-2.0 * (mu_b + k)), e.clone()));
            }
            for i in 1..=self.n {
                let Some(fi) = f.d_x(i) else { continue };
                for (sign, eb) in covariant_x(e, i) {
                    out.push((fi.clone().shifted(mu_b + 1.0).scaled(re(-2.0 * sign)), eb));
                }
                // (Δf)η, x part: −y² Σ f_ii
                if let Some(fii) = fi.d_x(i) {
                    out.push((fii.shifted(mu_b + 2.0).scaled(re(-1.0)), e.clone()));
                }
            }
            // (Δf)η, y part: −y² f_yy + (N−1) y f_y
            for g in &fy {
                out.push((g.clone().shifted(mu_b + 1.0).scaled(re(n - 1.0)), e.clone()));
                for h in g.d_y() {
                    out.push((h.shifted(mu_b + 2.0).scaled(re(-1.0)), e.clone()));
                }
            }
        }
        Self::assemble(self.n, self.degree, out)
    }
}

/// Eigenvalue of `Δ` on `y^μ · e`:
/// `−(μ+1)(μ−N−1+2k)` for `dy∧dx^I`, `−μ(μ−N+2k)` for `dx^J`.
pub fn base_eigenvalue(n: u32, e: &BasisForm, mu: Complex64) -> Complex64 {
    let n = f64::from(n);
    let k = f64::from(e.degree());
    if e.has_dy {
        -(mu + 1.0) * (mu - n - 1.0 + 2.0 * k)
    } else {
        -mu * (mu - n + 2.0 * k)
    }
}

/// Levi-Civita derivative of a basis form along `∂x_i`, as `(coefficient of 1/y, basis)` pairs.
///
/// Built from the 1-form rules `D_{∂x_i} dy = −dx^i/y`, `D_{∂x_i} dx^j = δ_ij dy/y`
/// applied slot by slot.
pub fn covariant_x(e: &BasisForm, i: u32) -> Vec<(f64, BasisForm)> {
    let coords = e.coords();
    let mut out = Vec::new();
    for (pos, &a) in coords.iter().enumerate() {
        let (replacement, factor) = if a == Y {
            (i, -1.0)
        } else if a == i {
            (Y, 1.0)
        } else {
            continue;
        };
        let mut slots = coords.clone();
        slots[pos] = replacement;
        if let Some((sign, b)) = sort_slots(&slots) {
            out.push((factor * sign, b));
        }
    }
    out
}

fn sort_slots(slots: &[Coord]) -> Option<(f64, BasisForm)> {
    let mut acc = BasisForm::unit();
    let mut sign = 1.0;
    for &a in slots.iter().rev() {
        let (s, next) = acc.wedge_left(a)?;
        sign *= s;
        acc = next;
    }
    Some((sign, acc))
}

/// Covariant derivative of a basis form along a coordinate direction (`0 = ∂y`).
pub fn covariant_derivative(n: u32, e: &BasisForm, direction: Coord) -> Result<TemplateForm, FormError> {
    if direction > n || e.max_index() > n {
        return Err(FormError::InvalidMultiIndex(vec![direction]));
    }
    let one_over_y = CoefficientTerm::power(n, re(-1.0));
    let terms = if direction == Y {
        vec![(one_over_y.scaled(re(f64::from(e.degree()))), e.clone())]
    } else {
        covariant_x(e, direction)
            .into_iter()
            .map(|(s, b)| (one_over_y.clone().scaled(re(s)), b))
            .collect()
    };
    TemplateForm::from_terms(n, e.degree(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::Profile;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn power_form(n: u32, mu: Complex64, e: BasisForm) -> TemplateForm {
        TemplateForm::single(n, CoefficientTerm::power(n, mu), e).unwrap()
    }

    #[test]
    fn covariant_table() {
        let e = BasisForm::dy_dx(&[1]).unwrap();
        let f = covariant_derivative(3, &e, Y).unwrap();
        assert_eq!(f.terms.len(), 1);
        assert_eq!(f.terms[0].coef.scale, c(2.0, 0.0));
        assert_eq!(f.terms[0].coef.mu, c(-1.0, 0.0));
        // D_{∂x_1}(dx^2) = −(1/y) ι(∂x_1)(dy∧dx^2) = 0
        assert!(covariant_derivative(3, &BasisForm::dx(&[2]).unwrap(), 1).unwrap().is_zero());
        // D_{∂x_1}(dx^{12}) = −(1/y) ι(∂x_1)(dy∧dx^{12}) = (1/y) dy∧dx^2
        let g = covariant_derivative(3, &BasisForm::dx(&[1, 2]).unwrap(), 1).unwrap();
        assert_eq!(g.terms.len(), 1);
        assert_eq!(g.terms[0].basis, BasisForm::dy_dx(&[2]).unwrap());
        assert_eq!(g.terms[0].coef.scale, c(1.0, 0.0));
    }

    #[test]
    fn codifferential_of_powers() {
        let e = BasisForm::dx(&[1, 2]).unwrap();
        assert!(power_form(3, c(2.0, 0.0), e).codifferential().is_zero());
        let mu = c(1.7, 0.3);
        let d = power_form(3, mu, BasisForm::dy_dx(&[1]).unwrap()).codifferential();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].basis, BasisForm::dx(&[1]).unwrap());
        assert_eq!(d.terms[0].coef.mu, mu + 1.0);
        assert!((d.terms[0].coef.scale + mu).norm() < 1e-15);
        // y^{N+1-2k} dy∧dx^I is annihilated
        assert!(power_form(4, c(-1.0, 0.0), BasisForm::dy_dx(&[1, 2]).unwrap())
            .codifferential()
            .is_zero());
    }

    #[test]
    fn exterior_derivative_examples() {
        let d = power_form(2, c(1.0, 0.0), BasisForm::dx(&[1]).unwrap()).exterior_derivative();
        assert_eq!(d.terms.len(), 1);
        assert_eq!(d.terms[0].basis, BasisForm::dy_dx(&[1]).unwrap());
        assert_eq!(d.terms[0].coef.mu, c(0.0, 0.0));
        assert!(power_form(2, c(0.0, 0.0), BasisForm::dx(&[1, 2]).unwrap())
            .exterior_derivative()
            .is_zero());
        let x1 = CoefficientTerm::power(2, c(0.0, 0.0)).with_b(1, Profile::polynomial(vec![0.0, 1.0]));
        let f = TemplateForm::single(2, x1, BasisForm::dx(&[1]).unwrap()).unwrap();
        assert!(f.exterior_derivative().is_zero());
    }

    #[test]
    fn laplacian_examples() {
        let mu = c(0.4, -1.1);
        let j = BasisForm::dx(&[1]).unwrap();
        let f = power_form(3, mu, j.clone());
        let lam = f.laplacian().eigen_multiple_of(&f).unwrap();
        assert!((lam + mu * (mu - 3.0 + 2.0)).norm() < 1e-14);
        assert!(power_form(3, c(1.0, 0.0), j).laplacian().is_zero());
        let g = power_form(3, c(2.0, 0.0), BasisForm::dy_dx(&[1]).unwrap());
        assert_eq!(g.laplacian().eigen_multiple_of(&g), Some(c(-6.0, 0.0)));
    }

    #[test]
    fn routes_agree_on_pure_powers() {
        for n in 1..=4u32 {
            for has_dy in [false, true] {
                for len in 0..=n {
                    let idx: Vec<u32> = (1..=len).collect();
                    let e = if has_dy {
                        BasisForm::dy_dx(&idx).unwrap()
                    } else {
                        BasisForm::dx(&idx).unwrap()
                    };
                    let mu = c(0.3 * f64::from(len) - 0.5, 0.7);
                    let f = power_form(n, mu, e);
                    let a = f.laplacian().eigen_multiple_of(&f).unwrap();
                    let b = f.laplacian_product_rule(Split::Bare).eigen_multiple_of(&f).unwrap();
                    let h = f.hodge_laplacian().eigen_multiple_of(&f).unwrap();
                    assert!((a - b).norm() < 1e-12, "n={n} {f:?}");
                    assert!((a - h).norm() < 1e-12, "n={n} {f:?}");
                }
            }
        }
    }

    #[test]
    fn function_laplacian_of_power() {
        let mu = c(1.3, 0.2);
        let f = power_form(3, mu, BasisForm::unit());
        let lam = f.laplacian().eigen_multiple_of(&f).unwrap();
        assert!((lam + mu * (mu - 3.0)).norm() < 1e-14);
    }

    #[test]
    fn pointwise_norm_scales_with_degree() {
        let f = power_form(2, c(0.0, 0.0), BasisForm::dx(&[1, 2]).unwrap());
        assert!((f.pointwise_norm(&[0.0, 0.0], 0.5) - 0.25).abs() < 1e-15);
    }
}
