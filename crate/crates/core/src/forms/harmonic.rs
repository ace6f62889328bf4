//! The explicit middle-degree form
//! `φ = e^{-√ν y} e^{i√ν x_j} (dx^j∧dx^I + i dy∧dx^I)` on `H^{N+1}`, `N` odd.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::profile::Profile;
use crate::quad::integrate;

use super::basis::BasisForm;
use super::coefficient::CoefficientTerm;
use super::template::TemplateForm;
use super::FormError;

pub fn middle_harmonic(nu: f64, j: u32, indices: &[u32], n: u32) -> Result<TemplateForm, FormError> {
    if n % 2 == 0 {
        return Err(FormError::InvalidParameter(format!("N={n} must be odd")));
    }
    if !(nu > 0.0 && nu.is_finite()) {
        return Err(FormError::InvalidParameter(format!("ν={nu} must be positive")));
    }
    if indices.len() as u32 != (n - 1) / 2 {
        return Err(FormError::InvalidParameter(format!(
            "|I|={} must equal (N-1)/2={}",
            indices.len(),
            (n - 1) / 2
        )));
    }
    if j == 0 || j > n {
        return Err(FormError::InvalidMultiIndex(vec![j]));
    }
    let dx_i = BasisForm::dx(indices)?;
    if dx_i.max_index() > n {
        return Err(FormError::InvalidMultiIndex(indices.to_vec()));
    }
    let (sign, dxj_dxi) = dx_i
        .wedge_left(j)
        .ok_or_else(|| FormError::InvalidParameter(format!("dx^{j} already occurs in dx^I")))?;
    let (_, dy_dxi) = dx_i.wedge_left(0).expect("dy never clashes with dx^I");
    let root = nu.sqrt();
    let coef = CoefficientTerm::power(n, Complex64::new(0.0, 0.0))
        .with_c(Profile::exp_decay(root))
        .with_b(j, Profile::oscillation(root));
    TemplateForm::from_terms(
        n,
        dx_i.degree() + 1,
        vec![
            (coef.clone().scaled(Complex64::new(sign, 0.0)), dxj_dxi),
            (coef.scaled(Complex64::new(0.0, 1.0)), dy_dxi),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicResiduals {
    pub laplacian: f64,
    pub exterior: f64,
    pub codifferential: f64,
}

/// Largest pointwise norms of `Δφ`, `dφ`, `δφ` over the sample points.
pub fn harmonic_residuals(form: &TemplateForm, samples: &[(Vec<f64>, f64)]) -> HarmonicResiduals {
    let lap = form.laplacian();
    let d = form.exterior_derivative();
    let delta = form.codifferential();
    let sup = |f: &TemplateForm| {
        samples
            .iter()
            .map(|(x, y)| f.pointwise_norm(x, *y))
            .fold(0.0, f64::max)
    };
    HarmonicResiduals {
        laplacian: sup(&lap),
        exterior: sup(&d),
        codifferential: sup(&delta),
    }
}

/// `∫_0^∞ |φ|² y^{-N-1} dy` at fixed `x`, integrated through the form's pointwise norm.
pub fn vertical_square_integral(form: &TemplateForm, x: &[f64]) -> Result<f64, FormError> {
    let n = f64::from(form.n);
    let f = |y: f64| {
        if y <= 0.0 {
            return 0.0;
        }
        form.pointwise_norm(x, y).powi(2) * y.powf(-n - 1.0)
    };
    // the integrand is bounded near 0 and decays like e^{-2√ν y}; integrate until it is negligible
    let mut upper = 1.0;
    while f(upper) > 1e-30 && upper < 1e6 {
        upper *= 2.0;
    }
    integrate(f, 0.0, upper, 1e-14, 1e-12)
        .map(|r| r.value)
        .map_err(|e| FormError::Unsupported(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> Vec<(Vec<f64>, f64)> {
        let mut out = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                let y = 0.2 + 0.7 * f64::from(a);
                let x: Vec<f64> = (0..n).map(|i| -2.0 + 0.9 * f64::from(b) + 0.3 * i as f64).collect();
                out.push((x, y));
            }
        }
        out
    }

    #[test]
    fn harmonic_in_dimension_three_and_five() {
        for (n, j, idx) in [(3u32, 1u32, vec![2u32]), (3, 3, vec![1]), (5, 2, vec![1, 4]), (1, 1, vec![])] {
            let phi = middle_harmonic(1.7, j, &idx, n).unwrap();
            let r = harmonic_residuals(&phi, &grid(n as usize));
            assert!(r.laplacian < 1e-12, "N={n} {r:?}");
            assert!(r.exterior < 1e-12, "N={n} {r:?}");
            assert!(r.codifferential < 1e-12, "N={n} {r:?}");
        }
    }

    #[test]
    fn finite_vertical_integral() {
        for nu in [0.5, 1.0, 4.0] {
            let phi = middle_harmonic(nu, 1, &[2], 3).unwrap();
            let v = vertical_square_integral(&phi, &[0.3, 0.0, 1.0]).unwrap();
            assert!((v - 1.0 / nu.sqrt()).abs() < 1e-9, "ν={nu}: {v}");
        }
    }

    #[test]
    fn rejects_clash_and_bad_sizes() {
        assert!(middle_harmonic(1.0, 2, &[2], 3).is_err());
        assert!(middle_harmonic(1.0, 1, &[2, 3], 3).is_err());
        assert!(middle_harmonic(1.0, 1, &[2], 4).is_err());
        assert!(middle_harmonic(-1.0, 1, &[2], 3).is_err());
    }
}
