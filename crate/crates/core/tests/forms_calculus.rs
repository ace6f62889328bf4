use lpforms::forms::{BasisForm, CoefficientTerm, Split, TemplateForm};
use lpforms::profile::Profile;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn sample_points(n: usize) -> Vec<(Vec<f64>, f64)> {
    let mut pts = Vec::new();
    for (i, y) in [0.35, 0.8, 1.6, 2.9].iter().enumerate() {
        for j in 0..3 {
            let x: Vec<f64> = (0..n).map(|a| -0.7 + 0.45 * ((i + 2 * j + a) % 4) as f64).collect();
            pts.push((x, *y));
        }
    }
    pts
}

fn max_diff(a: &TemplateForm, b: &TemplateForm, n: usize) -> f64 {
    let diff = a.sub(b).unwrap();
    sample_points(n)
        .iter()
        .map(|(x, y)| diff.pointwise_norm(x, *y))
        .fold(0.0, f64::max)
}

fn max_norm(a: &TemplateForm, n: usize) -> f64 {
    sample_points(n)
        .iter()
        .map(|(x, y)| a.pointwise_norm(x, *y))
        .fold(0.0, f64::max)
}

/// A two-basis 2-form on H^4 with every kind of coefficient factor.
fn mixed_form() -> TemplateForm {
    let n = 3;
    let t1 = CoefficientTerm::power(n, c(0.7, 1.3))
        .with_logpow(1)
        .with_c(Profile::plateau(-2.5, 2.0, 1.0))
        .with_b(1, Profile::bump(0.0, 1.2))
        .with_b(3, Profile::polynomial(vec![1.0, 0.5, -0.3]));
    let t2 = CoefficientTerm::power(n, c(-0.4, 0.0))
        .scaled(c(0.0, 2.0))
        .with_c(Profile::exp_decay(0.8))
        .with_b(2, Profile::oscillation(1.7));
    TemplateForm::from_terms(
        n,
        2,
        vec![
            (t1.clone(), BasisForm::dy_dx(&[2]).unwrap()),
            (t2, BasisForm::dx(&[1, 3]).unwrap()),
            (t1.scaled(c(-0.5, 0.0)), BasisForm::dx(&[2, 3]).unwrap()),
        ],
    )
    .unwrap()
}

#[test]
fn laplacian_routes_agree_on_general_coefficients() {
    let f = mixed_form();
    let a = f.laplacian();
    let bare = f.laplacian_product_rule(Split::Bare);
    let hodge = f.hodge_laplacian();
    let scale = max_norm(&a, 3);
    assert!(scale > 1e-3);
    assert!(max_diff(&a, &bare, 3) <= 1e-12 * scale, "bare split");
    assert!(max_diff(&a, &hodge, 3) <= 1e-12 * scale, "dδ + δd");
}

#[test]
fn d_squared_and_delta_squared_vanish() {
    let f = mixed_form();
    let dd = f.exterior_derivative().exterior_derivative();
    let ss = f.codifferential().codifferential();
    assert!(max_norm(&dd, 3) <= 1e-12);
    assert!(max_norm(&ss, 3) <= 1e-12);
}

#[test]
fn function_laplacian_matches_log_stencil() {
    // f = y^μ as a function of t = log y: Δf = -f_tt + N f_t (no x dependence)
    let n = 3;
    let mu = c(1.4, 0.0);
    let f = TemplateForm::single(n, CoefficientTerm::power(n, mu), BasisForm::unit()).unwrap();
    let exact = f.laplacian().eval(&[0.0; 3], 1.7)[&BasisForm::unit()];
    let t0 = 1.7f64.ln();
    let val = |t: f64| (mu * t).exp();
    let mut errs = Vec::new();
    for h in [0.1, 0.05, 0.025] {
        let ftt = (val(t0 + h) - 2.0 * val(t0) + val(t0 - h)) / (h * h);
        let ft = (val(t0 + h) - val(t0 - h)) / (2.0 * h);
        errs.push((-ftt + f64::from(n) * ft - exact).norm());
    }
    for w in errs.windows(2) {
        assert!((w[0] / w[1]).log2() >= 1.9, "{errs:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routes_agree_on_random_single_terms(
        n in 1u32..=4,
        mask in 0u32..32,
        mu_re in -2.0f64..2.0,
        mu_im in -2.0f64..2.0,
        logpow in 0u32..3,
        bump_axis in 1u32..=4,
    ) {
        let has_dy = mask & 1 == 1;
        let idx: Vec<u32> = (1..=n).filter(|i| mask & (1 << i) != 0).collect();
        let e = if has_dy { BasisForm::dy_dx(&idx).unwrap() } else { BasisForm::dx(&idx).unwrap() };
        let mut t = CoefficientTerm::power(n, c(mu_re, mu_im))
            .with_logpow(logpow)
            .with_c(Profile::plateau(-2.0, 1.5, 0.8));
        if bump_axis <= n {
            t = t.with_b(bump_axis, Profile::bump(0.1, 1.5));
        }
        let f = TemplateForm::single(n, t, e).unwrap();
        let a = f.laplacian();
        let h = f.hodge_laplacian();
        let scale = max_norm(&a, n as usize).max(max_norm(&h, n as usize)).max(1.0);
        prop_assert!(max_diff(&a, &h, n as usize) <= 1e-11 * scale);
        let dd = f.exterior_derivative().exterior_derivative();
        prop_assert!(max_norm(&dd, n as usize) <= 1e-12 * scale);
    }

    #[test]
    fn norm_homogeneity_pointwise(re_s in -3.0f64..3.0, im_s in -3.0f64..3.0) {
        let f = mixed_form();
        let s = c(re_s, im_s);
        let g = f.scaled(s);
        for (x, y) in sample_points(3) {
            let lhs = g.pointwise_norm(&x, y);
            let rhs = s.norm() * f.pointwise_norm(&x, y);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs));
        }
    }
}
