//! The acceptance suite: twelve criteria, each a list of [`CheckReport`]s with a runtime budget.
//!
//! Shared by the `acceptance` integration test and the `check-all` command.

use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::forms::{
    lp_norm, middle_harmonic, weyl_quotient, BasisForm, CoefficientTerm, TemplateForm,
};
use crate::forms::harmonic::harmonic_residuals;
use crate::forms::weyl::{decay_exponent, weyl_grid};
use crate::kernels::appendix::{fourier_decay_check, symbol_decay_check, taylor_checks};
use crate::kernels::heat::{gaussian_bound_check, heat_grid, heat_mass, impo_check, resolvent_mass, ResolventParams};
use crate::kernels::schur::schur_bound_check;
use crate::kernels::volume::volume_growth;
use crate::kernels::wave::{wave_reports, WaveSetup};
use crate::middle::{measured_log_slope, measured_threshold, tail_exponent, threshold, MiddleFamily};
use crate::profile::Profile;
use crate::radial::growth::growth_data;
use crate::radial::{is_lp_integrable_scaled, IntegrateOptions, RadialProblem};
use crate::regions::{boundary_point, contains_with_margin, region_excess, Membership, RegionSpec, SpectralPoint};
use crate::report::CheckReport;

/// Deliberate faults for mutation testing of the suite itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Perturbation {
    /// Multiplies the threshold `N(1/2 - 1/p)` of the radial integrability criterion.
    pub integrability_factor: f64,
}

impl Default for Perturbation {
    fn default() -> Self {
        Self { integrability_factor: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    pub seed: u64,
    pub perturbation: Perturbation,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self { seed: 20240601, perturbation: Perturbation::default() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u32,
    pub title: String,
    pub pass: bool,
    pub runtime_ms: u64,
    pub budget_ms: u64,
    pub checks: Vec<CheckReport>,
}

impl CriterionResult {
    pub fn summary_line(&self) -> String {
        let failed = self.checks.iter().filter(|c| !c.pass).count();
        format!(
            "[{}] criterion {:>2}: {} ({} checks, {} failed, {} ms of {} ms budget)",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.checks.len(),
            failed,
            self.runtime_ms,
            self.budget_ms
        )
    }
}

pub const CRITERIA: [(u32, &str, u64); 12] = [
    (1, "eigenform eigenvalues lie on the region boundary", 1_000),
    (2, "closed-form membership agrees with brute force", 10_000),
    (3, "approximate eigenform quotient decays like 1/n", 60_000),
    (4, "middle-degree form is harmonic, closed and co-closed", 5_000),
    (5, "radial ODE growth matches the predicted exponent", 30_000),
    (6, "radial integrability agrees with the region interior", 1_000),
    (7, "middle-degree L^p threshold is 2N/(N+1)", 30_000),
    (8, "heat and resolvent kernel identities on H^3", 30_000),
    (9, "finite propagation speed of radial waves", 60_000),
    (10, "volume growth rate of geodesic balls", 1_000),
    (11, "Taylor remainder, Fourier decay and symbol bounds", 10_000),
    (12, "property suites", 60_000),
];

/// Runs one criterion. Errors inside a criterion become failing checks.
pub fn run_criterion(id: u32, opts: &SuiteOptions) -> CriterionResult {
    let (_, title, budget) = CRITERIA.iter().copied().find(|c| c.0 == id).expect("criterion id in 1..=12");
    let start = Instant::now();
    let checks = match id {
        1 => region_eigenform_agreement(),
        2 => membership_brute_force(opts.seed),
        3 => weyl_decay(),
        4 => half_space_harmonic(),
        5 => ode_growth(),
        6 => integrability_interior(opts.seed, opts.perturbation),
        7 => middle_threshold(),
        8 => heat_resolvent(),
        9 => wave_cone(),
        10 => volume(),
        11 => appendix(),
        12 => properties(opts.seed),
        _ => unreachable!(),
    };
    let runtime_ms = start.elapsed().as_millis() as u64;
    let pass = !checks.is_empty() && checks.iter().all(|c| c.pass) && runtime_ms <= budget;
    CriterionResult { id, title: title.to_string(), pass, runtime_ms, budget_ms: budget, checks }
}

pub fn run_all(opts: &SuiteOptions) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|c| run_criterion(c.0, opts)).collect()
}

fn error_report(name: &str, anchor: &str, err: impl std::fmt::Display) -> CheckReport {
    CheckReport::holds(name, anchor, false).with_note(err.to_string())
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn region_eigenform_agreement() -> Vec<CheckReport> {
    const ANCHOR: &str = "eigenvalue of y^(N/p-k+is) dx^J traces the boundary of Q_{p,k}";
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    for n in 1..=6u32 {
        for k in 0..=n / 2 {
            for p in [1.0, 1.5, 2.0] {
                let spec = match RegionSpec::new(n, k, p) {
                    Ok(s) => s,
                    Err(e) => return vec![error_report("region spec", ANCHOR, e)],
                };
                let j: Vec<u32> = (1..=k).collect();
                let basis = BasisForm::dx(&j).expect("increasing indices");
                for s in linspace(-5.0, 5.0, 21) {
                    let mu = crate::forms::weyl::weyl_exponent(&spec, s);
                    let form = TemplateForm::single(n, CoefficientTerm::power(n, mu), basis.clone())
                        .expect("valid single term");
                    let Some(lambda) = form.laplacian().eigen_multiple_of(&form) else {
                        return vec![error_report("eigenform", ANCHOR, format!("not an eigenform at N={n} k={k}"))];
                    };
                    let target = boundary_point(&spec, s).as_complex();
                    worst = worst.max((lambda - target).norm());
                    cases += 1;
                }
            }
        }
    }
    vec![CheckReport::at_most(
        &format!("max |eigenvalue - boundary point| over {cases} cases"),
        ANCHOR,
        worst,
        1e-10,
    )]
}

/// Closed membership by searching `z = a + ib`, `|b| <= d`: for each sampled `b`
/// the real part making `Im(v + z²) = y` is forced, and the region is reached
/// once the resulting real part is at most `x`.
pub fn brute_force_closed(spec: &RegionSpec, lambda: SpectralPoint, samples: usize, margin: f64) -> bool {
    let g = spec.geometry();
    let (x, y) = (lambda.re, lambda.im);
    if g.half_width == 0.0 {
        return y.abs() <= margin && x >= g.vertex - margin;
    }
    (0..samples).any(|i| {
        let b = -g.half_width + 2.0 * g.half_width * i as f64 / (samples - 1) as f64;
        if b == 0.0 {
            // z real: only the real ray [v, ∞) is reachable
            return y.abs() <= margin && x >= g.vertex - margin;
        }
        let a = y / (2.0 * b);
        g.vertex + a * a - b * b <= x + margin
    })
}

fn membership_brute_force(seed: u64) -> Vec<CheckReport> {
    const ANCHOR: &str = "Q_{p,k} is the union of v + z^2 over |Im z| <= d";
    let specs = [(3, 0, 1.0), (3, 1, 1.5), (4, 2, 1.2), (5, 1, 3.0), (2, 1, 4.0), (6, 3, 1.0), (3, 2, 2.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0002);
    let mut out = Vec::new();
    for (n, k, p) in specs {
        let spec = RegionSpec::new(n, k, p).expect("valid spec");
        let g = spec.geometry();
        let mut disagree = 0;
        for _ in 0..1000 {
            let lam = SpectralPoint {
                re: rng.gen_range(g.vertex - g.half_width.powi(2) - 5.0..g.vertex + 20.0),
                im: if rng.gen_bool(0.05) { 0.0 } else { rng.gen_range(-15.0..15.0) },
            };
            let fast = contains_with_margin(&spec, lam, Membership::Closed, 1e-6);
            if fast != brute_force_closed(&spec, lam, 10_000, 1e-6) {
                disagree += 1;
            }
        }
        out.push(CheckReport::at_most(
            &format!("membership disagreements N={n} k={k} p={p} (1000 points)"),
            ANCHOR,
            f64::from(disagree),
            0.0,
        ));
    }
    out
}

fn weyl_decay() -> Vec<CheckReport> {
    const ANCHOR: &str = "approximate eigenforms for boundary points of Q_{p,k}";
    let spec = RegionSpec::new(3, 0, 1.0).expect("valid spec");
    let mut pts = Vec::new();
    let mut out = Vec::new();
    for n in [4u32, 8, 16, 32] {
        let q = weyl_grid(n, &spec, 0.0).and_then(|g| weyl_quotient(n, &spec, 0.0, &g));
        match q {
            Ok(q) => {
                if !q.warnings.is_empty() {
                    out.push(error_report(&format!("Weyl quotient n={n} grid coverage"), ANCHOR, q.warnings.join("; ")));
                }
                pts.push((f64::from(n), q.quotient));
            }
            Err(e) => return vec![error_report(&format!("Weyl quotient n={n}"), ANCHOR, e)],
        }
    }
    for w in pts.windows(2) {
        out.push(
            CheckReport::at_most(
                &format!("Weyl quotient ratio q({})/q({})", w[1].0, w[0].0),
                ANCHOR,
                w[1].1 / w[0].1,
                0.75,
            )
            .with_note(format!("q = {:.6e} -> {:.6e}", w[0].1, w[1].1)),
        );
    }
    out.push(CheckReport::at_most("Weyl quotient fitted decay exponent", ANCHOR, decay_exponent(&pts), -0.8));
    out
}

fn half_space_harmonic() -> Vec<CheckReport> {
    const ANCHOR: &str = "explicit middle-degree form is formally harmonic";
    let form = match middle_harmonic(2.0, 1, &[2], 3) {
        Ok(f) => f,
        Err(e) => return vec![error_report("construct middle-degree form", ANCHOR, e)],
    };
    let xs = linspace(-2.0, 2.0, 20);
    let ys: Vec<f64> = linspace((0.05f64).ln(), (5.0f64).ln(), 20).into_iter().map(f64::exp).collect();
    let mut samples = Vec::with_capacity(8000);
    for &x1 in &xs {
        for &x2 in &xs {
            for &y in &ys {
                samples.push((vec![x1, x2, 0.3], y));
            }
        }
    }
    let r = harmonic_residuals(&form, &samples);
    vec![
        CheckReport::at_most("max |Δφ| on 20^3 grid", ANCHOR, r.laplacian, 1e-10),
        CheckReport::at_most("max |dφ| on 20^3 grid", ANCHOR, r.exterior, 1e-10),
        CheckReport::at_most("max |δφ| on 20^3 grid", ANCHOR, r.codifferential, 1e-10),
    ]
}

/// Spectral parameters for the growth sweep: real and complex, inside and outside `Q_{3,1}` for `N = 3`.
pub const GROWTH_SWEEP: [(f64, f64); 24] = [
    (-3.0, 0.0),
    (-1.0, 0.0),
    (0.0, 0.0),
    (0.1, 0.0),
    (1.0, 0.0),
    (2.0, 0.0),
    (3.0, 0.0),
    (5.0, 0.0),
    (8.0, 0.0),
    (1.0, 0.5),
    (1.0, -0.5),
    (2.0, 1.5),
    (0.5, 2.0),
    (-1.0, 1.0),
    (3.0, -2.0),
    (4.0, 3.0),
    (0.0, 1.0),
    (6.0, 1.0),
    (1.0, 3.0),
    (-2.0, -1.0),
    (2.0, -0.5),
    (5.0, 4.0),
    (10.0, 2.0),
    (0.3, 0.2),
];

fn ode_growth() -> Vec<CheckReport> {
    const ANCHOR: &str = "radial solutions grow like exp((-m + a) r), lambda_o = a + ib";
    let region = RegionSpec::new(3, 1, 3.0).expect("valid spec");
    GROWTH_SWEEP
        .iter()
        .map(|&(re, im)| {
            let inside = contains_with_margin(&region, SpectralPoint { re, im }, Membership::Interior, 0.0);
            let name = format!("growth slope Λ = {re}{im:+}i ({} Q_3,1)", if inside { "inside" } else { "outside" });
            let res = RadialProblem::new(3, 1, 4.0, Complex64::new(re, im))
                .and_then(|p| growth_data(&p, &IntegrateOptions::default()));
            match res {
                Ok(g) => {
                    let mut rep = CheckReport::close(&name, ANCHOR, g.fitted_slope, g.predicted_slope, 1e-2);
                    if let Some(w) = g.warning {
                        rep = rep.with_note(w);
                    }
                    rep
                }
                Err(e) => error_report(&name, ANCHOR, e),
            }
        })
        .collect()
}

fn integrability_interior(seed: u64, perturbation: Perturbation) -> Vec<CheckReport> {
    const ANCHOR: &str = "radial L^p integrability criterion a < N(1/2 - 1/p)";
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0006);
    let (n, k) = (3u32, 1u32);
    [2.5, 3.0, 4.0]
        .iter()
        .map(|&p| {
            let spec = RegionSpec::new(n, k, p).expect("valid spec");
            let g = spec.geometry();
            let mut tested = 0;
            let mut disagree = 0;
            while tested < 200 {
                let lam = SpectralPoint { re: rng.gen_range(-2.0..6.0), im: rng.gen_range(-4.0..4.0) };
                if region_excess(&g, lam).abs() < 1e-3 {
                    continue;
                }
                tested += 1;
                let inside = contains_with_margin(&spec, lam, Membership::Interior, 0.0);
                let ode = is_lp_integrable_scaled(lam.as_complex(), p, n, k, perturbation.integrability_factor)
                    .unwrap_or(!inside);
                if ode != inside {
                    disagree += 1;
                }
            }
            CheckReport::at_most(
                &format!("integrability vs interior disagreements p={p} (200 points)"),
                ANCHOR,
                f64::from(disagree),
                0.0,
            )
        })
        .collect()
}

fn middle_threshold() -> Vec<CheckReport> {
    const ANCHOR: &str = "harmonic middle-degree forms are in L^p iff p > 2N/(N+1)";
    let mut out = Vec::new();
    for n in [3u32, 5] {
        let exact = threshold(n).expect("odd N");
        for s in [0u32, 1] {
            let family = MiddleFamily::from_sphere(n, s, 1.0);
            let measured = family.and_then(|f| measured_threshold(n, f.lambda_k, 40.0, 1.0, 2.0));
            out.push(match measured {
                Ok(m) => CheckReport::close(
                    &format!("measured L^p threshold N={n} (sphere eigenvalue index {s})"),
                    ANCHOR,
                    m,
                    exact,
                    0.02,
                ),
                Err(e) => error_report(&format!("measured L^p threshold N={n}"), ANCHOR, e),
            });
        }
        for p in [1.0, 1.5, 2.0, 3.0] {
            let f = MiddleFamily::from_sphere(n, 0, p).expect("valid family");
            out.push(CheckReport::close(
                &format!("tail exponent law N={n} p={p} at r=30"),
                ANCHOR,
                measured_log_slope(&f, 30.0),
                tail_exponent(n, p),
                1e-3,
            ));
        }
    }
    out
}

fn heat_resolvent() -> Vec<CheckReport> {
    const HEAT: &str = "heat kernel mass is at most 1 (equal to 1 on H^3)";
    const RES: &str = "resolvent kernel as Laplace transform of the heat kernel";
    let mut out = Vec::new();
    for t in [0.1, 1.0, 10.0] {
        out.push(match heat_mass(t) {
            Ok(m) => CheckReport::close(&format!("heat mass t={t}"), HEAT, m, 1.0, 1e-6),
            Err(e) => error_report(&format!("heat mass t={t}"), HEAT, e),
        });
    }
    for m in [0.5, 1.0, 2.0] {
        for xi in [1.0, 2.0, 4.0] {
            let name = format!("resolvent mass m={m} xi={xi}");
            out.push(match ResolventParams::new(m, xi).and_then(|p| resolvent_mass(&p)) {
                Ok(v) => CheckReport::close(&name, RES, v, f64::powf(xi, -2.0 * m), 1e-6),
                Err(e) => error_report(&name, RES, e),
            });
        }
    }
    let (ts, rs) = heat_grid(0.01, 10.0, 25, 10.0, 101);
    match gaussian_bound_check(&ts, &rs, 8.0) {
        Ok(r) => out.extend(r),
        Err(e) => out.push(error_report("heat Gaussian bound", HEAT, e)),
    }
    out
}

fn wave_cone() -> Vec<CheckReport> {
    match wave_reports(&WaveSetup::default(), &[8e-3, 4e-3, 2e-3, 1e-3]) {
        Ok(r) => r,
        Err(e) => vec![error_report("wave cone", "finite propagation speed at most 1", e)],
    }
}

fn volume() -> Vec<CheckReport> {
    let radii: Vec<f64> = (1..=160).map(|i| 0.25 * f64::from(i)).collect();
    let mut out = Vec::new();
    for n in [1u32, 2, 3, 5] {
        match volume_growth(n, &radii, 40.0, 0.1) {
            Ok(r) => out.extend(r),
            Err(e) => out.push(error_report(&format!("volume N={n}"), "volume growth", e)),
        }
    }
    out
}

fn appendix() -> Vec<CheckReport> {
    let mut out = Vec::new();
    let parts = [
        taylor_checks(),
        fourier_decay_check(2.0, 1.0, 0.5),
        fourier_decay_check(3.0, 2.0, 1.0),
        symbol_decay_check(Complex64::new(0.5, 1.0), 4),
    ];
    for part in parts {
        match part {
            Ok(r) => out.extend(r),
            Err(e) => out.push(error_report("one-variable lemma", "one-variable lemmas", e)),
        }
    }
    out
}

fn random_form(rng: &mut ChaCha8Rng) -> TemplateForm {
    let n = rng.gen_range(1..=4u32);
    let mut terms = Vec::new();
    let degree = rng.gen_range(0..=n);
    for _ in 0..rng.gen_range(1..=3) {
        let with_dy = degree > 0 && rng.gen_bool(0.5);
        let width = if with_dy { degree - 1 } else { degree };
        let mut pool: Vec<u32> = (1..=n).collect();
        let mut idx = Vec::new();
        for _ in 0..width {
            idx.push(pool.swap_remove(rng.gen_range(0..pool.len())));
        }
        idx.sort_unstable();
        let basis = if with_dy { BasisForm::dy_dx(&idx) } else { BasisForm::dx(&idx) }.expect("distinct indices");
        let mu = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mut coef = CoefficientTerm::power(n, mu)
            .with_logpow(rng.gen_range(0..2))
            .with_c(Profile::plateau(-2.0, 1.5, 0.8));
        let axis = rng.gen_range(1..=n);
        coef = coef.with_b(axis, Profile::bump(rng.gen_range(-0.5..0.5), 1.5));
        terms.push((coef, basis));
    }
    TemplateForm::from_terms(n, degree, terms).expect("consistent degree")
}

fn sample_points(n: u32) -> Vec<(Vec<f64>, f64)> {
    let mut pts = Vec::new();
    for (i, y) in [0.35, 0.8, 1.6, 2.9].iter().enumerate() {
        for j in 0..3 {
            let x: Vec<f64> = (0..n as usize).map(|a| -0.7 + 0.45 * ((i + 2 * j + a) % 4) as f64).collect();
            pts.push((x, *y));
        }
    }
    pts
}

fn sup_norm(f: &TemplateForm) -> f64 {
    sample_points(f.n).iter().map(|(x, y)| f.pointwise_norm(x, *y)).fold(0.0, f64::max)
}

fn properties(seed: u64) -> Vec<CheckReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_0012);
    let mut out = Vec::new();

    let mut impo_failures = 0;
    for _ in 0..100_000 {
        let (s, d, t, c2) = (
            rng.gen_range(1e-3..10.0),
            rng.gen_range(0.0..20.0),
            rng.gen_range(1e-3..20.0),
            rng.gen_range(0.1..50.0),
        );
        if !impo_check(s, d, t, c2) {
            impo_failures += 1;
        }
    }
    out.push(CheckReport::at_most(
        "essential inequality failures (1e5 samples)",
        "-d^2/(4 C2 t) - sigma^2 t <= -sigma d / sqrt(C2)",
        f64::from(impo_failures),
        0.0,
    ));

    for (p, q, r) in [(1.0, 1.0, 1.0), (2.0, 2.0, 1.0), (1.5, 3.0, 1.5)] {
        match schur_bound_check(100, 16, p, q, r, seed) {
            Ok(rep) => out.push(rep),
            Err(e) => out.push(error_report("Schur test", "Schur test", e)),
        }
    }

    let mut dd: f64 = 0.0;
    let mut ss: f64 = 0.0;
    let mut hom: f64 = 0.0;
    for _ in 0..40 {
        let f = random_form(&mut rng);
        let scale = sup_norm(&f).max(1.0);
        dd = dd.max(sup_norm(&f.exterior_derivative().exterior_derivative()) / scale);
        ss = ss.max(sup_norm(&f.codifferential().codifferential()) / scale);
        let s = Complex64::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let g = f.scaled(s);
        for (x, y) in sample_points(f.n) {
            let rhs = s.norm() * f.pointwise_norm(&x, y);
            hom = hom.max((g.pointwise_norm(&x, y) - rhs).abs() / (1.0 + rhs));
        }
    }
    out.push(CheckReport::at_most("d∘d on 40 random forms (relative sup)", "d d = 0", dd, 1e-11));
    out.push(CheckReport::at_most("δ∘δ on 40 random forms (relative sup)", "δ δ = 0", ss, 1e-11));
    out.push(CheckReport::at_most("pointwise norm homogeneity |s ω| = |s| |ω|", "norm homogeneity", hom, 1e-12));

    // L^p homogeneity and bitwise reproducibility of the parallel quadrature
    let spec = RegionSpec::new(3, 1, 1.5).expect("valid spec");
    let lp = weyl_grid(4, &spec, 0.7).and_then(|grid| {
        let f = crate::forms::weyl_form(4, &spec, 0.7)?;
        let a = lp_norm(&f, 1.5, &grid)?;
        let b = lp_norm(&f, 1.5, &grid)?;
        let c = lp_norm(&f.scaled(Complex64::new(0.0, -2.5)), 1.5, &grid)?;
        Ok((a.value, b.value, c.value))
    });
    match lp {
        Ok((a, b, c)) => {
            out.push(CheckReport::close("L^p norm homogeneity ‖2.5i ω‖ = 2.5 ‖ω‖", "norm homogeneity", c / a, 2.5, 1e-12));
            out.push(CheckReport::holds("L^p norm is bitwise reproducible", "determinism of outputs", a.to_bits() == b.to_bits()));
        }
        Err(e) => out.push(error_report("L^p norm", "norm homogeneity", e)),
    }
    let reruns: Vec<String> = (0..2)
        .map(|_| {
            let mut reps = membership_brute_force(seed);
            reps.extend(schur_bound_check(10, 8, 2.0, 2.0, 1.0, seed).into_iter());
            serde_json::to_string(&reps.iter().map(|r| (&r.name, r.measured)).collect::<Vec<_>>()).unwrap_or_default()
        })
        .collect();
    out.push(CheckReport::holds(
        "seeded checks are reproducible",
        "determinism of outputs",
        !reruns[0].is_empty() && reruns[0] == reruns[1],
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_examples() {
        let spec = RegionSpec::new(3, 0, 1.0).unwrap();
        assert!(brute_force_closed(&spec, SpectralPoint::real(0.0), 101, 1e-9));
        assert!(!brute_force_closed(&spec, SpectralPoint::real(-0.5), 101, 1e-9));
        let ray = RegionSpec::new(3, 2, 2.0).unwrap();
        assert!(brute_force_closed(&ray, SpectralPoint::real(0.3), 101, 1e-9));
        assert!(!brute_force_closed(&ray, SpectralPoint { re: 0.3, im: 0.1 }, 101, 1e-9));
    }

    #[test]
    fn perturbed_integrability_is_caught() {
        let bad = integrability_interior(1, Perturbation { integrability_factor: 1.1 });
        assert!(bad.iter().any(|c| !c.pass));
        let good = integrability_interior(1, Perturbation::default());
        assert!(good.iter().all(|c| c.pass), "{good:?}");
    }

    #[test]
    fn criteria_table_is_complete() {
        let ids: Vec<u32> = CRITERIA.iter().map(|c| c.0).collect();
        assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    }
}
