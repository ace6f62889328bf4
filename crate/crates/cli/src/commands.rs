//! One function per subcommand: resolve parameters, compute, assemble a report.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use lpforms::acceptance::{run_criterion, Perturbation, SuiteOptions, CRITERIA};
use lpforms::forms::weyl::{decay_exponent, weyl_grid, weyl_quotient};
use lpforms::kernels::appendix::sigma_hat;
use lpforms::kernels::{heat_mass, resolvent_mass, wave_cone_check, ResolventParams, VolumeProfile, WaveSetup};
use lpforms::middle::{exponent_sweep, measured_threshold, threshold, MiddleFamily};
use lpforms::radial::growth::growth_data;
use lpforms::radial::{is_lp_integrable, IntegrateOptions, RadialProblem};
use lpforms::radial::integrate::integrate;
use lpforms::regions::{
    boundary_samples, is_lp_eigenvalue, spectrum_contains, RegionMetadata, RegionSpec, SpectralPoint,
};
use lpforms::report::CheckReport;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::json;

use crate::config::{List, Settings};
use crate::output::{CriterionSummary, Header, Report, Table};
use crate::{CliError, UsageError};
use crate::{CheckAllArgs, KernelCheck, KernelsArgs, MiddleArgs, OdeArgs, RegionsArgs, WeylArgs};

/// Parameters shared by every command after resolution.
pub struct Context {
    pub settings: Settings,
    pub seed: u64,
    pub timings: bool,
}

impl Context {
    fn report(self, command: &str, summary: serde_json::Value, mut checks: Vec<CheckReport>) -> Report {
        if !self.timings {
            for c in &mut checks {
                c.runtime_ms = None;
            }
        }
        let pass = checks.iter().all(|c| c.pass);
        Report {
            header: Header {
                command: command.to_string(),
                version: env!("CARGO_PKG_VERSION").to_string(),
                seed: self.seed,
                config: self.settings.effective,
            },
            pass,
            summary,
            criteria: Vec::new(),
            checks,
            tables: BTreeMap::new(),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(UsageError(msg.into()))
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

pub fn regions(mut ctx: Context, args: RegionsArgs) -> Result<Report, CliError> {
    let s = &mut ctx.settings;
    let n = s.get("N", args.n, 3u32)?;
    let k = s.get("k", args.k, 0u32)?;
    let p = s.get("p", args.p, 1.0f64)?;
    let s_max = s.get("s-max", args.s_max, 5.0f64)?;
    let samples = s.get("samples", args.samples, 101usize)?;
    let raster = s.flag("raster", args.raster)?;
    let spec = RegionSpec::new(n, k, p).map_err(|e| usage(e.to_string()))?;
    if !(s_max > 0.0 && s_max.is_finite()) || samples < 2 {
        return Err(usage("need s-max > 0 and at least two samples"));
    }
    let mut boundary = Table::new(&["s", "re", "im"]);
    for b in boundary_samples(&spec, s_max, samples) {
        boundary.push(vec![b.s.into(), b.re.into(), b.im.into()]);
    }
    let mut tables = BTreeMap::from([("boundary".to_string(), boundary)]);
    if raster {
        let size = s.get("raster-size", args.raster_size, 41usize)?;
        let x_min = s.get("x-min", args.x_min, -5.0f64)?;
        let x_max = s.get("x-max", args.x_max, 20.0f64)?;
        let y_max = s.get("y-max", args.y_max, 10.0f64)?;
        if size < 2 || !(x_max > x_min) || !(y_max > 0.0) {
            return Err(usage("raster needs size >= 2, x-max > x-min and y-max > 0"));
        }
        let mut t = Table::new(&["x", "y", "in_region", "is_eigenvalue"]);
        for y in linspace(-y_max, y_max, size) {
            for x in linspace(x_min, x_max, size) {
                let lambda = SpectralPoint::new(x, y).map_err(|e| usage(e.to_string()))?;
                t.push(vec![
                    x.into(),
                    y.into(),
                    spectrum_contains(&spec, lambda).into(),
                    is_lp_eigenvalue(&spec, lambda).into(),
                ]);
            }
        }
        tables.insert("raster".to_string(), t);
    }
    let meta = RegionMetadata::of(&spec);
    let isolated: Vec<[f64; 2]> = if spec.is_odd_middle() { vec![[0.0, 0.0]] } else { Vec::new() };
    let summary = json!({
        "region": meta,
        "reduced_degree": spec.reduced_degree(),
        "degenerate_ray": meta.half_width == 0.0,
        "isolated_points": isolated,
    });
    let mut report = ctx.report("regions", summary, Vec::new());
    report.tables = tables;
    Ok(report)
}

pub fn weyl(mut ctx: Context, args: WeylArgs) -> Result<Report, CliError> {
    const ANCHOR: &str = "approximate eigenforms for boundary points of Q_{p,k}";
    let s = &mut ctx.settings;
    let n_dim = s.get("N", args.n, 3u32)?;
    let k = s.get("k", args.k, 0u32)?;
    let p = s.get("p", args.p, 1.0f64)?;
    let sp = s.get("s", args.s, 0.0f64)?;
    let n_list = s.get("n-list", args.n_list, List(vec![4u32, 8, 16, 32]))?.0;
    let spec = RegionSpec::new(n_dim, k, p).map_err(|e| usage(e.to_string()))?;
    if p > 2.0 {
        return Err(usage("approximate eigenforms are built for p <= 2"));
    }
    if n_list.is_empty() || n_list.windows(2).any(|w| w[1] <= w[0]) || n_list[0] == 0 {
        return Err(usage("n-list must be non-empty, positive and strictly ascending"));
    }
    let quotients = n_list
        .par_iter()
        .map(|&n| weyl_grid(n, &spec, sp).and_then(|g| weyl_quotient(n, &spec, sp, &g)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let mut table = Table::new(&["n", "quotient"]);
    let mut checks = Vec::new();
    for q in &quotients {
        table.push(vec![q.n.into(), q.quotient.into()]);
        if !q.warnings.is_empty() {
            checks.push(CheckReport::holds(&format!("grid coverage n={}", q.n), ANCHOR, false).with_note(q.warnings.join("; ")));
        }
    }
    for w in quotients.windows(2) {
        checks.push(CheckReport::at_most(
            &format!("quotient decreases from n={} to n={}", w[0].n, w[1].n),
            ANCHOR,
            w[1].quotient / w[0].quotient,
            1.0,
        ));
    }
    let pts: Vec<(f64, f64)> = quotients.iter().map(|q| (f64::from(q.n), q.quotient)).collect();
    let exponent = (pts.len() >= 2).then(|| decay_exponent(&pts));
    if let Some(e) = exponent {
        checks.push(CheckReport::at_most("fitted decay exponent", ANCHOR, e, -0.8));
    }
    let summary = json!({
        "N": n_dim, "k": k, "p": p, "s": sp,
        "decay_exponent": exponent,
        "rows": quotients,
    });
    let mut report = ctx.report("weyl", summary, checks);
    report.tables.insert("quotients".into(), table);
    Ok(report)
}

pub fn ode(mut ctx: Context, args: OdeArgs) -> Result<Report, CliError> {
    const ANCHOR: &str = "growth of radial eigen-solutions is e^{(-m+a)r}";
    let s = &mut ctx.settings;
    let n = s.get("N", args.n, 3u32)?;
    let k = s.get("k", args.k, 1u32)?;
    let lambda = s.get("lambda", args.lambda, 4.0f64)?;
    let lre = s.get("Lre", args.lre, 0.0f64)?;
    let lim = s.get("Lim", args.lim, 0.0f64)?;
    let defaults = IntegrateOptions::default();
    let opts = IntegrateOptions {
        r_max: s.get("r-max", args.r_max, defaults.r_max)?,
        tol: s.get("tol", args.tol, defaults.tol)?,
        output_step: s.get("output-step", args.output_step, defaults.output_step)?,
        ..defaults
    };
    if !(opts.r_max > 2.0 && opts.tol > 0.0 && opts.output_step > 0.0) {
        return Err(usage("need r-max > 2, tol > 0 and output-step > 0"));
    }
    let spectral = Complex64::new(lre, lim);
    let problem = RadialProblem::new(n, k, lambda, spectral).map_err(|e| usage(e.to_string()))?;
    let runtime = |e: lpforms::radial::RadialError| CliError::Runtime(e.to_string());
    let profile = integrate(&problem, &opts).map_err(runtime)?;
    let growth = growth_data(&problem, &opts).map_err(runtime)?;
    let mut table = Table::new(&["r", "log_abs_phi", "arg_phi"]);
    for i in 0..profile.len() {
        table.push(vec![profile.r[i].into(), profile.log_abs_phi(i).into(), profile.phi[i].arg().into()]);
    }
    let mut check = CheckReport::close("fitted growth slope", ANCHOR, growth.fitted_slope, growth.predicted_slope, 1e-2);
    if let Some(w) = &growth.warning {
        check = check.with_note(w.clone());
    }
    let integrable: BTreeMap<String, bool> = [1.0, 2.0, 4.0]
        .iter()
        .filter_map(|&p| is_lp_integrable(spectral, p, n, k).ok().map(|b| (format!("p={p}"), b)))
        .collect();
    let summary = json!({
        "N": n, "k": k, "lambda": lambda, "Lambda": {"re": lre, "im": lim},
        "m": problem.m(),
        "growth": growth,
        "lp_integrable": integrable,
        "accepted_steps": profile.accepted_steps,
        "rejected_steps": profile.rejected_steps,
    });
    let mut report = ctx.report("ode", summary, vec![check]);
    report.tables.insert("profile".into(), table);
    Ok(report)
}

pub fn middle(mut ctx: Context, args: MiddleArgs) -> Result<Report, CliError> {
    const ANCHOR: &str = "harmonic middle-degree forms are in L^p iff p > 2N/(N+1)";
    let s = &mut ctx.settings;
    let n = s.get("N", args.n, 3u32)?;
    let exact = threshold(n).map_err(|e| usage(e.to_string()))?;
    let default_lambda = MiddleFamily::from_sphere(n, 0, 1.0).map_err(|e| usage(e.to_string()))?.lambda_k;
    let lambda = s.get("lambda", args.lambda, default_lambda)?;
    let r = s.get("R", args.r, 40.0f64)?;
    let default_ps = List((0..=20).map(|i| 1.0 + 0.1 * f64::from(i)).collect::<Vec<f64>>());
    let ps = s.get("p-list", args.p_list, default_ps)?.0;
    if !(r >= 2.0 && r.is_finite()) {
        return Err(usage("R must be at least 2"));
    }
    MiddleFamily::with_lambda(n, lambda, 1.0).map_err(|e| usage(e.to_string()))?;
    if ps.iter().any(|&p| !(p >= 1.0 && p.is_finite())) {
        return Err(usage("every p must be finite and >= 1"));
    }
    let runtime = |e: lpforms::middle::MiddleError| CliError::Runtime(e.to_string());
    let rows = exponent_sweep(n, lambda, r, &ps).map_err(runtime)?;
    let measured = measured_threshold(n, lambda, r, 1.0, 2.0).map_err(runtime)?;
    let mut table = Table::new(&["p", "exponent", "converges"]);
    for row in &rows {
        table.push(vec![row.p.into(), row.exponent.into(), row.converges.into()]);
    }
    let check = CheckReport::close(&format!("measured L^p threshold N={n}"), ANCHOR, measured, exact, 0.02);
    let summary = json!({
        "N": n, "lambda_k": lambda, "R": r,
        "threshold_exact": exact,
        "threshold_measured": measured,
    });
    let mut report = ctx.report("middle", summary, vec![check]);
    report.tables.insert("exponents".into(), table);
    Ok(report)
}

fn summarize(id: u32, opts: &SuiteOptions, timings: bool) -> (CriterionSummary, Vec<CheckReport>) {
    let res = run_criterion(id, opts);
    eprintln!("{}", res.summary_line());
    let summary = CriterionSummary {
        id,
        title: res.title.clone(),
        pass: res.pass,
        checks: res.checks.len(),
        failed: res.checks.iter().filter(|c| !c.pass).count(),
        budget_ms: res.budget_ms,
        runtime_ms: timings.then_some(res.runtime_ms),
    };
    let checks = res
        .checks
        .into_iter()
        .map(|mut c| {
            c.name = format!("[criterion {id}] {}", c.name);
            c
        })
        .collect();
    (summary, checks)
}

/// Runs the given criteria and folds them into one report; a criterion over its
/// time budget fails the report even when all of its checks pass.
fn criteria_report(ctx: Context, command: &str, ids: &[u32], opts: &SuiteOptions, summary: serde_json::Value) -> Report {
    let timings = ctx.timings;
    let mut criteria = Vec::new();
    let mut checks = Vec::new();
    for &id in ids {
        let (c, ch) = summarize(id, opts, timings);
        criteria.push(c);
        checks.extend(ch);
    }
    let mut report = ctx.report(command, summary, checks);
    report.pass = report.pass && criteria.iter().all(|c| c.pass);
    report.criteria = criteria;
    report
}

pub fn kernels(mut ctx: Context, args: KernelsArgs) -> Result<Report, CliError> {
    let s = &mut ctx.settings;
    let check = s.get("check", args.check, KernelCheck::All)?;
    let runtime = |e: lpforms::kernels::KernelError| CliError::Runtime(e.to_string());
    let wants = |c: KernelCheck| check == KernelCheck::All || check == c;
    let mut ids = Vec::new();
    let mut tables = BTreeMap::new();
    if wants(KernelCheck::Heat) {
        ids.push(8);
        let mut t = Table::new(&["t", "mass"]);
        for time in [0.01, 0.1, 1.0, 10.0, 50.0] {
            t.push(vec![time.into(), heat_mass(time).map_err(runtime)?.into()]);
        }
        tables.insert("heat_mass".to_string(), t);
        let mut t = Table::new(&["m", "xi", "mass", "expected"]);
        for m in [0.5, 1.0, 2.0] {
            for xi in [1.0, 2.0, 4.0] {
                let mass = ResolventParams::new(m, xi).and_then(|p| resolvent_mass(&p)).map_err(runtime)?;
                t.push(vec![m.into(), xi.into(), mass.into(), f64::powf(xi, -2.0 * m).into()]);
            }
        }
        tables.insert("resolvent_mass".to_string(), t);
    }
    if wants(KernelCheck::Wave) {
        ids.push(9);
        let setup = WaveSetup::default();
        let mut t = Table::new(&["h", "dt", "steps", "outside_fraction", "energy_drift"]);
        for h in [8e-3, 4e-3, 2e-3, 1e-3] {
            let c = wave_cone_check(&setup, h).map_err(runtime)?;
            t.push(vec![c.h.into(), c.dt.into(), c.steps.into(), c.outside_fraction.into(), c.energy_drift.into()]);
        }
        tables.insert("wave_cone".to_string(), t);
    }
    if wants(KernelCheck::Volume) {
        ids.push(10);
        let radii: Vec<f64> = (1..=40).map(f64::from).collect();
        let mut t = Table::new(&["N", "R", "log_vol", "rate"]);
        for n in [1u32, 2, 3, 5] {
            for row in VolumeProfile::new(n, &radii).map_err(runtime)?.rows {
                t.push(vec![n.into(), row.r.into(), row.log_vol.into(), row.rate.into()]);
            }
        }
        tables.insert("volume".to_string(), t);
    }
    if wants(KernelCheck::Appendix) {
        ids.push(11);
        let c = 2.0;
        let mut t = Table::new(&["xi", "sigma_hat", "closed_form"]);
        for i in 0..=40 {
            let xi = 0.25 * f64::from(i);
            t.push(vec![xi.into(), sigma_hat(c, xi).map_err(runtime)?.into(), (PI / c * (-c * xi).exp()).into()]);
        }
        tables.insert("fourier".to_string(), t);
    }
    let opts = SuiteOptions { seed: ctx.seed, ..SuiteOptions::default() };
    let mut report = criteria_report(ctx, "kernels", &ids, &opts, serde_json::Value::Null);
    report.tables = tables;
    Ok(report)
}

pub fn check_all(mut ctx: Context, args: CheckAllArgs) -> Result<Report, CliError> {
    let s = &mut ctx.settings;
    let all = List(CRITERIA.iter().map(|c| c.0).collect::<Vec<u32>>());
    let ids = s.get("only", args.only, all)?.0;
    if ids.is_empty() || ids.iter().any(|id| !CRITERIA.iter().any(|c| c.0 == *id)) {
        return Err(usage(format!("criterion ids must lie in 1..={}", CRITERIA.len())));
    }
    let factor = s.get_opt("perturb-integrability", args.perturb_integrability)?;
    let mut opts = SuiteOptions { seed: ctx.seed, ..SuiteOptions::default() };
    if let Some(f) = factor {
        if !(f > 0.0 && f.is_finite()) {
            return Err(usage("perturbation factor must be positive"));
        }
        opts.perturbation = Perturbation { integrability_factor: f };
    }
    Ok(criteria_report(ctx, "check-all", &ids, &opts, serde_json::Value::Null))
}
