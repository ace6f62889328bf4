use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lpforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpforms")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn regions_parabola_passes_through_origin() {
    let out = lpforms(&["regions", "--N", "3", "--k", "0", "--p", "1", "--s-max", "5", "--samples", "11"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("s,re,im\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 11);
    let mid: Vec<f64> = rows[5].iter().map(|c| c.parse().unwrap()).collect();
    assert_eq!(mid, vec![0.0, 0.0, 0.0]);
}

#[test]
fn regions_middle_degree_ray_flags_zero() {
    let out = lpforms(&["regions", "--N", "3", "--k", "2", "--p", "2", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["degenerate_ray"], Value::Bool(true));
    assert_eq!(v["summary"]["region"]["vertex"].as_f64(), Some(0.25));
    assert_eq!(v["summary"]["isolated_points"][0], serde_json::json!([0.0, 0.0]));
}

#[test]
fn regions_dual_degrees_have_identical_boundaries() {
    for (n, k) in [(3u32, 1u32), (4, 1), (5, 2)] {
        let dual = (n + 1 - k).to_string();
        let (n, k) = (n.to_string(), k.to_string());
        let a = lpforms(&["regions", "--N", &n, "--k", &k, "--p", "1.5"]);
        let b = lpforms(&["regions", "--N", &n, "--k", &dual, "--p", "1.5"]);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn raster_flags_interior_eigenvalues_only_above_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpforms(&["regions", "--N", "3", "--p", "4", "--raster", "--raster-size", "11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let raster = std::fs::read_to_string(dir.path().join("raster.csv")).unwrap();
    assert!(raster.starts_with("x,y,in_region,is_eigenvalue\n"));
    let rows = csv_rows(&raster);
    assert_eq!(rows.len(), 121);
    assert!(rows.iter().any(|r| r[3] == "true"));
    assert!(rows.iter().all(|r| r[3] == "false" || r[2] == "true"));
    let out = lpforms(&["regions", "--N", "3", "--p", "1.5", "--raster", "--raster-size", "11", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let raster = std::fs::read_to_string(dir.path().join("raster.csv")).unwrap();
    assert!(csv_rows(&raster).iter().all(|r| r[3] == "false"));
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = lpforms(&["regions", "--N", "4", "--k", "1", "--p", "1.25", "--raster", "--out", dir.path().to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    for f in ["boundary.csv", "raster.csv", "report.json"] {
        assert_eq!(std::fs::read(a.path().join(f)).unwrap(), std::fs::read(b.path().join(f)).unwrap(), "{f}");
    }
    let runs: Vec<Output> = (0..2).map(|_| lpforms(&["check-all", "--only", "2,6,12", "--format", "json", "--seed", "7"])).collect();
    assert_eq!(code(&runs[0]), 0);
    assert_eq!(runs[0].stdout, runs[1].stdout);
}

#[test]
fn flags_override_config_and_header_echoes_effective_values() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# region settings\nN = 5\nk = 1\np = 1.5  # trailing comment\nformat = json\n").unwrap();
    let out = lpforms(&["regions", "--config", cfg.to_str().unwrap(), "--N", "3", "--seed", "11"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let h = &v["header"];
    assert_eq!(h["config"]["N"], "3");
    assert_eq!(h["config"]["k"], "1");
    assert_eq!(h["config"]["p"], "1.5");
    assert_eq!(h["seed"], 11);
    assert_eq!(v["summary"]["region"]["N"], 3);
    assert_eq!(v["summary"]["region"]["half_width"].as_f64(), Some(0.5));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_cfg = dir.path().join("bad.cfg");
    std::fs::write(&bad_cfg, "colour=blue\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["nonsense"],
        vec!["regions", "--bogus"],
        vec!["regions", "--N", "3", "--k", "9"],
        vec!["regions", "--p", "0.5"],
        vec!["regions", "--format", "xml"],
        vec!["regions", "--config", bad_cfg.to_str().unwrap()],
        vec!["regions", "--config", "/nonexistent/run.cfg"],
        vec!["weyl", "--p", "3"],
        vec!["weyl", "--n-list", "8,4"],
        vec!["middle", "--N", "4"],
        vec!["ode", "--N", "3", "--k", "5"],
        vec!["check-all", "--only", "0"],
    ];
    for args in cases {
        assert_eq!(code(&lpforms(&args)), 2, "{args:?}");
    }
    assert_eq!(code(&lpforms(&["--help"])), 0);
}

#[test]
fn ode_zero_spectral_parameter_has_flat_growth() {
    let out = lpforms(&["ode", "--N", "3", "--k", "1", "--lambda", "4", "--Lre", "0", "--Lim", "0", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let slope = v["summary"]["growth"]["fitted_slope"].as_f64().unwrap();
    assert!(slope.abs() < 1e-2, "{slope}");
    let rows = v["tables"]["profile"]["rows"].as_array().unwrap();
    assert!(rows.len() > 100);
}

#[test]
fn middle_threshold_for_n3() {
    let out = lpforms(&["middle", "--N", "3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["summary"]["threshold_exact"].as_f64(), Some(1.5));
    let m = v["summary"]["threshold_measured"].as_f64().unwrap();
    assert!((m - 1.5).abs() <= 0.02, "{m}");
    // rows below the threshold diverge, rows above converge
    for row in v["tables"]["exponents"]["rows"].as_array().unwrap() {
        let p = row[0].as_f64().unwrap();
        if (p - 1.5).abs() > 0.05 {
            assert_eq!(row[2].as_bool().unwrap(), p > 1.5, "p={p}");
        }
    }
}

#[test]
fn weyl_quotients_decrease() {
    let out = lpforms(&["weyl", "--n-list", "4,8", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    let rows = v["tables"]["quotients"]["rows"].as_array().unwrap();
    assert!(rows[1][1].as_f64().unwrap() < rows[0][1].as_f64().unwrap());
    assert!(v["summary"]["decay_exponent"].as_f64().unwrap() <= -0.8);
}

#[test]
fn kernel_checks_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpforms(&["kernels", "--check", "heat", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let mass = std::fs::read_to_string(dir.path().join("heat_mass.csv")).unwrap();
    assert!(mass.starts_with("t,mass\n"));
    assert_eq!(code(&lpforms(&["kernels", "--check", "appendix"])), 0);
    // the R = 40 volume rate misses its 1e-2 band for N = 1, 2, 5 (finite-R offset)
    assert_eq!(code(&lpforms(&["kernels", "--check", "volume"])), 1);
}

#[test]
fn mutation_of_integrability_constant_is_caught() {
    assert_eq!(code(&lpforms(&["check-all", "--only", "6"])), 0);
    let out = lpforms(&["check-all", "--only", "6", "--perturb-integrability", "1.1"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn report_json_follows_schema() {
    let out = lpforms(&["check-all", "--only", "1,4,6", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    assert!(text.contains("e0") || text.contains("e-"), "floats use exponent form");
    let v = stdout_json(&out);
    for key in ["command", "version", "seed", "config"] {
        assert!(!v["header"][key].is_null(), "{key}");
    }
    assert_eq!(v["pass"], Value::Bool(true));
    assert_eq!(v["criteria"].as_array().unwrap().len(), 3);
    for c in v["criteria"].as_array().unwrap() {
        assert!(c["runtime_ms"].is_null());
    }
    for c in v["checks"].as_array().unwrap() {
        assert!(c["name"].is_string() && c["anchor"].is_string());
        assert!(c["measured"].is_number() || c["measured"]["re"].is_number());
        let kind = c["expected"]["kind"].as_str().unwrap();
        assert!(["value", "at_most", "at_least"].contains(&kind));
        assert!(c["tolerance"].is_number() && c["pass"].is_boolean());
        assert!(c["runtime_ms"].is_null());
    }
    let dir = tempfile::tempdir().unwrap();
    let out = lpforms(&["check-all", "--only", "1", "--timings", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(read_json(&dir.path().join("report.json"))["criteria"][0]["runtime_ms"].is_number());
}
