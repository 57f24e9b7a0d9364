use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use spinwigner::report::{read_curve_csv, read_histogram_csv, SimulationSummary};

fn spinwigner(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinwigner")).args(args).output().unwrap()
}

fn path_arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn simulate(dir: &Path, name: &str, extra: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut args = vec!["simulate", "--out", path_arg(&out)];
    args.extend_from_slice(extra);
    let o = spinwigner(&args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn error_json(o: &Output) -> Value {
    let text = String::from_utf8(o.stderr.clone()).unwrap();
    serde_json::from_str(text.trim()).unwrap_or_else(|_| panic!("stderr is not JSON: {text}"))
}

#[test]
fn simulate_is_reproducible_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let base = ["--two-s", "1", "--L", "3,5", "--samples", "30000", "--chunk-size", "5000", "--seed", "9"];
    for format in ["csv", "json"] {
        let a = simulate(dir.path(), &format!("{format}1"), &[&base[..], &["--workers", "1", "--format", format]].concat());
        let b = simulate(dir.path(), &format!("{format}3"), &[&base[..], &["--workers", "3", "--format", format]].concat());
        for name in [format!("hist_L03.{format}"), format!("hist_L05.{format}"), "summary.json".into()] {
            assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
        }
        let timing: Value = serde_json::from_slice(&fs::read(b.join("timing.json")).unwrap()).unwrap();
        assert_eq!(timing["workers"], 3);
        assert_eq!(timing["runs"].as_array().unwrap().len(), 2);
    }
}

#[test]
fn summary_describes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(
        dir.path(),
        "run",
        &["--two-s", "2", "--L", "4", "--samples", "12001", "--chunk-size", "4000", "--bins", "20", "--axis", "0,0,1", "--mass"],
    );
    let summary: SimulationSummary = serde_json::from_slice(&fs::read(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary.version, "spec-1");
    assert_eq!(summary.two_s, 2);
    let run = &summary.runs[0];
    assert_eq!(run.histogram, "hist_L04.csv");
    assert_eq!(run.marginal.as_deref(), Some("marginal_L04.csv"));
    // Sample counts are rounded up to whole chunks.
    assert_eq!(run.config.n_samples, 16000);
    assert_eq!(run.n_chunks, 4);
    assert_eq!(run.metrics.n_paths, 16000);
    let bins = read_histogram_csv(fs::File::open(out.join("hist_L04.csv")).unwrap()).unwrap();
    assert_eq!(bins.len(), 20);
    assert_eq!(bins[0].bin_lo, 0.0);
    let marginal = read_histogram_csv(fs::File::open(out.join("marginal_L04.csv")).unwrap()).unwrap();
    assert_eq!(marginal[0].bin_lo, -run.config.r_max);

    assert_eq!(run.mass.as_deref(), Some("mass_L04.csv"));
    assert_eq!(run.marginal_mass.as_deref(), Some("marginal_mass_L04.csv"));
    let text = fs::read_to_string(out.join("marginal_mass_L04.csv")).unwrap();
    let total: f64 = text.lines().skip(1).map(|l| l.split(',').nth(2).unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - run.metrics.normalization_check.re).abs() < 1e-9);
}

#[test]
fn invalid_configuration_exits_2_with_json_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x");
    let o = spinwigner(&["simulate", "--two-s", "1", "--L", "1", "--samples", "100", "--out", path_arg(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let err = error_json(&o);
    assert_eq!(err["error"]["kind"], "invalid_config");
    assert_eq!(err["error"]["exit_code"], 2);

    let o = spinwigner(&["simulate", "--bogus"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"]["kind"], "usage");

    assert_eq!(spinwigner(&["--help"]).status.code(), Some(0));
}

#[test]
fn unreadable_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let o = spinwigner(&["compare", "--mc", path_arg(&missing), "--two-s", "1", "--L", "4"]);
    assert_eq!(o.status.code(), Some(3));
    let err = error_json(&o);
    assert_eq!(err["error"]["kind"], "io");
    assert!(err["error"]["message"].as_str().unwrap().contains("missing.csv"));

    let junk = dir.path().join("junk.csv");
    fs::write(&junk, "bin_lo,bin_hi\n0,1\n").unwrap();
    let o = spinwigner(&["compare", "--mc", path_arg(&junk), "--two-s", "1", "--L", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_json(&o)["error"]["kind"], "malformed_input");
}

#[test]
fn compare_with_itself_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(dir.path(), "run", &["--two-s", "1", "--L", "4", "--samples", "20000", "--chunk-size", "5000"]);
    let hist = out.join("hist_L04.csv");
    let o = spinwigner(&["compare", "--mc", path_arg(&hist), "--against", path_arg(&hist)]);
    assert!(o.status.success());
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["reference"], "histogram");
    assert_eq!(report["l1_distance"], 0.0);
    assert_eq!(report["chi2"], 0.0);
    assert_eq!(report["pass"], true);
    assert!(report["bins"].as_array().unwrap().iter().all(|b| b["pull"] == 0.0));
}

#[test]
fn compare_against_the_exact_density_passes_and_a_wrong_curve_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(dir.path(), "run", &["--two-s", "1", "--L", "2,4", "--samples", "200000", "--seed", "17"]);
    let l4 = out.join("hist_L04.csv");
    let report = dir.path().join("report.json");
    let o = spinwigner(&["compare", "--mc", path_arg(&l4), "--reference", "exact", "--out", path_arg(&report)]);
    assert!(o.status.success(), "{}", fs::read_to_string(&report).unwrap_or_default());
    let doc: Value = serde_json::from_slice(&fs::read(&report).unwrap()).unwrap();
    assert_eq!(doc["L"], 4);
    assert!(doc["chi2_per_dof"].as_f64().unwrap() <= 2.0);

    // The L=2 histogram is far from the smeared density at L=8.
    let l2 = out.join("hist_L02.csv");
    let o = spinwigner(&["compare", "--mc", path_arg(&l2), "--analytic-L", "8"]);
    assert_eq!(o.status.code(), Some(4));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["pass"], false);
}

#[test]
fn compare_rejects_mismatched_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = simulate(dir.path(), "run", &["--two-s", "1", "--L", "3", "--samples", "5000", "--chunk-size", "1000"]);
    let hist = out.join("hist_L03.csv");
    let o = spinwigner(&["compare", "--mc", path_arg(&hist), "--two-s", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["error"]["kind"], "config_mismatch");
    let o = spinwigner(&["compare", "--mc", path_arg(&hist), "--L", "5"]);
    assert_eq!(o.status.code(), Some(2));

    let other = simulate(dir.path(), "other", &["--two-s", "1", "--L", "3", "--samples", "5000", "--bins", "10"]);
    let o = spinwigner(&["compare", "--mc", path_arg(&hist), "--against", path_arg(&other.join("hist_L03.csv"))]);
    assert_eq!(o.status.code(), Some(2));
}

fn trapezoid_mass(curve: &[(f64, f64)]) -> f64 {
    curve
        .windows(2)
        .map(|w| {
            let f = |(s, d): (f64, f64)| 4.0 * std::f64::consts::PI * s * s * d;
            0.5 * (w[1].0 - w[0].0) * (f(w[0]) + f(w[1]))
        })
        .sum()
}

#[test]
fn analytic_curve_is_normalized() {
    for (two_s, l) in [("1", "8"), ("2", "12"), ("3", "20")] {
        let o = spinwigner(&["analytic", "--two-s", two_s, "--L", l, "--points", "4001"]);
        assert!(o.status.success());
        let curve = read_curve_csv(o.stdout.as_slice()).unwrap();
        assert_eq!(curve.len(), 4001);
        assert_eq!(curve[0].0, 0.0);
        let mass = trapezoid_mass(&curve);
        assert!((mass - 1.0).abs() < 1e-4, "2s={two_s}: {mass}");
    }
}

#[test]
fn analytic_json_lists_the_terms() {
    let o = spinwigner(&["analytic", "--two-s", "2", "--L", "10", "--format", "json", "--points", "11"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["version"], "spec-1");
    let terms = doc["terms"].as_array().unwrap();
    assert_eq!(terms[0]["kind"], "origin_delta");
    assert!((terms[0]["coefficient"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert_eq!(terms[1]["kind"], "dipole_shell");
    assert_eq!(terms[1]["m"], 1.0);
    assert_eq!(doc["curve"].as_array().unwrap().len(), 11);
}

#[test]
fn twospin_reports_weights_and_oracle_residual() {
    let o = spinwigner(&["twospin", "--betaJ", "0"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["weights"]["p_triplet"], 0.75);
    assert_eq!(doc["weights"]["p_singlet"], 0.25);
    assert!(doc["oracle_residual"].as_f64().unwrap() < 1e-10);

    let o = spinwigner(&["twospin", "--betaJ", "-3", "--beta", "2", "--oracle-points", "50"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let pt = doc["weights"]["p_triplet"].as_f64().unwrap();
    let expected = 3.0 / (3.0 + 3f64.exp());
    assert!((pt - expected).abs() < 1e-15);
    assert_eq!(doc["model"]["J"], -1.5);
}

#[test]
fn signscan_table() {
    let o = spinwigner(&["signscan", "--two-s", "1,2", "--L", "2..5", "--samples", "20000", "--seed", "4"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("two_s,L,n_paths,phase_quality,"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 8);
    for r in rows.iter().filter(|r| r[1] == "2") {
        // Two-slice weights are real and positive.
        assert_eq!(r[3].parse::<f64>().unwrap(), 1.0);
    }
    let pq = |two_s: &str, l: &str| {
        rows.iter().find(|r| r[0] == two_s && r[1] == l).unwrap()[3].parse::<f64>().unwrap()
    };
    assert!(pq("1", "5") < pq("1", "3"));
    assert!(pq("2", "5") < pq("1", "5"));
}

#[test]
fn larger_spin_has_larger_errors() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--L", "10", "--samples", "100000", "--bins", "30", "--rmax", "2.5"];
    let half = simulate(dir.path(), "half", &[&common[..], &["--two-s", "1"]].concat());
    let one = simulate(dir.path(), "one", &[&common[..], &["--two-s", "2"]].concat());
    let mean_err = |d: &Path| {
        let bins = read_histogram_csv(fs::File::open(d.join("hist_L10.csv")).unwrap()).unwrap();
        bins.iter().map(|b| b.stderr_re * (b.bin_hi.powi(3) - b.bin_lo.powi(3))).sum::<f64>()
    };
    assert!(mean_err(&one) > mean_err(&half));
}
