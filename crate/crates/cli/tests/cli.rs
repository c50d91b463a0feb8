//! CLI behavior: built-in scenario output shapes, manifest validation
//! diagnostics, and the params subcommand.

use std::path::Path;
use std::process::{Command, Output};

fn thinspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thinspec"))
        .args(args)
        .output()
        .expect("spawn thinspec")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = std::fs::read_to_string(path).expect("read csv");
    let mut lines = text.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<String> = lines
        .next()
        .expect("header row")
        .split(',')
        .map(str::to_string)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (header, rows)
}

#[test]
fn figure1_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = thinspec(&["run", "figure1", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("figure1.csv"));
    assert_eq!(
        header,
        ["tau", "t_seconds", "abs_a_coherent", "abs_a_zeta05", "abs_a_zeta09"]
    );
    assert_eq!(rows.len(), 2000);
    // |<a>|(0) = sqrt(N) = 10 for every state
    for col in 2..5 {
        let v: f64 = rows[0][col].parse().unwrap();
        assert!((v - 10.0).abs() < 1e-6, "column {col} starts at {v}");
    }
    assert!(dir.path().join("figure1.gp").exists());
}

#[test]
fn figure7_matches_the_closed_form_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = thinspec(&["run", "figure7", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("figure7.csv"));
    assert_eq!(
        header,
        ["t_over_tc", "t_seconds", "rho_od_closed", "rho_od_oracle"]
    );
    for row in &rows {
        let x: f64 = row[0].parse().unwrap();
        let closed: f64 = row[2].parse().unwrap();
        let oracle: f64 = row[3].parse().unwrap();
        let law = (1.0 + 16.0 * x * x).powf(-0.25);
        assert!((closed - law).abs() < 1e-9, "x={x}: {closed} vs {law}");
        assert!((oracle - closed).abs() < 1e-6, "x={x}: oracle off");
    }
}

#[test]
fn run_equals_single_scenario_manifest() {
    let run_dir = tempfile::tempdir().unwrap();
    let man_dir = tempfile::tempdir().unwrap();
    let out = thinspec(&["run", "figure4", "--out", run_dir.path().to_str().unwrap()]);
    assert!(out.status.success());

    let manifest = run_dir.path().join("one.manifest");
    std::fs::write(&manifest, "[figure4]\nbuiltin = figure4\n").unwrap();
    let out = thinspec(&[
        "manifest",
        manifest.to_str().unwrap(),
        "--out",
        man_dir.path().to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let a = std::fs::read(run_dir.path().join("figure4.csv")).unwrap();
    let b = std::fs::read(man_dir.path().join("figure4.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn unknown_key_is_reported_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("bad.manifest");
    std::fs::write(
        &manifest,
        "[custom]\nmodel = order-parameter\nfrobnicate = 3\n",
    )
    .unwrap();
    let out = thinspec(&["manifest", manifest.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown key 'frobnicate'"), "stderr: {err}");
    assert!(err.contains("line 3"), "stderr: {err}");
}

#[test]
fn empty_time_window_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("bad.manifest");
    std::fs::write(
        &manifest,
        "[custom]\nmodel = order-parameter\nstate = coherent\nt_max = 0\n",
    )
    .unwrap();
    let out = thinspec(&["manifest", manifest.to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("t_max must be positive"), "stderr: {err}");
}

#[test]
fn unknown_scenario_is_rejected() {
    let out = thinspec(&["run", "figure99"]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown scenario"), "stderr: {err}");
}

#[test]
fn list_names_all_builtins() {
    let out = thinspec(&["list"]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    for k in 1..=10 {
        assert!(stdout.contains(&format!("figure{k}")), "missing figure{k}");
    }
}

#[test]
fn params_reports_derived_couplings() {
    let out = thinspec(&[
        "params", "--as", "1e-8", "--aho", "1e-6", "--rho", "1e21", "--N", "1e6", "--omega",
        "100",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("N_eff         = 10.000000"), "{stdout}");
    assert!(stdout.contains("t_c estimate  = 7.957747e-2 s"), "{stdout}");
}

#[test]
fn custom_manifest_scenario_runs() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = dir.path().join("custom.manifest");
    std::fs::write(
        &manifest,
        "# a squeezed decay plus a two-spectrum combination\n\
         [sq-decay]\n\
         model = order-parameter\n\
         state = squeezed\n\
         alpha = 6\n\
         zeta = 0.3\n\
         t_max = 0.8\n\
         points = 400\n\
         \n\
         [two-spectra]\n\
         model = multi-symmetry\n\
         deltas = 0.1, 0.2\n\
         T_nK = 100\n\
         points = 300\n",
    )
    .unwrap();
    let out = thinspec(&[
        "manifest",
        manifest.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let (header, rows) = read_csv(&dir.path().join("two-spectra.csv"));
    assert_eq!(
        header,
        ["t_over_tc", "t_seconds", "rho_od_delta1", "rho_od_delta2", "rho_od_combined"]
    );
    // combined column is the product of the marginals
    for row in &rows {
        let a: f64 = row[2].parse().unwrap();
        let b: f64 = row[3].parse().unwrap();
        let c: f64 = row[4].parse().unwrap();
        assert!((c - a * b).abs() < 1e-12);
    }
    // numeric inputs are echoed in the metadata block exactly as parsed
    let sq = std::fs::read_to_string(dir.path().join("sq-decay.csv")).unwrap();
    for line in [
        "# t_max = 8e-1",
        "# points = 400",
        "# N = 1e2",
        "# state_squeezed = squeezed alpha=6 zeta=0.3+0i",
    ] {
        assert!(sq.contains(line), "missing '{line}' in:\n{sq}");
    }
}

#[test]
fn env_var_sets_output_directory() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_thinspec"))
        .args(["run", "figure7"])
        .env("THINSPEC_OUT", dir.path())
        .output()
        .expect("spawn thinspec");
    assert!(out.status.success());
    assert!(dir.path().join("figure7.csv").exists());
}
