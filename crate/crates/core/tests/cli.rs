use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use fluxladder::cli::{format_float, OUT_DIR_ENV};

fn run(args: &[&str], env_out: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fluxladder"));
    cmd.args(args).env_remove(OUT_DIR_ENV);
    if let Some(dir) = env_out {
        cmd.env(OUT_DIR_ENV, dir);
    }
    cmd.output().unwrap()
}

fn in_dir<'a>(dir: &'a Path, args: &[&'a str]) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.extend(["--out-dir", dir.to_str().unwrap()]);
    v
}

#[test]
fn help_and_usage_exit_codes() {
    assert_eq!(run(&["--help"], None).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"], None).status.code(), Some(1));
    assert_eq!(run(&["bands", "--samples", "many"], None).status.code(), Some(1));
}

#[test]
fn invalid_parameters_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&in_dir(dir.path(), &["bands", "--n-rungs", "0"]), None);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_rungs"));
    let out = run(&in_dir(dir.path(), &["spectrum", "--g", "2"]), None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "n_rungs = 8\nbogus = 1\n").unwrap();
    let out = run(&in_dir(dir.path(), &["bands", "--config", cfg.to_str().unwrap()]), None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn numerical_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&in_dir(dir.path(), &["generate", "--k", "0", "--units", "physical-mhz", "--g", "3.5"]), None);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn protocols_read_couplings_as_megahertz() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["measure", "--pair", "rung", "--rung", "10", "--g", "3.5", "--k", "1.75", "--samples", "401"];
    let out = run(&in_dir(dir.path(), &args), None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["config"]["units"], "physical_mhz");
}

#[test]
fn bands_table_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&in_dir(dir.path(), &["bands", "--samples", "9", "--k", "2.5"]), None);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("bands.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 10);
    assert!(lines[0].starts_with("q,"));
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "bands");
    assert_eq!(manifest["config"]["k_mhz"], 2.5);
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let args = ["measure", "--n-rungs", "8", "--noise-sigma", "0.01", "--seed", "11", "--samples", "301"];
    for dir in [&a, &b] {
        assert!(run(&in_dir(dir.path(), &args), None).status.success());
    }
    for file in ["trace.csv", "fit_report.json", "manifest.json"] {
        assert_eq!(fs::read(a.path().join(file)).unwrap(), fs::read(b.path().join(file)).unwrap(), "{file}");
    }
    let threads = tempfile::tempdir().unwrap();
    let sweep = ["phase-diagram", "--n-rungs", "6", "--phi-steps", "5", "--k-steps", "5"];
    let one = in_dir(a.path(), &sweep).into_iter().chain(["--threads", "1"]).collect::<Vec<_>>();
    let two = in_dir(threads.path(), &sweep).into_iter().chain(["--threads", "3"]).collect::<Vec<_>>();
    assert!(run(&one, None).status.success());
    assert!(run(&two, None).status.success());
    assert_eq!(
        fs::read(a.path().join("phase_diagram.csv")).unwrap(),
        fs::read(threads.path().join("phase_diagram.csv")).unwrap()
    );
}

#[test]
fn output_directory_precedence() {
    let (flag, env) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run(&["bands", "--samples", "4"], Some(env.path())).status.success());
    assert!(env.path().join("bands.csv").exists());
    assert!(run(&in_dir(flag.path(), &["currents", "--n-rungs", "4"]), Some(env.path())).status.success());
    assert!(flag.path().join("currents.csv").exists());
    assert!(!env.path().join("currents.csv").exists());
}

#[test]
fn every_command_writes_its_files() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&[&str], &[&str]); 8] = [
        (&["spectrum", "--n-rungs", "10"], &["spectrum.csv", "wavefunction.csv", "quasimomentum.csv"]),
        (&["currents", "--n-rungs", "10"], &["currents.csv"]),
        (&["vortex-density", "--n-rungs", "10", "--phi-steps", "4"], &["phase_diagram.csv"]),
        (&["drive", "--phi0-steps", "5"], &["tuning.csv", "drive_report.json"]),
        (&["floquet-validate", "--horizon-us", "0.2"], &["validation_report.json"]),
        (
            &["generate", "--units", "physical-mhz", "--g", "3.5", "--k", "1.75", "--samples", "11"],
            &["drive_profile.csv", "trace.csv", "generation_report.json"],
        ),
        (&["measure", "--pair", "rung", "--n-rungs", "8"], &["trace.csv", "fit_report.json"]),
        (&["phase-diagram", "--n-rungs", "4", "--phi-steps", "3", "--k-steps", "3"], &["phase_diagram.csv"]),
    ];
    for (args, files) in cases {
        let out = run(&in_dir(dir.path(), args), None);
        assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        for f in files {
            assert!(dir.path().join(f).exists(), "{args:?} missing {f}");
        }
    }
}

#[test]
fn floats_use_fixed_notation() {
    assert_eq!(format_float(f64::NAN), "nan");
    assert_eq!(format_float(0.5), "5.0000000000000000e-1");
    assert_eq!(format_float(-0.5).parse::<f64>().unwrap(), -0.5);
}
