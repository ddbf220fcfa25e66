//! End-to-end tests of the `gqd3` binary: output shape, config precedence,
//! determinism and exit codes.

use std::process::{Command, Output};

use gqd3_core::states::{make_ghz, GhzSpec};

fn gqd3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gqd3"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn discord_reports_reference_state() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ghz.txt");
    let rho = make_ghz(&GhzSpec::with_alpha_sq(0.5, 0.0, 1.0).unwrap()).unwrap();
    std::fs::write(&path, rho.to_text()).unwrap();

    let out = gqd3(&["discord", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert!(text.starts_with("measurement_order=1,2,3\n"));
    let d1: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("d1="))
        .expect("d1 line")
        .parse()
        .unwrap();
    assert!((d1 - 0.5).abs() < 1e-12, "d1 = {d1}");
    assert!(text.lines().any(|l| l.starts_with("gqd2_12=")));
}

#[test]
fn discord_rejects_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "this is not a matrix\n").unwrap();

    let out = gqd3(&["discord", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("parse error at line 1"), "stderr: {err}");
}

#[test]
fn discord_missing_file_is_io_error() {
    let out = gqd3(&["discord", "/nonexistent/state.txt"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn case1_is_deterministic_and_obeys_out_flag() {
    let args = [
        "case1",
        "--lambda-ratios",
        "0.1",
        "--steps",
        "5",
        "--t-max",
        "2.0",
    ];
    let first = gqd3(&args);
    let second = gqd3(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);

    let text = stdout_str(&first);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_ratio,gamma0_t,d1,d2,d3,q"));
    assert_eq!(lines.count(), 5);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("case1.csv");
    let mut with_out: Vec<&str> = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let redirected = gqd3(&with_out);
    assert_eq!(redirected.status.code(), Some(0));
    assert!(redirected.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), first.stdout);
}

#[test]
fn config_file_defaults_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(
        &cfg,
        "# sweep defaults\nstate = w\nsteps = 3\nt_max = 9.0\nlambda_ratios = 0.1\n",
    )
    .unwrap();

    let out = gqd3(&["case1", "--config", cfg.to_str().unwrap(), "--t-max", "2.0"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let times: Vec<f64> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(times, vec![0.0, 1.0, 2.0], "flag must override config t_max");
}

#[test]
fn config_rejects_unknown_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.cfg");
    std::fs::write(&cfg, "bogus = 1\n").unwrap();

    let out = gqd3(&["case1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(err.contains("unknown key 'bogus'"), "stderr: {err}");
}

#[test]
fn invalid_state_family_is_config_error() {
    let out = gqd3(&["case1", "--state", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pt_emits_survival_curve() {
    let out = gqd3(&[
        "pt",
        "--lambda-ratios",
        "0.5",
        "--steps",
        "3",
        "--t-max",
        "1.0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda_ratio,gamma0_t,p"));
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(first[0], 0.5);
    assert_eq!(first[1], 0.0);
    assert!((first[2] - 1.0).abs() < 1e-15, "P(0) = {}", first[2]);
}

#[test]
fn verify_small_run_passes() {
    let out = gqd3(&[
        "verify",
        "--dynamics-samples",
        "5",
        "--discord-samples",
        "2",
        "--roundtrip-samples",
        "5",
        "--classicality-samples",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_str(&out);
    assert_eq!(text.lines().filter(|l| l.starts_with("suite=")).count(), 6);
    assert!(text.ends_with("overall=pass\n"), "report:\n{text}");
}
