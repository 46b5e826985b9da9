//! End-to-end runs of the `darboux` binary.

use std::process::{Command, Output};

fn darboux(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_darboux"))
        .args(args)
        .env("RAYON_NUM_THREADS", threads)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn energy_row() {
    let out = darboux(&["energy", "--omega", "1", "--lambda", "0.1", "--n", "0"], "1");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,lambda,energy"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("0,0.1,0.47562"), "{row}");
    let value: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
    assert!((value - 0.47562).abs() < 5e-6);
}

#[test]
fn harmonic_renyi_and_saturation() {
    let out = darboux(&["renyi", "--space", "position", "--alpha", "2", "--lambda", "0", "--n", "0"], "1");
    let text = stdout(&out);
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert!(row[3].starts_with("0.9189"), "{text}");
    assert_eq!(row[4], "analytic");

    let out = darboux(&["xi-renyi", "--alpha", "2", "--lambda", "0", "--n", "0"], "1");
    let text = stdout(&out);
    let xi: f64 = text.lines().nth(1).unwrap().split(',').nth(4).unwrap().parse().unwrap();
    assert!(xi.abs() < 1e-7);
}

#[test]
fn rows_are_ordered_n_lambda_alpha() {
    let out = darboux(&["moment", "--alpha", "2,3", "--lambda", "0,0.5", "--n", "0:1"], "4");
    let keys: Vec<String> = stdout(&out)
        .lines()
        .skip(1)
        .map(|l| l.split(',').take(3).collect::<Vec<_>>().join(","))
        .collect();
    let expected = [
        "0,0,2", "0,0,3", "0,0.5,2", "0,0.5,3", "1,0,2", "1,0,3", "1,0.5,2", "1,0.5,3",
    ];
    assert_eq!(keys, expected);
}

#[test]
fn output_is_byte_stable_across_runs_and_threads() {
    let cases: [&[&str]; 3] = [
        &["renyi", "--space", "momentum", "--alpha", "0.5,2", "--lambda", "0:0.6:0.3", "--n", "0:3"],
        &["xi-tsallis", "--alpha", "0.6,0.8", "--lambda", "0.4", "--n", "0:2"],
        &["profile", "--kind", "density-momentum", "--lambda", "0.4", "--n", "2", "--grid-points", "101"],
    ];
    for args in cases {
        let a = darboux(args, "1");
        let b = darboux(args, "1");
        let c = darboux(args, "4");
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
        assert!(!a.stdout.contains(&b'\r'));
    }
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 8] = [
        &["energy", "--bogus"],
        &["energy", "--omega", "-1"],
        &["energy", "--lambda", "-0.2"],
        &["renyi", "--n", "0"],
        &["renyi", "--alpha", "0", "--n", "0"],
        &["xi-tsallis", "--alpha", "1.5"],
        &["table", "nope"],
        &["profile", "--kind", "density-position", "--n", "0,1"],
    ];
    for args in cases {
        let out = darboux(args, "1");
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error:"), "{err}");
    }
}

#[test]
fn numeric_failures_exit_with_three_and_name_the_module() {
    let out = darboux(
        &["profile", "--kind", "approx-momentum", "--lambda", "10", "--n", "8", "--half-width", "60", "--grid-points", "9"],
        "1",
    );
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("strong-nonlinear"), "{}", stderr(&out));
}

#[test]
fn golden_mismatch_exits_with_one() {
    let out = darboux(&["table", "energy", "--tolerance", "1e-12"], "1");
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("FAIL"));
    let out = darboux(&["table", "omega"], "1");
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("table omega: 30/30 gating cells pass"));
    assert!(text.contains("# recomputed omega\nlambda,0,1,2,3,4,5\n"));
}

#[test]
fn profiles_are_written_to_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("density.csv");
    let out = darboux(
        &["profile", "--kind", "density-position", "--lambda", "0.4", "--n", "2", "--out", path.to_str().unwrap()],
        "1",
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let values: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let maxima = (1..values.len() - 1).filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1]).count();
    assert_eq!(maxima, 3);

    let out = darboux(&["energy", "--out", "/nonexistent-dir/x.csv"], "1");
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("/nonexistent-dir/x.csv"));
}

#[test]
fn large_lambda_momentum_density_has_side_lobes() {
    let out = darboux(
        &["profile", "--kind", "density-momentum", "--lambda", "100", "--n", "0", "--grid-points", "801"],
        "1",
    );
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let values: Vec<f64> = stdout(&out).lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let peak = values.iter().cloned().fold(0.0, f64::max);
    let maxima = (1..values.len() - 1)
        .filter(|&i| values[i] > values[i - 1] && values[i] >= values[i + 1] && values[i] > 1e-6 * peak)
        .count();
    assert!(maxima >= 3, "{maxima} maxima");
}

#[test]
fn approximate_transform_profile_matches_closed_form() {
    let out = darboux(
        &["profile", "--kind", "approx-momentum", "--lambda", "10", "--n", "3", "--half-width", "4", "--grid-points", "9"],
        "1",
    );
    assert_eq!(out.status.code(), Some(0));
    let params = darboux::ModelParams::new(1.0, 10.0).unwrap();
    for line in stdout(&out).lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
        let exact = darboux::strong::approx_momentum_closed(&params, 3, v[0]).unwrap().norm_sqr();
        assert!((v[1] - exact).abs() <= 1e-11 * exact.max(1e-300), "{line}");
    }
}

#[test]
fn help_exits_cleanly() {
    let out = darboux(&["--help"], "1");
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("xi-renyi"));
}
