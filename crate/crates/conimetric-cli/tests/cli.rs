//! End-to-end tests of the command-line interface: output formats, exit
//! codes, CSV shape, and determinism.

use std::process::{Command, Output};

fn conimetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_conimetric"))
        .args(args)
        .env_remove("CONIMETRIC_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn eval_hempel_point() {
    let out = conimetric(&["eval", "--orders", "1,1,1", "--z=-1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.228473290522");
}

#[test]
fn eval_records_format() {
    let out = conimetric(&["eval", "--orders", "0.9,0.9,0.9", "--z", "0.3,0.4", "--format", "records"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "density=0.630129320747");
}

#[test]
fn eval_at_puncture_exits_2() {
    let out = conimetric(&["eval", "--orders", "1,1,1", "--z=0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("puncture"), "{}", stderr(&out));
}

#[test]
fn inadmissible_orders_exit_2() {
    let out = conimetric(&["eval", "--orders", "0.5,0.5,0.5", "--z=-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("Gauss-Bonnet"), "{}", stderr(&out));
}

#[test]
fn signature_integers_accepted_as_orders() {
    // --orders 3,3,4 means (1-1/3, 1-1/3, 1-1/4)
    let a = conimetric(&["eval", "--orders", "3,3,4", "--z=-1"]);
    let b = conimetric(&[
        "eval",
        "--orders",
        "0.6666666666666667,0.6666666666666667,0.75",
        "--z=-1",
    ]);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn constants_cusp_prints_exact_zero() {
    let out = conimetric(&["constants", "--orders", "1,0.75,1", "--format", "records"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("k2=0\n"), "{text}");
    for key in ["k1=", "k3=", "c0=", "c1=", "c3=", "lambda_minus_one="] {
        assert!(text.contains(key), "missing {key} in {text}");
    }
}

#[test]
fn constants_all_finite() {
    let out = conimetric(&["constants", "--orders", "0.9,0.8,0.9"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("lambda_minus_one = 0.210826819709"), "{text}");
    assert!(text.contains("c1 = 4.58128475173"), "{text}");
}

#[test]
fn bound_landau_hempel() {
    let out = conimetric(&["bound", "landau", "--sig", "inf,inf,inf", "--a0=-1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "8.75375846091");
}

#[test]
fn bound_lk() {
    let out = conimetric(&["bound", "lk", "--k=inf"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "4.37687923045");
    let out = conimetric(&["bound", "lk", "--k=2"]);
    assert_eq!(stdout(&out).trim(), "5.71250114438");
}

#[test]
fn bound_schottky_beyond_radius_unbounded() {
    let out = conimetric(&["bound", "schottky", "--sig", "2,3,7", "--f0", "1", "--r", "0.99"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "unbounded");
    let out = conimetric(&["bound", "schottky", "--sig", "2,3,7", "--f0", "1", "--r", "0.01"]);
    assert_eq!(stdout(&out).trim(), "0.483270653686");
}

#[test]
fn bound_radius_and_lower() {
    let out = conimetric(&["bound", "radius", "--sig", "2,3,7", "--f0", "1"]);
    assert_eq!(stdout(&out).trim(), "0.146885425321");
    let out = conimetric(&["bound", "lower", "--orders", "1,1,1", "--z=-1"]);
    assert_eq!(stdout(&out).trim(), "0.228473290522");
}

#[test]
fn invalid_signature_exit_2() {
    let out = conimetric(&["bound", "landau", "--sig", "2,3,6", "--a0=-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn table_gap_vanishes_at_minus_one() {
    let out = conimetric(&[
        "table", "--orders", "1,1,1", "--what", "gap", "--re", "-1.1:-0.9:3", "--im", "-0.1:0.1:3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "re,im,value");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 9);
    // center cell is (-1, 0): the equality point of the bound
    let center: f64 = rows[4][2].parse().unwrap();
    assert!(center.abs() < 1e-10, "gap at -1 is {center}");
    // all other cells strictly positive
    for (i, row) in rows.iter().enumerate() {
        if i != 4 {
            let v: f64 = row[2].parse().unwrap();
            assert!(v > 0.0, "row {i}: gap {v}");
        }
    }
}

#[test]
fn table_mirror_symmetry_and_roundtrip() {
    let out = conimetric(&[
        "table", "--orders", "0.9,0.8,0.9", "--what", "density", "--re", "-0.6:0.4:3", "--im",
        "-0.5:0.5:3",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<String>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|s| s.to_string()).collect())
        .collect();
    // conjugate-symmetric grid: first and last im-rows carry equal values
    for ix in 0..3 {
        assert_eq!(rows[ix][2], rows[6 + ix][2], "mirror row mismatch at ix = {ix}");
    }
    // CSV round-trip: re-parsing a cell and re-evaluating reproduces the
    // printed value exactly (shortest round-trip formatting)
    let (re, im, val) = (&rows[1][0], &rows[1][1], &rows[1][2]);
    let eval = conimetric(&[
        "eval",
        "--orders",
        "0.9,0.8,0.9",
        "--z",
        &format!("{re},{im}"),
        "--format",
        "records",
    ]);
    let printed: f64 = val.parse().unwrap();
    let reevaluated: f64 = stdout(&eval).trim().strip_prefix("density=").unwrap().parse().unwrap();
    assert!(
        (printed - reevaluated).abs() <= 1e-12 * printed.abs(),
        "{printed} vs {reevaluated}"
    );
}

#[test]
fn table_puncture_cells_are_nan() {
    let out = conimetric(&[
        "table", "--orders", "1,1,1", "--what", "density", "--re", "0:1:2", "--im", "0:0:1",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        assert!(line.ends_with(",nan"), "{line}");
    }
}

#[test]
fn table_deterministic_output() {
    let args = [
        "table", "--orders", "0.9,0.9,0.9", "--what", "lowerbound", "--re", "-2:2:7", "--im",
        "0.2:1.4:5",
    ];
    let a = conimetric(&args);
    let b = conimetric(&args);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_monotone_passes() {
    let out = conimetric(&["verify", "--orders", "1,1,1", "monotone"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.contains("check=monotonicity_r1"), "{text}");
    assert!(text.trim_end().ends_with("overall=pass"), "{text}");
}

#[test]
fn verify_bounds_passes() {
    let out = conimetric(&["verify", "--orders", "0.9,0.8,0.85", "bounds"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("check=lower_bound"));
}

#[test]
fn verify_invalid_orders_exit_2() {
    let out = conimetric(&["verify", "--orders", "0.2,0.2,0.2", "all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_unknown_suite_exit_2() {
    let out = conimetric(&["verify", "--orders", "1,1,1", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_tol_env_override() {
    // an absurdly tight tolerance must turn a passing check into exit 1
    let out = Command::new(env!("CARGO_BIN_EXE_conimetric"))
        .args(["verify", "--orders", "1,1,1", "symmetry"])
        .env("CONIMETRIC_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).trim_end().ends_with("overall=fail"));
    // and a loose one passes
    let out = Command::new(env!("CARGO_BIN_EXE_conimetric"))
        .args(["verify", "--orders", "1,1,1", "symmetry"])
        .env("CONIMETRIC_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // junk value is invalid input
    let out = Command::new(env!("CARGO_BIN_EXE_conimetric"))
        .args(["verify", "--orders", "1,1,1", "symmetry"])
        .env("CONIMETRIC_TOL", "fast")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_error_exit_2() {
    let out = conimetric(&["eval", "--orders", "1,1,1"]);
    assert_eq!(out.status.code(), Some(2));
}
