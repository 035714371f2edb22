use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fracinv::field::{profile_from_csv, GridFunction};
use fracinv::inverse1::{solve_problem1, Problem1Spec};
use fracinv::inverse2::{solve_problem2, Problem2Spec};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fracinv"))
}

fn example(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn solve_to(input: &Path, out: &Path) -> Output {
    run(&["solve", input.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

#[test]
fn solve_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for out in [&a, &b] {
        let o = solve_to(&example("problem1_fig1.json"), out);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for f in ["U.csv", "h.csv", "meta.json"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn space_degenerate_csv_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    assert!(solve_to(&example("problem1_fig1.json"), dir.path()).status.success());
    let u = GridFunction::from_csv(&fs::read_to_string(dir.path().join("U.csv")).unwrap()).unwrap();
    assert_eq!((u.t.len(), u.x.len()), (11, 101));
    let w = |x: f64| 1.0 + (3.0 * (x * x) - 1.0);
    let sol = solve_problem1(&Problem1Spec::new(0.6, 1.0, 32).unwrap(), |_| 0.0, w).unwrap();
    for (i, &t) in u.t.iter().enumerate() {
        for (j, &x) in u.x.iter().enumerate() {
            assert_eq!(u.at(i, j).to_bits(), sol.eval_u(t, x).unwrap().to_bits(), "t = {t}, x = {x}");
        }
    }
    let (hx, h) = profile_from_csv(&fs::read_to_string(dir.path().join("h.csv")).unwrap()).unwrap();
    for (x, v) in hx.iter().zip(&h) {
        assert_eq!(v.to_bits(), sol.eval_h(*x).unwrap().to_bits());
    }
}

#[test]
fn time_degenerate_csv_round_trips_bit_for_bit() {
    let dir = tempfile::tempdir().unwrap();
    assert!(solve_to(&example("problem2_fig3.json"), dir.path()).status.success());
    let u = GridFunction::from_csv(&fs::read_to_string(dir.path().join("U.csv")).unwrap()).unwrap();
    let psi = |x: f64| (std::f64::consts::PI * x).sin();
    let sol = solve_problem2(&Problem2Spec::new(0.5, 0.5, 1.0, None).unwrap(), |_| 0.0, psi).unwrap();
    for (i, &t) in u.t.iter().enumerate() {
        for (j, &x) in u.x.iter().enumerate() {
            assert_eq!(u.at(i, j).to_bits(), sol.eval_u2(t, x).unwrap().to_bits(), "t = {t}, x = {x}");
        }
    }
    // last row is t = T, where ū reproduces ψ̄
    let last = u.t.len() - 1;
    assert_eq!(u.t[last], 1.0);
    for (j, &x) in u.x.iter().enumerate() {
        assert!((u.at(last, j) - psi(x)).abs() < 1e-12);
    }
}

#[test]
fn zero_data_gives_zero_csvs() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("zero.json");
    fs::write(
        &input,
        r#"{"problem": "space_degenerate", "alpha": 0.4, "T": 2.0, "data": {"v": "0", "w": "0*x"},
            "grid": {"t_points": 4, "x_points": 5}}"#,
    )
    .unwrap();
    assert!(solve_to(&input, &dir.path().join("o")).status.success());
    let u = GridFunction::from_csv(&fs::read_to_string(dir.path().join("o/U.csv")).unwrap()).unwrap();
    assert!(u.values.iter().all(|v| *v == 0.0));
    let (_, h) = profile_from_csv(&fs::read_to_string(dir.path().join("o/h.csv")).unwrap()).unwrap();
    assert!(h.iter().all(|v| *v == 0.0));
}

#[test]
fn verify_flag_writes_residual() {
    let dir = tempfile::tempdir().unwrap();
    let o =
        run(&["solve", example("problem1_fig1.json").to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--verify", "--dt", "1e-3"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("residual.json")).unwrap()).unwrap();
    assert!(r["max_residual"].as_f64().unwrap() < 5e-3);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // unreadable input and malformed files are input errors
    assert_eq!(run(&["solve", "/no/such/file.json"]).status.code(), Some(1));
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"problem": "space_degenerate", "alpha": 0.4, "T": 1.0, "data": {"v": "0", "w": "sin(x)"}, "grid": {"t_points": 2, "x_points": 2}}"#).unwrap();
    assert_eq!(solve_to(&bad, dir.path()).status.code(), Some(1));
    // too many modes for the working precision is a numerical error
    let hard = dir.path().join("hard.json");
    fs::write(
        &hard,
        r#"{"problem": "time_degenerate", "alpha": 0.3, "beta": 0.5, "T": 1.0, "truncation": 40,
        "data": {"phi": "0", "psi": "x(1 - x)"}, "grid": {"t_points": 2, "x_points": 3}}"#,
    )
    .unwrap();
    let o = solve_to(&hard, &dir.path().join("h"));
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mittag_leffler"));
    // usage errors
    assert_eq!(run(&["verify", "legendr"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["plot", dir.path().join("missing").to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = run(&["verify", "legendre", "--report", report.to_str().unwrap()]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|r| r["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"orthogonality_j"));
    let o2 = bin().args(["verify", "legendre", "--report", report.to_str().unwrap()]).env("FRACINV_SEED", "42").output().unwrap();
    assert!(o2.status.success());
    assert_eq!(o.stdout, o2.stdout);
}

#[test]
fn plot_writes_svgs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert!(solve_to(&example("problem1_fig1.json"), &a).status.success());
    let alt = dir.path().join("alt.json");
    fs::write(&alt, fs::read_to_string(example("problem1_fig1.json")).unwrap().replace("0.6", "0.3")).unwrap();
    assert!(solve_to(&alt, &b).status.success());
    assert!(run(&["plot", a.to_str().unwrap()]).status.success());
    let svg = fs::read_to_string(a.join("U.svg")).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 5);
    assert!(a.join("h.svg").exists());
    let sweep = dir.path().join("sweep");
    assert!(run(&["plot", a.to_str().unwrap(), b.to_str().unwrap(), "--out", sweep.to_str().unwrap()]).status.success());
    let svg = fs::read_to_string(sweep.join("U_sweep.svg")).unwrap();
    assert!(svg.contains("α = 0.3") && svg.contains("α = 0.6"));
}

#[test]
fn debug_evaluators() {
    let o = run(&["specfun", "eval", "ml", "--alpha", "1", "--beta", "1", "-z", "-1"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - (-1f64).exp()).abs() < 1e-15);
    let o = run(&["fracops", "eval", "rl-integral", "--f", "1", "--alpha", "1", "--t", "2"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}
