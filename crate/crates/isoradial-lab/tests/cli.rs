use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use isoradial::symmetrize::AngularSet;
use isoradial::RadialDensity;
use serde_json::Value;

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoradial")).args(args).arg("--out").arg(out).output().expect("binary runs")
}

fn ok(args: &[&str], out: &Path) -> Value {
    let o = run(args, out);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    let stdout: Value = serde_json::from_slice(&o.stdout).unwrap();
    let cmd = stdout["command"].as_str().unwrap().to_string();
    let file: Value = serde_json::from_str(&fs::read_to_string(out.join(format!("{cmd}.json"))).unwrap()).unwrap();
    assert_eq!(stdout, file);
    stdout
}

fn error(args: &[&str], out: &Path) -> (i32, Value) {
    let o = run(args, out);
    assert!(!o.status.success());
    (o.status.code().unwrap(), serde_json::from_slice(&o.stderr).unwrap())
}

#[test]
fn solve_reports_noncompact_curve() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(&["solve", "--law", "power:3", "--a", "0.5", "--lambda", "0"], dir.path());
    assert_eq!(v["class"], "NonCompactSimple");
    assert!(v["rotation"].as_f64().unwrap() < PI);
    assert_eq!(v["c"].as_f64().unwrap(), -0.5);
    assert_eq!(v["config"]["law"], "power:3");
    let csv = fs::read_to_string(dir.path().join("solve.csv")).unwrap();
    assert!(csv.starts_with("r,f,fp\n"));
    assert_eq!(csv.lines().count(), 514);
    let svg = fs::read_to_string(dir.path().join("solve.svg")).unwrap();
    assert!(svg.contains("<polyline") && svg.contains("<circle"));
}

#[test]
fn solve_near_the_smooth_closure() {
    let dir = tempfile::tempdir().unwrap();
    // the curve still turns by more than π at 1e-4; it closes at λ* ≈ 2.359e-4
    let v = ok(&["solve", "--law", "power:1", "--a", "0.5", "--lambda", "1e-4"], dir.path());
    assert_eq!(v["class"], "SelfIntersecting");
    let v = ok(&["solve", "--law", "power:1", "--a", "0.5", "--lambda", "2.3591349090020368e-4"], dir.path());
    assert_eq!(v["class"], "CompactClosedSmooth");
    assert!(v["ball_ratio"].as_f64().unwrap() < 1.0);
}

#[test]
fn ratio_suite_example() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(&["bounds", "--law", "exp_r", "--suite", "ratio", "--trials", "10", "--seed", "1"], dir.path());
    let s = &v["suites"][0];
    assert_eq!(s["trials"], 10);
    assert!(s["min_value"].as_f64().unwrap() >= 0.303314);
    assert_eq!(v["passed"], true);
    assert_eq!(v["config"]["cutoff"], "6");
    let csv = fs::read_to_string(dir.path().join("bounds_ratio.csv")).unwrap();
    assert_eq!(csv.lines().count(), 11);
}

#[test]
fn outputs_are_deterministic() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let runs: [&[&str]; 3] = [
        &["bounds", "--suite", "symmetrization,divergence", "--trials", "8", "--seed", "5", "--rings", "256"],
        &["solve", "--law", "gaussian", "--a", "1", "--lambda", "0.1"],
        &["classify", "--a-grid", "0.3,0.5", "--lambda-grid", "-0.1,0"],
    ];
    for args in runs {
        ok(args, a.path());
        ok(args, b.path());
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 8);
    for n in names {
        let (x, y) = (fs::read(a.path().join(&n)).unwrap(), fs::read(b.path().join(&n)).unwrap());
        assert!(x == y, "{n:?} differs");
    }
}

#[test]
fn seeds_change_random_suites() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    ok(&["bounds", "--suite", "ratio", "--trials", "4", "--seed", "1"], a.path());
    ok(&["bounds", "--suite", "ratio", "--trials", "4", "--seed", "2"], b.path());
    let read = |d: &Path| fs::read_to_string(d.join("bounds_ratio.csv")).unwrap();
    assert_ne!(read(a.path()), read(b.path()));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(&cfg, "# solve settings\nlaw = power:3\na = 0.3\nlambda = 0\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let v = ok(&["solve", "--config", cfg, "--a", "0.5"], dir.path());
    assert_eq!(v["config"]["a"], "0.5");
    assert_eq!(v["config"]["law"], "power:3");
    assert_eq!(v["a"].as_f64().unwrap(), 0.5);
    // defaults are echoed too
    assert_eq!(v["config"]["samples"], "513");
}

#[test]
fn errors_are_json_on_stderr() {
    let dir = tempfile::tempdir().unwrap();
    let (code, e) = error(&["solve", "--law", "power:3", "--a", "x", "--lambda", "0"], dir.path());
    assert_eq!((code, e["error"].as_str().unwrap()), (2, "config"));
    let (code, _) = error(&["solve", "--law", "power:0.5", "--a", "1", "--lambda", "0"], dir.path());
    assert_eq!(code, 2);
    let (code, _) = error(&["solve", "--law", "nope", "--a", "1", "--lambda", "0"], dir.path());
    assert_eq!(code, 2);
    let (code, e) = error(&["symmetrize", "--input", "/nonexistent/set.txt"], dir.path());
    assert_eq!((code, e["error"].as_str().unwrap()), (3, "io"));
    // ν_1 is not more convex than ν_2
    let (code, e) = error(&["transport", "--law", "model_1d:2", "--target", "model:1"], dir.path());
    assert_eq!((code, e["error"].as_str().unwrap()), (1, "precondition"));
    let (code, _) = error(&["bounds", "--suite", "ratio", "--law", "gaussian"], dir.path());
    assert_eq!(code, 2);
    assert!(fs::read_dir(dir.path()).unwrap().next().is_none(), "no artifacts on failure");
}

#[test]
fn symmetrize_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let law = RadialDensity::lebesgue(2);
    let set = AngularSet::from_fn(law, 2.0, 512, |r| vec![(0.5 * r, 0.4 + 0.3 * r)]).unwrap();
    let input = dir.path().join("set.txt");
    fs::write(&input, set.to_text()).unwrap();
    let v = ok(&["symmetrize", "--input", input.to_str().unwrap()], dir.path());
    assert_eq!(v["before"]["measure"], v["after"]["measure"]);
    assert!(v["after"]["perimeter"].as_f64().unwrap() <= v["before"]["perimeter"].as_f64().unwrap() + 10.0 * set.dr());
    let sym = fs::read_to_string(dir.path().join("symmetrized.txt")).unwrap();
    let back = AngularSet::from_text(RadialDensity::lebesgue(2), &sym).unwrap();
    assert!(back.rings().iter().all(|r| r.intervals.iter().all(|&(lo, hi)| (lo + hi).abs() < 1e-12)));
}

#[test]
fn grid_commands() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok(&["classify", "--a-grid", "0.5", "--lambda-grid", "-0.1,0", "--law", "power:1"], dir.path());
    assert_eq!(v["counts"]["CompactNonClosed"], 1);
    assert_eq!(v["counts"]["SelfIntersecting"], 1);
    let v = ok(&["sweep", "--law", "power:3", "--measures", "0.5"], dir.path());
    assert_eq!(v["profile"][0]["best_family"], "HalfPlane");
    let v = ok(&["transport", "--law", "model_1d:1", "--target", "model:1.5", "--grid", "2000"], dir.path());
    assert!(v["lipschitz_estimate"].as_f64().unwrap() <= 1.0 + 1e-4);
    assert_eq!(v["hypotheses_hold"], true);
    let csv = fs::read_to_string(dir.path().join("transport.csv")).unwrap();
    assert!(csv.starts_with("x,t\n"));
}
