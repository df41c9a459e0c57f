use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_firstorder")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn lpf_response_csv_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.csv");
    let o = run(&["response", "--ct", "lpf", "--tau", "1", "--f", "0.1:1:3", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "freq_hz,magnitude_db,phase_rad");
    assert_eq!(lines.len(), 4);
    let cutoff = 1.0 / (2.0 * std::f64::consts::PI);
    let o = run(&["response", "--ct", "lpf", "--tau", "1", "--f", &cutoff.to_string()]);
    let row: Vec<f64> = stdout(&o).lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[1] + 10.0 * 2f64.log10()).abs() < 1e-9);
    assert!((row[2] + std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn default_response_grids() {
    let o = run(&["response", "--dt", "lpf", "--zp", "0.6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1 + 512);
    let o = run(&["response", "--ct", "lpf"]);
    assert_eq!(stdout(&o).lines().count(), 1 + 6 * 512 + 1);
}

#[test]
fn accumulator_half_gain_at_nyquist() {
    let o = run(&["response", "--dt", "accumulator", "--zp", "1", "--f", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o).lines().nth(1).unwrap().to_string();
    let db: f64 = row.split(',').nth(1).unwrap().parse().unwrap();
    assert!((db + 20.0 * 2f64.log10()).abs() < 1e-12);
}

#[test]
fn pole_on_grid_is_numeric_error() {
    let o = run(&["response", "--dt", "accumulator", "--zp", "1", "--f", "0"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["response", "--ct", "lpf", "--f", "1:0:0"],
        vec!["discretize", "lpf", "--tau", "1", "--ts", "-1", "--method", "euler"],
        vec!["figure", "f2", "--out-dir", "."],
        vec!["graph", "/definitely/not/here.net"],
        vec!["nonsense"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn discretize_methods() {
    let o = run(&["discretize", "lpf", "--tau", "1", "--ts", "0.5", "--method", "euler"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.666667"));
    let o = run(&["discretize", "lpf", "--tau", "1", "--ts", "0.1", "--method", "matched"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("0.904837"));
}

#[test]
fn matched_rejects_aliasing_mode() {
    let o = run(&["discretize", "tf", "--num", "1", "--den", "16,0,1", "--ts", "1", "--method", "matched"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn graph_step_and_flatten() {
    let o = run(&["graph", "--canonical", "accumulator", "--zp", "0.5", "--n", "4", "--input", "step"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "n,y\n0,1\n1,1.5\n2,1.75\n3,1.875\n");
    let o = run(&["graph", "--canonical", "moving-sum", "--flatten"]);
    assert_eq!(stdout(&o), "b: [1.0, 1.0]\na: [1.0]\n");
}

#[test]
fn emitted_netlist_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("osc.net");
    let o = run(&["graph", "--canonical", "oscillator", "--zp", "1", "--emit"]);
    assert_eq!(o.status.code(), Some(0));
    std::fs::write(&path, o.stdout).unwrap();
    let o = run(&["graph", path.to_str().unwrap(), "--n", "6"]);
    assert_eq!(stdout(&o), "n,y\n0,1\n1,-1\n2,1\n3,-1\n4,1\n5,-1\n");
}

#[test]
fn malformed_netlist_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.net");
    std::fs::write(&path, "node in input\nnode g gain\n").unwrap();
    let o = run(&["graph", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

fn parse(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect()
}

fn assert_close_csv(fresh: &Path, gold: &Path) {
    let a = parse(&std::fs::read_to_string(fresh).unwrap());
    let b = parse(&std::fs::read_to_string(gold).unwrap());
    assert_eq!(a.len(), b.len());
    for (x, y) in a.iter().zip(&b) {
        for (u, v) in x.iter().zip(y) {
            assert!((u - v).abs() <= 1e-9, "{}: {u} vs {v}", fresh.display());
        }
    }
}

#[test]
fn bode_figure_matches_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["figure", "f1", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    for name in ["f1_integrator_freq.csv", "f1_differentiator_freq.csv"] {
        assert_close_csv(&dir.path().join(name), &fixtures.join(name));
    }
    assert!(dir.path().join("f1.svg").exists());
}
