use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn onion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_onion")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SQUARE: &str = "x,y\n0,0\n10,1\n9,11\n-1,10\n5,5\n";

#[test]
fn compute_square_and_centre_json() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.csv", SQUARE);
    let o = onion(&["compute", "--input", &f]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["n"], 5);
    assert_eq!(v["k"], 2);
    assert_eq!(v["layers"][0].as_array().unwrap().len(), 4);
    assert_eq!(v["layers"][1], serde_json::json!([[5, 5]]));
}

#[test]
fn compute_fixture_in_both_modes() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fx.csv");
    let f = f.to_str().unwrap();
    assert_eq!(onion(&["gen", "--kind", "fixture", "--n", "10", "--out", f]).status.code(), Some(0));
    let o = onion(&["compute", "--input", f, "--mode", "purge", "--validate"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 2);
    assert_eq!(v["layers"][1].as_array().unwrap().len(), 5);
    let o = onion(&["compute", "--input", f, "--mode", "literal", "--format", "csv"]);
    let out = stdout(&o);
    assert!(out.starts_with("layer,idx,x,y\n"));
    assert!(out.lines().any(|l| l == "3,0,20,50"));
}

#[test]
fn compute_counters_and_parallel() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.csv", SQUARE);
    let o = onion(&["compute", "--input", &f, "--parallel", "--counters", "--max-layers", "1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["k"], 1);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.lines().any(|l| l.starts_with("build.scan_events=")));
    assert!(err.lines().any(|l| l.starts_with("peel.promotions=")));
}

#[test]
fn decimal_input_with_scale() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "dec.csv", "0.5,0.25\n1,0\n0,1\n");
    assert_eq!(onion(&["compute", "--input", &f]).status.code(), Some(2));
    let o = onion(&["compute", "--input", &f, "--scale", "2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains(",50,25"));
    let o = onion(&["compute", "--input", &f, "--scale", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write(dir.path(), "dup.csv", "1,1\n2,2\n1,1\n");
    let o = onion(&["compute", "--input", &dup]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("ids 0 and 2"));
    let bad = write(dir.path(), "bad.csv", "1,1\nfoo\n");
    let o = onion(&["compute", "--input", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(onion(&["compute", "--input", "/nonexistent/points.csv"]).status.code(), Some(2));
    let out = dir.path().join("no/such/dir/x.csv");
    let o = onion(&["gen", "--kind", "circle", "--n", "12", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = onion(&["gen", "--kind", "grid", "--n", "15", "--out", "/tmp/unused-grid.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = onion(&["verify", "--gen", "uniform-square", "--n", "256", "--trials", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = onion(&["verify", "--gen", "collinear", "--n", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("fx.csv");
    let f = f.to_str().unwrap();
    onion(&["gen", "--kind", "fixture", "--n", "10", "--out", f]);
    let o = onion(&["verify", "--input", f, "--mode", "literal"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("point (20,50)"), "{out}");
    assert!(out.contains("minimized instance"));
}

#[test]
fn gen_writes_point_files() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.csv");
    let f = f.to_str().unwrap();
    assert_eq!(onion(&["gen", "--kind", "circle", "--n", "12", "--seed", "4", "--out", f]).status.code(), Some(0));
    let text = fs::read_to_string(f).unwrap();
    let pts = onion::io::parse_points(&text, 0).unwrap();
    assert_eq!(pts.len(), 12);
    let again = dir.path().join("c2.csv");
    onion(&["gen", "--kind", "circle", "--n", "12", "--seed", "4", "--out", again.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(again).unwrap(), text);
}

#[test]
fn plot_draws_layers() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.csv", SQUARE);
    let out = dir.path().join("sq.svg");
    let o = onion(&["plot", "--input", &f, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let svg = fs::read_to_string(&out).unwrap();
    assert_eq!(svg.matches("<polygon").count(), 1);
    assert_eq!(svg.matches(r#"data-depth="2" cx"#).count(), 1);

    let fx = dir.path().join("fx.csv");
    onion(&["gen", "--kind", "fixture", "--n", "10", "--out", fx.to_str().unwrap()]);
    let out = dir.path().join("fx.svg");
    onion(&["plot", "--input", fx.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(fs::read_to_string(&out).unwrap().matches("<polygon").count(), 2);
}

#[test]
fn bench_smoke() {
    let o = onion(&["bench", "--gen", "uniform-square", "--sizes", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let row = out.lines().nth(1).unwrap();
    let cols: Vec<&str> = row.split_whitespace().collect();
    assert_eq!((cols[0], cols[1]), ("3", "1"));
    let o = onion(&["bench", "--sizes", "2^6..2^9", "--algo", "hulltree"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max/min"));
}
