use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use depcore::io::{format_table, ingest_pairs, parse_table};
use depcore::ProbTable;
use ndarray::array;
use serde_json::Value;
use tempfile::TempDir;

fn depcore(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depcore")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, content).unwrap();
    p.to_str().unwrap().to_string()
}

fn write_table(dir: &Path, name: &str, t: &ProbTable) -> String {
    write(dir, name, &format_table(t))
}

#[test]
fn ingest_counts_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let pairs = write(dir.path(), "pairs.csv", "0,0\n0,0\n1,1\n1,0\n");
    let out_path = dir.path().join("table.csv");
    let out = depcore(&["ingest", &pairs, "-o", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&out_path).unwrap();
    let t = parse_table(&text).unwrap();
    assert_eq!(t.probs(), &array![[0.5, 0.0], [0.25, 0.25]]);
    assert_eq!(t, ingest_pairs("0,0\n0,0\n1,1\n1,0\n").unwrap().table);
    let labels: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("table.csv.labels.json")).unwrap()).unwrap();
    assert_eq!(labels["rows"], serde_json::json!(["0", "1"]));
}

#[test]
fn ingest_with_counts_to_stdout() {
    let dir = TempDir::new().unwrap();
    let pairs = write(dir.path(), "pairs.csv", "0,0,40\n0,1,10\n1,0,20\n1,1,30\n");
    let out = depcore(&["ingest", &pairs]);
    assert_eq!(out.status.code(), Some(0));
    let t = parse_table(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(t.probs(), &array![[0.4, 0.1], [0.2, 0.3]]);
}

#[test]
fn ingest_rejects_bad_inputs() {
    let dir = TempDir::new().unwrap();
    for (name, content) in [("one.csv", "a,x\na,y\n"), ("neg.csv", "0,0,1\n1,1,-1\n"), ("empty.csv", "")] {
        let p = write(dir.path(), name, content);
        let out = depcore(&["ingest", &p]);
        assert_eq!(out.status.code(), Some(1), "{name}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn analyze_reports() {
    let dir = TempDir::new().unwrap();
    let w6 = write(dir.path(), "w6.csv", "0.4,0.1\n0.2,0.3\n");
    let out = depcore(&["analyze", &w6]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], "depcore/1");
    assert_eq!(v["dim_gamma"], 1);
    assert!((v["norm2"].as_f64().unwrap() - 0.8958797346140276).abs() < 1e-12);
    assert!((v["measures"]["overall"].as_f64().unwrap() - 0.4202).abs() < 1e-4);
    assert_eq!(v["measures"]["calibration"], "yule");

    let diag = write(dir.path(), "diag.csv", "0.5,0\n0,0.5\n");
    let v = json(&depcore(&["analyze", &diag]));
    assert_eq!(v["dim_gamma"], 0);
    assert_eq!(v["measures"]["regional"], 1.0);
    assert_eq!(v["measures"]["overall"], 1.0);

    let unif = write(dir.path(), "u.csv", "0.25,0.25\n0.25,0.25\n");
    let v = json(&depcore(&["analyze", &unif, "--calibration", "gauss"]));
    assert_eq!(v["independent"], true);
    assert_eq!(v["measures"]["overall"], 0.0);
    assert_eq!(v["measures"]["calibration"], "gauss");
}

#[test]
fn analyze_is_byte_deterministic() {
    let dir = TempDir::new().unwrap();
    let t = ProbTable::from_weights(array![[1.0, 2.0, 0.0], [3.0, 1.0, 2.0], [0.5, 0.0, 4.0]]).unwrap();
    let p = write_table(dir.path(), "t.csv", &t);
    let (a, b) = (depcore(&["analyze", &p, "--tol", "1e-8"]), depcore(&["analyze", &p, "--tol", "1e-8"]));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.csv", "0.5,0.6\n0.1,0.1\n");
    let out = depcore(&["analyze", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let missing = dir.path().join("nope.csv");
    assert_eq!(depcore(&["analyze", missing.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(depcore(&["analyze", &bad, "--calibration", "other"]).status.code(), Some(1));
}

#[test]
fn analyze_batch() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "a.csv", "0.4,0.1\n0.2,0.3\n");
    write(dir.path(), "b.csv", "0.5,0\n0,0.5\n");
    write(dir.path(), "notes.txt", "ignored");
    let d = dir.path().to_str().unwrap();
    let out = depcore(&["analyze", "--batch", d]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let files: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["file"].as_str().unwrap()).collect();
    assert_eq!(files, vec!["a.csv", "b.csv"]);
    assert_eq!(v["results"][1]["report"]["dim_gamma"], 0);

    write(dir.path(), "c.csv", "not,numbers\n");
    let out = depcore(&["analyze", "--batch", d]);
    assert_eq!(out.status.code(), Some(1));
    assert!(json(&out)["results"][2]["error"].is_string());
}

#[test]
fn ipf_command() {
    let dir = TempDir::new().unwrap();
    let w6 = write(dir.path(), "w6.csv", "0.4,0.1\n0.2,0.3\n");
    let out = depcore(&["ipf", &w6, "--rows", "0.3,0.7", "--cols", "0.6,0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["ipf"]["converged"], true);
    assert_eq!(v["dependence_preserved"], true);
    assert_eq!(v["feasibility"]["verdict"], "Feasible");

    let same = depcore(&["ipf", &w6, "--rows", "0.5,0.5", "--cols", "0.6,0.4", "--max-iter", "50", "--tol", "1e-12"]);
    assert!(json(&same)["ipf"]["iterations"].as_u64().unwrap() <= 1);

    let diag = write(dir.path(), "diag.csv", "0.5,0\n0,0.5\n");
    let out = depcore(&["ipf", &diag, "--rows", "0.3,0.7", "--cols", "0.6,0.4"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["feasibility"]["verdict"], "Infeasible");

    let out = depcore(&["ipf", &w6, "--rows", "0.3,0.3", "--cols", "0.6,0.4"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn compare_command() {
    let dir = TempDir::new().unwrap();
    let t = ProbTable::from_weights(array![[5.0, 2.0, 1.0], [1.0, 4.0, 2.0], [1.0, 1.0, 6.0]]).unwrap();
    let u = t.group_transform(&[2.0, 0.5, 1.0], &[1.0, 3.0, 0.25]).unwrap();
    let (pt, pu, ptt) = (
        write_table(dir.path(), "t.csv", &t),
        write_table(dir.path(), "u.csv", &u),
        write_table(dir.path(), "tt.csv", &t.transpose()),
    );
    let v = json(&depcore(&["compare", &pt, &pu]));
    assert_eq!(v["same_dependence"], true);
    assert_eq!(json(&depcore(&["compare", &pt, &ptt]))["same_dependence"], false);
    let v = json(&depcore(&["compare", &pt, &pt]));
    assert_eq!((v["same_dependence"].clone(), v["lambda_gap"].clone()), (Value::Bool(true), serde_json::json!(0.0)));
}

#[test]
fn grid_commands() {
    let dir = TempDir::new().unwrap();
    let constant = write(dir.path(), "c.csv", "level=2\n1,1,1,1\n1,1,1,1\n1,1,1,1\n1,1,1,1\n");
    let out = depcore(&["grid", &constant, "--op", "gamma"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("i,j,x,y,value"));
    assert!(lines.all(|l| l.ends_with(",0")));

    let gauss = dir.path().join("g.csv");
    let out = depcore(&["grid", "--make-gauss", "0.5", "8", "-o", gauss.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&depcore(&["grid", gauss.to_str().unwrap(), "--op", "delta"]));
    assert!((v["norm2"].as_f64().unwrap() - 2.0 / 3.0).abs() < 5e-3);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 255 * 255);

    let holes = write(dir.path(), "h.csv", "level=1\n0,1\n1,1\n");
    assert_eq!(depcore(&["grid", &holes, "--op", "omega", "--pivot", "0,0"]).status.code(), Some(1));
    assert_eq!(depcore(&["grid", &holes, "--op", "omega", "--pivot", "1,1"]).status.code(), Some(0));
    let out = depcore(&["grid", &holes, "--op", "gamma"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().lines().nth(1).unwrap().ends_with(','));

    let wrong = write(dir.path(), "w.csv", "level=2\n1,1\n1,1\n");
    assert_eq!(depcore(&["grid", &wrong, "--op", "lambda"]).status.code(), Some(1));
    let no_header = write(dir.path(), "n.csv", "1,1\n1,1\n");
    assert_eq!(depcore(&["grid", &no_header]).status.code(), Some(1));
}
