//! End-to-end tests driving the compiled `setconc` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_setconc"))
}

fn fixtures() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("setconc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &PathBuf, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

const C6: &str = r#"{"kind":"graph","walk":"simple-walk","adjacency":[
[0,1,0,0,0,1],[1,0,1,0,0,0],[0,1,0,1,0,0],[0,0,1,0,1,0],[0,0,0,1,0,1],[1,0,0,0,1,0]]}"#;

#[test]
fn spectrum_of_four_cycle() {
    let dir = fixtures();
    let input = write(
        &dir,
        "c4.json",
        r#"{"kind":"graph","walk":"simple-walk","adjacency":[[0,1,0,1],[1,0,1,0],[0,1,0,1],[1,0,1,0]]}"#,
    );
    let out = run(&["spectrum", "--input", &input]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let evs: Vec<f64> = v["eigenvalues"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    for (a, b) in evs.iter().zip(&[0.0, 1.0, 1.0, 2.0]) {
        assert!((a - b).abs() < 1e-9, "{evs:?}");
    }
}

#[test]
fn spectrum_csv_format() {
    let dir = fixtures();
    let input = write(&dir, "c6.json", C6);
    let out = run(&["spectrum", "--input", &input, "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("index,eigenvalue\n0,"), "{text}");
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn psi_closed_form() {
    let out = run(&["psi", "4"]);
    assert!(out.status.success());
    let value: f64 = stdout(&out).trim().parse().unwrap();
    assert!((value - 5f64.ln()).abs() < 1e-12);
}

#[test]
fn certify_feasible_family_passes() {
    let dir = fixtures();
    let input = write(&dir, "c6b.json", C6);
    let sets = write(&dir, "sets.json", "[[0,1],[3,4]]");
    let out = run(&["certify", "--input", &input, "--sets", &sets]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["pass"], serde_json::Value::Bool(true));
    assert!(v["min_slack"].as_f64().unwrap() >= -1e-9);
}

#[test]
fn infeasible_family_exits_2() {
    let dir = fixtures();
    let input = write(&dir, "c6c.json", C6);
    let sets = write(&dir, "thin.json", "[[0],[3]]"); // measures (1/6, 1/6): outside Delta_2
    let out = run(&["bound", "markov", "--input", &input, "--sets", &sets]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Delta"));
}

#[test]
fn space_input_has_no_operator() {
    let dir = fixtures();
    let input = write(
        &dir,
        "space.json",
        r#"{"kind":"space","dist":[[0,1],[1,0]],"mu":[0.5,0.5]}"#,
    );
    let sets = write(&dir, "one.json", "[[0]]");
    let out = run(&["bound", "main", "--input", &input, "--sets", &sets]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("operator"));
}

#[test]
fn malformed_json_exits_1_and_usage_exits_64() {
    let dir = fixtures();
    let input = write(&dir, "bad.json", r#"{"kind":"chain"}"#);
    let out = run(&["validate", "--input", &input]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(64));
    let out = run(&["spectrum"]); // missing required --input
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn help_and_version_exit_0() {
    assert!(run(&["--help"]).status.success());
    assert!(run(&["--version"]).status.success());
}

#[test]
fn search_sets_is_deterministic() {
    let dir = fixtures();
    let input = write(&dir, "c6d.json", C6);
    let args = ["search-sets", "--input", &input, "--k", "2", "--budget", "400", "--seed", "42"];
    let first = run(&args);
    let second = run(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert!(v["value"].as_f64().unwrap().is_finite());
    assert_eq!(v["sets"].as_array().unwrap().len(), 2);
}

#[test]
fn bound_markov_curve_certified() {
    let dir = fixtures();
    let input = write(&dir, "c6e.json", C6);
    let sets = write(&dir, "sets2.json", "[[0,1],[3,4]]");
    let out = run(&["bound", "markov", "--input", &input, "--sets", &sets, "--format", "csv"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    assert!(text.starts_with("r,bound,exact,slack\n"), "{text}");
    assert!(text.lines().count() > 1);
    for line in text.lines().skip(1) {
        let slack: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(slack >= -1e-9, "{line}");
    }
}

fn c12() -> String {
    let mut adj = vec![vec![0u8; 12]; 12];
    for i in 0..12 {
        adj[i][(i + 1) % 12] = 1;
        adj[(i + 1) % 12][i] = 1;
    }
    format!(
        r#"{{"kind":"graph","walk":"simple-walk","adjacency":{}}}"#,
        serde_json::to_string(&adj).unwrap()
    )
}

#[test]
fn estimate_eig_main_on_chain_reports_discrete_twin() {
    let dir = fixtures();
    let input = write(&dir, "c12.json", &c12());
    let sets = write(&dir, "arcs.json", "[[0,1,2,3],[5,6,7,8]]");
    let out = run(&["estimate-eig", "main", "--input", &input, "--sets", &sets]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // 12-cycle simple walk: lambda^(2) = 1 - cos(pi/6); both bounds cover it
    let lambda2 = 1.0 - (std::f64::consts::PI / 6.0).cos();
    assert!(v["main"]["value"].as_f64().unwrap() >= lambda2 - 1e-9);
    assert!(v["discrete"]["value"].as_f64().unwrap() >= lambda2 - 1e-9);
    assert_eq!(v["main"]["degenerate"], serde_json::Value::Bool(false));
    assert!((v["discrete"]["value"].as_f64().unwrap() - 3.0).abs() < 1e-9);
}

#[test]
fn compare_cgy_verdict() {
    let out = run(&["compare-cgy", "0.2", "0.4"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["verdict"].as_str().is_some());
}

#[test]
fn model_sphere_table_row() {
    let out = run(&["model", "sphere", "--n", "2", "--rho", "1", "--k", "3"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // S^2: level 1 has multiplicity 3 and cumulative 4 > 3
    assert_eq!(v["level"].as_u64(), Some(1));
    assert_eq!(v["multiplicity"].as_u64(), Some(3));
    assert_eq!(v["cumulative"].as_u64(), Some(4));
}

#[test]
fn extend_matches_mcshane_values() {
    let dir = fixtures();
    let input = write(&dir, "c6g.json", C6);
    let set = write(&dir, "dom.json", "[0]");
    let values = write(&dir, "vals.json", "[1.0]");
    let out = run(&["extend", "--input", &input, "--set", &set, "--values", &values, "--which", "upper"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let vals: Vec<f64> = v["values"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert_eq!(vals, vec![1.0, 2.0, 3.0, 4.0, 3.0, 2.0]);
    assert!(v["lipschitz_constant"].as_f64().unwrap() <= 1.0 + 1e-12);
}

#[test]
fn output_flag_writes_file() {
    let dir = fixtures();
    let input = write(&dir, "c6h.json", C6);
    let target = dir.join("spec_out.json");
    let out = run(&["spectrum", "--input", &input, "--output", &target.to_string_lossy()]);
    assert!(out.status.success());
    assert!(stdout(&out).is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 6);
}
