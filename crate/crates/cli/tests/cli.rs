use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn dgl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgl")).args(args).output().expect("dgl runs")
}

fn dgl_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgl")).args(args).env(key, value).output().expect("dgl runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn list_examples_covers_the_catalog() {
    let o = dgl(&["list-examples", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> = stdout_json(&o).as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap().to_string()).collect();
    for n in ["semidirect", "unital-ring", "sl2-heisenberg", "axb-psl2", "gl2-scalars", "sanov", "group-case"] {
        assert!(names.iter().any(|x| x == n), "{n} missing from {names:?}");
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["build", "--example", "nosuch"],
        vec!["build", "--example", "unital-ring", "--param", "n=five"],
        vec!["build", "--example", "unital-ring", "--param", "q=1"],
        vec!["build", "--example", "unital-ring", "--param", "n=5", "--param", "n=7"],
        vec!["build", "--example", "unital-ring", "--param", "n"],
        vec!["build"],
        vec!["verify", "--example", "unital-ring", "--inject-fault"],
        vec!["verify", "--example", "unital-ring", "--suite", "nonsense"],
        vec!["norm", "--example", "unital-ring", "--element", "/nonexistent/element.json"],
        vec!["export", "--example", "unital-ring", "--format", "text"],
    ] {
        let o = dgl(&args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
        assert!(!stderr(&o).is_empty());
    }
    let o = dgl_env(&["list-examples"], "DGL_THREADS", "zero");
    assert_eq!(code(&o), 2);
}

#[test]
fn build_lists_omega_of_the_ring_model() {
    let o = dgl(&["build", "--example", "unital-ring", "--param", "n=5", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["omega"].as_array().unwrap().len(), 13);
    assert_eq!(v["h-window"].as_array().unwrap().len(), 4);
    assert_eq!(v["fragment"]["elements"], v["omega"]);
}

#[test]
fn build_sanov_is_a_window() {
    let o = dgl(&["build", "--example", "sanov", "--param", "L=2", "--param", "M=3"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["h-window"].as_array().unwrap().len(), 17);
    assert_eq!(v["k-window"].as_array().unwrap().len(), 7);
    assert_ne!(v["fragment"]["closure"], json!("closed"));
}

#[test]
fn verify_ring_model_passes_everything() {
    let o = dgl(&["verify", "--example", "unital-ring", "--param", "n=5", "--suite", "all"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["seed"], json!(0));
}

#[test]
fn verify_axioms_on_small_semidirect() {
    let o = dgl(&["verify", "--example", "semidirect-z2-z3", "--suite", "axioms"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn injected_fault_is_reported_with_a_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = dgl(&["verify", "--example", "group-case", "--param", "group=s3", "--inject-fault", "--suite", "example", "--output", path_str(&out)]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("counterexample"), "{}", stderr(&o));
    // the report is written even on failure
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], json!(false));
    let checks = v["report"]["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["failed"].as_u64().unwrap() > 0 && c["first-counterexample"].is_string()));
}

#[test]
fn table_file_pairs() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("s3.json");
    // S3 as Z/3 ⋊ Z/2: i = r^(i mod 3) s^(i div 3)
    let mul = |a: usize, b: usize| {
        let (ra, sa, rb, sb) = (a % 3, a / 3, b % 3, b / 3);
        let r = if sa == 0 { (ra + rb) % 3 } else { (ra + 3 - rb) % 3 };
        r + 3 * ((sa + sb) % 2)
    };
    let rows: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| mul(a, b)).collect()).collect();
    // H = ⟨s⟩ and K = ⟨r⟩ factor S3 exactly
    let spec = json!({ "name": "S3", "identity": 0, "table": rows, "h": [0, 3], "k": [0, 1, 2] });
    std::fs::write(&table, spec.to_string()).unwrap();
    let o = dgl(&["verify", "--table", path_str(&table), "--suite", "example", "--samples", "50"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let o = dgl(&["verify", "--table", path_str(&table), "--inject-fault", "--suite", "example", "--samples", "50"]);
    assert_eq!(code(&o), 1);
    let o = dgl(&["build", "--table", path_str(&table), "--param", "n=5"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn norms_of_known_elements() {
    let o = dgl(&["norm", "--example", "unital-ring", "--param", "n=5"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["i-norm"]["exact"], json!("1"));
    assert_eq!(v["reduced-norm"]["value"], json!("1.000000000000"));

    // δ_e + δ_h in Z/2, built from the arrows that `build` lists
    let o = dgl(&["build", "--example", "group-case", "--param", "group=z2"]);
    let arrows = stdout_json(&o)["omega"].as_array().unwrap().clone();
    assert_eq!(arrows.len(), 2);
    let entries: Vec<Value> = arrows.iter().map(|a| json!({ "h": a["h"], "k": a["k"], "re": "1", "im": "0" })).collect();
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("f.json");
    std::fs::write(&file, Value::Array(entries).to_string()).unwrap();
    let o = dgl(&["norm", "--example", "group-case", "--param", "group=z2", "--element", path_str(&file)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v = stdout_json(&o);
    assert_eq!(v["reduced-norm"]["value"], json!("2.000000000000"));
    assert_eq!(v["i-norm"]["exact"], json!("2"));
}

#[test]
fn random_element_replays_through_its_json() {
    for s in ["G", "Ghat"] {
        let o = dgl(&["norm", "--example", "semidirect-z2-z5", "--structure", s, "--random", "--seed", "9"]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let first = stdout_json(&o);
        assert_eq!(first["reduced-below-i-norm"], json!(true));
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("f.json");
        std::fs::write(&file, first["entries"].to_string()).unwrap();
        let o = dgl(&["norm", "--example", "semidirect-z2-z5", "--structure", s, "--element", path_str(&file), "--seed", "9"]);
        let again = stdout_json(&o);
        for key in ["i-norm", "reduced-norm", "c-star-residual", "entries", "support"] {
            assert_eq!(first[key], again[key], "{key}");
        }
    }
}

#[test]
fn windows_are_undecidable_for_norms_and_algebra() {
    let o = dgl(&["norm", "--example", "sanov", "--param", "L=2", "--param", "M=3"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    let o = dgl(&["verify", "--example", "sanov", "--param", "L=2", "--param", "M=3", "--suite", "algebra", "--samples", "10"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    // under `all` the same checks are skipped rather than fatal
    let o = dgl(&["verify", "--example", "sanov", "--param", "L=2", "--param", "M=3", "--suite", "all", "--samples", "50"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout_json(&o)["report"]["checks"].as_array().unwrap().iter().any(|c| c["skipped"].as_u64().unwrap() > 0));
}

#[test]
fn dot_export_shapes() {
    let o = dgl(&["export", "--example", "unital-ring", "--param", "n=5", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = String::from_utf8(o.stdout).unwrap();
    let nodes = dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count();
    assert_eq!(nodes, 4);
    assert_eq!(dot.lines().filter(|l| l.contains("->")).count(), 13);

    // trivial K: one node, one loop per element of H
    let o = dgl(&["export", "--example", "group-case", "--param", "group=s3", "--format", "dot"]);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert_eq!(dot.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 1);
    assert_eq!(dot.lines().filter(|l| l.contains("u0 -> u0")).count(), 6);
}

#[test]
fn json_export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    for s in ["G", "Ghat"] {
        let first = dir.path().join(format!("{s}.json"));
        let o = dgl(&["export", "--example", "unital-ring", "--param", "n=7", "--structure", s, "--output", path_str(&first)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        let o = dgl(&["export", "--example", "unital-ring", "--param", "n=7", "--fragment", path_str(&first)]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        assert_eq!(o.stdout, std::fs::read(&first).unwrap());
    }
    // a record for another pair is refused
    let o = dgl(&["export", "--example", "unital-ring", "--param", "n=5", "--fragment", path_str(&dir.path().join("G.json"))]);
    assert_eq!(code(&o), 2);
}

#[test]
fn oversized_export_exits_3() {
    let o = dgl(&["export", "--example", "unital-ring", "--param", "n=7", "--cap", "5"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn reports_are_byte_identical_across_runs_and_thread_counts() {
    let args = ["verify", "--example", "semidirect-z2-z5", "--suite", "all", "--seed", "17", "--samples", "100"];
    let one = dgl_env(&args, "DGL_THREADS", "1");
    let four = dgl_env(&args, "DGL_THREADS", "4");
    let again = dgl(&args);
    assert_eq!(code(&one), 0, "{}", stderr(&one));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, again.stdout);
    assert!(String::from_utf8_lossy(&one.stdout).contains("\"seed\": 17"));
    let other = dgl(&["verify", "--example", "semidirect-z2-z5", "--suite", "all", "--seed", "18", "--samples", "100"]);
    assert_ne!(one.stdout, other.stdout);
}
