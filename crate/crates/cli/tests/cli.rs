use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nullcone"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const S545: &str = r#"{"dim":5,"constants":[
  {"a":2,"b":3,"c":2,"value":2},{"a":4,"b":5,"c":2,"value":-1},{"a":1,"b":5,"c":4,"value":-1},
  {"a":3,"b":4,"c":4,"value":-1},{"a":3,"b":5,"c":5,"value":-1},{"a":1,"b":4,"c":5,"value":1}]}"#;

#[test]
fn tables_match_golden_files() {
    for which in ["splitlcs", "splitclasses", "appendixA1", "appendixA2", "appendixA3", "dim3", "dim4", "dim5"] {
        let json = run(&["tables", "--which", which]);
        assert!(json.status.success(), "{which}");
        let expected = std::fs::read_to_string(golden(&format!("{which}.json"))).unwrap();
        assert_eq!(String::from_utf8(json.stdout).unwrap(), expected, "{which}.json drifted");

        let text = run(&["tables", "--which", which, "--text"]);
        let expected = std::fs::read_to_string(golden(&format!("{which}.txt"))).unwrap();
        assert_eq!(String::from_utf8(text.stdout).unwrap(), expected, "{which}.txt drifted");
    }
}

#[test]
fn tables_are_identical_across_thread_counts() {
    let one = run(&["tables", "--which", "dim5", "--threads", "1"]);
    let many = bin().args(["tables", "--which", "dim5"]).env("NULLCONE_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn golden_split_rows_carry_the_tabulated_values() {
    let lcs: Value = serde_json::from_str(&std::fs::read_to_string(golden("splitlcs.json")).unwrap()).unwrap();
    let e8 = &lcs["rows"][4];
    assert_eq!(e8[0], "split E8");
    assert_eq!(e8[3][0], 120);
    assert_eq!(e8[3][1], 112);
    assert_eq!(e8[4], 248);

    let classes: Value = serde_json::from_str(&std::fs::read_to_string(golden("splitclasses.json")).unwrap()).unwrap();
    assert_eq!(classes["rows"][1][2], "[23,21,19,17,15×2,13×2,11×3,9×3,7×3,5×3,3×4,1×4]");

    let a3: Value = serde_json::from_str(&std::fs::read_to_string(golden("appendixA3.json")).unwrap()).unwrap();
    let e8 = a3["rows"].as_array().unwrap().iter().find(|r| r[0] == "e8 split").unwrap();
    assert_eq!(e8[6], 256);
}

#[test]
fn certify_s545_reports_margin_minus_one() {
    let dir = tempfile::tempdir().unwrap();
    let alg = write(dir.path(), "s545.json", S545);
    let layout = write(dir.path(), "p2k1.json", r#"{"p":2,"k":1,"roles":"canonical"}"#);
    let out = run(&["certify", "--algebra", &alg, "--layout", &layout, "--class", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["certified"], true);
    assert_eq!(v["worst_margin"], "-1");

    let out = run(&["certify", "--algebra", &alg, "--signature", "2,1", "--class", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["certified"], false);
}

#[test]
fn build_then_certify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["build", "--split", "G2", "--pad"]);
    assert!(out.status.success());
    let bundle = stdout_json(&out);
    assert_eq!(bundle["algebra"]["dim"], 16);
    let class: Vec<&str> = bundle["class"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert_eq!(class, ["11", "9", "7", "5", "3", "3", "1", "1"]);

    let path = write(dir.path(), "g2.json", std::str::from_utf8(&out.stdout).unwrap());
    let cert = run(&["certify", "--algebra", &path]);
    assert_eq!(cert.status.code(), Some(0));
    let cert = stdout_json(&cert);
    assert_eq!(cert["worst_margin"], "-1");
    assert_eq!(cert["saturated"], true);

    let check = stdout_json(&run(&["check", "--algebra", &path]));
    assert_eq!(check["jacobi"]["ok"], true);
    let curv = stdout_json(&run(&["curvature", "--algebra", &path]));
    assert_eq!(curv["all_invariants_zero"], true);
    assert_eq!(curv["killing_operator"]["nilpotent"], true);
}

#[test]
fn unpadded_build_emits_the_graded_algebra() {
    let v = stdout_json(&run(&["build", "--split", "A2+G2"]));
    assert_eq!(v["bracket"]["dim"], 22);
    assert_eq!(v["dims"], serde_json::json!([4, 2, 1, 1, 1]));
}

#[test]
fn search_and_find_class_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let su2 = write(
        dir.path(),
        "su2.json",
        r#"{"dim":3,"constants":[{"a":1,"b":2,"c":3,"value":1},{"a":2,"b":3,"c":1,"value":1},{"a":1,"b":3,"c":2,"value":-1}]}"#,
    );
    let out = run(&["search", "--algebra", &su2, "--signature", "1,1", "--exhaustive"]);
    assert_eq!(out.status.code(), Some(2));
    let v = stdout_json(&out);
    assert_eq!(v["verdict"], "infeasible_for_all_searched_frames");
    assert_eq!(v["frames_searched"], 48);

    let s545 = write(dir.path(), "s545.json", S545);
    let out = run(&["find-class", "--algebra", &s545, "--signature", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["worst_margin"], "-1");

    let out = run(&["search", "--algebra", &s545, "--signature", "2,1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["verdict"], "certified");
}

#[test]
fn curvature_of_sl2_semidirect_has_single_ricci_component() {
    let sample = run(&["catalog", "--name", "sl(2,R)|+R^2", "--sample", "0"]);
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "sl2.json", std::str::from_utf8(&sample.stdout).unwrap());
    let v = stdout_json(&run(&["curvature", "--algebra", &path, "--signature", "2,1"]));
    assert_eq!(v["ricci"], serde_json::json!([{"a": 3, "b": 3, "value": "-6"}]));
    assert_eq!(v["all_invariants_zero"], true);
}

#[test]
fn catalog_verification_of_dim3_passes() {
    let out = run(&["catalog", "--which", "dim3", "--verify", "--json-indent", "0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["passed"], true);
}

#[test]
fn errors_exit_with_status_one() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["tables", "--which", "dim9"]).status.code(), Some(1));
    assert_eq!(run(&["check", "--algebra", "/nonexistent/alg.json"]).status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dim\": 2, \"constants\": [");
    let out = run(&["check", "--algebra", &bad]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());

    let alg = write(dir.path(), "s545.json", S545);
    assert_eq!(run(&["certify", "--algebra", &alg, "--class", "2,1"]).status.code(), Some(1));
    assert_eq!(run(&["certify", "--algebra", &alg, "--signature", "1,1", "--class", "1"]).status.code(), Some(1));
}

#[test]
fn jacobi_failure_is_a_negative_answer() {
    let dir = tempfile::tempdir().unwrap();
    // [e1,e2] = e3 and [e1,e3] = e1 leave the cyclic sum equal to e1.
    let alg = write(
        dir.path(),
        "bad.json",
        r#"{"dim":3,"constants":[{"a":1,"b":2,"c":3,"value":1},{"a":1,"b":3,"c":1,"value":1}]}"#,
    );
    let out = run(&["check", "--algebra", &alg]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stdout_json(&out)["jacobi"]["ok"], false);
}
