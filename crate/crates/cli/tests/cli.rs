use std::path::Path;
use std::process::{Command, Output};

const ROT90: &str = r#"{"generators": [[["0","-1"],["1","0"]]]}"#;
const SANOV: &str = r#"{"generators": [[["1","2"],["0","1"]], [["1","0"],["2","1"]]]}"#;
const CONTRACTING: &str = r#"{"generators": [[["1/2","0"],["0","1/2"]]]}"#;

fn psv(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_psv"))
        .current_dir(dir)
        .args(args)
        .env("PSV_NUM_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("rot.json"), ROT90).unwrap();
    std::fs::write(dir.path().join("sanov.json"), SANOV).unwrap();
    std::fs::write(dir.path().join("bad.json"), CONTRACTING).unwrap();
    dir
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr_json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stderr).expect("error JSON on stderr")
}

#[test]
fn group_ends_classifies_free_group() {
    let dir = setup();
    let o = psv(dir.path(), &["group", "ends", "--group", "sanov.json", "--radius", "5"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("classification: many"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/ends.json")).unwrap()).unwrap();
    assert_eq!(v["counts"][0], serde_json::json!([1, 4]));
    assert_eq!(v["counts"][1], serde_json::json!([2, 12]));
}

#[test]
fn group_enumerate_writes_ball() {
    let dir = setup();
    let o = psv(dir.path(), &["group", "enumerate", "--group", "rot.json", "--radius", "3", "--out", "b"]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(dir.path().join("b/cayley.dot")).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 8);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("b/ball.json")).unwrap()).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn surface_ends_stabilizes_at_group_order() {
    let dir = setup();
    let o = psv(dir.path(), &["surface", "ends", "--group", "rot.json", "--radius", "4"]);
    assert!(o.status.success());
    let rows: Vec<serde_json::Value> =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/census.json")).unwrap()).unwrap();
    assert_eq!(rows.last().unwrap()["total"], 4);
    assert_eq!(rows[2]["total"], 4);
}

#[test]
fn surface_check_passes() {
    let dir = setup();
    for group in ["rot.json", "sanov.json"] {
        let o = psv(dir.path(), &["surface", "check", "--group", group, "--radius", "2", "--seed", "7"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/report.json")).unwrap()).unwrap();
        assert_eq!(v["passed"], true);
    }
}

#[test]
fn build_is_deterministic_and_reloads() {
    let dir = setup();
    let read = |p: &str| std::fs::read(dir.path().join(p)).unwrap();
    assert!(psv(dir.path(), &["surface", "build", "--group", "sanov.json", "--radius", "2", "--out", "a"]).status.success());
    assert!(psv(dir.path(), &["surface", "build", "--group", "sanov.json", "--radius", "2", "--out", "b"]).status.success());
    assert_eq!(read("a/manifest.json"), read("b/manifest.json"));
    let text = String::from_utf8(read("a/manifest.json")).unwrap();
    let s = psv_core::io::load_manifest(&text).unwrap();
    assert_eq!(psv_core::io::manifest_json(&s).unwrap(), text);
}

#[test]
fn trace_writes_path() {
    let dir = setup();
    let o = psv(
        dir.path(),
        &["surface", "trace", "--group", "rot.json", "--radius", "2", "--x", "0.5", "--y", "-0.5", "--angle", "1.1", "--max-len", "3"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/trace.json")).unwrap()).unwrap();
    assert_eq!(v["termination"]["kind"], "max_length");
    assert_eq!(v["total_length"], 3.0);
}

#[test]
fn veech_check_finds_candidate() {
    let dir = setup();
    let o = psv(
        dir.path(),
        &["veech", "check", "--group", "rot.json", "--radius", "3", "--matrix", r#"[["0","-1"],["1","0"]]"#],
    );
    assert!(o.status.success());
    assert!(stdout(&o).contains("0 failures"));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/veech.json")).unwrap()).unwrap();
    assert_eq!(v["constraint"]["candidate"], "1");
}

#[test]
fn render_outputs() {
    let dir = setup();
    let o = psv(dir.path(), &["render", "--group", "rot.json", "--radius", "3", "--target", "graph"]);
    assert!(o.status.success());
    let dot = std::fs::read_to_string(dir.path().join("out/copies.dot")).unwrap();
    assert_eq!(dot.matches(" -> ").count(), 8);
    let o = psv(dir.path(), &["render", "--group", "sanov.json", "--radius", "1", "--target", "base", "--copy", "2"]);
    assert!(o.status.success());
    let svg = std::fs::read_to_string(dir.path().join("out/sheet-2-base.svg")).unwrap();
    assert!(svg.contains("M[1]") && svg.contains("m-1[1]"));
}

#[test]
fn input_errors_exit_two() {
    let dir = setup();
    let cases: &[&[&str]] = &[
        &["render", "--group", "rot.json", "--radius", "2", "--target", "buffer1:9"],
        &["render", "--group", "rot.json", "--radius", "2", "--target", "nowhere"],
        &["surface", "build", "--group", "missing.json", "--radius", "2"],
        &["surface", "build", "--group", "rot.json", "--radius", "2", "--cut", "2"],
        &["surface", "build", "--group", "bad.json", "--radius", "2"],
        &["surface", "trace", "--group", "rot.json", "--radius", "2", "--copy", "7.7", "--x", "0", "--y", "1", "--angle", "0"],
        &["surface", "explode"],
    ];
    for args in cases {
        let o = psv(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert_eq!(stderr_json(&o)["error"], "input", "{args:?}");
    }
}

#[test]
fn bad_thread_count_is_rejected() {
    let dir = setup();
    let o = Command::new(env!("CARGO_BIN_EXE_psv"))
        .current_dir(dir.path())
        .args(["surface", "build", "--group", "rot.json", "--radius", "1"])
        .env("PSV_NUM_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}
