use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn corpus(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(rel)
}

fn good(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_good"))
        .args(args)
        .current_dir(dir)
        .env("GOOD_NO_COLOR", "1")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn copy(dir: &Path, rel: &str) -> String {
    let name = Path::new(rel).file_name().unwrap().to_str().unwrap().to_string();
    std::fs::copy(corpus(rel), dir.join(&name)).unwrap();
    name
}

fn mutate(dir: &Path, rel: &str, from: &str, to: &str) -> String {
    let name = copy(dir, rel);
    let src = std::fs::read_to_string(dir.join(&name)).unwrap();
    assert!(src.contains(from), "{from:?} not in {rel}");
    std::fs::write(dir.join(&name), src.replacen(from, to, 1)).unwrap();
    name
}

#[test]
fn project_writes_three_views() {
    let dir = TempDir::new().unwrap();
    let bag = copy(dir.path(), "bag/Bag.java");
    let o = good(dir.path(), &["project", &bag, "--out", "views"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    for kind in ["external", "internal", "code"] {
        assert!(dir.path().join(format!("views/Bag.{kind}.java")).is_file());
    }
    let external = std::fs::read_to_string(dir.path().join("views/Bag.external.java")).unwrap();
    assert!(!external.contains("lst"));
}

#[test]
fn project_single_view() {
    let dir = TempDir::new().unwrap();
    let bag = copy(dir.path(), "bag/Bag.java");
    let o = good(dir.path(), &["project", &bag, "--view", "internal"]);
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("Bag.internal.java").is_file());
    assert!(!dir.path().join("Bag.external.java").exists());
}

#[test]
fn missing_input_is_an_io_error() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&good(dir.path(), &["project", "Nope.java"])), 3);
    assert_eq!(code(&good(dir.path(), &["check", "Nope.java"])), 3);
}

#[test]
fn parse_errors_still_project_what_parsed() {
    let dir = TempDir::new().unwrap();
    let bag = mutate(dir.path(), "bag/Bag.java", "public int size()", "public int size(int int)");
    let o = good(dir.path(), &["project", &bag]);
    assert_eq!(code(&o), 2);
    assert!(text(&o.stderr).contains("P002"));
    let external = std::fs::read_to_string(dir.path().join("Bag.external.java")).unwrap();
    assert!(external.contains("public void add(T elem)"));
}

#[test]
fn usage_errors_exit_two() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&good(dir.path(), &["frobnicate"])), 2);
    assert_eq!(code(&good(dir.path(), &["project"])), 2);
    let o = good(dir.path(), &["--help"]);
    assert_eq!(code(&o), 0);
    assert!(text(&o.stdout).contains("gen-tests"));
}

#[test]
fn check_clean_corpus_machine_report() {
    let dir = TempDir::new().unwrap();
    let bag = copy(dir.path(), "bag/Bag.java");
    let robust = copy(dir.path(), "bag/BagRobust.java");
    let o = good(dir.path(), &["check", &bag, &robust, "--format", "machine"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stdout));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["schema_version"], 1);
    assert_eq!(report["files"].as_array().unwrap().len(), 2);
    assert_eq!(report["files"][0]["path"], bag);
    assert_eq!(report["summary"]["errors"], 0);
    let obligations = report["files"][0]["obligations"].as_array().unwrap();
    assert!(obligations.iter().any(|o| o["rule"] == "R1_invariant"));
}

#[test]
fn check_findings_exit_one() {
    let dir = TempDir::new().unwrap();
    let bag = mutate(dir.path(), "bag/Bag.java", "   * @pure\n   * @ensures mult", "   * @pure\n   * @assignable lst\n   * @ensures mult");
    let o = good(dir.path(), &["check", &bag]);
    assert_eq!(code(&o), 1);
    let out = text(&o.stdout);
    assert!(out.contains("E002") && out.contains("[Bag.mult"), "{out}");
}

#[test]
fn gen_tests_writes_skeleton_and_manifest() {
    let dir = TempDir::new().unwrap();
    let robust = copy(dir.path(), "bag/BagRobust.java");
    let model = copy(dir.path(), "bag/remove.model");
    let o = good(dir.path(), &["gen-tests", &robust, "--model", &model, "--out", "tests"]);
    assert_eq!(code(&o), 0, "{}", text(&o.stderr));
    let java = std::fs::read_to_string(dir.path().join("tests/BagRemoveTest.java")).unwrap();
    assert!(java.contains("assertThrows(ArgumentNotFoundException.class"));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("tests/BagRemoveTest.json")).unwrap()).unwrap();
    assert_eq!(manifest["cases"].as_array().unwrap().len(), 3);
}

#[test]
fn internal_tests_cover_the_external_cases() {
    let dir = TempDir::new().unwrap();
    let robust = copy(dir.path(), "bag/BagRobust.java");
    let model = copy(dir.path(), "bag/remove.model");
    let names = |view: &str| -> Vec<String> {
        let out = format!("out-{view}");
        let o = good(dir.path(), &["gen-tests", &robust, "--model", &model, "--view", view, "--out", &out]);
        assert_eq!(code(&o), 0, "{}", text(&o.stderr));
        let file = std::fs::read_dir(dir.path().join(&out))
            .unwrap()
            .map(|e| e.unwrap().path())
            .find(|p| p.extension().is_some_and(|x| x == "json"))
            .unwrap();
        let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(file).unwrap()).unwrap();
        m["cases"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect()
    };
    let external = names("external");
    let internal = names("internal");
    assert!(external.iter().all(|n| internal.contains(n)));
}

#[test]
fn gen_tests_missing_model_is_io() {
    let dir = TempDir::new().unwrap();
    let robust = copy(dir.path(), "bag/BagRobust.java");
    assert_eq!(code(&good(dir.path(), &["gen-tests", &robust, "--model", "none.model"])), 3);
}

#[test]
fn gen_tests_bad_model_exits_one() {
    let dir = TempDir::new().unwrap();
    let robust = copy(dir.path(), "bag/BagRobust.java");
    let model = mutate(dir.path(), "bag/remove.model", "subspec \"elem is not present\"", "subspec \"gone\"");
    let o = good(dir.path(), &["gen-tests", &robust, "--model", &model]);
    assert_eq!(code(&o), 1);
    assert!(text(&o.stderr).contains("T003") || text(&o.stdout).contains("T003"));
}

#[test]
fn workflow_status_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = corpus("workflow/violation.json");
    let ok = corpus("workflow/consistent.json");
    assert_eq!(code(&good(dir.path(), &["workflow", "status", bad.to_str().unwrap()])), 1);
    let o = good(dir.path(), &["workflow", "status", ok.to_str().unwrap(), "--format", "machine"]);
    assert_eq!(code(&o), 0);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["violations"].as_array().unwrap().len(), 0);
    std::fs::write(dir.path().join("junk.json"), r#"{"statuses": {"Nowhere": "draft"}}"#).unwrap();
    assert_eq!(code(&good(dir.path(), &["workflow", "status", "junk.json"])), 2);
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let bag = copy(dir.path(), "bag/Bag.java");
    std::fs::write(dir.path().join("good.toml"), "view = \"external\"\nout = \"gen\"\nformat = \"machine\"\n").unwrap();
    assert_eq!(code(&good(dir.path(), &["project", &bag])), 0);
    assert!(dir.path().join("gen/Bag.external.java").is_file());
    assert!(!dir.path().join("gen/Bag.code.java").exists());
    let o = good(dir.path(), &["check", &bag]);
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_ok());
    let o = good(dir.path(), &["check", &bag, "--format", "human"]);
    assert!(serde_json::from_slice::<serde_json::Value>(&o.stdout).is_err());

    std::fs::write(dir.path().join("bad.toml"), "colour = true\n").unwrap();
    assert_eq!(code(&good(dir.path(), &["--config", "bad.toml", "check", &bag])), 2);
}

#[test]
fn output_is_plain_without_a_terminal() {
    let dir = TempDir::new().unwrap();
    let bag = mutate(dir.path(), "bag/Bag.java", "@desc Adds an element.", "");
    let o = Command::new(env!("CARGO_BIN_EXE_good")).args(["check", &bag]).current_dir(dir.path()).output().unwrap();
    assert_eq!(code(&o), 1);
    assert!(!text(&o.stdout).contains('\x1b'));
    assert!(text(&o.stdout).contains("E001"));
}
