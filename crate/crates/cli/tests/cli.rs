use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const A2: &str = "FIELD 1009\nNILBOUND 2\nVERTICES 2\nARROW a 1 2\n";
const SEMISIMPLE: &str = "FIELD 1009\nNILBOUND 2\nVERTICES 3\n";

fn radhom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radhom")).args(args).env_remove("RADHOM_BOUND").output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn dims_of_a2() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    let o = radhom(&["dims", f.to_str().unwrap(), "--format", "json", "--bound", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["dim"], 3);
    assert_eq!(v["gl_dim"], "1");
    assert_eq!(v["dom_dim"], "1");
    assert_eq!(v["gorenstein"], "yes(1)");
    assert_eq!(v["bound"], 10);
}

#[test]
fn semisimple_is_zero_everywhere() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "k3.alg", SEMISIMPLE);
    let v = json(&radhom(&["dims", f.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["gl_dim"], "0");
    assert_eq!(v["gorenstein"], "yes(0)");
    assert_eq!(v["inj_dim_A_left"], "0");
    assert_eq!(v["inj_dim_J_left"], "zero");
}

#[test]
fn malformed_file_exits_2_with_position() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bad.alg", "FIELD 1009\nVERTICES 2\nARROW a 1 3\n");
    let o = radhom(&["dims", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn check_passes_on_a2() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    let o = radhom(&["check", f.to_str().unwrap(), "--checks", "thm_injdim_radical", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v[0]["check"], "thm_injdim_radical");
    assert_eq!(v[0]["verdict"], "pass");
}

#[test]
fn unknown_check_exits_2() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    assert_eq!(radhom(&["check", f.to_str().unwrap(), "--checks", "prop99"]).status.code(), Some(2));
}

#[test]
fn zero_bound_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    assert_eq!(radhom(&["dims", f.to_str().unwrap(), "--bound", "0"]).status.code(), Some(2));
}

#[test]
fn field_override() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    let v = json(&radhom(&["dims", f.to_str().unwrap(), "--format", "json", "--field", "Q"]));
    assert_eq!(v["field"], "Q");
}

#[test]
fn module_literal() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "a2.alg", A2);
    let o = radhom(&["module", f.to_str().unwrap(), "--module", "MODULE left 1 0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert!(v["proj_dim"].is_string());
    assert!(v["inj_dim"].is_string());
}

#[test]
fn sweep_needs_seed() {
    assert_eq!(radhom(&["sweep", "--families", "nakayama:3"]).status.code(), Some(2));
}

#[test]
fn sweep_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let o = radhom(&[
            "sweep",
            "--seed",
            "11",
            "--families",
            "nakayama:12,local:6",
            "--checks",
            "thm_injdim_radical,question_syzygy",
            "--bound",
            "8",
            "--format",
            "json",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
        assert!(v["timing"]["wall_time_s"].is_number());
        v.as_object_mut().unwrap().remove("timing");
        v
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 11);
    assert_eq!(a["families"][1]["seed"], 12);
    assert!(a["algebras"].as_u64().unwrap() > 5);
}

#[test]
fn sweep_from_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        dir.path(),
        "specs.json",
        r#"[{"family":"truncated","count":4,"vertices":2,"arrows":3,"nilbound":3,"density":0.3,"seed":5,"field":"7","max_dim":40}]"#,
    );
    let o = radhom(&["sweep", "--seed", "5", "--config", cfg.to_str().unwrap(), "--checks", "prop22", "--format", "csv", "--bound", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.starts_with("check,pass"));
    assert!(text.lines().nth(1).unwrap().starts_with("prop22,"));
}
