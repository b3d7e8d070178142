use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_cqca"));
    c.env_remove("CQCA_FIXTURES");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Byte-exact comparison; `UPDATE_GOLDEN=1` rewrites the file.
fn check_golden(name: &str, args: &[&str]) {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &out.stdout).unwrap();
    }
    let want = std::fs::read(&path).unwrap();
    assert!(out.stdout == want, "{name} differs from golden output");
}

#[test]
fn golden_classify() {
    check_golden("classify_tg.json", &["classify", "--cqca", "Tg"]);
    check_golden("classify_tp.json", &["classify", "--cqca", "Tp"]);
}

#[test]
fn golden_period() {
    check_golden("period_tf_48.json", &["period", "--cqca", "Tf", "--Nmax", "48", "--golden"]);
    check_golden("period_te_16.json", &["period", "--cqca", "Te", "--Nmax", "16"]);
}

#[test]
fn golden_render() {
    check_golden("render_tg_6.txt", &["render", "--cqca", "Tg", "-N", "6"]);
    check_golden(
        "render_te_4_x0.pbm",
        &["render", "--cqca", "Te", "-N", "4", "--cell", "two", "--seed", "X0", "--format", "pbm"],
    );
    check_golden("render_tf_8.json", &["render", "--cqca", "Tf", "-N", "8", "--format", "json"]);
}

#[test]
fn golden_stabilizers() {
    check_golden("stabilizers_tg_4x4.txt", &["stabilizers", "--cqca", "Tg", "-N", "4", "-M", "4"]);
    check_golden(
        "stabilizers_te_3x2.txt",
        &["stabilizers", "--cqca", "Te", "-N", "3", "-M", "2", "--cell", "two"],
    );
}

#[test]
fn classify_reports_flags() {
    let out = run(&["classify", "--cqca", "Tg"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["class"], "Glider(1)");
    assert_eq!(v["simple"], true);
    assert_eq!(v["entangling"], true);
    let v: serde_json::Value = serde_json::from_slice(&run(&["classify", "--cqca", "Tp"]).stdout).unwrap();
    assert_eq!(v["class"], "Periodic(0)");
    assert_eq!(v["entangling"], false);
}

#[test]
fn user_errors_exit_one() {
    let out = run(&["classify", "--cqca", "trace=u^-1+"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
    assert_eq!(run(&["classify", "--cqca", "Tq"]).status.code(), Some(1));
    assert_eq!(run(&["period", "--cqca", "Tf"]).status.code(), Some(1));
    assert_eq!(run(&["period", "--cqca", "Tf", "--Nmax", "5000"]).status.code(), Some(1));
}

#[test]
fn property_failures_exit_three() {
    let out = run(&["universality", "--cqca", "Tp", "-N", "4"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["verdict"], "not universal");
    assert_eq!(run(&["universality", "--cqca", "Tg", "-N", "4"]).status.code(), Some(0));
}

#[test]
fn golden_mismatch_via_env_fixture() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("periods_tf.json"),
        r#"{"cqca": "Tf", "rows": [{"n": 2, "l": 3}, {"n": 4, "l": 7}]}"#,
    )
    .unwrap();
    let out = bin()
        .args(["period", "--cqca", "Tf", "--Nmax", "8", "--golden"])
        .env("CQCA_FIXTURES", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["golden"]["mismatches"][0]["n"], 4);
}

#[test]
fn stabilizers_verify_passes() {
    let out = run(&["stabilizers", "--cqca", "Tg", "-N", "4", "-M", "4", "--verify"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn render_fractal_row_count() {
    let out = run(&["render", "--cqca", "Tf", "-N", "512", "--format", "pbm"]);
    assert!(out.stdout.starts_with(b"P1\n512 768\n"));
}

#[test]
fn compile_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = dir.path().join("p.json");
    let p = pattern.to_str().unwrap();
    let out = run(&[
        "compile", "--cqca", "Tg", "-N", "3", "--site", "1", "--row", "2", "--angle", "0.001", "--out", p,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["simulate", "--pattern", p, "--report"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);

    let out = run(&["simulate", "--pattern", p, "--sample", "5"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["simulate", "--pattern", p, "--state", "zero-overlap", "--rescale"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn perturbed_simulation_with_rescale() {
    let dir = tempfile::tempdir().unwrap();
    let pattern = dir.path().join("p.json");
    let p = pattern.to_str().unwrap();
    let out = run(&[
        "compile", "--cqca", "Tg", "-N", "2", "--pauli", "Z0", "--angle", "0.001", "--buffers", "2", "--out", p,
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["simulate", "--pattern", p, "--state", "perturbed:0.1:3", "--rescale", "--report"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn apply_closure_speedup() {
    let v: serde_json::Value =
        serde_json::from_slice(&run(&["apply", "--cqca", "Tg", "--pauli", "Z1 @N=4", "--steps", "2"]).stdout)
            .unwrap();
    assert_eq!(v["images"][2], "X0 Z1 X2 @N=4");
    let v: serde_json::Value =
        serde_json::from_slice(&run(&["closure", "--pauli", "X0 @N=1", "--pauli", "Z0 @N=1"]).stdout).unwrap();
    assert_eq!(v["closure_size"], 3);
    let v: serde_json::Value = serde_json::from_slice(&run(&["speedup", "-N", "16"]).stdout).unwrap();
    assert_eq!(v["ratio"], "2/16");
}

#[test]
fn text_output() {
    let out = run(&["classify", "--cqca", "Tf", "--text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.contains("class: Fractal\n"));
}
