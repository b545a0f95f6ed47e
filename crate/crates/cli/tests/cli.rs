use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("spawn cyclab")
}

#[test]
fn harnack_passes_on_fixture() {
    let tmp = tempfile::tempdir().unwrap();
    let u = fixture("u_exp.json");
    let out = run(&["harnack", "verify", "--u", u.to_str().unwrap(), "--kmax", "16"], tmp.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(tmp.path().join("report.json").exists());
    assert!(tmp.path().join("harnack.csv").exists());
}

#[test]
fn k_below_threshold_is_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let u = fixture("u_exp2.json");
    let out = run(&["harnack", "verify", "--u", u.to_str().unwrap(), "--k", "4"], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_json_is_a_parse_error() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, "{\"family\": ").unwrap();
    let out = run(&["weight", "check", "--spec", bad.to_str().unwrap()], &tmp.path().join("out"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.json"));
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclab")).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn report_config_reruns_identically() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let spec = fixture("w_table.json");
    let first = run(&["weight", "subseq", "--spec", spec.to_str().unwrap(), "--kmax", "256"], &a);
    assert_eq!(first.status.code(), Some(0));
    let report = a.join("report.json");
    let second = run(&["--config", report.to_str().unwrap()], &b);
    assert_eq!(second.status.code(), Some(0));
    let read = |d: &Path| std::fs::read(d.join("subsequence.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}
