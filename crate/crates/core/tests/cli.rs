use std::path::Path;
use std::process::{Command, Output};

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_distchaos"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env("DISTCHAOS_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn code(out: &Path, args: &[&str]) -> i32 {
    run(out, args).status.code().unwrap_or(-1)
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn json(dir: &Path, name: &str) -> serde_json::Value {
    serde_json::from_str(&read(dir, name)).unwrap()
}

#[test]
fn interval_profile_has_a_row_per_threshold_and_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["psi", "--system", "tent:2", "--pair", "0.1,0.2", "--horizon", "10000"]), 0);
    let csv = read(dir.path(), "profile.csv");
    let manifest = csv.lines().take_while(|l| l.starts_with('#')).count();
    assert!(manifest > 0);
    let mut rows = csv.lines().skip(manifest);
    assert_eq!(rows.next(), Some("t,n,psi"));
    let rows: Vec<&str> = rows.collect();
    let ns: std::collections::BTreeSet<&str> = rows.iter().map(|r| r.split(',').nth(1).unwrap()).collect();
    assert_eq!(rows.len(), 11 * ns.len());
    assert!(ns.contains("10000"));
    let doc = json(dir.path(), "classification.json");
    assert!(doc["manifest"]["command"].is_string());
}

#[test]
fn shift_profile_of_family_members() {
    let dir = tempfile::tempdir().unwrap();
    let c = code(dir.path(), &["psi", "--system", "shift", "--pair", "family:1:01,family:1:10", "--horizon", "20000"]);
    assert_eq!(c, 0);
    assert!(read(dir.path(), "profile.csv").contains("t,n,psi"));
}

#[test]
fn missing_pair_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["psi", "--system", "tent:2"]), 2);
}

#[test]
fn shift_dcpoint_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["shift-dcpoint", "--x0", "|0", "--epsilon", "0.5"]), 0);
    assert_eq!(json(dir.path(), "certificate.json")["report"]["pass"], true);
    assert_eq!(code(dir.path(), &["shift-dcpoint", "--x0", "|0", "--epsilon", "0"]), 2);
}

#[test]
fn horseshoe_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["horseshoe", "--system", "logistic:4", "--kmax", "4"]), 0);
    assert_eq!(json(dir.path(), "horseshoe.json")["report"]["horseshoe"]["k"], 1);
    let none = code(dir.path(), &["horseshoe", "--system", "logistic:3.5699456718695445", "--kmax", "2"]);
    assert_eq!(none, 1);
}

#[test]
fn envelope_reports_the_first_inclusion_failure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(dir.path(), &["envelope", "--m", "2", "--horizon", "256", "--pair-horizon", "4096"]), 0);
    let doc = json(dir.path(), "envelope.json");
    assert_eq!(doc["report"]["verdict"], "first inclusion fails");
    assert!(!doc["report"]["shrink_witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn config_file_overrides_flags_and_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# horizon from the file wins\nhorizon = 2000\n").unwrap();
    let cfg_arg = cfg.to_str().unwrap();
    let out = dir.path().join("a");
    let args = ["psi", "--system", "tent:2", "--pair", "0.1,0.2", "--horizon", "10000", "--config", cfg_arg];
    assert_eq!(code(&out, &args), 0);
    let csv = read(&out, "profile.csv");
    assert!(csv.lines().any(|l| l == "# config.horizon: 2000"), "{csv}");
    assert!(!csv.contains(",10000,"));

    std::fs::write(&cfg, "horizon = 2000\nbogus = 1\n").unwrap();
    let o = run(&out, &args);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bogus"));
}

#[test]
fn identical_inputs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["kolyada", "--depth", "8", "--horizon", "20000", "--x0-plateau", "1", "--seed", "3"];
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(code(&a, &args), 0);
    assert_eq!(code(&b, &args), 0);
    for name in ["intervals.csv", "trace.csv", "fiber-stats.json"] {
        assert_eq!(read(&a, name), read(&b, name), "{name}");
    }
    assert!(read(&a, "trace.csv").starts_with("# "));
}
