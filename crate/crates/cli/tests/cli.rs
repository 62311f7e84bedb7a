use osp_core::fixtures::{anchor_fixture, greedy_fixture, interleaved_constant_fixture};
use osp_core::interchange::save_mechanism;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write_fixture(dir: &Path, name: &str, m: &osp_core::Mechanism) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, format!("{:#}\n", save_mechanism(m))).unwrap();
    path
}

fn osp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_osp")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn check_passes_on_greedy_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "greedy.json", &greedy_fixture());
    let o = osp(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("verdict: obviously strategyproof"));
}

#[test]
fn check_fails_on_anchor_fixture_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "anchor.json", &anchor_fixture());
    let o = osp(&["check", f.to_str().unwrap(), "--minimize"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("not obviously strategyproof"));
    assert!(out.contains("negative cycle"));
}

#[test]
fn check_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "anchor.json", &anchor_fixture());
    let a = osp(&["check", f.to_str().unwrap(), "--format", "json"]);
    let b = osp(&["check", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn malformed_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.json");
    std::fs::write(&f, "{ not json").unwrap();
    let o = osp(&["check", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let o = osp(&["check", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn classify_points_to_order_on_interleaved_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "mix.json", &interleaved_constant_fixture());
    let o = osp(&["classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("run `order` first"));
}

#[test]
fn order_then_classify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "mix.json", &interleaved_constant_fixture());
    let out = dir.path().join("ordered.json");
    let o = osp(&["order", f.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("transformed 1 interleaved query"));

    let o = osp(&["classify", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("three-way greedy"));
}

#[test]
fn classify_passes_on_greedy_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "greedy.json", &greedy_fixture());
    let o = osp(&["classify", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn witness_prints_the_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_fixture(dir.path(), "anchor.json", &anchor_fixture());
    let o = osp(&["witness", f.to_str().unwrap(), "--minimize", "--agent", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("\"weight\""));

    let f = write_fixture(dir.path(), "greedy.json", &greedy_fixture());
    let o = osp(&["witness", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("no negative cycle"));
}

#[test]
fn m4_preconditions_exit_2() {
    let o = osp(&["m4", "--n", "3", "--m", "4", "--domain", "1,3,10,35"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n must be even and >= 4"));

    let o = osp(&["m4", "--n", "4", "--m", "2", "--domain", "1,3,10,35"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m >= n required"));
}

#[test]
fn m4_emits_files_and_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m4");
    let o = osp(&[
        "m4", "--n", "4", "--m", "4", "--domain", "1,3,10,35", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("obviously strategyproof"));
    for name in ["mechanism.json", "ratios.csv", "summary.json"] {
        assert!(out.join(name).is_file(), "missing {name}");
    }
    let summary = std::fs::read_to_string(out.join("summary.json")).unwrap();
    let v: serde_json::Value = serde_json::from_str(&summary).unwrap();
    assert_eq!(v["obviously_strategyproof"], true);

    // The emitted mechanism must load and pass check on its own.
    let o = osp(&["check", out.join("mechanism.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn optimal_oracle() {
    let o = osp(&["optimal", "--types", "1,2", "--m", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("optimal makespan 2"));

    let o = osp(&["optimal", "--types", "1,2", "--m", "99"]);
    assert_eq!(o.status.code(), Some(2));
}
