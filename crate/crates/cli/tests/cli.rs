use std::path::Path;
use std::process::{Command, Output};

use geomiracles_core::report::Report;
use geomiracles_core::{Gender, VerificationStatus};

fn geomiracles(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geomiracles"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap().trim_end().to_string()
}

fn report(path: &Path) -> Report {
    let report: Report = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    report.validate().unwrap();
    report
}

#[test]
fn four_adams_five_generations() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = geomiracles(
        &["--adams", "4", "--generations", "5", "--policy", "all-pairs", "--field", "prime", "--verify-runs", "2"],
        &out,
    );
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert_eq!(stdout(&run), "4, 6, 3, 3, 6, 16");
    let r = report(&out);
    assert_eq!(r.new_counts, vec![4, 6, 3, 3, 6, 16]);
    assert_eq!(r.miracles.nontrivial_classes, 4);
    assert_eq!(r.verification_status, VerificationStatus::Verified);
    assert_eq!(r.instances.len(), 2);
    assert_ne!(r.instances[0].prime, r.instances[1].prime);
    for entry in &r.miracles.listed {
        assert!(entry.class.witness_instances >= 2);
    }
}

#[test]
fn six_conic_adams_show_pascal_lines() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = geomiracles(
        &["--adams", "6", "--seed-mode", "conic", "--generations", "3", "--field", "rational"],
        &out,
    );
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let r = report(&out);
    let pascal: Vec<_> = r
        .miracles
        .listed
        .iter()
        .filter(|e| e.class.gender == Gender::Point && e.class.members.len() >= 3 && e.confirmed)
        .collect();
    assert_eq!(pascal.len(), 60);
    assert!(pascal.iter().all(|e| e.members.iter().all(|m| m.starts_with("SonOf(Eve_"))));
}

#[test]
fn three_adams_die_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = geomiracles(&["--adams", "3", "--generations", "9"], &out);
    assert!(run.status.success());
    assert_eq!(stdout(&run), "3, 3, 0, 0, 0, 0, 0, 0, 0, 0");
}

#[test]
fn sequence_conventions() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let run = geomiracles(
        &["--adams", "5", "--generations", "4", "--policy", "same-generation", "--emit-sequence", "cumulative"],
        &out,
    );
    assert_eq!(stdout(&run), "5, 10, 20, 85, 2100");
    let run = geomiracles(&["--adams", "4", "--generations", "0"], &out);
    assert_eq!(stdout(&run), "4");
}

#[test]
fn resume_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let snapshots = dir.path().join("snapshots");
    let snap = snapshots.to_str().unwrap();
    let first = geomiracles(&["--adams", "4", "--generations", "5", "--snapshot", snap], &dir.path().join("a.json"));
    assert!(first.status.success());
    let resumed = geomiracles(&["--adams", "4", "--generations", "6", "--resume", snap], &dir.path().join("b.json"));
    assert!(resumed.status.success(), "{}", String::from_utf8_lossy(&resumed.stderr));
    let straight = geomiracles(&["--adams", "4", "--generations", "6"], &dir.path().join("c.json"));
    assert_eq!(stdout(&resumed), "4, 6, 3, 3, 6, 16, 84");
    assert_eq!(
        report(&dir.path().join("b.json")).without_timings(),
        report(&dir.path().join("c.json")).without_timings()
    );
    assert_eq!(stdout(&straight), stdout(&resumed));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    assert_eq!(geomiracles(&["--adams", "1"], &out).status.code(), Some(2));
    assert_eq!(geomiracles(&["--policy", "sometimes"], &out).status.code(), Some(2));
    assert_eq!(geomiracles(&["--prime", "1000003"], &out).status.code(), Some(2));

    let snap = dir.path().join("snap");
    let s = snap.to_str().unwrap();
    assert!(geomiracles(&["--generations", "2", "--snapshot", s], &out).status.success());
    let mismatch = geomiracles(&["--generations", "3", "--rng-seed", "9", "--resume", s], &out);
    assert_eq!(mismatch.status.code(), Some(6));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("different configuration"));
    let missing = geomiracles(&["--resume", dir.path().join("nowhere").to_str().unwrap()], &out);
    assert_eq!(missing.status.code(), Some(7));
}
