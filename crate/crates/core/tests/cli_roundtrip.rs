use std::path::Path;
use std::process::{Command, Output};

use cpn_sigma::cli::KIND_SEQ;
use cpn_sigma::io::{from_json, to_json, Table};
use cpn_sigma::ProjectorSeq;

fn cpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cpn")).args(args).env_remove("CPN_TOL").output().expect("run cpn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_seq(path: &Path, n: &str) {
    let o = cpn(&["veronese", "--n", n, "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sequence_json_round_trip_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    write_seq(&a, "3");
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.contains("\"schema_version\": 1"));
    let seq: ProjectorSeq = from_json(KIND_SEQ, &text).unwrap();
    assert_eq!(to_json(KIND_SEQ, &seq).unwrap(), text);
}

#[test]
fn imported_file_verifies_like_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("cp2.json");
    write_seq(&a, "2");
    let from_file = cpn(&["verify", a.to_str().unwrap(), "--format", "csv"]);
    let from_model = cpn(&["verify", "--n", "2", "--format", "csv"]);
    assert_eq!(from_file.status.code(), Some(0));
    assert_eq!(stdout(&from_file), stdout(&from_model));
}

#[test]
fn csv_round_trip_is_byte_identical() {
    let o = cpn(&["invariants", "--n", "2", "--format", "csv", "--quad-radial", "40", "--quad-angular", "32"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let t = Table::from_csv(&text).unwrap();
    assert_eq!(t.to_csv().unwrap(), text);
    let first = text.lines().nth(1).unwrap();
    assert!(first.split(',').any(|c| c.contains('e') && c.split('e').next().unwrap().replace(['-', '.'], "").len() == 17));
}

#[test]
fn corrupted_projector_fails_with_named_check() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("cp2.json");
    write_seq(&a, "2");
    let mut seq: ProjectorSeq = from_json(KIND_SEQ, &std::fs::read_to_string(&a).unwrap()).unwrap();
    let bump = seq.projectors[1].den.scale_real(1e-3);
    seq.projectors[1].num[0][1] = &seq.projectors[1].num[0][1] + &bump;
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, to_json(KIND_SEQ, &seq).unwrap()).unwrap();
    let o = cpn(&["verify", bad.to_str().unwrap(), "--format", "pretty"]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.contains("projector[1]") && l.trim_end().ends_with("FAIL")), "{text}");
}

#[test]
fn verify_is_deterministic() {
    let a = cpn(&["verify", "--n", "3", "--seed", "7"]);
    let b = cpn(&["verify", "--n", "3", "--seed", "7"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tolerance_from_environment() {
    let strict = Command::new(env!("CARGO_BIN_EXE_cpn"))
        .args(["verify", "--n", "3"])
        .env("CPN_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));
    let flag = cpn(&["verify", "--n", "3", "--tol", "1e-30"]);
    assert_eq!(strict.stdout, flag.stdout);
}

#[test]
fn threads_from_environment_do_not_change_results() {
    let args = ["invariants", "--n", "1", "--quad-radial", "32", "--quad-angular", "16"];
    let one = Command::new(env!("CARGO_BIN_EXE_cpn")).args(args).env("CPN_THREADS", "1").output().unwrap();
    let many = Command::new(env!("CARGO_BIN_EXE_cpn")).args(args).env("CPN_THREADS", "4").output().unwrap();
    assert_eq!(one.stdout, many.stdout);
}

#[test]
fn bad_arguments_exit_with_status_two() {
    assert_eq!(cpn(&["veronese", "--n", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("x.json");
    std::fs::write(&bad, "{\"schema_version\": 99, \"kind\": \"projector-seq\", \"data\": null}").unwrap();
    assert_eq!(cpn(&["verify", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn jacobi_and_matelem_csv() {
    let o = cpn(&["jacobi", "--n", "1", "--alpha", "0", "--beta", "0", "--format", "csv"]);
    assert_eq!(stdout(&o), "power,coefficient\n0,0.0000000000000000e0\n1,1.0000000000000000e0\n");
    let m = cpn(&["matelem", "--spin", "1/2", "--theta", "0", "--format", "csv"]);
    assert_eq!(stdout(&m).lines().count(), 5);
}
