use std::fs;
use std::path::PathBuf;
use std::process::Command;

use okounkov_cli::{run, EXIT_CHECK_FAILED, EXIT_OK, EXIT_RESOURCE, EXIT_USAGE};

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("okounkov-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn call(args: &[&str]) -> (i32, String, String) {
    call_with_threads(args, None)
}

fn call_with_threads(args: &[&str], threads: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("okounkov").chain(args.iter().copied());
    let code = run(argv, threads, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn sweep_to_file_matches_documented_table() {
    let path = scratch("sweep.csv");
    let e1 = fixture("e1.json");
    let (code, stdout, _) =
        call(&["fujita-sweep", "--model", &e1, "--p", "1..3", "--a", "1:0", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.is_empty());
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "p,a,vol_full,vol_trunc,ratio,ratio_decimal\n\
         1,1:0,7/2,2,4/7,0.571428571429\n\
         2,1:0,7/2,7/2,1,1.0\n\
         3,1:0,7/2,3,6/7,0.857142857143\n"
    );
}

#[test]
fn volume_prints_exact_value() {
    let (code, stdout, _) = call(&["volume", "--model", &fixture("e2.json"), "--a", "1/2:1/2"]);
    assert_eq!((code, stdout.as_str()), (EXIT_OK, "7/4\n"));
}

#[test]
fn volume_with_counting() {
    let (code, stdout, _) = call(&["volume", "--model", &fixture("e1.json"), "--a", "1:0", "--k-max", "10"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.starts_with("1:0 7/2\n"), "{stdout}");
    assert!(stdout.contains("  k=10 3\n"));
    assert!(stdout.ends_with("  lattice_index 1\n"));
}

#[test]
fn zero_multidegree_is_a_usage_error() {
    let bad = scratch("bad.json");
    fs::write(&bad, r#"{"bound":4,"d":1,"generators":[{"m":[0,0],"v":[1]}],"mode":"generators","r":2}"#).unwrap();
    let (code, _, stderr) = call(&["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(stderr.contains("zero multidegree"), "{stderr}");
}

#[test]
fn malformed_json_reports_location() {
    let bad = scratch("broken.json");
    fs::write(&bad, "{\"bound\": 4,\n \"d\": \"one\"}").unwrap();
    let (code, _, stderr) = call(&["validate", "--model", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_USAGE);
    assert!(stderr.contains("line 2"), "{stderr}");
}

#[test]
fn validate_summaries() {
    let (code, stdout, _) = call(&["validate", "--model", &fixture("e1.json")]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(stdout, "ok: mode generators (5 generators), d=1, r=2, bound=40\n");
    let (_, stdout, _) = call(&["validate", "--model", &fixture("e2.json")]);
    assert_eq!(stdout, "ok: mode toric (2 polytopes), d=2, r=2, bound=12\n");
}

#[test]
fn hilbert_and_body() {
    let (code, stdout, _) = call(&["hilbert", "--model", &fixture("e2.json"), "--m", "1:1"]);
    assert_eq!((code, stdout.as_str()), (EXIT_OK, "8\n"));
    let (_, stdout, _) = call(&["hilbert", "--model", &fixture("e1.json"), "--m", "1:0", "--list"]);
    assert_eq!(stdout, "2\n0\n2\n");
    let (code, _, _) = call(&["hilbert", "--model", &fixture("e1.json"), "--m", "41:0"]);
    assert_eq!(code, EXIT_RESOURCE);
    let (_, stdout, _) = call(&["body", "--model", &fixture("e1.json"), "--a", "1/2:1/2"]);
    assert_eq!(stdout, "vertex\n0\n13/4\n");
    let (_, stdout, _) = call(&["body", "--model", &fixture("e2.json"), "--a", "1:0", "--format", "json"]);
    assert!(stdout.contains("\"volume\":\"1\""), "{stdout}");
}

#[test]
fn cone_lists_rays_and_halfspaces() {
    let (code, stdout, _) = call(&["cone", "--model", &fixture("e1.json")]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.starts_with("dim 3\nrays\n  0 0 1\n  0 1 0\n  3 0 1\n  7 2 0\nhalfspaces\n"), "{stdout}");
}

#[test]
fn verify_exit_codes() {
    let (code, stdout, _) =
        call(&["fujita-verify", "--model", &fixture("e1.json"), "--epsilon", "0.2", "--p", "1..8", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    assert!(stdout.contains("\"verdict\": \"pass\""));
    let (code, _, stderr) =
        call(&["fujita-verify", "--model", &fixture("e2.json"), "--epsilon", "0.1", "--n-max", "4", "--p", "1..4"]);
    assert_eq!(code, EXIT_RESOURCE);
    assert!(stderr.contains("resolution"), "{stderr}");
    // a tolerance too tight for the sampled p fails the check
    let (code, _, _) =
        call(&["fujita-verify", "--model", &fixture("e1.json"), "--epsilon", "1/100", "--n-max", "64", "--p", "1..3"]);
    assert_eq!(code, EXIT_CHECK_FAILED);
}

#[test]
fn usage_errors() {
    assert_eq!(call(&[]).0, EXIT_USAGE);
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["volume", "--model", &fixture("e1.json"), "--a", "1:-1"]).0, EXIT_USAGE);
    assert_eq!(call(&["fujita-sweep", "--model", &fixture("e1.json"), "--p", "0..2", "--a", "1:0"]).0, EXIT_USAGE);
    assert_eq!(call(&["validate", "--model", "/nonexistent/model.json"]).0, EXIT_USAGE);
    assert_eq!(call_with_threads(&["validate", "--model", &fixture("e1.json")], Some("zero")).0, EXIT_USAGE);
    assert_eq!(call(&["--help"]).0, EXIT_OK);
}

#[test]
fn sweep_output_is_thread_independent() {
    let e2 = fixture("e2.json");
    let args = ["fujita-sweep", "--model", &e2, "--p", "1,2,3", "--a", "1:0,0:1,1/2:1/2,1/3:2/3", "--format", "json"];
    let one = call_with_threads(&args, Some("1"));
    let four = call_with_threads(&args, Some("4"));
    assert_eq!(one, four);
    assert_eq!(one.0, EXIT_OK);
}

#[test]
fn binary_exit_status() {
    let out = Command::new(env!("CARGO_BIN_EXE_okounkov"))
        .args(["volume", "--model", &fixture("e2.json"), "--a", "1/3:2/3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout), "14/9\n");
    let out = Command::new(env!("CARGO_BIN_EXE_okounkov")).args(["volume"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
