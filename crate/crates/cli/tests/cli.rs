//! End-to-end runs of the hadwiger binary over fixture files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Output;
use std::sync::atomic::{AtomicU32, Ordering};

static NEXT_DIR: AtomicU32 = AtomicU32::new(0);

/// Per-test scratch directory under the target tree.
fn scratch() -> PathBuf {
    let id = NEXT_DIR.fetch_add(1, Ordering::Relaxed);
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(format!("fixtures-{id}"));
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, contents).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_hadwiger"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_line(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap().trim_end().to_string()
}

const SQUARE: &str = r#"{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","1"], ["1","1"]]}"#;
const TRIANGLE: &str = r#"{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","1"]]}"#;
const TRIANGLE_REFLECTED: &str = r#"{"dim": 2, "vertices": [["0","0"], ["-1","0"], ["0","-1"]]}"#;
const SEGMENT: &str = r#"{"dim": 2, "vertices": [["0","0"], ["1","1"]]}"#;

#[test]
fn invariants_of_the_square_is_a_single_volume_entry() {
    let dir = scratch();
    let square = write(&dir, "square.json", SQUARE);
    let out = run(&["invariants", square.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"entries":[{"coord":"1","euclid":1.0,"frame":[],"gram":"1"}],"n":2}"#
    );
}

#[test]
fn equal_reports_all_disagreeing_classes() {
    let dir = scratch();
    let t = write(&dir, "t.json", TRIANGLE);
    let r = write(&dir, "t_reflected.json", TRIANGLE_REFLECTED);
    let out = run(&["equal", t.to_str().unwrap(), r.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"equal":false,"witnesses":[[["0","1"]],[["1","0"]],[["1","1"]]]}"#
    );

    let sq = write(&dir, "square.json", SQUARE);
    let rect = write(
        &dir,
        "rect.json",
        r#"{"dim": 2, "vertices": [["0","0"], ["2","0"], ["0","1/2"], ["2","1/2"]]}"#,
    );
    let out = run(&["equal", sq.to_str().unwrap(), rect.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), r#"{"equal":true,"witnesses":[]}"#);
}

#[test]
fn tight_frames_of_the_square() {
    let dir = scratch();
    let square = write(&dir, "square.json", SQUARE);
    let out = run(&["tight-frames", square.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        concat!(
            r#"{"frames":[{"dirs":[]},{"dirs":[["-1","0"]]},{"dirs":[["0","-1"]]},"#,
            r#"{"dirs":[["0","1"]]},{"dirs":[["1","0"]]}],"n":2}"#
        )
    );
}

#[test]
fn evaluate_and_homogeneous_computations() {
    let dir = scratch();
    let t = write(&dir, "t.json", TRIANGLE);
    let diag = write(
        &dir,
        "diag.json",
        r#"{"n": 2, "entries": [{"frame": [["1","1"]], "coeff": "1"}]}"#,
    );
    let out = run(&["evaluate", t.to_str().unwrap(), diag.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        r#"{"euclid":1.4142135623730951,"per_frame":[{"frame":[["1","1"]],"value":"1"}]}"#
    );

    let mixed = write(
        &dir,
        "mixed.json",
        r#"{"n": 2, "entries": [{"frame": [], "coeff": "1"}, {"frame": [["1","0"]], "coeff": "1"}]}"#,
    );
    let out = run(&["homogeneous", t.to_str().unwrap(), mixed.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), r#"{"degrees":{"1":-1.0,"2":0.5}}"#);
}

#[test]
fn surface_measure_of_the_triangle() {
    let dir = scratch();
    let t = write(&dir, "t.json", TRIANGLE);
    let out = run(&["surface-measure", t.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout_line(&out),
        concat!(
            r#"{"entries":[{"coord":"1","euclid":1.0,"frame":[["-1","0"]],"gram":"1"},"#,
            r#"{"coord":"1","euclid":1.0,"frame":[["0","-1"]],"gram":"1"},"#,
            r#"{"coord":"1","euclid":1.4142135623730951,"frame":[["1","1"]],"gram":"2"}],"n":2}"#
        )
    );
}

#[test]
fn verify_accepts_the_rectangle_certificate_and_rejects_a_mutation() {
    let dir = scratch();
    let a = write(&dir, "a.json", r#"{"dim": 2, "vertices": [["0","0"], ["2","0"], ["0","1"], ["2","1"]]}"#);
    let b = write(&dir, "b.json", r#"{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","2"], ["1","2"]]}"#);
    let pieces = concat!(
        r#""pieces": [{"dim": 2, "vertices": [["0","0"], ["1","0"], ["0","1"], ["1","1"]]},"#,
        r#"{"dim": 2, "vertices": [["1","0"], ["2","0"], ["1","1"], ["2","1"]]}]"#
    );
    let good = write(
        &dir,
        "cert.json",
        &format!(r#"{{{pieces}, "translations": [["0","0"], ["-1","1"]]}}"#),
    );
    let out = run(&["verify", a.to_str().unwrap(), b.to_str().unwrap(), good.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(stdout_line(&out), r#"{"accepted":true}"#);

    let bad = write(
        &dir,
        "bad_cert.json",
        &format!(r#"{{{pieces}, "translations": [["0","0"], ["-1","2"]]}}"#),
    );
    let out = run(&["verify", a.to_str().unwrap(), b.to_str().unwrap(), bad.to_str().unwrap()]);
    assert!(out.status.success(), "a rejection is still a successful run");
    assert_eq!(
        stdout_line(&out),
        r#"{"accepted":false,"reason":"moved piece 1 sticks out of the target"}"#
    );
}

#[test]
fn domain_errors_exit_one_with_an_error_object() {
    let dir = scratch();
    let segment = write(&dir, "segment.json", SEGMENT);
    let out = run(&["invariants", segment.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_line(&out),
        r#"{"error":"polytope has dimension 1 but ambient dimension is 2"}"#
    );
}

#[test]
fn parse_errors_exit_two() {
    let dir = scratch();
    let mangled = write(&dir, "mangled.json", r#"{"dim": 2, "vertices": [["0","#);
    let out = run(&["invariants", mangled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_line(&out).starts_with(r#"{"error":"invalid JSON in"#));

    let floaty = write(
        &dir,
        "floaty.json",
        r#"{"dim": 2, "vertices": [[0.5, 0], [1, 0], [0, 1]]}"#,
    );
    let out = run(&["invariants", floaty.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_line(&out).contains("exact rational string"));

    let missing = dir.join("does_not_exist.json");
    let out = run(&["invariants", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let out = run(&["invariants", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn max_dim_guard_applies_before_computation() {
    let dir = scratch();
    let cube = write(
        &dir,
        "cube.json",
        r#"{"dim": 3, "vertices": [["0","0","0"], ["1","0","0"], ["0","1","0"], ["1","1","0"],
            ["0","0","1"], ["1","0","1"], ["0","1","1"], ["1","1","1"]]}"#,
    );
    let out = run(&["invariants", "--max-dim", "2", cube.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(
        stdout_line(&out),
        r#"{"error":"ambient dimension 3 exceeds --max-dim 2"}"#
    );
    let out = run(&["invariants", cube.to_str().unwrap()]);
    assert!(out.status.success());
}

#[test]
fn output_is_byte_deterministic() {
    let dir = scratch();
    let t = write(&dir, "t.json", TRIANGLE);
    let first = run(&["invariants", t.to_str().unwrap()]);
    let second = run(&["invariants", t.to_str().unwrap()]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}
