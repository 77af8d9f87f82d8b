use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::{json, Value};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn kloc(args: &[&str], stdin: &str) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_kloc"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json_of(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("not JSON ({e}): {s}"))
}

fn error_code(run: &Run) -> String {
    assert!(run.stdout.is_empty(), "stdout on failure: {}", run.stdout);
    json_of(&run.stderr)["code"].as_str().unwrap().to_string()
}

const J23_J13: &str =
    r#"{"rows":3,"cols":3,"entries":[["3","1","0"],["0","3","0"],["0","0","3"]]}"#;
const I2: &str = r#"{"rows":2,"cols":2,"entries":[["1","0"],["0","1"]]}"#;

#[test]
fn jordan_reads_stdin_and_file() {
    let piped = kloc(&["jordan", "--spectrum", "3"], J23_J13);
    assert_eq!(piped.code, 0);
    let cells = json_of(&piped.stdout)["cells"].as_array().unwrap().clone();
    assert_eq!(cells.len(), 2);

    let path = std::env::temp_dir().join(format!("kloc-cli-{}.json", std::process::id()));
    std::fs::write(&path, J23_J13).unwrap();
    let from_file = kloc(
        &[
            "jordan",
            "--spectrum",
            "3",
            "--input",
            path.to_str().unwrap(),
        ],
        "",
    );
    std::fs::remove_file(&path).unwrap();
    assert_eq!(from_file.stdout, piped.stdout);
}

#[test]
fn output_ends_with_newline_and_pretty_differs_only_in_layout() {
    let compact = kloc(
        &["k1", "--spectrum", "2,1/2"],
        r#"{"rows":2,"cols":2,"entries":[["2","0"],["0","1/2"]]}"#,
    );
    let pretty = kloc(
        &["--pretty", "k1", "--spectrum", "2,1/2"],
        r#"{"rows":2,"cols":2,"entries":[["2","0"],["0","1/2"]]}"#,
    );
    assert!(compact.stdout.ends_with('\n'));
    assert_eq!(compact.stdout.lines().count(), 1);
    assert!(pretty.stdout.lines().count() > 1);
    assert_eq!(json_of(&compact.stdout), json_of(&pretty.stdout));
}

#[test]
fn incomplete_spectrum_exits_3_with_deficit() {
    let run = kloc(&["jordan", "--spectrum", "5"], I2);
    assert_eq!(run.code, 3);
    assert_eq!(error_code(&run), "incomplete_spectrum");
    assert_eq!(json_of(&run.stderr)["deficit"], json!(2));
}

#[test]
fn scalar_parse_error_reports_position() {
    let run = kloc(
        &["jordan", "--spectrum", "1"],
        r#"{"rows":1,"cols":1,"entries":[["1/0"]]}"#,
    );
    assert_eq!(run.code, 2);
    assert_eq!(error_code(&run), "parse");
    assert_eq!(json_of(&run.stderr)["position"], json!(2));
}

#[test]
fn malformed_json_and_bad_flags_are_usage_errors() {
    assert_eq!(kloc(&["k0"], "{not json").code, 2);
    assert_eq!(kloc(&["jordan"], I2).code, 2);
    assert_eq!(kloc(&["frobnicate"], "").code, 2);
    assert_eq!(kloc(&["verify", "no-such-suite"], "").code, 2);
}

#[test]
fn shape_errors_exit_4() {
    let wrong = kloc(&["k0"], r#"{"rows":2,"cols":2,"entries":[["1","0"]]}"#);
    assert_eq!(wrong.code, 4);
    assert_eq!(error_code(&wrong), "dimension");
    let rect = kloc(
        &["k1", "--spectrum", "1"],
        r#"{"rows":1,"cols":2,"entries":[["1","0"]]}"#,
    );
    assert_eq!(rect.code, 4);
    assert_eq!(error_code(&rect), "not_square");
}

#[test]
fn singular_input_to_k1_exits_5() {
    let run = kloc(
        &["k1", "--spectrum", "0,1"],
        r#"{"rows":2,"cols":2,"entries":[["0","0"],["0","1"]]}"#,
    );
    assert_eq!(run.code, 5);
    assert_eq!(error_code(&run), "singular");
}

#[test]
fn k0_and_difference() {
    let p = r#"{"rows":2,"cols":2,"entries":[["1","1"],["0","0"]]}"#;
    assert_eq!(json_of(&kloc(&["k0"], p).stdout), json!({"value": 1}));
    let diff = format!(r#"[{p},{I2}]"#);
    assert_eq!(json_of(&kloc(&["k0"], &diff).stdout), json!({"value": -1}));
    let nilpotent = kloc(
        &["k0"],
        r#"{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}"#,
    );
    assert_eq!(nilpotent.code, 2);
    assert_eq!(error_code(&nilpotent), "not_idempotent");
}

#[test]
fn k1_add_and_neg_round_trip() {
    let class = r#"{"torsion_minus":{"3":1},"free":[{"size":2,"eigenvalue":"3","coeff":5}]}"#;
    let neg = kloc(&["k1-neg"], class);
    assert_eq!(neg.code, 0);
    let sum = kloc(&["k1-add"], &format!("[{class},{}]", neg.stdout.trim()));
    assert_eq!(sum.code, 0);
    assert_eq!(
        json_of(&sum.stdout),
        json!({"torsion_minus": {}, "torsion_plus": {}, "free": []})
    );
}

#[test]
fn verify_reports_pass() {
    let run = kloc(&["verify", "inverse-formula", "--size", "4"], "");
    assert_eq!(run.code, 0);
    assert_eq!(json_of(&run.stdout)["status"], json!("pass"));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(kloc(&["--help"], "").code, 0);
    assert_eq!(kloc(&["--version"], "").code, 0);
}
