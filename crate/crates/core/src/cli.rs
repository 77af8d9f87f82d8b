//! Command-line front end. All results are JSON on stdout; failures are a
//! JSON object with a stable `code` on stderr and a nonzero exit status.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
//! 3 spectrum error, 4 dimension error, 5 singular matrix.

use std::ffi::OsString;
use std::io::Read;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Error;
use crate::exmat::ExactMatrix;
use crate::jordan::{jordan_decompose, Spectrum};
use crate::ktheory::{k0_class, k0_diff, k1_class, K1Class};
use crate::suites::{run_suite, Suite, SuiteParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SPECTRUM: i32 = 3;
pub const EXIT_DIMENSION: i32 = 4;
pub const EXIT_SINGULAR: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "kloc",
    version,
    about = "Exact Jordan forms and local K-classes of complex matrices"
)]
struct Cli {
    /// Pretty-print JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct InputArg {
    /// JSON input file, or `-` for stdin.
    #[arg(long, default_value = "-")]
    input: PathBuf,
}

#[derive(Debug, clap::Args)]
struct SpectrumArg {
    /// Complete list of eigenvalues, comma separated (e.g. `2,1/2,i`).
    #[arg(long, value_parser = parse_spectrum)]
    spectrum: Spectrum,
}

fn parse_spectrum(s: &str) -> Result<Spectrum, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Jordan form of a matrix.
    Jordan {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        spectrum: SpectrumArg,
    },
    /// K0 class of an idempotent, or `[p] - [q]` for an array `[p, q]`.
    K0 {
        #[command(flatten)]
        input: InputArg,
    },
    /// K1 class of an invertible matrix.
    K1 {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        spectrum: SpectrumArg,
    },
    /// Sum of an array of K1 classes.
    #[command(name = "k1-add")]
    K1Add {
        #[command(flatten)]
        input: InputArg,
    },
    /// Negation of a K1 class.
    #[command(name = "k1-neg")]
    K1Neg {
        #[command(flatten)]
        input: InputArg,
    },
    /// Run a verification suite.
    Verify {
        /// One of lemma5, lemma6, lemma7, equiv, inverse-formula, k0.
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        size: usize,
    },
}

/// What a run produced; the binary writes these out verbatim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Failure {
    exit: i32,
    body: Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (exit, code) = match &e {
            Error::Parse { .. } => (EXIT_USAGE, "parse"),
            Error::InvalidClass(_) => (EXIT_USAGE, "invalid_class"),
            Error::ExcludedValue(_) => (EXIT_USAGE, "excluded_value"),
            Error::NotIdempotent => (EXIT_USAGE, "not_idempotent"),
            Error::IncompleteSpectrum { .. } => (EXIT_SPECTRUM, "incomplete_spectrum"),
            Error::DimensionMismatch(_) => (EXIT_DIMENSION, "dimension"),
            Error::NonSquare { .. } => (EXIT_DIMENSION, "not_square"),
            Error::NotInvertible | Error::SingularCell => (EXIT_SINGULAR, "singular"),
            Error::DivisionByZero => (EXIT_SINGULAR, "division_by_zero"),
        };
        let mut body = json!({"code": code, "message": e.to_string()});
        if let Error::Parse { position, .. } = &e {
            body["position"] = json!(position);
        }
        if let Some(deficit) = e.spectrum_deficit() {
            body["deficit"] = json!(deficit);
        }
        Failure { exit, body }
    }
}

fn usage(code: &str, message: impl Into<String>) -> Failure {
    Failure {
        exit: EXIT_USAGE,
        body: json!({"code": code, "message": message.into()}),
    }
}

fn read_input(arg: &InputArg, stdin: &mut dyn Read) -> Result<Value, Failure> {
    let mut text = String::new();
    let read = if arg.input.as_os_str() == "-" {
        stdin.read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(&arg.input).map(|t| text = t)
    };
    read.map_err(|e| usage("io", format!("{}: {e}", arg.input.display())))?;
    serde_json::from_str(&text).map_err(|e| usage("parse", e.to_string()))
}

fn matrix(value: Value) -> Result<ExactMatrix, Failure> {
    Ok(ExactMatrix::from_json_value(value)?)
}

fn class(value: Value) -> Result<K1Class, Failure> {
    serde_json::from_value(value).map_err(|e| usage("invalid_class", e.to_string()))
}

fn render<T: Serialize>(value: &T, pretty: bool) -> String {
    let mut s = if pretty {
        serde_json::to_string_pretty(value)
    } else {
        serde_json::to_string(value)
    }
    .expect("serializable output");
    s.push('\n');
    s
}

fn dispatch(cli: Cli, stdin: &mut dyn Read) -> Result<(i32, String), Failure> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Jordan { input, spectrum } => {
            let a = matrix(read_input(&input, stdin)?)?;
            let form = jordan_decompose(&a, &spectrum.spectrum)?;
            Ok((EXIT_OK, render(&form, pretty)))
        }
        Command::K0 { input } => {
            let class = match read_input(&input, stdin)? {
                Value::Array(items) if items.len() == 2 => {
                    let mut it = items.into_iter();
                    let p = matrix(it.next().expect("two items"))?;
                    let q = matrix(it.next().expect("two items"))?;
                    k0_diff(&p, &q)?
                }
                Value::Array(_) => {
                    return Err(usage("parse", "k0 expects a matrix or an array [p, q]"));
                }
                value => k0_class(&matrix(value)?)?,
            };
            Ok((EXIT_OK, render(&class, pretty)))
        }
        Command::K1 { input, spectrum } => {
            let a = matrix(read_input(&input, stdin)?)?;
            let class = k1_class(&a, &spectrum.spectrum)?;
            Ok((EXIT_OK, render(&class, pretty)))
        }
        Command::K1Add { input } => {
            let Value::Array(items) = read_input(&input, stdin)? else {
                return Err(usage("parse", "k1-add expects an array of classes"));
            };
            let mut sum = K1Class::zero();
            for item in items {
                sum = sum.add(&class(item)?);
            }
            Ok((EXIT_OK, render(&sum, pretty)))
        }
        Command::K1Neg { input } => {
            let x = class(read_input(&input, stdin)?)?;
            Ok((EXIT_OK, render(&x.neg(), pretty)))
        }
        Command::Verify {
            suite,
            trials,
            seed,
            size,
        } => {
            let report = run_suite(suite, SuiteParams { trials, seed, size })?;
            let code = if report.passed() {
                EXIT_OK
            } else {
                EXIT_VERIFY_FAILED
            };
            Ok((code, render(&report, pretty)))
        }
    }
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: EXIT_OK,
                        stdout: e.to_string(),
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: render(&json!({"code": "usage", "message": e.to_string()}), false),
                },
            };
        }
    };
    match dispatch(cli, stdin) {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.exit,
            stdout: String::new(),
            stderr: render(&f.body, false),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_with(args: &[&str], input: &str) -> Outcome {
        let mut argv = vec!["kloc"];
        argv.extend_from_slice(args);
        run(argv, &mut input.as_bytes())
    }

    fn stderr_code(o: &Outcome) -> String {
        let v: Value = serde_json::from_str(&o.stderr).unwrap();
        v["code"].as_str().unwrap().to_string()
    }

    const J23_J13: &str =
        r#"{"rows":3,"cols":3,"entries":[["3","1","0"],["0","3","0"],["0","0","3"]]}"#;
    const I2: &str = r#"{"rows":2,"cols":2,"entries":[["1","0"],["0","1"]]}"#;

    #[test]
    fn jordan_command() {
        let o = run_with(&["jordan", "--spectrum", "3"], J23_J13);
        assert_eq!(o.code, 0, "{o:?}");
        assert_eq!(
            o.stdout,
            "{\"cells\":[{\"size\":1,\"eigenvalue\":\"3\",\"multiplicity\":1},{\"size\":2,\"eigenvalue\":\"3\",\"multiplicity\":1}]}\n"
        );
        let o = run_with(&["jordan", "--spectrum", "1"], I2);
        assert_eq!(
            o.stdout,
            "{\"cells\":[{\"size\":1,\"eigenvalue\":\"1\",\"multiplicity\":2}]}\n"
        );
        let o = run_with(&["jordan", "--spectrum", "5"], I2);
        assert_eq!(o.code, EXIT_SPECTRUM);
        assert!(o.stdout.is_empty());
        assert_eq!(stderr_code(&o), "incomplete_spectrum");
    }

    #[test]
    fn k1_command() {
        let o = run_with(
            &["k1", "--spectrum", "1"],
            r#"{"rows":1,"cols":1,"entries":[["1"]]}"#,
        );
        assert_eq!(
            o.stdout,
            "{\"torsion_minus\":{},\"torsion_plus\":{},\"free\":[]}\n"
        );
        let d = r#"{"rows":2,"cols":2,"entries":[["2","0"],["0","1/2"]]}"#;
        let o = run_with(&["k1", "--spectrum", "2,1/2"], d);
        assert_eq!(
            o.stdout,
            "{\"torsion_minus\":{},\"torsion_plus\":{},\"free\":[]}\n"
        );
        let d = r#"{"rows":3,"cols":3,"entries":[["2","0","0"],["0","2","0"],["0","0","1/2"]]}"#;
        let o = run_with(&["k1", "--spectrum", "2,1/2"], d);
        assert_eq!(
            o.stdout,
            "{\"torsion_minus\":{},\"torsion_plus\":{},\"free\":[{\"size\":1,\"eigenvalue\":\"2\",\"coeff\":1}]}\n"
        );
        let singular = r#"{"rows":2,"cols":2,"entries":[["0","1"],["0","0"]]}"#;
        let o = run_with(&["k1", "--spectrum", "0"], singular);
        assert_eq!(o.code, EXIT_SINGULAR);
        assert_eq!(stderr_code(&o), "singular");
    }

    #[test]
    fn k0_command() {
        let p = r#"{"rows":3,"cols":3,"entries":[["1","0","0"],["0","1","0"],["0","0","0"]]}"#;
        assert_eq!(run_with(&["k0"], p).stdout, "{\"value\":2}\n");
        let diff = format!(
            "[{}, {}]",
            r#"{"rows":2,"cols":2,"entries":[["1","0"],["0","0"]]}"#, I2
        );
        assert_eq!(run_with(&["k0"], &diff).stdout, "{\"value\":-1}\n");
        let o = run_with(&["k0"], r#"{"rows":1,"cols":1,"entries":[["2"]]}"#);
        assert_eq!(o.code, EXIT_USAGE);
        assert_eq!(stderr_code(&o), "not_idempotent");
    }

    #[test]
    fn class_arithmetic_commands() {
        let a = r#"{"torsion_minus":{"3":1},"free":[{"size":1,"eigenvalue":"2","coeff":2}]}"#;
        let b = r#"{"torsion_minus":{"3":1},"free":[{"size":1,"eigenvalue":"1/2","coeff":2}]}"#;
        let o = run_with(&["k1-add"], &format!("[{a},{b}]"));
        assert_eq!(
            o.stdout,
            "{\"torsion_minus\":{},\"torsion_plus\":{},\"free\":[]}\n"
        );
        let o = run_with(&["k1-neg"], a);
        assert_eq!(
            o.stdout,
            "{\"torsion_minus\":{\"3\":1},\"torsion_plus\":{},\"free\":[{\"size\":1,\"eigenvalue\":\"2\",\"coeff\":-2}]}\n"
        );
        assert_eq!(run_with(&["k1-add"], a).code, EXIT_USAGE);
    }

    #[test]
    fn error_codes() {
        let o = run_with(&["jordan", "--spectrum", "1"], "{not json");
        assert_eq!((o.code, stderr_code(&o).as_str()), (EXIT_USAGE, "parse"));
        let bad_scalar = r#"{"rows":1,"cols":1,"entries":[["1/0"]]}"#;
        let o = run_with(&["jordan", "--spectrum", "1"], bad_scalar);
        assert_eq!((o.code, stderr_code(&o).as_str()), (EXIT_USAGE, "parse"));
        let ragged = r#"{"rows":2,"cols":2,"entries":[["1","0"],["1"]]}"#;
        let o = run_with(&["jordan", "--spectrum", "1"], ragged);
        assert_eq!(
            (o.code, stderr_code(&o).as_str()),
            (EXIT_DIMENSION, "dimension")
        );
        let rect = r#"{"rows":1,"cols":2,"entries":[["1","0"]]}"#;
        let o = run_with(&["jordan", "--spectrum", "1"], rect);
        assert_eq!(
            (o.code, stderr_code(&o).as_str()),
            (EXIT_DIMENSION, "not_square")
        );
        let o = run_with(&["jordan"], I2);
        assert_eq!((o.code, stderr_code(&o).as_str()), (EXIT_USAGE, "usage"));
        let o = run_with(&["jordan", "--spectrum", "1//2"], I2);
        assert_eq!(o.code, EXIT_USAGE);
        let o = run_with(&["verify", "lemma9"], "");
        assert_eq!((o.code, stderr_code(&o).as_str()), (EXIT_USAGE, "usage"));
        let o = run_with(
            &[
                "jordan",
                "--spectrum",
                "1",
                "--input",
                "/nonexistent/m.json",
            ],
            "",
        );
        assert_eq!((o.code, stderr_code(&o).as_str()), (EXIT_USAGE, "io"));
    }

    #[test]
    fn verify_command() {
        let o = run_with(&["verify", "inverse-formula", "--size", "4"], "");
        assert_eq!(o.code, 0, "{o:?}");
        let v: Value = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["status"], "pass");
        assert_eq!(v["suite"], "inverse-formula");
        assert_eq!(v["failure"], Value::Null);
    }

    #[test]
    fn pretty_output() {
        let o = run_with(&["--pretty", "jordan", "--spectrum", "1"], I2);
        assert!(o.stdout.contains("\n  \"cells\""));
        let o2 = run_with(&["jordan", "--spectrum", "1", "--pretty"], I2);
        assert_eq!(o.stdout, o2.stdout);
    }
}
