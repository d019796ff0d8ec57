//! Argument parsing and dispatch. [`run`] returns everything the process
//! should print, so the binary writes output exactly once.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sixvertex::ikdet::ik_z;
use sixvertex::model::is_cube_root_eta;
use sixvertex::{Error, SpectralConfig, WeightConvention};

use crate::angle::parse_angle;
use crate::count::{cmd_count, Format, Stat};
use crate::parallel::par_brute_z;
use crate::report::json_f64;
use crate::suites::{is_degenerate, run_verify, Suite, VerifyOptions};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

pub const THREADS_ENV: &str = "SIXVERTEX_THREADS";

#[derive(Debug, Parser)]
#[command(name = "sixvertex", version, about = "Six-vertex model with domain-wall boundaries")]
pub struct Cli {
    /// Worker threads for enumeration (default: available cores).
    #[arg(long, global = true, env = THREADS_ENV)]
    pub threads: Option<usize>,
    /// Write the primary output to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Boundary statistics of the states, enumerated and from closed forms.
    Count(CountArgs),
    /// Evaluate the partition function.
    Z(ZArgs),
    /// Run a verification suite and print a JSON report.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "total")]
    pub stat: Stat,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ik,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Signed,
    Counting,
}

impl From<Convention> for WeightConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Signed => WeightConvention::Signed,
            Convention::Counting => WeightConvention::Counting,
        }
    }
}

#[derive(Debug, Args)]
pub struct ZArgs {
    #[arg(long)]
    pub n: usize,
    /// Crossing parameter: radians or `<p>pi/<q>`.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub eta: f64,
    /// Comma-separated row parameters.
    #[arg(long, value_parser = parse_angle, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub xs: Vec<f64>,
    /// Comma-separated column parameters.
    #[arg(long, value_parser = parse_angle, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub ys: Vec<f64>,
    #[arg(long, value_enum, default_value = "ik")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "signed")]
    pub convention: Convention,
    /// Evaluate both ways and report the relative discrepancy.
    #[arg(long)]
    pub both: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative tolerance for numeric suites.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Override the crossing parameter (negative controls).
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Root-of-unity order for detsum and basic.
    #[arg(long, default_value_t = 3)]
    pub order: u32,
}

/// What the process should print and return.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    /// Where `stdout` goes instead of the terminal.
    pub out: Option<PathBuf>,
}

impl Outcome {
    fn error(code: i32, message: impl std::fmt::Display) -> Self {
        Self {
            code,
            stderr: format!("error: {message}\n"),
            ..Self::default()
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        e if is_degenerate(e) => EXIT_DEGENERATE,
        Error::TableMismatch { .. } | Error::NonIntegerQuotient { .. } => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: EXIT_USAGE,
                    stderr: text,
                    ..Outcome::default()
                }
            } else {
                Outcome {
                    code: EXIT_PASS,
                    stdout: text,
                    ..Outcome::default()
                }
            };
        }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.threads {
        builder = builder.num_threads(t);
    }
    let pool = match builder.build() {
        Ok(pool) => pool,
        Err(e) => return Outcome::error(EXIT_USAGE, e),
    };
    let mut outcome = pool.install(|| dispatch(&cli.command));
    outcome.out = cli.out;
    outcome
}

fn dispatch(command: &Command) -> Outcome {
    match command {
        Command::Count(a) => count(a),
        Command::Z(a) => z(a),
        Command::Verify(a) => verify(a),
    }
}

fn count(a: &CountArgs) -> Outcome {
    match cmd_count(a.n, a.stat, a.format, sixvertex::enumerate::DEFAULT_CEILING) {
        Ok(out) => {
            let mut stderr = String::new();
            if let Some(note) = &out.note {
                stderr.push_str(note);
                stderr.push('\n');
            }
            if let (Format::Csv, Some(agrees)) = (a.format, out.agrees) {
                stderr.push_str(&format!("agrees: {agrees}\n"));
            }
            Outcome {
                code: if out.agrees == Some(false) {
                    EXIT_FAILURE
                } else {
                    EXIT_PASS
                },
                stdout: out.text,
                stderr,
                out: None,
            }
        }
        Err(e) => Outcome::error(exit_code(&e), e),
    }
}

#[derive(Serialize)]
struct BothJson {
    ik: Box<serde_json::value::RawValue>,
    brute: Box<serde_json::value::RawValue>,
    discrepancy: Box<serde_json::value::RawValue>,
}

fn z(a: &ZArgs) -> Outcome {
    let result = (|| -> sixvertex::Result<String> {
        for (name, got) in [("xs", a.xs.len()), ("ys", a.ys.len())] {
            if got != a.n {
                return Err(Error::OutOfRange(format!(
                    "--{name} has {got} values, expected {}",
                    a.n
                )));
            }
        }
        let cfg = SpectralConfig::new(a.eta, a.xs.clone(), a.ys.clone())?;
        let conv = WeightConvention::from(a.convention);
        if conv == WeightConvention::Counting && !is_cube_root_eta(a.eta) {
            return Err(Error::InvalidConvention(a.eta));
        }
        // With #b even in every state both conventions give the same sum, so the
        // determinant serves either.
        let ik = || ik_z(&cfg);
        let brute = || par_brute_z(&cfg, conv);
        if a.both {
            let (i, b) = (ik()?, brute()?);
            let discrepancy = (i - b).abs() / i.abs().max(b.abs());
            let mut s = serde_json::to_string_pretty(&BothJson {
                ik: json_f64(i),
                brute: json_f64(b),
                discrepancy: json_f64(discrepancy),
            })
            .expect("serializable");
            s.push('\n');
            Ok(s)
        } else {
            let v = match a.method {
                Method::Ik => ik()?,
                Method::Brute => brute()?,
            };
            Ok(format!("{}\n", json_f64(v).get()))
        }
    })();
    match result {
        Ok(stdout) => Outcome {
            code: EXIT_PASS,
            stdout,
            ..Outcome::default()
        },
        Err(e) => Outcome::error(exit_code(&e), e),
    }
}

fn verify(a: &VerifyArgs) -> Outcome {
    let opts = VerifyOptions {
        suite: a.suite,
        n: a.n,
        trials: a.trials,
        seed: a.seed,
        tol: a.tol,
        eta: a.eta,
        order: a.order,
        ceiling: sixvertex::enumerate::DEFAULT_CEILING,
    };
    match run_verify(&opts) {
        Ok(report) => {
            let mut stdout = report.to_json();
            stdout.push('\n');
            Outcome {
                code: if report.passed() { EXIT_PASS } else { EXIT_FAILURE },
                stdout,
                ..Outcome::default()
            }
        }
        Err(e) => Outcome::error(exit_code(&e), e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn go(args: &[&str]) -> Outcome {
        run(std::iter::once("sixvertex").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(go(&["count"]).code, EXIT_USAGE);
        assert_eq!(go(&["verify", "--suite", "nope", "--n", "2"]).code, EXIT_USAGE);
        assert_eq!(
            go(&["z", "--n", "1", "--eta", "2pie/3", "--xs", "0", "--ys", "0"]).code,
            EXIT_USAGE
        );
        assert_eq!(
            go(&["z", "--n", "2", "--eta", "1", "--xs", "0.1", "--ys", "0.2,0.3"]).code,
            EXIT_USAGE
        );
        assert_eq!(go(&["--help"]).code, EXIT_PASS);
    }

    #[test]
    fn z_values() {
        let out = go(&["z", "--n", "1", "--eta", "2pi/3", "--xs", "0.4", "--ys", "0.1"]);
        assert_eq!(out.code, EXIT_PASS);
        assert_eq!(out.stdout.trim().parse::<f64>().unwrap(), 1.0);
        let out = go(&[
            "z", "--n", "2", "--eta", "2pi/3", "--xs", "0.3,-0.7", "--ys", "0.1,1.2", "--both",
        ]);
        assert_eq!(out.code, EXIT_PASS, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert!(v["discrepancy"].as_f64().unwrap() <= 1e-9);
    }

    #[test]
    fn degenerate_pair_is_named() {
        let out = go(&["z", "--n", "2", "--eta", "2pi/3", "--xs", "0.3,0.3", "--ys", "0.1,1.2"]);
        assert_eq!(out.code, EXIT_DEGENERATE);
        assert!(out.stderr.contains("x1") && out.stderr.contains("x2"), "{}", out.stderr);
    }

    #[test]
    fn counting_needs_cube_root() {
        let out = go(&[
            "z",
            "--n",
            "2",
            "--eta",
            "1.0",
            "--xs",
            "0.3,0.5",
            "--ys",
            "0.1,1.2",
            "--convention",
            "counting",
        ]);
        assert_eq!(out.code, EXIT_USAGE);
    }

    #[test]
    fn thread_flag_is_honoured() {
        let out = go(&[
            "--threads",
            "2",
            "count",
            "--n",
            "4",
            "--stat",
            "refined",
            "--format",
            "csv",
        ]);
        assert_eq!(out.code, EXIT_PASS);
        assert_eq!(out.stdout, "r,count\n1,7\n2,14\n3,14\n4,7\n");
        assert_eq!(out.stderr, "agrees: true\n");
    }
}
