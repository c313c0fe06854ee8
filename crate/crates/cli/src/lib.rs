//! Library half of the `qhod` command-line tool: argument parsing, the
//! per-command drivers and the figure-data writers.

// `!(x <= tol)` is deliberate: NaN has to fail range checks
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod error;
pub mod figure;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use qho_dual::auxfun::{CutSide, SeriesAccuracy, Sheet};
use qho_dual::LadderOp;
use serde_json::json;

use crate::commands::{AuxFunction, AuxQuery, Outcome};
pub use crate::error::CliError;
pub use crate::figure::{FigureData, Format, Scalar};

#[derive(Debug, Clone, Parser)]
#[command(name = "qhod", version, about = "Oscillator/circle duality checks and figure data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format. Defaults to the extension of --out, JSON otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<FormatArg>,

    /// Seed for random trials.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Timestamp string copied into the metadata (null when absent).
    #[arg(long, global = true)]
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OpArg {
    A,
    Adag,
    X,
    P,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FunctionArg {
    /// G_N(z), needs --n
    Gn,
    /// F(z) inside the disk
    #[value(name = "F")]
    BigF,
    /// f(phi) on the circle
    #[value(name = "f")]
    SmallF,
    /// g(phi) on the circle, checked against -f''
    #[value(name = "g")]
    SmallG,
    /// G(z) on sheet 1
    #[value(name = "G")]
    BigG,
    /// G(z) on sheet 2
    #[value(name = "G2")]
    BigGSheet2,
    /// y(z) = 4z/(1+z)^2
    Y,
    /// z(y) on --sheet
    Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Above,
    Below,
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Absolute tolerance for series evaluation.
    #[arg(long, default_value_t = 1e-12)]
    pub abs_tol: f64,

    /// Term budget for series evaluation.
    #[arg(long, default_value_t = 1_000_000)]
    pub max_terms: usize,
}

impl SeriesArgs {
    fn accuracy(&self) -> Result<SeriesAccuracy, CliError> {
        Ok(SeriesAccuracy::new(self.abs_tol, self.max_terms)?)
    }
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Quantum evolution vs classical transport on random states.
    DualityCheck {
        #[arg(long, default_value_t = 11, value_parser = parse_dim)]
        n: usize,
        #[arg(long, default_value_t = 100, value_parser = parse_count)]
        trials: usize,
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
        omega: f64,
        /// Largest step count checked (default 2n).
        #[arg(long)]
        max_k: Option<usize>,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
        tol: f64,
    },
    /// Energy levels, plus eigenvalues of H on circle sites.
    Spectrum {
        #[arg(long, default_value_t = 11, value_parser = parse_dim)]
        n: usize,
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
        omega: f64,
        #[arg(long, default_value_t = 1e-9, value_parser = parse_tolerance)]
        tol: f64,
    },
    /// Closed-form circle-site matrix elements of a, a†, x, p.
    MatrixElements {
        #[arg(long, default_value_t = 16, value_parser = parse_dim)]
        n: usize,
        #[arg(long, value_enum, default_value_t = OpArg::All)]
        op: OpArg,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
        tol: f64,
    },
    /// Evaluate one auxiliary function at a point.
    AuxfunEval {
        #[arg(long, value_enum)]
        function: FunctionArg,
        #[arg(long, value_parser = parse_dim)]
        n: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        re: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        im: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        sheet: u8,
        /// Side of the cut y > 1 to approach from.
        #[arg(long, value_enum)]
        side: Option<SideArg>,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Zeros of the truncated kernel G_N.
    Zeros {
        #[arg(long, default_value_t = 64, value_parser = parse_zero_degree)]
        n: usize,
        /// Half-width of the annulus around |z| = 1.
        #[arg(long, default_value_t = 0.1, value_parser = parse_positive)]
        width: f64,
        #[arg(long, default_value_t = 1e-8, value_parser = parse_tolerance)]
        tol: f64,
    },
    /// Image curves of the circles |z| = r under y(z).
    MapDomains {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        radii: Option<Vec<f64>>,
        #[arg(long, default_value_t = 721)]
        samples: usize,
    },
    /// f(phi) on [-pi, pi].
    FCurve {
        #[arg(long, default_value_t = 720)]
        samples: usize,
        #[arg(long, default_value_t = 1e-8, value_parser = parse_tolerance)]
        tol: f64,
        #[command(flatten)]
        series: SeriesArgs,
    },
    /// Born weights after k stroboscopic steps, quantum and classical.
    Evolve {
        #[arg(long, default_value_t = 11, value_parser = parse_dim)]
        n: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value_t = 1.0, value_parser = parse_positive)]
        omega: f64,
        /// Start from a single circle site instead of a random state.
        #[arg(long)]
        site: Option<usize>,
        #[arg(long, default_value_t = 1e-10, value_parser = parse_tolerance)]
        tol: f64,
    },
}

fn parse_dim(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        Ok(_) => Err("dimension must be at least 1".into()),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_zero_degree(s: &str) -> Result<usize, String> {
    let n = parse_dim(s)?;
    if n > qho_dual::auxfun::MAX_ZERO_DEGREE {
        return Err(format!("degree must be at most {}", qho_dual::auxfun::MAX_ZERO_DEGREE));
    }
    Ok(n)
}

fn parse_count(s: &str) -> Result<usize, String> {
    parse_dim(s).map_err(|_| "count must be a positive integer".into())
}

fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(v),
        Ok(v) => Err(format!("{v} is not a positive finite number")),
        Err(e) => Err(e.to_string()),
    }
}

fn parse_tolerance(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() && v >= 0.0 => Ok(v),
        Ok(v) => Err(format!("{v} is not a nonnegative finite tolerance")),
        Err(e) => Err(e.to_string()),
    }
}

fn echo(pairs: &[(&str, String)]) -> Vec<(String, String)> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(|| "none".to_string(), T::to_string)
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::DualityCheck { .. } => "duality-check",
            Command::Spectrum { .. } => "spectrum",
            Command::MatrixElements { .. } => "matrix-elements",
            Command::AuxfunEval { .. } => "auxfun-eval",
            Command::Zeros { .. } => "zeros",
            Command::MapDomains { .. } => "map-domains",
            Command::FCurve { .. } => "f-curve",
            Command::Evolve { .. } => "evolve",
        }
    }
}

impl Cli {
    pub fn format(&self) -> Format {
        match self.output.format {
            Some(FormatArg::Csv) => Format::Csv,
            Some(FormatArg::Json) => Format::Json,
            None => match self.output.out.as_deref().and_then(Path::extension) {
                Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
                _ => Format::Json,
            },
        }
    }

    /// Runs the selected command. Invariant failures are reported in the
    /// returned outcome, not as errors.
    pub fn execute(&self) -> Result<Outcome, CliError> {
        let seed = self.output.seed;
        let mut outcome = match &self.command {
            Command::DualityCheck {
                n,
                trials,
                omega,
                max_k,
                tol,
            } => {
                let max_k = max_k.unwrap_or(2 * n);
                let params = echo(&[
                    ("n", n.to_string()),
                    ("trials", trials.to_string()),
                    ("omega", omega.to_string()),
                    ("max_k", max_k.to_string()),
                    ("tol", format!("{tol:e}")),
                    ("seed", seed.to_string()),
                ]);
                commands::duality_report(*n, *trials, seed, *omega, max_k, *tol, params)?
            }
            Command::Spectrum { n, omega, tol } => {
                let params = echo(&[
                    ("n", n.to_string()),
                    ("omega", omega.to_string()),
                    ("tol", format!("{tol:e}")),
                ]);
                commands::spectrum(*n, *omega, *tol, params)?
            }
            Command::MatrixElements { n, op, tol } => {
                let ops: Vec<LadderOp> = match op {
                    OpArg::A => vec![LadderOp::A],
                    OpArg::Adag => vec![LadderOp::Adag],
                    OpArg::X => vec![LadderOp::X],
                    OpArg::P => vec![LadderOp::P],
                    OpArg::All => LadderOp::ALL.to_vec(),
                };
                let names: Vec<&str> = ops.iter().map(|o| o.name()).collect();
                let params = echo(&[
                    ("n", n.to_string()),
                    ("op", names.join(",")),
                    ("tol", format!("{tol:e}")),
                ]);
                commands::matrix_elements(*n, &ops, *tol, params)?
            }
            Command::AuxfunEval {
                function,
                n,
                re,
                im,
                phi,
                sheet,
                side,
                series,
            } => {
                let z = match (re, im) {
                    (None, None) => None,
                    (re, im) => Some(Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0))),
                };
                let query = AuxQuery {
                    function: match function {
                        FunctionArg::Gn => AuxFunction::Gn,
                        FunctionArg::BigF => AuxFunction::BigF,
                        FunctionArg::SmallF => AuxFunction::SmallF,
                        FunctionArg::SmallG => AuxFunction::SmallG,
                        FunctionArg::BigG => AuxFunction::BigG,
                        FunctionArg::BigGSheet2 => AuxFunction::BigGSheet2,
                        FunctionArg::Y => AuxFunction::MapY,
                        FunctionArg::Z => AuxFunction::MapZ,
                    },
                    n: *n,
                    z,
                    phi: *phi,
                    sheet: Sheet::try_from(*sheet)?,
                    side: side.map(|s| match s {
                        SideArg::Above => CutSide::Above,
                        SideArg::Below => CutSide::Below,
                    }),
                };
                let params = echo(&[
                    (
                        "function",
                        function
                            .to_possible_value()
                            .map_or_else(String::new, |v| v.get_name().to_string()),
                    ),
                    ("n", opt(n)),
                    ("re", opt(re)),
                    ("im", opt(im)),
                    ("phi", opt(phi)),
                    ("sheet", sheet.to_string()),
                    ("side", opt(&side.map(|s| format!("{s:?}").to_lowercase()))),
                    ("abs_tol", format!("{:e}", series.abs_tol)),
                    ("max_terms", series.max_terms.to_string()),
                ]);
                commands::auxfun_eval(&query, &series.accuracy()?, params)?
            }
            Command::Zeros { n, width, tol } => {
                let params = echo(&[
                    ("n", n.to_string()),
                    ("width", width.to_string()),
                    ("tol", format!("{tol:e}")),
                ]);
                commands::zeros_report(*n, *width, *tol, params)?
            }
            Command::MapDomains { radii, samples } => {
                let radii = radii.clone().unwrap_or_else(commands::default_radii);
                let list: Vec<String> = radii.iter().map(f64::to_string).collect();
                let params = echo(&[("radii", list.join(",")), ("samples", samples.to_string())]);
                commands::map_domains(&radii, *samples, params)?
            }
            Command::FCurve { samples, tol, series } => {
                let params = echo(&[
                    ("samples", samples.to_string()),
                    ("tol", format!("{tol:e}")),
                    ("abs_tol", format!("{:e}", series.abs_tol)),
                    ("max_terms", series.max_terms.to_string()),
                ]);
                commands::f_curve(*samples, &series.accuracy()?, *tol, params)?
            }
            Command::Evolve { n, k, omega, site, tol } => {
                let params = echo(&[
                    ("n", n.to_string()),
                    ("k", k.to_string()),
                    ("omega", omega.to_string()),
                    ("site", opt(site)),
                    ("tol", format!("{tol:e}")),
                    ("seed", seed.to_string()),
                ]);
                commands::evolve_report(*n, *k, *omega, seed, *site, *tol, params)?
            }
        };
        outcome.figure.metadata.timestamp = self.output.timestamp.clone();
        Ok(outcome)
    }

    fn write(&self, text: &str) -> Result<(), CliError> {
        match &self.output.out {
            Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
                path: path.display().to_string(),
                source,
            }),
            None => {
                use std::io::Write;
                std::io::stdout()
                    .lock()
                    .write_all(text.as_bytes())
                    .map_err(|source| CliError::Io {
                        path: "<stdout>".into(),
                        source,
                    })
            }
        }
    }

    /// Runs, writes the artifact and returns the process exit code. Error
    /// reports go to `stderr` as a single JSON object.
    pub fn run(&self, stderr: &mut dyn std::io::Write) -> i32 {
        let result = self.execute().and_then(|outcome| {
            self.write(&outcome.figure.render(self.format()))?;
            Ok(outcome.violations)
        });
        let report = match result {
            Ok(violations) if violations.is_empty() => return 0,
            Ok(violations) => json!({
                "command": self.command.name(),
                "kind": "invariant",
                "violations": violations,
            }),
            Err(err) => json!({
                "command": self.command.name(),
                "kind": err.kind(),
                "message": err.to_string(),
            }),
        };
        let _ = writeln!(stderr, "{report}");
        1
    }
}
