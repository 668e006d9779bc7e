//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::parse;
use crate::trace::Format;

fn real(s: &str) -> Result<f64, String> {
    parse::real(s)
}

fn complex(s: &str) -> Result<Complex64, String> {
    parse::complex(s)
}

#[derive(Debug, Parser)]
#[command(
    name = "stabpath",
    version,
    about = "Quantum differential equation paths in spaces of stability conditions",
    long_about = "Integrates truncated quantum differential equations, traces the induced \
                  central-charge paths through Stab(P1) and higher-genus curve charts, and \
                  extracts semiorthogonal-decomposition data from charge asymptotics.\n\n\
                  Exit codes: 0 success, 1 internal or numerical failure, 2 boundary case \
                  (non-generic parameters), 3 bad input."
)]
pub struct Cli {
    /// Directory for artifacts; created if missing.
    #[arg(long, global = true, default_value = ".")]
    pub output_dir: PathBuf,

    /// Format of tabular traces.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// The P1 path sigma_t = B(ln(2t) + b - a) and its SOD data.
    P1Path(P1PathArgs),
    /// tau(s) for a genus >= 1 curve.
    CurvePath(CurvePathArgs),
    /// Integrate the truncated quantum differential equation and write a trace.
    Qde(QdeArgs),
    /// Mirror contour integrals for O_p and the line bundles on P1.
    Contour(ContourArgs),
    /// Apply a braid word to an exceptional decomposition.
    Mutate(MutateArgs),
    /// Check the invariants of a model.
    ValidateModel(ValidateModelArgs),
    /// Fit charges read from a fundamental-solution trace and build SOD data.
    SodFromTrace(SodFromTraceArgs),
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Largest accepted sup residual of a log-charge fit.
    #[arg(long, default_value_t = 1e-3, value_parser = real)]
    pub fit_tol: f64,
    /// Exponents closer than this are one cluster.
    #[arg(long, default_value_t = 1e-4, value_parser = real)]
    pub cluster_tol: f64,
    /// Slack when comparing growth rates with r in the spanning check.
    #[arg(long, default_value_t = 1e-2, value_parser = real)]
    pub rate_tol: f64,
    /// Drop the 1/t column from the fit basis.
    #[arg(long)]
    pub no_inverse_t: bool,
    /// Add a t^(1/2) column to the fit basis.
    #[arg(long)]
    pub sqrt_t: bool,
}

#[derive(Debug, Clone, Args)]
pub struct P1PathArgs {
    #[arg(long, default_value = "0", value_parser = complex, allow_hyphen_values = true)]
    pub b: Complex64,
    #[arg(long, default_value = "0", value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex64,
    /// Added to Im b.
    #[arg(long, default_value_t = 0.0, value_parser = real, allow_hyphen_values = true)]
    pub phase: f64,
    #[arg(long, default_value_t = 0.5, value_parser = real)]
    pub t0: f64,
    #[arg(long, default_value_t = 60.0, value_parser = real)]
    pub t1: f64,
    /// Geometric grid size.
    #[arg(long, default_value_t = 400)]
    pub points: usize,
    /// Only tabulate the gluing identity on 100 points of [-3, 3].
    #[arg(long)]
    pub verify_glue: bool,
    /// Comma-separated phases; runs the pipeline for each in parallel and writes sweep.json.
    #[arg(long, allow_hyphen_values = true)]
    pub sweep_phases: Option<String>,
    #[command(flatten)]
    pub fit: FitArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurvePathArgs {
    #[arg(long)]
    pub genus: u32,
    /// e^{i theta} = conj(z)/|z|.
    #[arg(long, default_value_t = 0.0, value_parser = real, allow_hyphen_values = true)]
    pub theta: f64,
    /// The Gamma-class path tau(s) = 2 pi i / (e^{i theta} s + 2(g-1) C_eu).
    #[arg(long)]
    pub canonical: bool,
    #[arg(long, default_value = "i", value_parser = complex, allow_hyphen_values = true)]
    pub tau0: Complex64,
    #[arg(long, default_value = "1+i", value_parser = complex, allow_hyphen_values = true)]
    pub tau_inf: Complex64,
    /// Defaults to e^{-i theta}, the path along the segment [tau0, tau_inf].
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub a_param: Option<Complex64>,
    #[arg(long, default_value_t = 1e6, value_parser = real)]
    pub s1: f64,
    /// Linear grid size on [0, s1].
    #[arg(long, default_value_t = 2001)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GaugeArg {
    Raw,
    Modified,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InitialArg {
    Identity,
    /// The Bessel solution of the P1 model (p1 only).
    Bessel,
}

#[derive(Debug, Clone, Args)]
pub struct QdeArgs {
    /// `p1`, `curve:G`, or a model JSON file.
    #[arg(long, default_value = "p1")]
    pub model: String,
    /// Parameter of the p1 builtin (psi = 2aH).
    #[arg(long, default_value = "0", value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex64,
    /// Sets z = e^{-b}; overrides --z.
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub b: Option<Complex64>,
    #[arg(long, default_value = "1", value_parser = complex, allow_hyphen_values = true)]
    pub z: Complex64,
    #[arg(long, default_value_t = 1.0, value_parser = real)]
    pub scale_omega: f64,
    #[arg(long, value_enum, default_value_t = GaugeArg::Modified)]
    pub gauge: GaugeArg,
    #[arg(long, value_enum, default_value_t = InitialArg::Identity)]
    pub initial: InitialArg,
    #[arg(long, default_value_t = 1.0, value_parser = real)]
    pub t0: f64,
    #[arg(long, default_value_t = 30.0, value_parser = real)]
    pub t1: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    #[arg(long, default_value_t = 1e-10, value_parser = real)]
    pub rtol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ContourKindArg {
    /// Unit circle: the skyscraper O_p.
    Point,
    /// C_theta: the line bundle O(k-1).
    Line,
}

#[derive(Debug, Clone, Args)]
pub struct ContourArgs {
    #[arg(long, value_enum)]
    pub kind: ContourKindArg,
    #[arg(long, default_value = "1", value_parser = complex, allow_hyphen_values = true)]
    pub kappa: Complex64,
    #[arg(long, default_value_t = 1.0, value_parser = real)]
    pub t: f64,
    /// Evaluate at kappa t = u directly (sets kappa = u, t = 1).
    #[arg(long, value_parser = complex, allow_hyphen_values = true)]
    pub kappa_t: Option<Complex64>,
    /// Contour angle; defaults to 2 arg(kappa).
    #[arg(long, value_parser = real, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct MutateArgs {
    /// Decomposition JSON file.
    #[arg(long, conflicts_with = "builtin")]
    pub file: Option<PathBuf>,
    /// `p1` or `pN:d1,d2,...`.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Braid word such as "L1 R2"; L_i is sigma_i, R_i its inverse.
    #[arg(long, default_value = "")]
    pub word: String,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateModelArgs {
    /// `p1`, `curve:G`, or a model JSON file.
    #[arg(long)]
    pub model: String,
    #[arg(long, default_value = "0", value_parser = complex, allow_hyphen_values = true)]
    pub a: Complex64,
    /// Multiplier r for the admissibility window.
    #[arg(long, default_value_t = 1.0, value_parser = real)]
    pub scale_omega: f64,
    /// Also write the model as model.json.
    #[arg(long)]
    pub emit: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SodFromTraceArgs {
    /// CSV trace written by `qde`.
    #[arg(long)]
    pub trace: PathBuf,
    /// `p1`, `curve:G`, or a model JSON file; supplies the integration functional.
    #[arg(long, default_value = "p1")]
    pub model: String,
    /// JSON list of {"label": ..., "class": [[re, im], ...]}.
    #[arg(long)]
    pub classes: PathBuf,
    /// Ignore samples with t below this.
    #[arg(long, value_parser = real)]
    pub t_min: Option<f64>,
    /// Comma-separated r values for the spanning check; defaults to Re of the cluster exponents.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[command(flatten)]
    pub fit: FitArgs,
}
