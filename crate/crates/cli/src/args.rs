use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qsu2_core::inner::QuadratureSpec;
use qsu2_core::qprod::TruncationPolicy;
use qsu2_core::{HalfInt, QParam, SpinTriple};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "qsu2",
    version,
    about = "Evaluate, tabulate and verify su_q(2) functions on the sphere"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one function at the given points.
    Eval(EvalArgs),
    /// Write P, Q or Ψ on a ξ-grid as CSV or JSON.
    Table(TableArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Deviation from the q = 1 functions as q = e^{±ε} approaches 1.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    #[value(name = "P", alias = "p")]
    P,
    #[value(name = "Psi", alias = "psi")]
    Psi,
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "L", alias = "l")]
    L,
    #[value(name = "R", alias = "r")]
    R,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ladder,
    Casimir,
    #[value(name = "functional-eq")]
    FunctionalEq,
    Lemma1,
    Ortho,
    Norms,
    Qbeta,
    #[value(name = "classical-limit")]
    ClassicalLimit,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Real,
    Circle,
}

/// Spin labels as exact rationals (`1`, `3/2`, `-1/2`).
#[derive(Debug, Clone, Args)]
pub struct SpinArgs {
    #[arg(long = "J", value_name = "J", allow_hyphen_values = true)]
    pub j: Option<String>,
    #[arg(long = "M", value_name = "M", allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long = "N", value_name = "N", allow_hyphen_values = true)]
    pub n: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct NumericArgs {
    /// Product truncation cap; overrides QSU2_MAX_TERMS.
    #[arg(long)]
    pub max_terms: Option<usize>,
    #[arg(long, default_value_t = 1e-10)]
    pub quad_abs_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub quad_rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long = "fn", value_enum)]
    pub function: Function,
    #[command(flatten)]
    pub spin: SpinArgs,
    /// `real:<q>` or `circle:<τ>`.
    #[arg(long)]
    pub q: String,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub eta: Vec<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi: f64,
    #[arg(long, value_enum, default_value = "text")]
    pub format: EvalFormat,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long = "fn", value_enum, default_value = "P")]
    pub function: Function,
    #[command(flatten)]
    pub spin: SpinArgs,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 11)]
    pub points: usize,
    #[arg(long, default_value_t = -0.95, allow_hyphen_values = true)]
    pub xi_min: f64,
    #[arg(long, default_value_t = 0.95, allow_hyphen_values = true)]
    pub xi_max: f64,
    /// Add the q = 1 function as classical_re, classical_im.
    #[arg(long)]
    pub classical: bool,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum)]
    pub suite: Suite,
    #[arg(long, default_value = "real:2")]
    pub q: String,
    #[arg(long = "Jmax", default_value = "2")]
    pub j_max: String,
    /// Weight for the orthonormality suite; defaults to 0 or 1/2 by the parity of Jmax.
    #[arg(long = "M", allow_hyphen_values = true)]
    pub m: Option<String>,
    #[arg(long = "N", allow_hyphen_values = true)]
    pub n: Option<String>,
    /// Override every check tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

#[derive(Debug, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub spin: SpinArgs,
    #[arg(long, value_enum, default_value = "real")]
    pub regime: RegimeArg,
    /// Comma-separated ε values.
    #[arg(long, value_delimiter = ',', default_value = "1e-1,1e-2,1e-3,1e-4")]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 199)]
    pub points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub numeric: NumericArgs,
}

pub fn parse_half(label: &str, s: &str) -> Result<HalfInt, CliError> {
    s.parse()
        .map_err(|e| CliError::Parse(format!("--{label}: {e}")))
}

pub fn parse_q(s: &str) -> Result<QParam, CliError> {
    let (kind, value) = s
        .split_once(':')
        .ok_or_else(|| CliError::Parse(format!("q spec `{s}` must be real:<q> or circle:<τ>")))?;
    let v: f64 = value
        .trim()
        .parse()
        .map_err(|_| CliError::Parse(format!("q spec `{s}`: `{value}` is not a number")))?;
    let q = match kind.trim() {
        "real" => QParam::real(v),
        "circle" => QParam::circle(v),
        other => {
            return Err(CliError::Parse(format!(
                "q spec `{s}`: unknown regime `{other}`"
            )))
        }
    };
    q.map_err(|e| CliError::Parse(e.to_string()))
}

impl SpinArgs {
    pub fn j(&self) -> Result<HalfInt, CliError> {
        let j = self
            .j
            .as_deref()
            .ok_or_else(|| CliError::Parse("--J is required".into()))?;
        parse_half("J", j)
    }

    /// Missing `M`, `N` default to 0.
    pub fn triple(&self) -> Result<SpinTriple, CliError> {
        let get = |label, v: &Option<String>| match v {
            Some(s) => parse_half(label, s),
            None => Ok(HalfInt::ZERO),
        };
        SpinTriple::new(self.j()?, get("M", &self.m)?, get("N", &self.n)?)
            .map_err(|e| CliError::Parse(e.to_string()))
    }
}

impl NumericArgs {
    pub fn policy(&self) -> Result<TruncationPolicy, CliError> {
        let max_terms = match self.max_terms {
            Some(n) => n,
            None => match std::env::var("QSU2_MAX_TERMS") {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| CliError::Parse(format!("QSU2_MAX_TERMS=`{s}` is not a count")))?,
                Err(_) => TruncationPolicy::default().max_terms,
            },
        };
        TruncationPolicy::new(TruncationPolicy::default().rel_tol, max_terms)
            .map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn quadrature(&self) -> Result<QuadratureSpec, CliError> {
        QuadratureSpec::with_tolerances(self.quad_abs_tol, self.quad_rel_tol)
            .map_err(|e| CliError::Parse(e.to_string()))
    }
}
