//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use higgs_core::{ComplexScalar, WindowRect};

#[derive(Debug, Parser)]
#[command(
    name = "higgs-spec",
    version,
    about = "Eigenvalues and resonances of complex Higgs oscillators on hyperbolic model spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form eigenvalues.
    Spectrum(DataArgs),
    /// Closed-form resonances inside a window.
    Resonances(DataArgs),
    /// Run verification suites and print a JSON report.
    Verify(VerifyArgs),
    /// SVG scatter plot of eigenvalues and resonances.
    Plot(DataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    Plane,
    Eckart,
    HalfCylinder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    SpecialFunctions,
    Unitarity,
    FunctionalEq,
    OdeResidual,
    EigenOracle,
    PoleCount,
    Reflection,
    EckartCondition,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::SpecialFunctions => "special-functions",
            Suite::Unitarity => "unitarity",
            Suite::FunctionalEq => "functional-eq",
            Suite::OdeResidual => "ode-residual",
            Suite::EigenOracle => "eigen-oracle",
            Suite::PoleCount => "pole-count",
            Suite::Reflection => "reflection",
            Suite::EckartCondition => "eckart-condition",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Complex number written `a+bi` or `a-bi`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub omega2: Option<ComplexScalar>,
    /// Eckart barrier strength, `a+bi`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<ComplexScalar>,
    /// Half-cylinder circumference.
    #[arg(long, allow_hyphen_values = true)]
    pub ell: Option<f64>,
    /// Highest angular mode `|m|`.
    #[arg(long)]
    pub m_max: Option<u32>,
    /// Highest radial index `n`.
    #[arg(long)]
    pub n_max: Option<u32>,
    /// Explicit comma-separated mode list, replacing `--m-max`.
    #[arg(long, value_parser = parse_modes, allow_hyphen_values = true)]
    pub modes: Option<Modes>,
}

#[derive(Debug, Clone, Args)]
pub struct DataArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// `re0,re1,im0,im1`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<WindowRect>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write output even when the truncation is not provably complete.
    #[arg(long)]
    pub allow_incomplete: bool,
    /// Plot an empty dataset as bare axes.
    #[arg(long)]
    pub allow_empty: bool,
    /// Add the omega = 0 resonances of the same modes, tagged `reference`.
    #[arg(long)]
    pub reference: bool,
    /// Preset run of one of the two reference figures.
    #[arg(long, value_enum)]
    pub reproduce: Option<Figure>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Suites to run (repeatable or comma-separated); all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<Suite>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed of the random draws.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
}

/// Newtype so clap does not treat the list as a repeated argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Modes(pub Vec<i64>);

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// Parses `a+bi` or `a-bi` (no spaces).
pub fn parse_complex(s: &str) -> Result<ComplexScalar, String> {
    let body = s
        .strip_suffix('i')
        .ok_or_else(|| format!("`{s}`: expected a+bi or a-bi"))?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| matches!(bytes[j], b'+' | b'-') && !matches!(bytes[j - 1], b'e' | b'E'))
        .ok_or_else(|| format!("`{s}`: expected a+bi or a-bi"))?;
    let re = parse_real(&body[..split]).map_err(|e| format!("`{s}`: {e}"))?;
    let im_text = &body[split..];
    let im_text = im_text.strip_prefix('+').unwrap_or(im_text);
    let im = parse_real(im_text).map_err(|e| format!("`{s}`: {e}"))?;
    Ok(ComplexScalar::new(re, im))
}

pub fn parse_window(s: &str) -> Result<WindowRect, String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("`{s}`: expected re0,re1,im0,im1"));
    }
    let v: Vec<f64> = parts
        .iter()
        .map(|p| parse_real(p))
        .collect::<Result<_, _>>()?;
    if !(v[0] < v[1] && v[2] < v[3]) {
        return Err(format!("`{s}`: window must have re0 < re1 and im0 < im1"));
    }
    WindowRect::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

pub fn parse_modes(s: &str) -> Result<Modes, String> {
    let modes: Vec<i64> = s
        .split(',')
        .map(|p| {
            p.parse()
                .map_err(|_| format!("`{p}` is not an integer mode"))
        })
        .collect::<Result<_, _>>()?;
    if modes.is_empty() {
        return Err("empty mode list".into());
    }
    let mut sorted = modes.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != modes.len() {
        return Err(format!("`{s}`: repeated mode"));
    }
    Ok(Modes(sorted))
}
