//! `higgs-spec`: spectra, resonances, verification suites and figure data for
//! complex Higgs oscillators on hyperbolic model spaces.

pub mod args;
pub mod dataset;
pub mod output;
pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::error::ErrorKind;
use clap::Parser;
use higgs_core::{ComplexScalar, ModelSpec};
use thiserror::Error;

use args::{Cli, Command, DataArgs, Format, ModelKind, Suite, VerifyArgs};
use dataset::{resolve, resolve_model, Dataset};
use suites::VerifyPlan;

pub const THREADS_ENV: &str = "HIGGS_SPEC_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(
        "enumeration is not provably complete; raise --m-max/--n-max or pass --allow-incomplete"
    )]
    Incomplete,
    #[error("verification failed")]
    Failed,
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Incomplete => 3,
            CliError::Failed | CliError::Io(_) => 1,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                eprintln!("error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Spectrum(a) => data_command(&a, DataKind::Spectrum),
        Command::Resonances(a) => data_command(&a, DataKind::Resonances),
        Command::Plot(a) => data_command(&a, DataKind::Plot),
        Command::Verify(a) => verify(&a),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Config(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

fn check_out_path(out: Option<&Path>) -> Result<(), CliError> {
    let Some(path) = out else { return Ok(()) };
    if path.is_dir() {
        return Err(CliError::Config(format!(
            "--out {} is a directory",
            path.display()
        )));
    }
    match path.parent() {
        Some(dir) if !dir.as_os_str().is_empty() && !dir.is_dir() => {
            Err(CliError::Config(format!(
                "--out {}: directory {} does not exist",
                path.display(),
                dir.display()
            )))
        }
        _ => Ok(()),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum DataKind {
    Spectrum,
    Resonances,
    Plot,
}

fn data_command(a: &DataArgs, kind: DataKind) -> Result<(), CliError> {
    let format = match (kind, a.format) {
        (DataKind::Plot, None | Some(Format::Svg)) => Format::Svg,
        (DataKind::Plot, Some(_)) => return Err(CliError::Config("plot writes svg only".into())),
        (_, Some(Format::Svg)) => {
            return Err(CliError::Config(
                "svg output comes from the plot command".into(),
            ))
        }
        (_, f) => f.unwrap_or(Format::Csv),
    };
    check_out_path(a.out.as_deref())?;
    let scenario = resolve(a)?;
    if kind == DataKind::Resonances && scenario.window.is_none() {
        return Err(CliError::Config(
            "resonances need --window re0,re1,im0,im1".into(),
        ));
    }
    let data: Dataset = match kind {
        DataKind::Spectrum => scenario.spectrum_dataset()?,
        DataKind::Resonances => scenario.resonance_dataset()?,
        DataKind::Plot => scenario.plot_dataset()?,
    };
    if !data.meta.complete && !a.allow_incomplete {
        return Err(CliError::Incomplete);
    }
    if kind == DataKind::Plot && data.points.is_empty() && !a.allow_empty {
        return Err(CliError::Config(
            "nothing to plot; pass --allow-empty for an axes-only figure".into(),
        ));
    }
    let text = match format {
        Format::Csv => output::to_csv(&data),
        Format::Json => output::to_json(&data),
        Format::Svg => output::to_svg(&data),
    };
    emit(&text, a.out.as_deref())
}

pub const VERIFY_OMEGA2: ComplexScalar = ComplexScalar::new(0.0, -100.0);
pub const VERIFY_ALPHA: ComplexScalar = ComplexScalar::new(3.0, 0.0);
pub const VERIFY_M_MAX: u32 = 3;

/// Verification inputs. Without `--model` the plane is used; `--alpha` is
/// then still accepted for the Eckart counting suite.
pub fn verify_plan(a: &VerifyArgs) -> Result<VerifyPlan, CliError> {
    let m = &a.model;
    let model = if m.model.is_some() {
        let mut filled = m.clone();
        filled.omega2.get_or_insert(VERIFY_OMEGA2);
        if m.model == Some(ModelKind::Eckart) {
            filled.alpha.get_or_insert(VERIFY_ALPHA);
        }
        resolve_model(&filled)?
    } else {
        if m.ell.is_some() {
            return Err(CliError::Config(
                "--ell only applies to --model half-cylinder".into(),
            ));
        }
        ModelSpec::HyperbolicPlane {
            omega2: m.omega2.unwrap_or(VERIFY_OMEGA2),
        }
    };
    let modes = match (&m.modes, m.m_max) {
        (Some(_), Some(_)) => {
            return Err(CliError::Config("--modes and --m-max are exclusive".into()))
        }
        (Some(list), None) => list.0.clone(),
        (None, m_max) => model.modes(m_max.unwrap_or(VERIFY_M_MAX)),
    };
    let alpha = match model {
        ModelSpec::EckartHiggs { alpha, .. } => alpha,
        _ => m.alpha.unwrap_or(VERIFY_ALPHA),
    };
    let suites = if a.suite.is_empty() {
        <Suite as clap::ValueEnum>::value_variants().to_vec()
    } else {
        a.suite.clone()
    };
    Ok(VerifyPlan {
        suites,
        model,
        modes,
        omega2: model.omega2(),
        alpha,
        seed: a.seed,
    })
}

fn verify(a: &VerifyArgs) -> Result<(), CliError> {
    check_out_path(a.out.as_deref())?;
    let plan = verify_plan(a)?;
    let report = suites::run(&plan);
    emit(&output::to_json(&report), a.out.as_deref())?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed)
    }
}
