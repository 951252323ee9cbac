//! Independent numerical oracles for the closed-form results: radial ODE
//! integration, reflection-coefficient extraction, argument-principle pole
//! counting with Newton refinement, and a finite-difference eigensolver for
//! truncated channels.

mod contour;
mod matrix;
mod ode;
mod reflection;
mod tridiag;

use thiserror::Error;

use crate::poschl_teller::PoschlTellerError;
use crate::special_functions::ComplexScalar;

pub use contour::{count_poles, refine_root, PoleCount, RootResult, MIN_QUAD_POINTS};
pub use matrix::{
    matrix_eigens, matrix_spectrum, oracle_eigenvalues, Closure, MatrixOptions, OracleMatch,
    OracleReport,
};
pub use ode::{integrate_radial, series_start, OdeSolution, ODE_TOL};
pub use reflection::{match_plane_waves, numeric_reflection, PlaneWaveCoefficients};
pub use tridiag::{nearest_eigenvalue, tridiagonal_eigenvalues};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("step size underflow at r = {r}")]
    StepFailure { r: f64 },
    #[error("plane-wave matching ill conditioned (condition number {cond:e})")]
    MatchingIllConditioned { cond: f64 },
    #[error("contour passes too close to a zero or pole (min |f| = {min_modulus:e})")]
    ContourTooClose { min_modulus: f64 },
    #[error("winding number not close to an integer (residual {residual})")]
    NonIntegerWinding { residual: f64 },
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("eigenvalue {z} moved by {drift:e} (relative) when the domain was doubled")]
    TruncationSuspect { z: ComplexScalar, drift: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Channel(#[from] PoschlTellerError),
}

pub type Result<T> = std::result::Result<T, NumericsError>;
