//! Eigenvalues and resonances of complex Higgs oscillators on hyperbolic
//! model spaces.
//!
//! The crate is layered:
//!
//! * [`special_functions`]: complex Gamma and Gauss `2F1`.
//! * [`poschl_teller`]: the Poschl-Teller potential `V_{mu,nu}`, its scattering
//!   determinants, closed-form eigenfunctions and discrete spectra.
//! * [`models`]: reduction of the hyperbolic plane, the Eckart barrier and the
//!   hyperbolic half-cylinder to Poschl-Teller channels.
//! * [`numerics`]: independent oracles (ODE integration, numerical reflection
//!   coefficients, argument-principle pole counts, finite-difference spectra).

pub mod models;
pub mod numerics;
pub mod poschl_teller;
pub mod special_functions;

pub use models::{ModelSpec, WindowRect};
pub use poschl_teller::{Boundary, ChannelParams, PointKind, SpectralPoint};
pub use special_functions::ComplexScalar;
