//! The Poschl-Teller potential
//!
//! ```text
//! V_{mu,nu}(r) = mu(mu+1)/sinh^2 r - nu(nu+1)/cosh^2 r
//! ```
//!
//! and the exact objects attached to it: scattering determinants, the two
//! hypergeometric solutions `E_{mu,nu}` and `F_{mu,nu}`, the large-r expansion
//! of `E_{mu,nu}`, and the closed-form discrete spectra and resonance ladders.
//!
//! Sign convention: with `psi ~ alpha e^{ikr} + beta e^{-ikr}` for the regular
//! solution, `scattering_det_munu = -alpha/beta`. Its poles form the ladder
//! `k = i(nu - mu - 1 - 2n)`; members with `Im k > 0` are eigenvalues.

use std::f64::consts::LN_2;

use thiserror::Error;

use crate::models::WindowRect;
use crate::special_functions::{
    self as sf, gauss_2f1, gauss_2f1_with, is_finite, near_nonpositive_integer, ComplexScalar,
    SpecialFunctionError, GAMMA_POLE_TOL,
};

/// Margin for the strict inequalities that decide whether a ladder member is
/// an eigenvalue.
pub const BOUNDARY_MARGIN: f64 = 1e-9;

const K_ZERO_TOL: f64 = 1e-12;
const DEGENERATE_MU_TOL: f64 = 1e-8;
const DEGENERATE_K_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PoschlTellerError {
    #[error("r = {0} outside the domain r > 0")]
    DomainError(f64),
    #[error("Gamma factor {factor} evaluated on a pole (argument {arg})")]
    OnPole {
        factor: &'static str,
        arg: ComplexScalar,
    },
    #[error("scattering determinant undefined at k = 0")]
    KZero,
    #[error("mu = {0} is degenerate for this solution")]
    DegenerateMu(ComplexScalar),
    #[error("ik = {0} is (close to) an integer")]
    DegenerateK(ComplexScalar),
    #[error("scattering determinant overflows at k = {0}")]
    Overflow(ComplexScalar),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error(transparent)]
    Special(#[from] SpecialFunctionError),
}

pub type Result<T> = std::result::Result<T, PoschlTellerError>;

/// Boundary setting of a radial problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Boundary {
    /// `D_r^2 + V_{0,nu}` on the whole line.
    FullLine,
    /// `D_r^2 + V_{0,nu}` on the half line with a Dirichlet condition at 0.
    HalfLineDirichlet,
    /// `D_r^2 + V_{mu,nu}` on the half line, solution regular at 0.
    HalfLineRegular,
}

/// One radial Poschl-Teller problem. The model's spectral value is
/// `z = shift + k^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub mu: ComplexScalar,
    pub nu: ComplexScalar,
    pub boundary: Boundary,
    pub shift: ComplexScalar,
}

impl ChannelParams {
    pub fn new(
        mu: ComplexScalar,
        nu: ComplexScalar,
        boundary: Boundary,
        shift: ComplexScalar,
    ) -> Result<Self> {
        for p in [mu, nu, shift] {
            if !is_finite(p) {
                return Err(PoschlTellerError::InvalidChannel(format!(
                    "non-finite parameter {p}"
                )));
            }
        }
        if boundary != Boundary::HalfLineRegular && mu != ComplexScalar::new(0.0, 0.0) {
            return Err(PoschlTellerError::InvalidChannel(format!(
                "{boundary:?} requires mu = 0, got {mu}"
            )));
        }
        Ok(ChannelParams {
            mu,
            nu,
            boundary,
            shift,
        })
    }

    /// Half-line `V_{mu,nu}` with zero shift.
    pub fn regular(mu: ComplexScalar, nu: ComplexScalar) -> Self {
        ChannelParams {
            mu,
            nu,
            boundary: Boundary::HalfLineRegular,
            shift: ComplexScalar::new(0.0, 0.0),
        }
    }

    pub fn full_line(nu: ComplexScalar) -> Self {
        ChannelParams {
            mu: ComplexScalar::new(0.0, 0.0),
            nu,
            boundary: Boundary::FullLine,
            shift: ComplexScalar::new(0.0, 0.0),
        }
    }

    pub fn dirichlet(nu: ComplexScalar) -> Self {
        ChannelParams {
            mu: ComplexScalar::new(0.0, 0.0),
            nu,
            boundary: Boundary::HalfLineDirichlet,
            shift: ComplexScalar::new(0.0, 0.0),
        }
    }

    pub fn with_shift(self, shift: ComplexScalar) -> Self {
        ChannelParams { shift, ..self }
    }

    /// `V_{mu,nu}(r)`.
    pub fn potential(&self, r: f64) -> Result<ComplexScalar> {
        potential(self.mu, self.nu, r)
    }

    /// Ladder of the closed-form pole family, `q_n = offset - step * n` with
    /// `k_n = i q_n`.
    pub fn ladder(&self) -> (ComplexScalar, f64) {
        match self.boundary {
            Boundary::HalfLineRegular => (self.nu - self.mu - 1.0, 2.0),
            Boundary::HalfLineDirichlet => (self.nu - 1.0, 2.0),
            Boundary::FullLine => (self.nu, 1.0),
        }
    }

    /// Scattering determinant of this channel: `s_{mu,nu}` on the half line
    /// and `s_nu` on the full line.
    pub fn scattering_det(&self, k: ComplexScalar) -> Result<ComplexScalar> {
        match self.boundary {
            Boundary::FullLine => scattering_det_nu(self.nu, k),
            Boundary::HalfLineDirichlet | Boundary::HalfLineRegular => {
                scattering_det_munu(self.mu, self.nu, k)
            }
        }
    }

    /// `1/s` of this channel, analytic through the poles of `s` (where it
    /// returns exactly zero). Used for root finding and pole counting.
    pub fn reciprocal_det(&self, k: ComplexScalar) -> Result<ComplexScalar> {
        check_k(k)?;
        let factors = match self.boundary {
            Boundary::FullLine => nu_factors(self.nu, k),
            Boundary::HalfLineDirichlet | Boundary::HalfLineRegular => {
                munu_factors(self.mu, self.nu, k)
            }
        };
        reciprocal_quotient(&factors).map_err(|e| match e {
            PoschlTellerError::Overflow(_) => PoschlTellerError::Overflow(k),
            other => other,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    Eigenvalue,
    Resonance,
}

/// A located eigenvalue or resonance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    /// Spectral value of the full operator.
    pub z: ComplexScalar,
    /// Momentum with `z = shift + k^2`.
    pub k: ComplexScalar,
    /// Angular or Fourier index; 0 for bare channels.
    pub m: i64,
    /// Radial quantum number.
    pub n: u32,
    pub kind: PointKind,
    /// Inequality margin within `BOUNDARY_MARGIN` of zero.
    pub boundary_ambiguous: bool,
    /// Number of Fourier modes represented by this point.
    pub multiplicity: u8,
}

/// `V_{mu,nu}(r)` for `r > 0`.
pub fn potential(mu: ComplexScalar, nu: ComplexScalar, r: f64) -> Result<ComplexScalar> {
    if !r.is_finite() || r <= 0.0 {
        return Err(PoschlTellerError::DomainError(r));
    }
    let s = r.sinh();
    let c = r.cosh();
    Ok(mu * (mu + 1.0) / (s * s) - nu * (nu + 1.0) / (c * c))
}

fn sum_log_gammas(factors: &[(&'static str, ComplexScalar)]) -> Result<ComplexScalar> {
    let mut acc = ComplexScalar::new(0.0, 0.0);
    for &(factor, arg) in factors {
        if near_nonpositive_integer(arg, GAMMA_POLE_TOL).is_some() {
            return Err(PoschlTellerError::OnPole { factor, arg });
        }
        acc += sf::ln_gamma_unchecked(arg);
    }
    Ok(acc)
}

fn check_k(k: ComplexScalar) -> Result<()> {
    if !is_finite(k) {
        return Err(PoschlTellerError::Special(SpecialFunctionError::NonFinite(
            k,
        )));
    }
    if k.norm() <= K_ZERO_TOL {
        return Err(PoschlTellerError::KZero);
    }
    Ok(())
}

type Factors = (
    Vec<(&'static str, ComplexScalar)>,
    Vec<(&'static str, ComplexScalar)>,
    ComplexScalar,
);

/// Numerator and denominator Gamma arguments of `s_{mu,nu}`, plus the
/// remaining elementary log factor.
fn munu_factors(mu: ComplexScalar, nu: ComplexScalar, k: ComplexScalar) -> Factors {
    let ik = ComplexScalar::i() * k;
    let num = vec![
        ("Gamma(ik)", ik),
        ("Gamma((mu+nu-ik)/2+1)", (mu + nu - ik) / 2.0 + 1.0),
        ("Gamma((mu-nu-ik+1)/2)", (mu - nu - ik + 1.0) / 2.0),
    ];
    let den = vec![
        ("Gamma(-ik)", -ik),
        ("Gamma((mu+nu+ik)/2+1)", (mu + nu + ik) / 2.0 + 1.0),
        ("Gamma((mu-nu+ik+1)/2)", (mu - nu + ik + 1.0) / 2.0),
    ];
    (
        num,
        den,
        ComplexScalar::new(0.0, std::f64::consts::PI) - 2.0 * ik * LN_2,
    )
}

fn nu_factors(nu: ComplexScalar, k: ComplexScalar) -> Factors {
    let ik = ComplexScalar::i() * k;
    let num = vec![
        ("Gamma(ik)^2", ik),
        ("Gamma(ik)^2", ik),
        ("Gamma(nu-ik+1)", nu - ik + 1.0),
        ("Gamma(-nu-ik)", -nu - ik),
    ];
    let den = vec![
        ("Gamma(-ik)^2", -ik),
        ("Gamma(-ik)^2", -ik),
        ("Gamma(nu+ik+1)", nu + ik + 1.0),
        ("Gamma(-nu+ik)", -nu + ik),
    ];
    (num, den, ComplexScalar::new(0.0, std::f64::consts::PI))
}

fn log_quotient((num, den, extra): &Factors) -> Result<ComplexScalar> {
    Ok(extra + sum_log_gammas(num)? - sum_log_gammas(den)?)
}

/// `1/s` from the factor lists: exactly zero on a pole of `s` that no
/// denominator pole cancels.
fn reciprocal_quotient(factors: &Factors) -> Result<ComplexScalar> {
    let on_pole = |list: &[(&'static str, ComplexScalar)]| {
        list.iter()
            .any(|&(_, arg)| near_nonpositive_integer(arg, GAMMA_POLE_TOL).is_some())
    };
    if on_pole(&factors.0) && !on_pole(&factors.1) {
        return Ok(ComplexScalar::new(0.0, 0.0));
    }
    let v = (-log_quotient(factors)?).exp();
    if !is_finite(v) {
        return Err(PoschlTellerError::Overflow(ComplexScalar::new(
            f64::NAN,
            f64::NAN,
        )));
    }
    Ok(v)
}

/// `log s_{mu,nu}(k)` on an unspecified branch.
pub fn log_scattering_det_munu(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
) -> Result<ComplexScalar> {
    check_k(k)?;
    log_quotient(&munu_factors(mu, nu, k))
}

/// Reflection coefficient of `D_r^2 + V_{mu,nu}` on the half line.
pub fn scattering_det_munu(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
) -> Result<ComplexScalar> {
    let s = log_scattering_det_munu(mu, nu, k)?.exp();
    if !is_finite(s) {
        return Err(PoschlTellerError::Overflow(k));
    }
    Ok(s)
}

/// `log s_nu(k)` on an unspecified branch.
pub fn log_scattering_det_nu(nu: ComplexScalar, k: ComplexScalar) -> Result<ComplexScalar> {
    check_k(k)?;
    log_quotient(&nu_factors(nu, k))
}

/// Scattering determinant of `D_r^2 + V_{0,nu}` on the whole line.
pub fn scattering_det_nu(nu: ComplexScalar, k: ComplexScalar) -> Result<ComplexScalar> {
    let s = log_scattering_det_nu(nu, k)?.exp();
    if !is_finite(s) {
        return Err(PoschlTellerError::Overflow(k));
    }
    Ok(s)
}

/// Reflection coefficient of the Neumann extension, available only as the
/// quotient `s_nu / s_{0,nu}`.
pub fn neumann_reflection(nu: ComplexScalar, k: ComplexScalar) -> Result<ComplexScalar> {
    let zero = ComplexScalar::new(0.0, 0.0);
    let s = (log_scattering_det_nu(nu, k)? - log_scattering_det_munu(zero, nu, k)?).exp();
    if !is_finite(s) {
        return Err(PoschlTellerError::Overflow(k));
    }
    Ok(s)
}

/// Value and r-derivative of a solution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolutionValue {
    pub value: ComplexScalar,
    pub deriv: ComplexScalar,
}

/// `sinh^p r cosh^q r 2F1(a, b; c; -sinh^2 r)` and its derivative.
fn hypergeometric_solution(
    p: ComplexScalar,
    q: ComplexScalar,
    a: ComplexScalar,
    b: ComplexScalar,
    c: ComplexScalar,
    r: f64,
) -> Result<SolutionValue> {
    if !r.is_finite() || r <= 0.0 {
        return Err(PoschlTellerError::DomainError(r));
    }
    let (s, ch) = (r.sinh(), r.cosh());
    let z = -s * s;
    let zc = ComplexScalar::new(z, 0.0);
    let f = gauss_2f1_with(a, b, c, zc, &sf::pfaff_budget(a, b, c, z))?;
    let a1 = a + 1.0;
    let b1 = b + 1.0;
    let c1 = c + 1.0;
    let fp = a * b / c * gauss_2f1_with(a1, b1, c1, zc, &sf::pfaff_budget(a1, b1, c1, z))?;
    let pref = (p * s.ln() + q * ch.ln()).exp();
    let value = pref * f;
    let deriv = value * (p * (ch / s) + q * (s / ch)) + pref * fp * (-2.0 * s * ch);
    Ok(SolutionValue { value, deriv })
}

fn e_parameters(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
) -> (ComplexScalar, ComplexScalar, ComplexScalar) {
    let ik = ComplexScalar::i() * k;
    (
        (mu + nu - ik + 2.0) / 2.0,
        (mu + nu + ik + 2.0) / 2.0,
        mu + 1.5,
    )
}

/// `E_{mu,nu}(k)(r)` with its derivative: the solution behaving like
/// `sinh^{1+mu} r` at the origin.
pub fn eigenfunction_e_with_derivative(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r: f64,
) -> Result<SolutionValue> {
    if (mu + 0.5).norm() < DEGENERATE_MU_TOL {
        return Err(PoschlTellerError::DegenerateMu(mu));
    }
    let (a, b, c) = e_parameters(mu, nu, k);
    hypergeometric_solution(mu + 1.0, nu + 1.0, a, b, c, r)
}

pub fn eigenfunction_e(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r: f64,
) -> Result<ComplexScalar> {
    Ok(eigenfunction_e_with_derivative(mu, nu, k, r)?.value)
}

/// `F_{mu,nu}(k)(r)` with its derivative: the solution behaving like
/// `sinh^{-mu} r` at the origin.
pub fn eigenfunction_f_with_derivative(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r: f64,
) -> Result<SolutionValue> {
    let ik = ComplexScalar::i() * k;
    let c = 0.5 - mu;
    if near_nonpositive_integer(c, sf::HYP2F1_PARAM_TOL).is_some() {
        return Err(PoschlTellerError::DegenerateMu(mu));
    }
    let a = (-mu + nu - ik + 1.0) / 2.0;
    let b = (-mu + nu + ik + 1.0) / 2.0;
    hypergeometric_solution(-mu, nu + 1.0, a, b, c, r)
}

pub fn eigenfunction_f(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r: f64,
) -> Result<ComplexScalar> {
    Ok(eigenfunction_f_with_derivative(mu, nu, k, r)?.value)
}

/// Coefficients of `E_{mu,nu}` on the `sinh^{ik}` (outgoing) and
/// `sinh^{-ik}` (incoming) branches at infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticCoefficients {
    pub outgoing: ComplexScalar,
    pub incoming: ComplexScalar,
}

fn check_ik(k: ComplexScalar) -> Result<ComplexScalar> {
    let ik = ComplexScalar::i() * k;
    let nearest = ComplexScalar::new(ik.re.round(), 0.0);
    if (ik - nearest).norm() <= DEGENERATE_K_TOL {
        return Err(PoschlTellerError::DegenerateK(ik));
    }
    Ok(ik)
}

pub fn asymptotic_coefficients(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
) -> Result<AsymptoticCoefficients> {
    let ik = check_ik(k)?;
    let g = sf::gamma(mu + 1.5)?;
    let branch = |ik: ComplexScalar| -> Result<ComplexScalar> {
        Ok(g * sf::gamma(ik)?
            * sf::recip_gamma((mu + nu + ik + 2.0) / 2.0)?
            * sf::recip_gamma((mu - nu + ik + 1.0) / 2.0)?)
    };
    Ok(AsymptoticCoefficients {
        outgoing: branch(ik)?,
        incoming: branch(-ik)?,
    })
}

/// Large-r representation of `E_{mu,nu}` as the sum of its two branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoticE {
    /// Full `sinh^{-ik}` branch term, hypergeometric correction included.
    pub incoming: ComplexScalar,
    /// Full `sinh^{ik}` branch term.
    pub outgoing: ComplexScalar,
    pub value: ComplexScalar,
}

pub fn asymptotic_e(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r: f64,
) -> Result<AsymptoticE> {
    if !r.is_finite() || r <= 0.0 {
        return Err(PoschlTellerError::DomainError(r));
    }
    let s = r.sinh();
    let x = 1.0 / (s * s);
    if x > 0.5 {
        return Err(PoschlTellerError::DomainError(r));
    }
    let coeffs = asymptotic_coefficients(mu, nu, k)?;
    let ik = ComplexScalar::i() * k;
    let ln_s = s.ln();
    let ln_coth = (r.cosh() / s).ln();
    let arg = ComplexScalar::new(-x, 0.0);
    let term = |coef: ComplexScalar, ik: ComplexScalar| -> Result<ComplexScalar> {
        if coef == ComplexScalar::new(0.0, 0.0) {
            return Ok(coef);
        }
        let f = gauss_2f1(
            (mu + nu - ik + 2.0) / 2.0,
            (-mu + nu - ik + 1.0) / 2.0,
            1.0 - ik,
            arg,
        )?;
        Ok(coef * ((nu + 1.0) * ln_coth + ik * ln_s).exp() * f)
    };
    let outgoing = term(coeffs.outgoing, ik)?;
    let incoming = term(coeffs.incoming, -ik)?;
    Ok(AsymptoticE {
        incoming,
        outgoing,
        value: outgoing + incoming,
    })
}

/// Bound on an eigenvalue enumeration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumBound {
    Window(WindowRect),
    MaxIndex(u32),
}

fn ladder_point(channel: &ChannelParams, n: u32, kind: PointKind) -> SpectralPoint {
    let (offset, step) = channel.ladder();
    let q = offset - step * n as f64;
    let k = ComplexScalar::i() * q;
    SpectralPoint {
        z: channel.shift - q * q,
        k,
        m: 0,
        n,
        kind,
        boundary_ambiguous: q.re.abs() < BOUNDARY_MARGIN,
        multiplicity: 1,
    }
}

/// Closed-form discrete spectrum of a channel, sorted by `n`. Members whose
/// inequality margin is within `BOUNDARY_MARGIN` of zero are included and
/// flagged.
pub fn discrete_spectrum(channel: &ChannelParams, bound: SpectrumBound) -> Vec<SpectralPoint> {
    let (offset, step) = channel.ladder();
    let mut out = Vec::new();
    let mut n: u32 = 0;
    while offset.re - step * n as f64 > -BOUNDARY_MARGIN {
        let p = ladder_point(channel, n, PointKind::Eigenvalue);
        let keep = match bound {
            SpectrumBound::Window(w) => w.contains(p.z),
            SpectrumBound::MaxIndex(n_max) => n <= n_max,
        };
        if let SpectrumBound::MaxIndex(n_max) = bound {
            if n > n_max {
                break;
            }
        }
        if keep {
            out.push(p);
        }
        n += 1;
    }
    out
}

/// Resonances of one channel inside a window.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceList {
    pub points: Vec<SpectralPoint>,
    /// `true` when `n_max` provably exhausts the window.
    pub complete: bool,
}

/// Smallest radial index beyond which every ladder member lies outside the
/// window.
pub fn escape_index(channel: &ChannelParams, window: &WindowRect) -> u32 {
    let (offset, step) = channel.ladder();
    let reach = window.max_distance_from(channel.shift);
    // |z - shift| = |q_n|^2 >= (step n - |offset|)^2
    let n = (offset.norm() + reach.sqrt()) / step;
    n.floor() as u32
}

pub fn resonances(channel: &ChannelParams, window: &WindowRect, n_max: u32) -> ResonanceList {
    let points = (0..=n_max)
        .map(|n| ladder_point(channel, n, PointKind::Resonance))
        .filter(|p| window.contains(p.z))
        .collect();
    ResonanceList {
        points,
        complete: n_max >= escape_index(channel, window),
    }
}
