//! Reflection coefficients extracted from integrated solutions.

use super::ode::{integrate_radial, series_start};
use super::{NumericsError, Result};
use crate::poschl_teller::{Boundary, ChannelParams};
use crate::special_functions::ComplexScalar;

const START_RADIUS: f64 = 1e-3;
const MAX_CONDITION: f64 = 1e8;

/// Coefficients of `psi = alpha e^{ikr} + beta e^{-ikr}` fitted at one radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveCoefficients {
    pub alpha: ComplexScalar,
    pub beta: ComplexScalar,
    pub condition: f64,
}

/// Solves the 2x2 system matching `(psi(r), psi'(r))` to `e^{+-ikr}`.
pub fn match_plane_waves(
    k: ComplexScalar,
    r: f64,
    psi: ComplexScalar,
    dpsi: ComplexScalar,
) -> Result<PlaneWaveCoefficients> {
    let ik = ComplexScalar::i() * k;
    let ep = (ik * r).exp();
    let em = (-ik * r).exp();
    // rows (e^{ikr}, e^{-ikr}) and (ik e^{ikr}, -ik e^{-ikr})
    let m = [[ep, em], [ik * ep, -ik * em]];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let frob2: f64 = m.iter().flatten().map(|x| x.norm_sqr()).sum();
    let d2 = det.norm_sqr();
    let disc = (frob2 * frob2 - 4.0 * d2).max(0.0).sqrt();
    let smax2 = 0.5 * (frob2 + disc);
    let smin2 = d2 / smax2;
    let condition = if smin2 > 0.0 {
        (smax2 / smin2).sqrt()
    } else {
        f64::INFINITY
    };
    if condition.is_nan() || condition > MAX_CONDITION {
        return Err(NumericsError::MatchingIllConditioned { cond: condition });
    }
    let alpha = (psi * m[1][1] - m[0][1] * dpsi) / det;
    let beta = (m[0][0] * dpsi - m[1][0] * psi) / det;
    Ok(PlaneWaveCoefficients {
        alpha,
        beta,
        condition,
    })
}

fn regular_coefficients(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: f64,
    r_max: f64,
) -> Result<PlaneWaveCoefficients> {
    let channel = ChannelParams::regular(mu, nu);
    let kc = ComplexScalar::new(k, 0.0);
    let init = series_start(mu, nu, kc, START_RADIUS);
    let sol = integrate_radial(&channel, kc, START_RADIUS, r_max, init)?;
    let (r, v, d) = sol.last();
    match_plane_waves(kc, r, v, d)
}

/// Reflection coefficient of the channel at real momentum `k`, extracted
/// from the solution that is regular at the origin (for the full line, from
/// its odd and even solutions). Same normalisation as
/// [`ChannelParams::scattering_det`].
pub fn numeric_reflection(channel: &ChannelParams, k: f64, r_max: f64) -> Result<ComplexScalar> {
    if !(r_max >= 10.0 && r_max.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "matching radius must be at least 10, got {r_max}"
        )));
    }
    if !(k.abs() >= 0.05 && k.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "momentum must satisfy |k| >= 0.05, got {k}"
        )));
    }
    let odd = regular_coefficients(channel.mu, channel.nu, k, r_max)?;
    let half_line = -odd.alpha / odd.beta;
    match channel.boundary {
        Boundary::HalfLineRegular | Boundary::HalfLineDirichlet => Ok(half_line),
        Boundary::FullLine => {
            let even = regular_coefficients(ComplexScalar::new(-1.0, 0.0), channel.nu, k, r_max)?;
            Ok(half_line * even.alpha / even.beta)
        }
    }
}
