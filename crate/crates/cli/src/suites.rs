//! Verification suites run by `higgs-spec verify`.

use std::f64::consts::PI;

use higgs_core::models::{self, WindowRect};
use higgs_core::numerics::{
    count_poles, numeric_reflection, oracle_eigenvalues, Closure, MatrixOptions, NumericsError,
};
use higgs_core::poschl_teller::{
    self as pt, eigenfunction_e_with_derivative, eigenfunction_f_with_derivative,
    scattering_det_munu, scattering_det_nu, ChannelParams, SolutionValue, SpectrumBound,
};
use higgs_core::special_functions::{gamma, gauss_2f1, principal_sqrt, recip_gamma};
use higgs_core::{ComplexScalar, ModelSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::args::Suite;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EckartReport {
    pub with_alpha: u32,
    pub without_alpha: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub max_error: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<EckartReport>,
}

impl SuiteReport {
    fn new(suite: Suite, checks: usize, max_error: f64, tolerance: f64) -> SuiteReport {
        SuiteReport {
            name: suite.name().into(),
            passed: max_error <= tolerance,
            checks,
            max_error,
            tolerance,
            notes: Vec::new(),
            counts: None,
        }
    }

    fn fail(mut self, note: String) -> SuiteReport {
        self.passed = false;
        self.notes.push(note);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub suites: Vec<SuiteReport>,
}

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn rel(a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a - b).norm() / b.norm()
}

/// Gamma identities and closed-form 2F1 cases on random points.
pub fn special_functions(seed: u64, draws: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut checks = 0;
    let mut failures = Vec::new();
    while checks < draws {
        let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        if (z.re - z.re.round()).abs() < 0.05 && z.im.abs() < 0.05 {
            continue;
        }
        let (Ok(g), Ok(g1), Ok(gr)) = (gamma(z), gamma(z + 1.0), gamma(1.0 - z)) else {
            failures.push(format!("gamma failed at {z}"));
            checks += 1;
            continue;
        };
        let recurrence = rel(z * g, g1);
        let reflection = rel(g * gr * (PI * z).sin(), c(PI, 0.0));
        let reciprocal = (recip_gamma(z).unwrap_or(c(f64::NAN, 0.0)) * g - 1.0).norm();
        worst = worst.max(recurrence).max(reflection).max(reciprocal);
        checks += 1;
    }
    let mut hyp = 0;
    while hyp < draws {
        // the disc |z| <= 0.9, the left half plane out to |z| = 5, and the
        // negative axis out to -30
        let z = match rng.gen_range(0..3) {
            0 => ComplexScalar::from_polar(0.9 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI)),
            1 => ComplexScalar::from_polar(
                rng.gen_range(0.9..5.0),
                rng.gen_range(PI / 2.0..1.5 * PI),
            ),
            _ => c(rng.gen_range(-30.0..-0.9), 0.0),
        };
        let a = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let b = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let cc = c(rng.gen_range(0.5..3.0), rng.gen_range(-1.0..1.0));
        let pairs = [
            (
                gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z),
                -(1.0 - z).ln() / z,
            ),
            (gauss_2f1(a, b, b, z), (-a * (1.0 - z).ln()).exp()),
            (
                gauss_2f1(a, b, cc, z),
                ((cc - a - b) * (1.0 - z).ln()).exp()
                    * gauss_2f1(cc - a, cc - b, cc, z).unwrap_or(c(f64::NAN, 0.0)),
            ),
        ];
        let (value, expected) = &pairs[hyp % 3];
        match value {
            Ok(v) => worst = worst.max(rel(*v, *expected)),
            Err(e) => failures.push(format!("2F1 failed at z={z}: {e}")),
        }
        hyp += 1;
    }
    let mut report = SuiteReport::new(Suite::SpecialFunctions, checks + hyp, worst, 1e-10);
    if worst.is_nan() {
        report = report.fail("non-finite value".into());
    }
    failures.into_iter().fold(report, SuiteReport::fail)
}

/// `||s(k)| - 1|` for real parameters and real `k` in `[0.1, 10]`.
pub fn unitarity(seed: u64, draws: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    for _ in 0..draws {
        let mu = c(rng.gen_range(-0.45..3.0), 0.0);
        let nu = c(rng.gen_range(0.0..5.0), 0.0);
        let k = c(rng.gen_range(0.1..10.0), 0.0);
        let s = scattering_det_munu(mu, nu, k).map(|s| (s.norm() - 1.0).abs());
        let t = scattering_det_nu(nu, k).map(|s| (s.norm() - 1.0).abs());
        worst = worst
            .max(s.unwrap_or(f64::INFINITY))
            .max(t.unwrap_or(f64::INFINITY));
    }
    SuiteReport::new(Suite::Unitarity, 2 * draws, worst, 1e-10)
}

/// `|s(k) s(-k) - 1|` for complex parameters off the poles.
pub fn functional_eq(seed: u64, draws: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut done = 0;
    while done < draws {
        let mu = c(rng.gen_range(-0.4..3.0), rng.gen_range(-2.0..2.0));
        let nu = c(rng.gen_range(-0.4..5.0), rng.gen_range(-3.0..3.0));
        let k = c(rng.gen_range(0.1..6.0), rng.gen_range(-3.0..3.0));
        let half =
            scattering_det_munu(mu, nu, k).and_then(|a| Ok(a * scattering_det_munu(mu, nu, -k)?));
        let line = scattering_det_nu(nu, k).and_then(|a| Ok(a * scattering_det_nu(nu, -k)?));
        let (Ok(half), Ok(line)) = (half, line) else {
            continue;
        };
        worst = worst.max((half - 1.0).norm()).max((line - 1.0).norm());
        done += 1;
    }
    SuiteReport::new(Suite::FunctionalEq, 2 * draws, worst, 1e-10)
}

/// Residual of the radial equation for `E` and `F`, relative to the
/// largest term. `psi''` is a fourth-order difference of the analytic `psi'`.
pub fn ode_residual(seed: u64, draws: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let h = 1e-3;
    let mut worst = 0.0f64;
    let mut done = 0;
    let mut failures = Vec::new();
    while done < draws {
        let mu = c(rng.gen_range(0.0..2.0), rng.gen_range(-0.5..0.5));
        // F needs 1/2 - mu away from the nonpositive integers
        if (mu - 0.5).norm() < 0.05 || (mu - 1.5).norm() < 0.05 {
            continue;
        }
        let nu = c(rng.gen_range(0.0..4.0), rng.gen_range(-2.0..2.0));
        let k = c(rng.gen_range(0.2..3.0), rng.gen_range(-0.5..0.5));
        let r = rng.gen_range(0.3..6.0);
        let v = pt::potential(mu, nu, r).expect("r > 0");
        for which in 0..2 {
            let f = |x: f64| {
                if which == 0 {
                    eigenfunction_e_with_derivative(mu, nu, k, x)
                } else {
                    eigenfunction_f_with_derivative(mu, nu, k, x)
                }
            };
            let stencil: Result<Vec<SolutionValue>, _> = [-2.0, -1.0, 0.0, 1.0, 2.0]
                .iter()
                .map(|j| f(r + j * h))
                .collect();
            match stencil {
                Ok(s) => {
                    let d = |i: usize| s[i].deriv;
                    let second = (-d(4) + 8.0 * d(3) - 8.0 * d(1) + d(0)) / (12.0 * h);
                    let rhs = (v - k * k) * s[2].value;
                    let scale = second.norm().max(rhs.norm());
                    worst = worst.max((second - rhs).norm() / scale);
                }
                Err(e) => failures.push(format!("mu={mu} nu={nu} k={k} r={r}: {e}")),
            }
        }
        done += 1;
    }
    let report = SuiteReport::new(Suite::OdeResidual, 2 * draws, worst, 1e-5);
    failures.into_iter().fold(report, SuiteReport::fail)
}

/// `numeric_reflection` at `R = 15` against the closed-form determinant.
pub fn reflection(seed: u64, draws: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for i in 0..draws {
        let nu = c(rng.gen_range(0.0..4.5), 0.0);
        let k = rng.gen_range(0.2..5.0);
        let channel = match i % 3 {
            0 => ChannelParams::regular(c(rng.gen_range(-0.45..2.5), 0.0), nu),
            1 => ChannelParams::dirichlet(nu),
            _ => ChannelParams::full_line(nu),
        };
        let exact = channel.scattering_det(c(k, 0.0));
        match (numeric_reflection(&channel, k, 15.0), exact) {
            (Ok(s), Ok(e)) => worst = worst.max(rel(s, e)),
            (a, b) => failures.push(format!("{channel:?} k={k}: {a:?} {b:?}")),
        }
    }
    let report = SuiteReport::new(Suite::Reflection, draws, worst, 1e-6);
    failures.into_iter().fold(report, SuiteReport::fail)
}

pub const ORACLE_RADIUS: f64 = 200.0;
pub const ORACLE_R: f64 = 20.0;
pub const ORACLE_N: usize = 4000;

/// Matrix-oracle comparison of one channel's closed-form eigenvalues with
/// `|z - shift| <= radius`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub targets: usize,
    pub unmatched: usize,
    pub max_relative_error: f64,
}

pub fn oracle_check(channel: &ChannelParams, radius: f64) -> Result<OracleCheck, NumericsError> {
    let targets: Vec<ComplexScalar> =
        pt::discrete_spectrum(channel, SpectrumBound::MaxIndex(u32::MAX))
            .into_iter()
            .map(|p| p.z)
            .filter(|z| (z - channel.shift).norm() <= radius)
            .collect();
    if targets.is_empty() {
        return Ok(OracleCheck {
            targets: 0,
            unmatched: 0,
            max_relative_error: 0.0,
        });
    }
    let opts = MatrixOptions {
        closure: Closure::Transparent,
        richardson: true,
        ..MatrixOptions::default()
    };
    let report = oracle_eigenvalues(channel, &targets, ORACLE_R, ORACLE_N, &opts)?;
    Ok(OracleCheck {
        targets: targets.len(),
        unmatched: report.unmatched().len(),
        max_relative_error: report.max_relative_error(),
    })
}

pub const SLOPE_GRIDS: [usize; 4] = [500, 1000, 2000, 4000];

/// Least-squares slope of `log |error|` against `log N` for the first
/// eigenvalue of the channel on the plain Dirichlet-truncated grids.
pub fn convergence_slope(channel: &ChannelParams) -> Result<f64, NumericsError> {
    let target = pt::discrete_spectrum(channel, SpectrumBound::MaxIndex(0))
        .first()
        .map(|p| p.z)
        .ok_or_else(|| NumericsError::InvalidInput("channel has no eigenvalue".into()))?;
    // coarse grids sit well outside the default matching radius
    let opts = MatrixOptions {
        check_truncation: false,
        accept_radius: 5e-2,
        ..MatrixOptions::default()
    };
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in SLOPE_GRIDS {
        let report = oracle_eigenvalues(channel, &[target], ORACLE_R, n, &opts)?;
        let raw = report.matches[0]
            .raw
            .ok_or_else(|| NumericsError::InvalidInput(format!("no match on the N = {n} grid")))?;
        xs.push((n as f64).ln());
        ys.push((raw - target).norm().ln());
    }
    let mx = xs.iter().sum::<f64>() / xs.len() as f64;
    let my = ys.iter().sum::<f64>() / ys.len() as f64;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(num / den)
}

pub fn eigen_oracle(model: &ModelSpec, modes: &[i64]) -> SuiteReport {
    let results: Vec<(i64, Result<OracleCheck, String>)> = modes
        .par_iter()
        .map(|&m| {
            let check = models::reduce(model, m)
                .map_err(|e| e.to_string())
                .and_then(|ch| oracle_check(&ch, ORACLE_RADIUS).map_err(|e| e.to_string()));
            (m, check)
        })
        .collect();
    let mut worst = 0.0f64;
    let mut checks = 0;
    let mut failures = Vec::new();
    for (m, r) in results {
        match r {
            Ok(chk) => {
                checks += chk.targets;
                worst = worst.max(chk.max_relative_error);
                if chk.unmatched > 0 {
                    failures.push(format!(
                        "mode {m}: {} eigenvalues without oracle match",
                        chk.unmatched
                    ));
                }
            }
            Err(e) => failures.push(format!("mode {m}: {e}")),
        }
    }
    let mut report = SuiteReport::new(Suite::EigenOracle, checks, worst, 1e-4);
    if checks == 0 {
        report.notes.push(format!(
            "no eigenvalues within {ORACLE_RADIUS} of the threshold"
        ));
    }
    // second-order convergence on the first mode that has an eigenvalue
    let first = modes.iter().find_map(|&m| {
        let ch = models::reduce(model, m).ok()?;
        (!pt::discrete_spectrum(&ch, SpectrumBound::MaxIndex(0)).is_empty()).then_some(ch)
    });
    if let Some(ch) = first {
        match convergence_slope(&ch) {
            Ok(slope) => {
                report.notes.push(format!("convergence slope {slope:.3}"));
                if (slope + 2.0).abs() > 0.15 {
                    failures.push(format!("convergence slope {slope:.3} is not -2"));
                }
            }
            Err(e) => failures.push(format!("convergence check: {e}")),
        }
    }
    failures.into_iter().fold(report, SuiteReport::fail)
}

/// Outcome of counting one window both ways.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowCount {
    pub window: WindowRect,
    pub enumerated: i64,
    pub counted: i64,
    /// Modes whose own counts disagree.
    pub mismatched_modes: Vec<i64>,
}

const COUNT_N_MAX: u32 = 400;
const COUNT_QUAD: usize = 256;

/// Closed-form enumeration against the argument-principle count of `1/s`
/// summed over modes. The window must lie below the line `Im z = Im shift`,
/// where `k = -i sqrt(shift - z)` is analytic.
pub fn count_window(model: &ModelSpec, window: &WindowRect) -> Result<WindowCount, String> {
    let mut m_max = 0u32;
    let enumeration = loop {
        let e = models::model_resonances(model, window, m_max, COUNT_N_MAX)
            .map_err(|e| e.to_string())?;
        if e.complete {
            break e;
        }
        if m_max >= 500 {
            return Err("enumeration does not close".into());
        }
        m_max += 1;
    };
    let per_mode: Vec<(i64, Result<i64, String>)> = model
        .modes(m_max)
        .par_iter()
        .map(|&m| {
            let count = models::reduce(model, m)
                .map_err(|e| e.to_string())
                .and_then(|ch| {
                    if window.im_max >= ch.shift.im {
                        return Err("window reaches the threshold line".to_string());
                    }
                    let raw = |z: ComplexScalar| {
                        let k = ComplexScalar::i() * -principal_sqrt(ch.shift - z);
                        ch.reciprocal_det(k).unwrap_or(c(f64::NAN, f64::NAN))
                    };
                    // 1/s spans many decades; rescale so the contour guard sees O(1) values
                    let scale = window
                        .corners()
                        .iter()
                        .map(|&z| raw(z).norm())
                        .filter(|m| m.is_finite() && *m > 0.0)
                        .fold(0.0, f64::max);
                    let scale = if scale > 0.0 { scale } else { 1.0 };
                    let f = |z: ComplexScalar| raw(z) / scale;
                    count_poles(f, window, COUNT_QUAD)
                        .map(|pc| pc.count)
                        .map_err(|e| e.to_string())
                });
            (m, count)
        })
        .collect();
    let mut counted = 0;
    let mut mismatched_modes = Vec::new();
    for (m, count) in per_mode {
        let count = count.map_err(|e| format!("mode {m}: {e}"))?;
        let expected = enumeration.points.iter().filter(|p| p.m == m).count() as i64;
        if count != expected {
            mismatched_modes.push(m);
        }
        counted += count;
    }
    Ok(WindowCount {
        window: *window,
        enumerated: enumeration.points.len() as i64,
        counted,
        mismatched_modes,
    })
}

/// Random window around a closed-form resonance below the threshold line,
/// with no resonance within a margin of its boundary.
pub fn random_window(model: &ModelSpec, rng: &mut ChaCha8Rng) -> Result<WindowRect, String> {
    let shift = models::reduce(model, 0).map_err(|e| e.to_string())?.shift;
    let top = shift.im - 0.5;
    let region = WindowRect::new(shift.re - 250.0, shift.re + 250.0, shift.im - 250.0, top)
        .map_err(|e| e.to_string())?;
    let candidates = models::model_resonances(model, &region, 30, COUNT_N_MAX)
        .map_err(|e| e.to_string())?
        .points;
    if candidates.is_empty() {
        return Err("no resonances below the threshold line".into());
    }
    for _ in 0..1000 {
        let p = candidates[rng.gen_range(0..candidates.len())].z;
        let w = rng.gen_range(2.0..12.0);
        let h = rng.gen_range(2.0..12.0);
        let cx = p.re + rng.gen_range(-0.4..0.4) * w;
        let cy = (p.im + rng.gen_range(-0.4..0.4) * h).min(top - 0.5 * h);
        let window = WindowRect::new(cx - 0.5 * w, cx + 0.5 * w, cy - 0.5 * h, cy + 0.5 * h)
            .map_err(|e| e.to_string())?;
        let margin = 0.02 * w.min(h);
        let outer = WindowRect::new(
            window.re_min - margin,
            window.re_max + margin,
            window.im_min - margin,
            window.im_max + margin,
        )
        .map_err(|e| e.to_string())?;
        let inner = WindowRect::new(
            window.re_min + margin,
            window.re_max - margin,
            window.im_min + margin,
            window.im_max - margin,
        )
        .map_err(|e| e.to_string())?;
        let mut m_max = 0;
        let near = loop {
            let e = models::model_resonances(model, &outer, m_max, COUNT_N_MAX)
                .map_err(|e| e.to_string())?;
            if e.complete || m_max >= 500 {
                break e.points;
            }
            m_max += 1;
        };
        if near.iter().all(|q| inner.contains(q.z)) {
            return Ok(window);
        }
    }
    Err("could not place a window".into())
}

pub fn pole_count(model: &ModelSpec, seed: u64, windows: usize) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut mismatches = 0;
    let mut failures = Vec::new();
    let mut total = 0;
    for _ in 0..windows {
        match random_window(model, &mut rng).and_then(|w| count_window(model, &w)) {
            Ok(wc) => {
                total += wc.enumerated;
                if wc.counted != wc.enumerated || !wc.mismatched_modes.is_empty() {
                    mismatches += 1;
                    failures.push(format!(
                        "window {:?}: enumerated {} counted {}",
                        wc.window, wc.enumerated, wc.counted
                    ));
                }
            }
            Err(e) => failures.push(e),
        }
    }
    let mut report = SuiteReport::new(Suite::PoleCount, windows, mismatches as f64, 0.0);
    report
        .notes
        .push(format!("{total} resonances across {windows} windows"));
    failures.into_iter().fold(report, SuiteReport::fail)
}

pub fn eckart_condition(omega2: ComplexScalar, alpha: ComplexScalar) -> SuiteReport {
    let mut report = SuiteReport::new(Suite::EckartCondition, 1, 0.0, 0.0);
    match models::eckart_counts(omega2, alpha) {
        Ok(counts) => {
            report.counts = Some(EckartReport {
                with_alpha: counts.with_alpha,
                without_alpha: counts.without_alpha,
            });
            if counts.with_alpha != counts.without_alpha {
                report.notes.push(
                    "the two readings of the counting condition differ; eigenvalues follow n < Re sqrt(omega^2 - alpha + 1/4) - 1/2".into(),
                );
            }
            report
        }
        Err(e) => report.fail(e.to_string()),
    }
}

/// Inputs of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyPlan {
    pub suites: Vec<Suite>,
    pub model: ModelSpec,
    pub modes: Vec<i64>,
    pub omega2: ComplexScalar,
    pub alpha: ComplexScalar,
    pub seed: u64,
}

pub fn run(plan: &VerifyPlan) -> VerifyReport {
    let suites: Vec<SuiteReport> = plan
        .suites
        .iter()
        .map(|suite| match suite {
            Suite::SpecialFunctions => special_functions(plan.seed, 500),
            Suite::Unitarity => unitarity(plan.seed, 100),
            Suite::FunctionalEq => functional_eq(plan.seed, 200),
            Suite::OdeResidual => ode_residual(plan.seed, 50),
            Suite::EigenOracle => eigen_oracle(&plan.model, &plan.modes),
            Suite::PoleCount => pole_count(&plan.model, plan.seed, 10),
            Suite::Reflection => reflection(plan.seed, 20),
            Suite::EckartCondition => eckart_condition(plan.omega2, plan.alpha),
        })
        .collect();
    VerifyReport {
        passed: suites.iter().all(|s| s.passed),
        suites,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_suites_pass() {
        assert!(special_functions(1, 100).passed);
        assert!(unitarity(1, 30).passed);
        assert!(functional_eq(1, 30).passed);
        assert!(ode_residual(1, 10).passed);
    }

    #[test]
    fn eckart_readings() {
        let r = eckart_condition(c(9.0, 0.0), c(5.0, 0.0));
        assert_eq!(
            r.counts,
            Some(EckartReport {
                with_alpha: 2,
                without_alpha: 3
            })
        );
        assert!(r.passed);
        assert_eq!(r.notes.len(), 1);
    }

    #[test]
    fn window_count_matches_in_one_window() {
        let model = ModelSpec::EckartHiggs {
            omega2: c(0.0, -100.0),
            alpha: c(3.0, 0.0),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let w = random_window(&model, &mut rng).unwrap();
        let wc = count_window(&model, &w).unwrap();
        assert!(wc.enumerated > 0);
        assert_eq!(wc.counted, wc.enumerated);
    }
}
