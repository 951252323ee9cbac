//! Finite-difference eigenvalues of truncated channels.
//!
//! Channels with `mu = 0` use the three-point Laplacian on a uniform grid.
//! Regular half-line channels with `mu != 0` are conjugated by
//! `psi = sinh^{mu+1}(r) u`, which removes the `1/sinh^2` singularity:
//!
//! ```text
//! -sinh^{-2p} (sinh^{2p} u')' - p^2 u - nu(nu+1)/cosh^2(r) u = k^2 u,   p = mu + 1,
//! ```
//!
//! discretised by cell-centred finite volumes (the flux through `r = 0`
//! vanishes) and symmetrised with the square root of the weight.

use super::tridiag::{nearest_eigenvalue, tridiagonal_eigenvalues};
use super::{NumericsError, Result};
use crate::poschl_teller::{self as pt, Boundary, ChannelParams, SpectrumBound};
use crate::special_functions::ComplexScalar;

/// Condition imposed at the truncation radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Closure {
    /// `psi = 0` at the truncation radius.
    #[default]
    Dirichlet,
    /// The discrete decaying exterior solution of the free tail,
    /// `psi_{N+1} = rho psi_N`, solved self-consistently in the eigenvalue.
    Transparent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixOptions {
    pub closure: Closure,
    /// Combine grids `N/2` and `N` to cancel the `h^2` error.
    pub richardson: bool,
    /// Recompute on a doubled domain and fail on drift above `1e-4`.
    pub check_truncation: bool,
    /// Matching radius, scaled by `max(1, |z - shift|)`.
    pub accept_radius: f64,
}

impl Default for MatrixOptions {
    fn default() -> Self {
        MatrixOptions {
            closure: Closure::Dirichlet,
            richardson: false,
            check_truncation: true,
            accept_radius: 1e-3,
        }
    }
}

/// One closed-form eigenvalue and its oracle counterpart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleMatch {
    pub closed_form: ComplexScalar,
    /// Oracle value (extrapolated when Richardson is on); `None` if nothing
    /// fell inside the matching radius.
    pub oracle: Option<ComplexScalar>,
    /// Oracle value on the finest grid.
    pub raw: Option<ComplexScalar>,
}

impl OracleMatch {
    pub fn relative_error(&self) -> Option<f64> {
        self.oracle
            .map(|z| (z - self.closed_form).norm() / self.closed_form.norm().max(f64::MIN_POSITIVE))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub matches: Vec<OracleMatch>,
}

impl OracleReport {
    pub fn unmatched(&self) -> Vec<ComplexScalar> {
        self.matches
            .iter()
            .filter(|m| m.oracle.is_none())
            .map(|m| m.closed_form)
            .collect()
    }

    /// Largest relative error over matched points.
    pub fn max_relative_error(&self) -> f64 {
        self.matches
            .iter()
            .filter_map(OracleMatch::relative_error)
            .fold(0.0, f64::max)
    }
}

struct Discretization {
    d: Vec<ComplexScalar>,
    e: Vec<ComplexScalar>,
    /// Diagonal and off-diagonal of the potential-free tail.
    tail: (ComplexScalar, ComplexScalar),
    two_sided: bool,
}

const SECANT_TOL: f64 = 1e-9;

fn czero() -> ComplexScalar {
    ComplexScalar::new(0.0, 0.0)
}

fn cosh_term(nu: ComplexScalar, r: f64) -> ComplexScalar {
    let c = r.cosh();
    nu * (nu + 1.0) / (c * c)
}

fn discretize(channel: &ChannelParams, r_max: f64, n: usize) -> Result<Discretization> {
    let conjugated = channel.boundary == Boundary::HalfLineRegular && channel.mu != czero();
    if conjugated {
        return Ok(conjugated_scheme(channel.mu, channel.nu, r_max, n));
    }
    let full = channel.boundary == Boundary::FullLine;
    let h = if full {
        2.0 * r_max / n as f64
    } else {
        r_max / n as f64
    };
    let h2 = h * h;
    let start = if full { -r_max } else { 0.0 };
    let d: Vec<ComplexScalar> = (1..n)
        .map(|j| {
            let r = start + j as f64 * h;
            ComplexScalar::new(2.0 / h2, 0.0) - cosh_term(channel.nu, r)
        })
        .collect();
    let off = ComplexScalar::new(-1.0 / h2, 0.0);
    Ok(Discretization {
        e: vec![off; n - 2],
        d,
        tail: (ComplexScalar::new(2.0 / h2, 0.0), off),
        two_sided: full,
    })
}

fn conjugated_scheme(mu: ComplexScalar, nu: ComplexScalar, r_max: f64, n: usize) -> Discretization {
    let p = mu + 1.0;
    let h = r_max / n as f64;
    let h2 = h * h;
    // logarithms of the weight sinh^{2p} at centres and faces
    let ln_w = |r: f64| 2.0 * p * r.sinh().ln();
    let center = |j: usize| (j as f64 - 0.5) * h;
    let face = |j: usize| j as f64 * h;
    let flux_ratio = |fj: usize, cj: usize| -> ComplexScalar {
        if fj == 0 {
            czero()
        } else {
            (ln_w(face(fj)) - ln_w(center(cj))).exp()
        }
    };
    let mut d = Vec::with_capacity(n);
    let mut free_last = czero();
    for j in 1..=n {
        let free = (flux_ratio(j - 1, j) + flux_ratio(j, j)) / h2 - p * p;
        if j == n {
            free_last = free;
        }
        d.push(free - cosh_term(nu, center(j)));
    }
    let coupling = |j: usize| -> ComplexScalar {
        let ln = ln_w(face(j)) - 0.5 * (ln_w(center(j)) + ln_w(center(j + 1)));
        -ln.exp() / h2
    };
    let e: Vec<ComplexScalar> = (1..n).map(coupling).collect();
    Discretization {
        d,
        e,
        tail: (free_last, coupling(n)),
        two_sided: false,
    }
}

impl Discretization {
    /// Decaying root of `rho + 1/rho = (lambda - d_tail)/e_tail`.
    fn decay_ratio(&self, lambda: ComplexScalar) -> ComplexScalar {
        let t = (lambda - self.tail.0) / self.tail.1;
        let root = (t * t - 4.0).sqrt();
        let a = (t + root) / 2.0;
        let b = (t - root) / 2.0;
        if a.norm() < b.norm() {
            a
        } else {
            b
        }
    }

    fn closed_diagonal(&self, lambda: ComplexScalar) -> Vec<ComplexScalar> {
        let extra = self.tail.1 * self.decay_ratio(lambda);
        let mut d = self.d.clone();
        let last = d.len() - 1;
        d[last] += extra;
        if self.two_sided {
            d[0] += extra;
        }
        d
    }

    /// Self-consistent eigenvalue of the transparent closure near `seed`:
    /// secant iteration on `lambda -> eig_near(T(rho(lambda))) - lambda`.
    fn transparent_eigenvalue(&self, seed: ComplexScalar) -> Result<ComplexScalar> {
        let fixed_point = |lambda: ComplexScalar| -> Result<ComplexScalar> {
            let d = self.closed_diagonal(lambda);
            Ok(nearest_eigenvalue(&d, &self.e, lambda)? - lambda)
        };
        let mut x0 = seed;
        let mut g0 = fixed_point(x0)?;
        let mut x1 = x0 + g0;
        for _ in 0..40 {
            let g1 = fixed_point(x1)?;
            // inverse iteration resolves eigenvalues to ~1e-12 of the matrix
            // norm, so the fixed point is only defined to that noise floor
            if g1.norm() <= SECANT_TOL * x1.norm().max(1.0) {
                return Ok(x1 + g1);
            }
            let slope = (g1 - g0) / (x1 - x0);
            let next = if slope.norm() > 0.0 && slope.norm().is_finite() {
                x1 - g1 / slope
            } else {
                x1 + g1
            };
            (x0, g0, x1) = (x1, g1, next);
        }
        Err(NumericsError::NoConvergence {
            iterations: 40,
            residual: (x1 - seed).norm(),
        })
    }

    fn refine(&self, closure: Closure, seed: ComplexScalar) -> Result<ComplexScalar> {
        match closure {
            Closure::Dirichlet => nearest_eigenvalue(&self.d, &self.e, seed),
            Closure::Transparent => self.transparent_eigenvalue(seed),
        }
    }
}

fn validate(r_max: f64, n: usize) -> Result<()> {
    if n < 200 {
        return Err(NumericsError::InvalidInput(format!(
            "need N >= 200, got {n}"
        )));
    }
    if !(r_max >= 15.0 && r_max.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "need R >= 15, got {r_max}"
        )));
    }
    Ok(())
}

fn sort_spectrum(v: &mut [ComplexScalar]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Full spectrum `shift + eig(T)` of the Dirichlet-truncated matrix, sorted
/// by real then imaginary part.
pub fn matrix_spectrum(
    channel: &ChannelParams,
    r_max: f64,
    n: usize,
) -> Result<Vec<ComplexScalar>> {
    validate(r_max, n)?;
    let disc = discretize(channel, r_max, n)?;
    let mut ev: Vec<ComplexScalar> = tridiagonal_eigenvalues(&disc.d, &disc.e)?
        .into_iter()
        .map(|l| channel.shift + l)
        .collect();
    sort_spectrum(&mut ev);
    Ok(ev)
}

/// Greedy nearest-neighbour assignment of targets to candidates, each within
/// its own radius.
fn greedy_match(
    targets: &[ComplexScalar],
    radii: &[f64],
    candidates: &[ComplexScalar],
) -> Vec<Option<usize>> {
    let mut pairs = Vec::new();
    for (i, t) in targets.iter().enumerate() {
        for (j, c) in candidates.iter().enumerate() {
            let dist = (c - t).norm();
            if dist <= radii[i] {
                pairs.push((dist, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut assigned = vec![None; targets.len()];
    let mut used = vec![false; candidates.len()];
    for (_, i, j) in pairs {
        if assigned[i].is_none() && !used[j] {
            assigned[i] = Some(j);
            used[j] = true;
        }
    }
    assigned
}

/// Oracle values (in `k^2`) for each target on one grid.
fn solve_grid(
    disc: &Discretization,
    targets: &[ComplexScalar],
    radii: &[f64],
    closure: Closure,
) -> Result<Vec<Option<ComplexScalar>>> {
    match closure {
        Closure::Dirichlet => {
            let ev = tridiagonal_eigenvalues(&disc.d, &disc.e)?;
            Ok(greedy_match(targets, radii, &ev)
                .into_iter()
                .map(|j| j.map(|j| ev[j]))
                .collect())
        }
        Closure::Transparent => targets
            .iter()
            .zip(radii)
            .map(|(&t, &radius)| match disc.transparent_eigenvalue(t) {
                Ok(l) if (l - t).norm() <= radius => Ok(Some(l)),
                Ok(_) | Err(NumericsError::NoConvergence { .. }) => Ok(None),
                Err(err) => Err(err),
            })
            .collect(),
    }
}

/// Matches each target eigenvalue `z` against the finite-difference
/// spectrum of the channel on `(0, R)` (or `(-R, R)` for the full line).
pub fn oracle_eigenvalues(
    channel: &ChannelParams,
    targets: &[ComplexScalar],
    r_max: f64,
    n: usize,
    opts: &MatrixOptions,
) -> Result<OracleReport> {
    validate(r_max, n)?;
    let lambdas: Vec<ComplexScalar> = targets.iter().map(|z| z - channel.shift).collect();
    let radii: Vec<f64> = lambdas
        .iter()
        .map(|l| opts.accept_radius * l.norm().max(1.0))
        .collect();
    let fine = discretize(channel, r_max, n)?;
    let raw = solve_grid(&fine, &lambdas, &radii, opts.closure)?;
    let coarse = if opts.richardson {
        let disc = discretize(channel, r_max, n / 2)?;
        // the coarse grid carries four times the discretisation error
        let wide: Vec<f64> = radii.iter().map(|r| 4.0 * r).collect();
        Some(solve_grid(&disc, &lambdas, &wide, opts.closure)?)
    } else {
        None
    };
    if opts.check_truncation {
        let doubled = discretize(channel, 2.0 * r_max, 2 * n)?;
        for l in raw.iter().flatten() {
            let z = channel.shift + l;
            let drift = match doubled.refine(opts.closure, *l) {
                Ok(moved) => (moved - l).norm() / z.norm().max(f64::MIN_POSITIVE),
                Err(_) => f64::INFINITY,
            };
            if drift > 1e-4 {
                return Err(NumericsError::TruncationSuspect { z, drift });
            }
        }
    }
    let matches = targets
        .iter()
        .enumerate()
        .map(|(i, &closed_form)| {
            let raw_z = raw[i].map(|l| channel.shift + l);
            let oracle = match (&coarse, raw[i]) {
                (Some(coarse), Some(fine_l)) => {
                    coarse[i].map(|coarse_l| channel.shift + (4.0 * fine_l - coarse_l) / 3.0)
                }
                (None, Some(_)) => raw_z,
                _ => None,
            };
            OracleMatch {
                closed_form,
                oracle,
                raw: raw_z,
            }
        })
        .collect();
    Ok(OracleReport { matches })
}

/// Oracle eigenvalues for the first `how_many` closed-form eigenvalues of
/// the channel (ordered by radial index), Dirichlet closure, truncation
/// check on. Unmatched closed-form points are skipped.
pub fn matrix_eigens(
    channel: &ChannelParams,
    r_max: f64,
    n: usize,
    how_many: usize,
) -> Result<Vec<ComplexScalar>> {
    let targets: Vec<ComplexScalar> =
        pt::discrete_spectrum(channel, SpectrumBound::MaxIndex(u32::MAX))
            .into_iter()
            .map(|p| p.z)
            .collect();
    let report = oracle_eigenvalues(channel, &targets, r_max, n, &MatrixOptions::default())?;
    Ok(report
        .matches
        .iter()
        .filter_map(|m| m.oracle)
        .take(how_many)
        .collect())
}
