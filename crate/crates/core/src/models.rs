//! Complex Higgs oscillators `Delta + omega^2 tanh^2 r` on three model
//! spaces, reduced to Poschl-Teller channels.
//!
//! | model           | channel                         | mu        | nu                                  | shift          |
//! |-----------------|---------------------------------|-----------|-------------------------------------|----------------|
//! | hyperbolic plane| half line, regular              | `|m|-1/2` | `sqrt(omega^2 + 1/4) - 1/2`          | `omega^2 + 1/4`|
//! | Eckart barrier  | full line                       | 0         | `sqrt(omega^2 - alpha + 1/4) - 1/2`  | `omega^2`      |
//! | half-cylinder   | half line, Dirichlet            | 0         | `sqrt(omega^2 - (2 pi m / l)^2) - 1/2`| `omega^2 + 1/4`|
//!
//! Square roots are principal. When the radicand lies exactly on the
//! negative real axis, [`CutSide`] selects the limit from above (the
//! principal choice) or from below.

use std::f64::consts::PI;

use thiserror::Error;

use crate::poschl_teller::{
    self as pt, Boundary, ChannelParams, PoschlTellerError, SpectralPoint, SpectrumBound,
};
use crate::special_functions::{is_finite, principal_sqrt, ComplexScalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("mode m = {m} is not allowed for the {model} model")]
    InvalidMode { model: &'static str, m: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Channel(#[from] PoschlTellerError),
}

pub type Result<T> = std::result::Result<T, ModelError>;

/// One of the three model operators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModelSpec {
    HyperbolicPlane {
        omega2: ComplexScalar,
    },
    EckartHiggs {
        omega2: ComplexScalar,
        alpha: ComplexScalar,
    },
    HalfCylinder {
        omega2: ComplexScalar,
        ell: f64,
    },
}

impl ModelSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ModelSpec::HyperbolicPlane { .. } => "plane",
            ModelSpec::EckartHiggs { .. } => "eckart",
            ModelSpec::HalfCylinder { .. } => "half-cylinder",
        }
    }

    pub fn omega2(&self) -> ComplexScalar {
        match *self {
            ModelSpec::HyperbolicPlane { omega2 }
            | ModelSpec::EckartHiggs { omega2, .. }
            | ModelSpec::HalfCylinder { omega2, .. } => omega2,
        }
    }

    /// Same model with `omega^2` replaced.
    pub fn with_omega2(&self, omega2: ComplexScalar) -> ModelSpec {
        match *self {
            ModelSpec::HyperbolicPlane { .. } => ModelSpec::HyperbolicPlane { omega2 },
            ModelSpec::EckartHiggs { alpha, .. } => ModelSpec::EckartHiggs { omega2, alpha },
            ModelSpec::HalfCylinder { ell, .. } => ModelSpec::HalfCylinder { omega2, ell },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !is_finite(self.omega2()) {
            return Err(ModelError::InvalidParameter("omega2 must be finite".into()));
        }
        match *self {
            ModelSpec::EckartHiggs { alpha, .. } if !is_finite(alpha) => {
                Err(ModelError::InvalidParameter("alpha must be finite".into()))
            }
            ModelSpec::HalfCylinder { ell, .. } if !(ell > 0.0 && ell.is_finite()) => Err(
                ModelError::InvalidParameter(format!("ell must be positive, got {ell}")),
            ),
            _ => Ok(()),
        }
    }

    /// Channel indices `m` enumerated for a given `m_max`.
    pub fn modes(&self, m_max: u32) -> Vec<i64> {
        let m_max = m_max as i64;
        match self {
            ModelSpec::HyperbolicPlane { .. } => (0..=m_max).collect(),
            ModelSpec::EckartHiggs { .. } => vec![0],
            ModelSpec::HalfCylinder { .. } => (-m_max..=m_max).collect(),
        }
    }
}

/// Axis-aligned rectangle in the complex plane (closed).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl WindowRect {
    pub fn new(re_min: f64, re_max: f64, im_min: f64, im_max: f64) -> Result<Self> {
        let all_finite = [re_min, re_max, im_min, im_max]
            .iter()
            .all(|v| v.is_finite());
        if !all_finite || re_min > re_max || im_min > im_max {
            return Err(ModelError::InvalidParameter(format!(
                "bad window [{re_min},{re_max}]x[{im_min},{im_max}]"
            )));
        }
        Ok(WindowRect {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn contains(&self, z: ComplexScalar) -> bool {
        z.re >= self.re_min && z.re <= self.re_max && z.im >= self.im_min && z.im <= self.im_max
    }

    pub fn corners(&self) -> [ComplexScalar; 4] {
        [
            ComplexScalar::new(self.re_min, self.im_min),
            ComplexScalar::new(self.re_max, self.im_min),
            ComplexScalar::new(self.re_max, self.im_max),
            ComplexScalar::new(self.re_min, self.im_max),
        ]
    }

    /// Largest distance from `p` to a point of the window.
    pub fn max_distance_from(&self, p: ComplexScalar) -> f64 {
        self.corners()
            .iter()
            .map(|c| (c - p).norm())
            .fold(0.0, f64::max)
    }

    pub fn center(&self) -> ComplexScalar {
        ComplexScalar::new(
            0.5 * (self.re_min + self.re_max),
            0.5 * (self.im_min + self.im_max),
        )
    }
}

/// Which side of the negative real axis a radicand lying on it is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CutSide {
    #[default]
    Upper,
    Lower,
}

impl CutSide {
    /// Side from which `t * omega2` approaches 0 along `t -> 0+`.
    pub fn approached_by(omega2: ComplexScalar) -> CutSide {
        if omega2.im < 0.0 {
            CutSide::Lower
        } else {
            CutSide::Upper
        }
    }
}

/// Principal square root with the on-cut tie broken by `side`.
pub fn branch_sqrt(w: ComplexScalar, side: CutSide) -> ComplexScalar {
    let s = principal_sqrt(w);
    if side == CutSide::Lower && w.im == 0.0 && w.re < 0.0 {
        s.conj()
    } else {
        s
    }
}

/// Reduction to the Poschl-Teller channel of mode `m`, principal branch.
pub fn reduce(model: &ModelSpec, m: i64) -> Result<ChannelParams> {
    reduce_on(model, m, CutSide::Upper)
}

pub fn reduce_on(model: &ModelSpec, m: i64, side: CutSide) -> Result<ChannelParams> {
    model.validate()?;
    let quarter = ComplexScalar::new(0.25, 0.0);
    let zero = ComplexScalar::new(0.0, 0.0);
    let channel = match *model {
        ModelSpec::HyperbolicPlane { omega2 } => ChannelParams::new(
            ComplexScalar::new(m.unsigned_abs() as f64 - 0.5, 0.0),
            branch_sqrt(omega2 + quarter, side) - 0.5,
            Boundary::HalfLineRegular,
            omega2 + quarter,
        )?,
        ModelSpec::EckartHiggs { omega2, alpha } => {
            if m != 0 {
                return Err(ModelError::InvalidMode { model: "eckart", m });
            }
            ChannelParams::new(
                zero,
                branch_sqrt(omega2 - alpha + quarter, side) - 0.5,
                Boundary::FullLine,
                omega2,
            )?
        }
        ModelSpec::HalfCylinder { omega2, ell } => {
            let freq = 2.0 * PI * m as f64 / ell;
            ChannelParams::new(
                zero,
                branch_sqrt(omega2 - freq * freq, side) - 0.5,
                Boundary::HalfLineDirichlet,
                omega2 + quarter,
            )?
        }
    };
    Ok(channel)
}

fn decorate(model: &ModelSpec, m: i64, mut p: SpectralPoint) -> SpectralPoint {
    p.m = m;
    if matches!(model, ModelSpec::HyperbolicPlane { .. }) && m != 0 {
        p.multiplicity = 2;
    }
    p
}

/// Eigenvalues over an explicit list of modes; output sorted by `(m, n)`.
pub fn eigenvalues_for_modes(
    model: &ModelSpec,
    modes: &[i64],
    n_max: u32,
    side: CutSide,
) -> Result<Vec<SpectralPoint>> {
    let mut out = Vec::new();
    for &m in modes {
        let channel = reduce_on(model, m, side)?;
        out.extend(
            pt::discrete_spectrum(&channel, SpectrumBound::MaxIndex(n_max))
                .into_iter()
                .map(|p| decorate(model, m, p)),
        );
    }
    out.sort_by_key(|p| (p.m, p.n));
    Ok(out)
}

/// Closed-form eigenvalues for all modes up to `m_max` and radial indices up
/// to `n_max`.
pub fn model_eigenvalues(model: &ModelSpec, m_max: u32, n_max: u32) -> Result<Vec<SpectralPoint>> {
    eigenvalues_for_modes(model, &model.modes(m_max), n_max, CutSide::Upper)
}

/// Result of a window-bounded enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct Enumeration {
    pub points: Vec<SpectralPoint>,
    /// `true` when the truncation provably exhausts the window.
    pub complete: bool,
}

/// Lower bound of `|q_{m,n}|` over all `n` for mode `m`, nondecreasing in
/// `|m|`. `None` for models with a single channel.
fn mode_lower_bound(model: &ModelSpec, m: i64, side: CutSide) -> Result<Option<f64>> {
    Ok(match model {
        ModelSpec::HyperbolicPlane { .. } => {
            let ch = reduce_on(model, m, side)?;
            // |nu - mu - 1 - 2n| >= mu + 1 - |nu|
            Some((ch.mu.re + 1.0 - ch.nu.norm()).max(0.0))
        }
        ModelSpec::EckartHiggs { .. } => None,
        ModelSpec::HalfCylinder { .. } => {
            // Im q_n = Im nu, and |Im sqrt(omega^2 - c^2)| grows with c^2
            let ch = reduce_on(model, m, side)?;
            Some(ch.nu.im.abs())
        }
    })
}

/// Resonances over an explicit list of modes.
pub fn resonances_for_modes(
    model: &ModelSpec,
    modes: &[i64],
    window: &WindowRect,
    n_max: u32,
    side: CutSide,
) -> Result<Enumeration> {
    let mut points = Vec::new();
    let mut complete = true;
    for &m in modes {
        let channel = reduce_on(model, m, side)?;
        let list = pt::resonances(&channel, window, n_max);
        complete &= list.complete;
        points.extend(list.points.into_iter().map(|p| decorate(model, m, p)));
    }
    points.sort_by_key(|p| (p.m, p.n));
    Ok(Enumeration { points, complete })
}

/// Closed-form resonances inside `window`, with a completeness flag covering
/// both the radial truncation and the mode truncation.
pub fn model_resonances(
    model: &ModelSpec,
    window: &WindowRect,
    m_max: u32,
    n_max: u32,
) -> Result<Enumeration> {
    model_resonances_on(model, window, m_max, n_max, CutSide::Upper)
}

pub fn model_resonances_on(
    model: &ModelSpec,
    window: &WindowRect,
    m_max: u32,
    n_max: u32,
    side: CutSide,
) -> Result<Enumeration> {
    let mut e = resonances_for_modes(model, &model.modes(m_max), window, n_max, side)?;
    let next = m_max as i64 + 1;
    if let Some(bound) = mode_lower_bound(model, next, side)? {
        let shift = reduce_on(model, next, side)?.shift;
        let reach = window.max_distance_from(shift);
        e.complete &= bound * bound > reach;
    }
    Ok(e)
}

/// Eigenvalue counts for the Eckart model under the two readings of the
/// counting condition: `n < Re nu` with `nu` from `omega^2 - alpha`, and the
/// printed variant with `omega^2` alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EckartCounts {
    pub with_alpha: u32,
    pub without_alpha: u32,
}

pub fn eckart_counts(omega2: ComplexScalar, alpha: ComplexScalar) -> Result<EckartCounts> {
    let model = ModelSpec::EckartHiggs { omega2, alpha };
    let with_alpha = eigenvalues_for_modes(&model, &[0], u32::MAX, CutSide::Upper)?.len() as u32;
    let bound = principal_sqrt(omega2 + 0.25).re - 0.5;
    let mut without_alpha = 0;
    while (without_alpha as f64) < bound - pt::BOUNDARY_MARGIN {
        without_alpha += 1;
    }
    Ok(EckartCounts {
        with_alpha,
        without_alpha,
    })
}

/// Resonance value `z(t omega^2; m, n)` sampled on `t in [0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationPath {
    pub t: Vec<f64>,
    pub samples: Vec<ComplexScalar>,
    /// Indices `i` where the step from sample `i` to `i+1` is flagged as a
    /// branch jump.
    pub branch_jumps: Vec<usize>,
}

/// Default ratio between a step and its neighbours above which the step is
/// reported as a branch jump.
pub const BRANCH_JUMP_FACTOR: f64 = 5.0;

/// Steps `i -> i+1` that exceed `factor` times the mean of the neighbouring
/// step lengths.
pub fn detect_branch_jumps(samples: &[ComplexScalar], factor: f64) -> Vec<usize> {
    let steps: Vec<f64> = samples.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let scale = samples
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let mut out = Vec::new();
    for (i, &d) in steps.iter().enumerate() {
        let mut nb = Vec::with_capacity(2);
        if i > 0 {
            nb.push(steps[i - 1]);
        }
        if i + 1 < steps.len() {
            nb.push(steps[i + 1]);
        }
        if nb.is_empty() {
            continue;
        }
        let secant = nb.iter().sum::<f64>() / nb.len() as f64;
        if d > factor * secant && d > 1e-12 * scale {
            out.push(i);
        }
    }
    out
}

/// Deforms `omega^2` linearly from 0 to the model's value and follows the
/// resonance `(m, n)`. The on-cut tie at `t = 0` is resolved from the side
/// the path arrives from, so the path starts at the limit of its own samples.
pub fn deformation_path(
    model: &ModelSpec,
    m: i64,
    n: u32,
    steps: usize,
) -> Result<DeformationPath> {
    if steps < 2 {
        return Err(ModelError::InvalidParameter(format!(
            "deformation path needs at least 2 steps, got {steps}"
        )));
    }
    let omega2 = model.omega2();
    let side = CutSide::approached_by(omega2);
    let mut t = Vec::with_capacity(steps);
    let mut samples = Vec::with_capacity(steps);
    for j in 0..steps {
        let tj = j as f64 / (steps - 1) as f64;
        let channel = reduce_on(&model.with_omega2(omega2 * tj), m, side)?;
        let (offset, step) = channel.ladder();
        let q = offset - step * n as f64;
        t.push(tj);
        samples.push(channel.shift - q * q);
    }
    let branch_jumps = detect_branch_jumps(&samples, BRANCH_JUMP_FACTOR);
    Ok(DeformationPath {
        t,
        samples,
        branch_jumps,
    })
}
