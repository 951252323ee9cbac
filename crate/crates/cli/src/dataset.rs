//! Resolution of command-line options into a model run, and the point
//! records shared by all output formats.

use std::f64::consts::PI;

use higgs_core::models::{self, CutSide, ModelError};
use higgs_core::{ComplexScalar, ModelSpec, PointKind, SpectralPoint, WindowRect};
use serde::{Deserialize, Serialize};

use crate::args::{DataArgs, Figure, ModelArgs, ModelKind};
use crate::CliError;

pub const DEFAULT_M_MAX: u32 = 20;
pub const DEFAULT_N_MAX: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cx {
    pub re: f64,
    pub im: f64,
}

impl From<ComplexScalar> for Cx {
    fn from(z: ComplexScalar) -> Self {
        Cx { re: z.re, im: z.im }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl From<WindowRect> for Window {
    fn from(w: WindowRect) -> Self {
        Window {
            re_min: w.re_min,
            re_max: w.re_max,
            im_min: w.im_min,
            im_max: w.im_max,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Eigenvalue,
    Resonance,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Eigenvalue => "eigenvalue",
            Kind::Resonance => "resonance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Flag {
    BoundaryAmbiguous,
    Reference,
    #[serde(rename = "multiplicity-2")]
    Multiplicity2,
}

impl Flag {
    pub fn as_str(self) -> &'static str {
        match self {
            Flag::BoundaryAmbiguous => "boundary-ambiguous",
            Flag::Reference => "reference",
            Flag::Multiplicity2 => "multiplicity-2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub kind: Kind,
    pub m: i64,
    pub n: u32,
    pub z: Cx,
    pub flags: Vec<Flag>,
}

impl Point {
    fn from_spectral(p: &SpectralPoint, reference: bool) -> Point {
        let mut flags = Vec::new();
        if p.boundary_ambiguous {
            flags.push(Flag::BoundaryAmbiguous);
        }
        if reference {
            flags.push(Flag::Reference);
        }
        if p.multiplicity == 2 {
            flags.push(Flag::Multiplicity2);
        }
        Point {
            kind: match p.kind {
                PointKind::Eigenvalue => Kind::Eigenvalue,
                PointKind::Resonance => Kind::Resonance,
            },
            m: p.m,
            n: p.n,
            z: p.z.into(),
            flags,
        }
    }

    pub fn is_reference(&self) -> bool {
        self.flags.contains(&Flag::Reference)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameters {
    pub omega2: Cx,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Cx>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ell: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<Vec<i64>>,
    pub n_max: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<Window>,
    pub reference: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub model: String,
    pub parameters: Parameters,
    pub branch: String,
    pub complete: bool,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub meta: Meta,
    pub points: Vec<Point>,
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub model: ModelSpec,
    pub modes: Vec<i64>,
    /// `Some` when modes come from `--m-max`.
    pub m_max: Option<u32>,
    pub n_max: u32,
    pub window: Option<WindowRect>,
    pub reference: bool,
}

fn config(e: ModelError) -> CliError {
    CliError::Config(e.to_string())
}

pub fn figure_scenario(figure: Figure) -> Scenario {
    let omega2 = ComplexScalar::new(0.0, -100.0);
    match figure {
        Figure::Fig1 => Scenario {
            model: ModelSpec::HyperbolicPlane { omega2 },
            modes: (0..=40).collect(),
            m_max: Some(40),
            n_max: 40,
            window: Some(WindowRect::new(-250.0, 60.0, -350.0, 20.0).expect("valid window")),
            reference: true,
        },
        Figure::Fig2 => Scenario {
            model: ModelSpec::HalfCylinder {
                omega2,
                ell: 2.0 * PI,
            },
            modes: vec![0, 10, 20],
            m_max: None,
            n_max: 40,
            window: Some(WindowRect::new(-400.0, 450.0, -450.0, 50.0).expect("valid window")),
            reference: true,
        },
    }
}

/// Builds the model from its flags, rejecting flags that do not belong to it.
pub fn resolve_model(args: &ModelArgs) -> Result<ModelSpec, CliError> {
    let kind = args
        .model
        .ok_or_else(|| CliError::Config("--model is required".into()))?;
    let omega2 = args
        .omega2
        .ok_or_else(|| CliError::Config("--omega2 is required".into()))?;
    if kind != ModelKind::Eckart && args.alpha.is_some() {
        return Err(CliError::Config(
            "--alpha only applies to --model eckart".into(),
        ));
    }
    if kind != ModelKind::HalfCylinder && args.ell.is_some() {
        return Err(CliError::Config(
            "--ell only applies to --model half-cylinder".into(),
        ));
    }
    let model = match kind {
        ModelKind::Plane => ModelSpec::HyperbolicPlane { omega2 },
        ModelKind::Eckart => ModelSpec::EckartHiggs {
            omega2,
            alpha: args
                .alpha
                .ok_or_else(|| CliError::Config("--model eckart needs --alpha".into()))?,
        },
        ModelKind::HalfCylinder => ModelSpec::HalfCylinder {
            omega2,
            ell: args
                .ell
                .ok_or_else(|| CliError::Config("--model half-cylinder needs --ell".into()))?,
        },
    };
    model.validate().map_err(config)?;
    Ok(model)
}

fn mode_list(model: &ModelSpec, args: &ModelArgs) -> Result<(Vec<i64>, Option<u32>), CliError> {
    match (&args.modes, args.m_max) {
        (Some(_), Some(_)) => Err(CliError::Config("--modes and --m-max are exclusive".into())),
        (Some(modes), None) => {
            for &m in &modes.0 {
                models::reduce(model, m).map_err(config)?;
            }
            Ok((modes.0.clone(), None))
        }
        (None, m_max) => {
            let m_max = m_max.unwrap_or(DEFAULT_M_MAX);
            Ok((model.modes(m_max), Some(m_max)))
        }
    }
}

pub fn resolve(args: &DataArgs) -> Result<Scenario, CliError> {
    if let Some(figure) = args.reproduce {
        let m = &args.model;
        if m.model.is_some()
            || m.omega2.is_some()
            || m.alpha.is_some()
            || m.ell.is_some()
            || m.modes.is_some()
        {
            return Err(CliError::Config(
                "--reproduce fixes the model; only --window, --m-max and --n-max may be overridden"
                    .into(),
            ));
        }
        let mut s = figure_scenario(figure);
        if let Some(m_max) = m.m_max {
            if s.m_max.is_none() {
                return Err(CliError::Config(
                    "this figure uses a fixed mode list".into(),
                ));
            }
            s.m_max = Some(m_max);
            s.modes = s.model.modes(m_max);
        }
        if let Some(n_max) = m.n_max {
            s.n_max = n_max;
        }
        if args.window.is_some() {
            s.window = args.window;
        }
        return Ok(s);
    }
    let model = resolve_model(&args.model)?;
    let (modes, m_max) = mode_list(&model, &args.model)?;
    Ok(Scenario {
        model,
        modes,
        m_max,
        n_max: args.model.n_max.unwrap_or(DEFAULT_N_MAX),
        window: args.window,
        reference: args.reference,
    })
}

fn to_points(points: &[SpectralPoint], reference: bool) -> Vec<Point> {
    points
        .iter()
        .map(|p| Point::from_spectral(p, reference))
        .collect()
}

impl Scenario {
    /// Eigenvalues (restricted to the window when one is set) and whether
    /// the mode and radial truncation provably exhausts them.
    pub fn eigenvalues(&self) -> Result<(Vec<Point>, bool), CliError> {
        let side = CutSide::Upper;
        let pts = models::eigenvalues_for_modes(&self.model, &self.modes, self.n_max, side)
            .map_err(config)?;
        let mut complete = true;
        for &m in &self.modes {
            let all =
                models::eigenvalues_for_modes(&self.model, &[m], u32::MAX, side).map_err(config)?;
            complete &= all.iter().all(|p| p.n <= self.n_max);
        }
        if let Some(m_max) = self.m_max {
            // the eigenvalue condition weakens monotonically in |m|
            let next = m_max as i64 + 1;
            if models::reduce(&self.model, next).is_ok() {
                complete &= models::eigenvalues_for_modes(&self.model, &[next], 0, side)
                    .map_err(config)?
                    .is_empty();
            }
        }
        let pts: Vec<SpectralPoint> = match self.window {
            Some(w) => pts.into_iter().filter(|p| w.contains(p.z)).collect(),
            None => pts,
        };
        Ok((to_points(&pts, false), complete))
    }

    fn resonances_on(
        &self,
        model: &ModelSpec,
        side: CutSide,
        reference: bool,
    ) -> Result<(Vec<Point>, bool), CliError> {
        let window = self
            .window
            .ok_or_else(|| CliError::Config("resonances need --window re0,re1,im0,im1".into()))?;
        let e = match self.m_max {
            Some(m_max) => models::model_resonances_on(model, &window, m_max, self.n_max, side),
            None => models::resonances_for_modes(model, &self.modes, &window, self.n_max, side),
        }
        .map_err(config)?;
        Ok((to_points(&e.points, reference), e.complete))
    }

    pub fn resonances(&self) -> Result<(Vec<Point>, bool), CliError> {
        self.resonances_on(&self.model, CutSide::Upper, false)
    }

    /// Resonances of the same modes at `omega = 0`. On-cut radicands are
    /// taken from the side the deformation `t omega^2` arrives from.
    pub fn references(&self) -> Result<(Vec<Point>, bool), CliError> {
        let free = self.model.with_omega2(ComplexScalar::new(0.0, 0.0));
        self.resonances_on(&free, CutSide::approached_by(self.model.omega2()), true)
    }

    pub fn parameters(&self) -> Parameters {
        let (alpha, ell) = match self.model {
            ModelSpec::HyperbolicPlane { .. } => (None, None),
            ModelSpec::EckartHiggs { alpha, .. } => (Some(alpha.into()), None),
            ModelSpec::HalfCylinder { ell, .. } => (None, Some(ell)),
        };
        Parameters {
            omega2: self.model.omega2().into(),
            alpha,
            ell,
            m_max: self.m_max,
            modes: if self.m_max.is_none() {
                Some(self.modes.clone())
            } else {
                None
            },
            n_max: self.n_max,
            window: self.window.map(Window::from),
            reference: self.reference,
        }
    }

    pub fn dataset(&self, points: Vec<Point>, complete: bool) -> Dataset {
        Dataset {
            meta: Meta {
                model: self.model.name().to_string(),
                parameters: self.parameters(),
                branch: "principal".into(),
                complete,
                version: env!("CARGO_PKG_VERSION").into(),
            },
            points,
        }
    }

    /// Resonances plus, when requested, the `omega = 0` overlay.
    pub fn resonance_dataset(&self) -> Result<Dataset, CliError> {
        let (mut points, mut complete) = self.resonances()?;
        if self.reference {
            let (refs, c) = self.references()?;
            points.extend(refs);
            complete &= c;
        }
        Ok(self.dataset(points, complete))
    }

    pub fn spectrum_dataset(&self) -> Result<Dataset, CliError> {
        let (points, complete) = self.eigenvalues()?;
        Ok(self.dataset(points, complete))
    }

    /// Everything a plot shows: eigenvalues, then resonances and references
    /// when a window is set.
    pub fn plot_dataset(&self) -> Result<Dataset, CliError> {
        let (mut points, mut complete) = self.eigenvalues()?;
        if self.window.is_some() {
            let res = self.resonance_dataset()?;
            complete &= res.meta.complete;
            points.extend(res.points);
        }
        Ok(self.dataset(points, complete))
    }
}
