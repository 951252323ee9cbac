//! Argument-principle counting on rectangles and Newton refinement.

use std::f64::consts::PI;

use super::{NumericsError, Result};
use crate::models::WindowRect;
use crate::special_functions::{is_finite, ComplexScalar};

pub const MIN_QUAD_POINTS: usize = 64;
const MAX_QUAD_POINTS: usize = 1 << 17;
const MIN_MODULUS: f64 = 1e-10;
const MAX_RESIDUAL: f64 = 0.2;
const STABLE_DIFF: f64 = 1e-2;

/// Net winding number of `f` around a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleCount {
    pub window: WindowRect,
    /// Zeros minus poles of `f` inside the window.
    pub count: i64,
    /// Quadrature nodes used by the accepted estimate.
    pub quad_points: usize,
    /// Distance of the raw integral from `count`.
    pub residual: f64,
}

/// `f'(z)/f(z)` by fourth-order central differences of `log(f(z+d)/f(z))`
/// along direction `h`.
fn log_derivative<F>(f: &F, z: ComplexScalar, fz: ComplexScalar, h: ComplexScalar) -> ComplexScalar
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    let l = |d: ComplexScalar| (f(z + d) / fz).ln();
    (-l(2.0 * h) + 8.0 * l(h) - 8.0 * l(-h) + l(-2.0 * h)) / (12.0 * h)
}

fn perimeter_nodes(window: &WindowRect, n: usize) -> Vec<ComplexScalar> {
    let corners = window.corners();
    let lengths: Vec<f64> = (0..4)
        .map(|i| (corners[(i + 1) % 4] - corners[i]).norm())
        .collect();
    let total: f64 = lengths.iter().sum();
    let mut nodes = Vec::with_capacity(n + 4);
    for i in 0..4 {
        let pieces = ((n as f64 * lengths[i] / total).round() as usize).max(4);
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        for j in 0..pieces {
            nodes.push(a + (b - a) * (j as f64 / pieces as f64));
        }
    }
    nodes
}

fn winding_integral<F>(f: &F, window: &WindowRect, n: usize) -> Result<ComplexScalar>
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    let scale = (window.re_max - window.re_min).max(window.im_max - window.im_min);
    let nodes = perimeter_nodes(window, n);
    let len = nodes.len();
    let mut g = Vec::with_capacity(len);
    let mut min_modulus = f64::INFINITY;
    for (j, &z) in nodes.iter().enumerate() {
        let fz = f(z);
        let modulus = fz.norm();
        min_modulus = min_modulus.min(if modulus.is_finite() { modulus } else { 0.0 });
        if modulus <= MIN_MODULUS || !is_finite(fz) {
            return Err(NumericsError::ContourTooClose { min_modulus });
        }
        let tangent = nodes[(j + 1) % len] - nodes[(j + len - 1) % len];
        let h = tangent / tangent.norm() * (1e-5 * scale);
        let d = log_derivative(f, z, fz, h);
        if !is_finite(d) {
            return Err(NumericsError::ContourTooClose { min_modulus });
        }
        g.push(d);
    }
    let mut sum = ComplexScalar::new(0.0, 0.0);
    for j in 0..len {
        let k = (j + 1) % len;
        sum += (g[j] + g[k]) * 0.5 * (nodes[k] - nodes[j]);
    }
    Ok(sum / ComplexScalar::new(0.0, 2.0 * PI))
}

/// Counts zeros minus poles of `f` inside `window` by the argument
/// principle. The node count starts at `quad_points` and doubles until two
/// successive estimates agree.
pub fn count_poles<F>(f: F, window: &WindowRect, quad_points: usize) -> Result<PoleCount>
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    if quad_points < MIN_QUAD_POINTS {
        return Err(NumericsError::InvalidInput(format!(
            "need at least {MIN_QUAD_POINTS} quadrature points, got {quad_points}"
        )));
    }
    if !(window.re_max > window.re_min && window.im_max > window.im_min) {
        return Err(NumericsError::InvalidInput("window has no interior".into()));
    }
    let mut n = quad_points;
    let mut prev = winding_integral(&f, window, n)?;
    loop {
        let next_n = 2 * n;
        let next = winding_integral(&f, window, next_n)?;
        let stable = (next - prev).norm() < STABLE_DIFF;
        n = next_n;
        prev = next;
        if stable || n >= MAX_QUAD_POINTS {
            break;
        }
    }
    let count = prev.re.round();
    let residual = (prev - count).norm();
    if residual >= MAX_RESIDUAL {
        return Err(NumericsError::NonIntegerWinding { residual });
    }
    Ok(PoleCount {
        window: *window,
        count: count as i64,
        quad_points: n,
        residual,
    })
}

/// Outcome of [`refine_root`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootResult {
    pub root: ComplexScalar,
    /// `|f(root)|`.
    pub residual: f64,
    pub iterations: usize,
}

const ROOT_TOL: f64 = 1e-12;
const ROOT_MAX_ITER: usize = 50;

fn derivative<F>(f: &F, z: ComplexScalar) -> ComplexScalar
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    let h = 1e-4 * z.norm().max(1.0);
    let hc = ComplexScalar::new(h, 0.0);
    (-f(z + 2.0 * hc) + 8.0 * f(z + hc) - 8.0 * f(z - hc) + f(z - 2.0 * hc)) / (12.0 * h)
}

/// Newton iteration with a numerical derivative. Stops once `|f| <= 1e-12`,
/// after one final correction step.
pub fn refine_root<F>(f: F, seed: ComplexScalar) -> Result<RootResult>
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    let mut z = seed;
    let mut fz = f(z);
    if !is_finite(fz) || !is_finite(z) {
        return Err(NumericsError::InvalidInput(format!(
            "f not finite at seed {seed}"
        )));
    }
    for it in 0..ROOT_MAX_ITER {
        let step = fz / derivative(&f, z);
        if fz.norm() <= ROOT_TOL {
            let polished = z - step;
            let fp = f(polished);
            if is_finite(step) && is_finite(fp) && fp.norm() <= fz.norm() {
                z = polished;
                fz = fp;
            }
            return Ok(RootResult {
                root: z,
                residual: fz.norm(),
                iterations: it,
            });
        }
        if !is_finite(step) {
            break;
        }
        z -= step;
        fz = f(z);
        if !is_finite(fz) {
            break;
        }
    }
    Err(NumericsError::NoConvergence {
        iterations: ROOT_MAX_ITER,
        residual: fz.norm(),
    })
}
