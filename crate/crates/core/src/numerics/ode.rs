//! Dormand-Prince 5(4) integration of `psi'' = (V(r) - k^2) psi`.

use super::{NumericsError, Result};
use crate::poschl_teller::ChannelParams;
use crate::special_functions::{is_finite, ComplexScalar};

/// Local relative error tolerance per step.
pub const ODE_TOL: f64 = 1e-12;

const MAX_STEPS: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct OdeSolution {
    pub r_grid: Vec<f64>,
    pub values: Vec<ComplexScalar>,
    pub derivs: Vec<ComplexScalar>,
    pub method_order: u32,
    /// Accumulated local error estimate relative to the solution size.
    pub est_error: f64,
}

impl OdeSolution {
    pub fn last(&self) -> (f64, ComplexScalar, ComplexScalar) {
        let i = self.r_grid.len() - 1;
        (self.r_grid[i], self.values[i], self.derivs[i])
    }
}

type State = [ComplexScalar; 2];

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

fn norm(y: &State) -> f64 {
    y[0].norm().max(y[1].norm())
}

/// Integrates the radial equation from `r0` to `r1` starting from
/// `init = (psi(r0), psi'(r0))`.
pub fn integrate_radial(
    channel: &ChannelParams,
    k: ComplexScalar,
    r0: f64,
    r1: f64,
    init: (ComplexScalar, ComplexScalar),
) -> Result<OdeSolution> {
    if !(r0 > 0.0 && r1 > r0 && r1.is_finite()) {
        return Err(NumericsError::InvalidInput(format!(
            "need 0 < r0 < r1, got r0 = {r0}, r1 = {r1}"
        )));
    }
    if !is_finite(init.0) || !is_finite(init.1) || !is_finite(k) {
        return Err(NumericsError::InvalidInput(
            "non-finite initial data".into(),
        ));
    }
    let k2 = k * k;
    let rhs = |r: f64, y: &State| -> Result<State> {
        let v = channel.potential(r)?;
        Ok([y[1], (v - k2) * y[0]])
    };

    let mut r = r0;
    let mut y: State = [init.0, init.1];
    let mut sol = OdeSolution {
        r_grid: vec![r0],
        values: vec![init.0],
        derivs: vec![init.1],
        method_order: 5,
        est_error: 0.0,
    };
    let span = r1 - r0;
    let mut h = (0.1 * r0).min(span / 16.0);
    let mut k1 = rhs(r, &y)?;
    let mut steps = 0usize;
    while r < r1 {
        steps += 1;
        if steps > MAX_STEPS || h < 1e-14 * r.max(1.0) {
            return Err(NumericsError::StepFailure { r });
        }
        let last = r + h >= r1;
        if last {
            h = r1 - r;
        }
        let mut ks: [State; 7] = [k1; 7];
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in ks.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += kj[0] * (h * a);
                    ys[1] += kj[1] * (h * a);
                }
            }
            ks[s] = rhs(r + C[s] * h, &ys)?;
            if s == 6 {
                // row 6 of A is the fifth-order solution (FSAL)
                let mut err: State = [ComplexScalar::new(0.0, 0.0); 2];
                for (j, kj) in ks.iter().enumerate() {
                    err[0] += kj[0] * (h * E[j]);
                    err[1] += kj[1] * (h * E[j]);
                }
                let scale = norm(&y).max(norm(&ys)).max(f64::MIN_POSITIVE);
                let ratio = norm(&err) / (ODE_TOL * scale);
                if !ratio.is_finite() || !is_finite(ys[0]) || !is_finite(ys[1]) {
                    h *= 0.2;
                    break;
                }
                if ratio <= 1.0 {
                    r = if last { r1 } else { r + h };
                    y = ys;
                    k1 = ks[6];
                    sol.est_error += ratio * ODE_TOL;
                    sol.r_grid.push(r);
                    sol.values.push(y[0]);
                    sol.derivs.push(y[1]);
                }
                let factor = if ratio == 0.0 {
                    5.0
                } else {
                    (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0)
                };
                h *= factor;
            }
        }
    }
    Ok(sol)
}

/// Frobenius start `(psi, psi')` at small `r0` for the solution
/// `r^{mu+1}(1 + a_1 r^2 + a_2 r^4 + ...)` of `V_{mu,nu}`. With `mu = -1`
/// this is the even solution `psi(0) = 1, psi'(0) = 0`.
pub fn series_start(
    mu: ComplexScalar,
    nu: ComplexScalar,
    k: ComplexScalar,
    r0: f64,
) -> (ComplexScalar, ComplexScalar) {
    let p = mu + 1.0;
    let mm = mu * (mu + 1.0);
    let nn = nu * (nu + 1.0);
    let v0 = -mm / 3.0 - nn;
    let v2 = mm / 15.0 + nn;
    let a1 = (v0 - k * k) / (2.0 * (2.0 * p + 1.0));
    let a2 = ((v0 - k * k) * a1 + v2) / (4.0 * (2.0 * p + 3.0));
    let r2 = r0 * r0;
    let rp = (p * r0.ln()).exp();
    let value = rp * (1.0 + a1 * r2 + a2 * r2 * r2);
    let deriv = rp / r0 * (p + a1 * (p + 2.0) * r2 + a2 * (p + 4.0) * r2 * r2);
    (value, deriv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poschl_teller::{eigenfunction_e_with_derivative, ChannelParams};

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn free_equation_is_sine() {
        let ch = ChannelParams::dirichlet(c(0.0, 0.0));
        let r0 = 0.5;
        let sol = integrate_radial(&ch, c(1.0, 0.0), r0, 10.0, (c(0.0, 0.0), c(1.0, 0.0))).unwrap();
        assert_eq!(sol.r_grid.len(), sol.values.len());
        assert!(sol.r_grid.windows(2).all(|w| w[1] > w[0]));
        let err = sol
            .r_grid
            .iter()
            .zip(&sol.values)
            .map(|(r, v)| (v - (r - r0).sin()).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-10, "{err}");
        assert_eq!(*sol.r_grid.last().unwrap(), 10.0);
    }

    #[test]
    fn matches_closed_form_solution() {
        let (mu, nu, k) = (c(0.5, 0.0), c(1.5, 0.3), c(1.2, 0.1));
        let ch = ChannelParams::regular(mu, nu);
        let start = eigenfunction_e_with_derivative(mu, nu, k, 1e-3).unwrap();
        let sol = integrate_radial(&ch, k, 1e-3, 3.0, (start.value, start.deriv)).unwrap();
        let exact = eigenfunction_e_with_derivative(mu, nu, k, 3.0)
            .unwrap()
            .value;
        let (_, v, _) = sol.last();
        assert!((v - exact).norm() <= 1e-8 * exact.norm(), "{v} vs {exact}");
    }

    #[test]
    fn linear_in_initial_data() {
        let ch = ChannelParams::regular(c(0.5, 0.0), c(2.0, -1.0));
        let k = c(0.7, 0.2);
        let init = series_start(ch.mu, ch.nu, k, 1e-3);
        let a = integrate_radial(&ch, k, 1e-3, 5.0, init).unwrap();
        let b = integrate_radial(&ch, k, 1e-3, 5.0, (init.0 * 2.0, init.1 * 2.0)).unwrap();
        let (_, va, _) = a.last();
        let (_, vb, _) = b.last();
        assert!((vb - 2.0 * va).norm() <= 1e-12 * va.norm());
    }

    #[test]
    fn series_start_agrees_with_closed_form() {
        let (mu, nu, k) = (c(0.3, 0.1), c(2.0, 0.5), c(1.0, -0.3));
        let r0 = 1e-2;
        let (v, d) = series_start(mu, nu, k, r0);
        let e = eigenfunction_e_with_derivative(mu, nu, k, r0).unwrap();
        // E is normalised like sinh^{mu+1} r, the series like r^{mu+1}
        let ratio = e.value / v;
        assert!((ratio - 1.0).norm() < 1e-10, "{ratio}");
        assert!((e.deriv / d - 1.0).norm() < 1e-10);
    }

    #[test]
    fn rejects_bad_interval() {
        let ch = ChannelParams::dirichlet(c(1.0, 0.0));
        let init = (c(0.0, 0.0), c(1.0, 0.0));
        assert!(integrate_radial(&ch, c(1.0, 0.0), 0.0, 1.0, init).is_err());
        assert!(integrate_radial(&ch, c(1.0, 0.0), 2.0, 1.0, init).is_err());
    }
}
