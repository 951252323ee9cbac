//! Eigenvalues of complex symmetric (non-Hermitian) tridiagonal matrices.

use super::{NumericsError, Result};
use crate::special_functions::{is_finite, ComplexScalar};

const QL_MAX_SWEEPS: usize = 60;

fn zero() -> ComplexScalar {
    ComplexScalar::new(0.0, 0.0)
}

/// All eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e.len() == d.len() - 1`), by implicit QL with complex
/// orthogonal rotations.
pub fn tridiagonal_eigenvalues(
    d: &[ComplexScalar],
    e: &[ComplexScalar],
) -> Result<Vec<ComplexScalar>> {
    let n = d.len();
    if n == 0 || e.len() + 1 != n {
        return Err(NumericsError::InvalidInput(format!(
            "tridiagonal sizes {} and {} do not fit",
            d.len(),
            e.len()
        )));
    }
    let mut d = d.to_vec();
    let mut e: Vec<ComplexScalar> = e.to_vec();
    e.push(zero());

    for l in 0..n {
        let mut sweeps = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].norm() + d[m + 1].norm();
                if e[m].norm() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > QL_MAX_SWEEPS {
                return Err(NumericsError::NoConvergence {
                    iterations: sweeps,
                    residual: e[l].norm(),
                });
            }
            // Wilkinson-type shift from the leading 2x2 block
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            if (g - r).norm() > (g + r).norm() {
                r = -r;
            }
            g = d[m] - d[l] + e[l] / (g + r);
            let (mut s, mut c, mut p) = (
                ComplexScalar::new(1.0, 0.0),
                ComplexScalar::new(1.0, 0.0),
                zero(),
            );
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r.norm() == 0.0 {
                    d[i + 1] -= p;
                    e[m] = zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero();
        }
    }
    if d.iter().any(|x| !is_finite(*x)) {
        return Err(NumericsError::NoConvergence {
            iterations: QL_MAX_SWEEPS,
            residual: f64::NAN,
        });
    }
    Ok(d)
}

/// Solves `(T - sigma) x = b` by Gaussian elimination without pivoting.
fn solve_shifted(
    d: &[ComplexScalar],
    e: &[ComplexScalar],
    sigma: ComplexScalar,
    b: &[ComplexScalar],
) -> Vec<ComplexScalar> {
    let n = d.len();
    let tiny = f64::EPSILON * (d.iter().map(|x| x.norm()).fold(0.0, f64::max) + 1.0);
    let mut diag = vec![zero(); n];
    let mut rhs = b.to_vec();
    diag[0] = d[0] - sigma;
    for i in 1..n {
        if diag[i - 1].norm() < tiny {
            diag[i - 1] = ComplexScalar::new(tiny, 0.0);
        }
        let factor = e[i - 1] / diag[i - 1];
        diag[i] = d[i] - sigma - factor * e[i - 1];
        rhs[i] = rhs[i] - factor * rhs[i - 1];
    }
    if diag[n - 1].norm() < tiny {
        diag[n - 1] = ComplexScalar::new(tiny, 0.0);
    }
    let mut x = vec![zero(); n];
    x[n - 1] = rhs[n - 1] / diag[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = (rhs[i] - e[i] * x[i + 1]) / diag[i];
    }
    x
}

fn bilinear(x: &[ComplexScalar], y: &[ComplexScalar]) -> ComplexScalar {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn apply(d: &[ComplexScalar], e: &[ComplexScalar], x: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let n = d.len();
    (0..n)
        .map(|i| {
            let mut v = d[i] * x[i];
            if i > 0 {
                v += e[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                v += e[i] * x[i + 1];
            }
            v
        })
        .collect()
}

/// Eigenvalue of the tridiagonal matrix closest to `sigma`, by inverse
/// iteration with the (unconjugated) Rayleigh quotient.
pub fn nearest_eigenvalue(
    d: &[ComplexScalar],
    e: &[ComplexScalar],
    sigma: ComplexScalar,
) -> Result<ComplexScalar> {
    let n = d.len();
    if n == 0 || e.len() + 1 != n {
        return Err(NumericsError::InvalidInput(
            "tridiagonal sizes do not fit".into(),
        ));
    }
    // hashed start vector: a smooth or periodic one can be nearly
    // orthogonal to every eigenvector of one parity
    let mut x: Vec<ComplexScalar> = (0..n as u64)
        .map(|i| {
            let mut h = i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
            h ^= h >> 31;
            h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
            h ^= h >> 29;
            ComplexScalar::new((h >> 11) as f64 / (1u64 << 53) as f64 - 0.5, 0.0)
        })
        .collect();
    let t_norm = d.iter().map(|x| x.norm()).fold(0.0, f64::max)
        + 2.0 * e.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut lambda = sigma;
    let mut shift = sigma;
    for it in 0..60 {
        let y = solve_shifted(d, e, shift, &x);
        let norm = y.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(NumericsError::NoConvergence {
                iterations: it,
                residual: f64::NAN,
            });
        }
        x = y.into_iter().map(|v| v / norm).collect();
        let tx = apply(d, e, &x);
        let xx = bilinear(&x, &x);
        let next = bilinear(&x, &tx) / xx;
        let residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - next * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        let moved = (next - lambda).norm();
        lambda = next;
        // the first two sweeps stay at sigma so the iterate locks onto the
        // eigenvector nearest to it
        if it >= 2 {
            shift = lambda;
        }
        if it >= 2 && (moved <= 1e-15 * t_norm || residual <= 1e-12 * t_norm) {
            return Ok(lambda);
        }
    }
    Err(NumericsError::NoConvergence {
        iterations: 60,
        residual: (lambda - sigma).norm(),
    })
}
