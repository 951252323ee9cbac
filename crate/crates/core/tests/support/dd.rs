//! Double-double arithmetic (error-free transformations with FMA), complex
//! numbers over it, and a Gauss 2F1 series evaluated in it, used as an
//! extended-precision reference.

// split constants are written out to all the digits they carry
#![allow(clippy::approx_constant, clippy::excessive_precision)]

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN_2: Dd = Dd {
    hi: 6.931471805599452862e-01,
    lo: 2.319046813846299558e-17,
};
const TAU: Dd = Dd {
    hi: 6.283185307179586232e+00,
    lo: 2.449293598294706414e-16,
};

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

impl Dd {
    pub const fn new(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn abs(self) -> Dd {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    pub fn scale(self, f: f64) -> Dd {
        // exact for powers of two
        Dd {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, o.hi);
        let (t, f) = two_sum(self.lo, o.lo);
        let (s, e) = quick_two_sum(s, e + t);
        let (hi, lo) = quick_two_sum(s, e + f);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        let e = e + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

/// `exp` from reduction by `ln 2`, halving, and a Taylor series.
pub fn exp_dd(x: Dd) -> Dd {
    let k = (x.to_f64() / std::f64::consts::LN_2).round();
    let r = (x - LN_2 * Dd::new(k)).scale(1.0 / 1024.0);
    let mut term = Dd::new(1.0);
    let mut sum = Dd::new(1.0);
    for n in 1..30 {
        term = term * r / Dd::new(n as f64);
        sum = sum + term;
    }
    for _ in 0..10 {
        sum = sum * sum;
    }
    sum.scale(2f64.powi(k as i32))
}

/// `ln` by one Newton step on `exp(y) = x` from the double estimate.
pub fn ln_dd(x: Dd) -> Dd {
    let y0 = Dd::new(x.to_f64().ln());
    y0 + x * exp_dd(-y0) - Dd::new(1.0)
}

/// `(sin x, cos x)` by reduction modulo `2 pi` and Taylor series.
pub fn sin_cos_dd(x: Dd) -> (Dd, Dd) {
    let k = (x.to_f64() / std::f64::consts::TAU).round();
    let r = x - TAU * Dd::new(k);
    let r2 = r * r;
    let (mut s_term, mut c_term) = (r, Dd::new(1.0));
    let (mut s, mut c) = (r, Dd::new(1.0));
    for n in 1..40 {
        let m = 2.0 * n as f64;
        s_term = -(s_term * r2 / Dd::new(m * (m + 1.0)));
        c_term = -(c_term * r2 / Dd::new((m - 1.0) * m));
        s = s + s_term;
        c = c + c_term;
    }
    (s, c)
}

/// `atan2(y, x)` refined from the double estimate.
pub fn atan2_dd(y: Dd, x: Dd) -> Dd {
    let t0 = Dd::new(y.to_f64().atan2(x.to_f64()));
    let (s, c) = sin_cos_dd(t0);
    // tangent of the residual angle; its cube is below double-double resolution
    t0 + (y * c - x * s) / (x * c + y * s)
}

#[derive(Clone, Copy, Debug)]
pub struct Cdd {
    pub re: Dd,
    pub im: Dd,
}

impl Cdd {
    pub fn new(re: Dd, im: Dd) -> Self {
        Cdd { re, im }
    }

    pub fn from_c(z: Complex64) -> Self {
        Cdd::new(Dd::new(z.re), Dd::new(z.im))
    }

    pub fn real(x: f64) -> Self {
        Cdd::new(Dd::new(x), Dd::new(0.0))
    }

    pub fn to_c(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    pub fn add(self, o: Cdd) -> Cdd {
        Cdd::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: Cdd) -> Cdd {
        Cdd::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: Cdd) -> Cdd {
        Cdd::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn div(self, o: Cdd) -> Cdd {
        let den = o.re * o.re + o.im * o.im;
        Cdd::new(
            (self.re * o.re + self.im * o.im) / den,
            (self.im * o.re - self.re * o.im) / den,
        )
    }

    pub fn norm(self) -> f64 {
        self.to_c().norm()
    }

    pub fn ln(self) -> Cdd {
        let modulus2 = self.re * self.re + self.im * self.im;
        Cdd::new(ln_dd(modulus2).scale(0.5), atan2_dd(self.im, self.re))
    }

    pub fn exp(self) -> Cdd {
        let scale = exp_dd(self.re);
        let (s, c) = sin_cos_dd(self.im);
        Cdd::new(scale * c, scale * s)
    }
}

/// Power series of 2F1 summed in double-double.
pub fn series(a: Cdd, b: Cdd, c: Cdd, z: Cdd) -> Cdd {
    let one = Cdd::real(1.0);
    let mut term = one;
    let mut sum = one;
    let mut small = 0;
    for n in 0..200_000u32 {
        let nn = Cdd::real(n as f64);
        let num = a.add(nn).mul(b.add(nn));
        let den = c.add(nn).mul(Cdd::real(n as f64 + 1.0));
        term = term.mul(num).div(den).mul(z);
        sum = sum.add(term);
        if term.norm() < 1e-32 * sum.norm() {
            small += 1;
            if small > 4 {
                return sum;
            }
        } else {
            small = 0;
        }
    }
    panic!("reference series did not converge");
}

/// Reference value of 2F1 for `|z| <= 0.9` or `Re z <= 0`: the series
/// directly, or after the Pfaff transformation, in double-double.
pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Complex64 {
    let (a, b, c, zd) = (
        Cdd::from_c(a),
        Cdd::from_c(b),
        Cdd::from_c(c),
        Cdd::from_c(z),
    );
    if z.norm() <= 0.9 {
        return series(a, b, c, zd).to_c();
    }
    let one = Cdd::real(1.0);
    let w = zd.div(zd.sub(one));
    let log1mz = one.sub(zd).ln();
    let pref = Cdd::real(0.0).sub(a).mul(log1mz).exp();
    pref.mul(series(a, c.sub(b), c, w)).to_c()
}

/// The second Pfaff form, for cross-checking the reference itself.
pub fn hyp2f1_alt(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Complex64 {
    hyp2f1(b, a, c, z)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_double_double() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        let err = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(err.to_f64().abs() < 1e-31);
    }

    #[test]
    fn elementary_functions_round_trip() {
        for x in [0.3f64, 2.7, 13.6, 0.0123, -4.2] {
            let t = Dd::new(x);
            let e = exp_dd(t);
            let back = exp_dd(ln_dd(e)) - e;
            assert!(back.to_f64().abs() < 1e-27 * e.to_f64());
            let (s, c) = sin_cos_dd(t);
            assert!((s * s + c * c - Dd::new(1.0)).to_f64().abs() < 1e-29);
            let (s2, _) = sin_cos_dd(atan2_dd(s, c) - t);
            assert!(s2.to_f64().abs() < 1e-29);
        }
        // e to 32 digits
        let e = exp_dd(Dd::new(1.0))
            - Dd {
                hi: 2.718281828459045091,
                lo: 1.445646891729250158e-16,
            };
        assert!(e.to_f64().abs() < 1e-28);
    }
}
