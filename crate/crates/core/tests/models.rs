use std::f64::consts::PI;

use higgs_core::models::{
    deformation_path, eckart_counts, model_eigenvalues, model_resonances, reduce,
    resonances_for_modes, CutSide, ModelSpec, WindowRect,
};
use higgs_core::numerics::count_poles;
use higgs_core::poschl_teller::{discrete_spectrum, resonances, SpectrumBound};
use higgs_core::special_functions::{principal_sqrt, ComplexScalar};

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn fig_omega2() -> ComplexScalar {
    c(0.0, -100.0)
}

fn all_models(omega2: ComplexScalar) -> [ModelSpec; 3] {
    [
        ModelSpec::HyperbolicPlane { omega2 },
        ModelSpec::EckartHiggs {
            omega2,
            alpha: c(3.0, 0.0),
        },
        ModelSpec::HalfCylinder {
            omega2,
            ell: 2.0 * PI,
        },
    ]
}

#[test]
fn no_eigenvalues_at_small_frequency() {
    for i in 0..20 {
        for j in 0..20 {
            let modulus = 0.5 * (i + 1) as f64 / 20.0;
            let arg = 2.0 * PI * j as f64 / 20.0;
            let omega = ComplexScalar::from_polar(modulus, arg);
            let model = ModelSpec::HyperbolicPlane {
                omega2: omega * omega,
            };
            assert!(
                model_eigenvalues(&model, 40, 40).unwrap().is_empty(),
                "omega={omega}"
            );
        }
    }
}

#[test]
fn plane_figure_eigenvalue_count() {
    let model = ModelSpec::HyperbolicPlane {
        omega2: fig_omega2(),
    };
    let eig = model_eigenvalues(&model, 40, 40).unwrap();
    assert_eq!(eig.len(), 16);
    assert!(eig.windows(2).all(|w| (w[0].m, w[0].n) < (w[1].m, w[1].n)));
}

#[test]
fn eigenvalues_are_indexed_resonances() {
    let window = WindowRect::new(-2000.0, 2000.0, -2000.0, 2000.0).unwrap();
    for model in all_models(fig_omega2())
        .iter()
        .chain(all_models(c(30.0, -5.0)).iter())
    {
        let eig = model_eigenvalues(model, 30, 60).unwrap();
        let res = model_resonances(model, &window, 30, 60).unwrap();
        for e in &eig {
            let hit = res.points.iter().find(|p| p.m == e.m && p.n == e.n);
            assert_eq!(
                hit.map(|p| p.z),
                Some(e.z),
                "{} (m,n)=({},{})",
                model.name(),
                e.m,
                e.n
            );
        }
    }
}

#[test]
fn model_sets_are_shifted_channel_sets() {
    for model in all_models(c(-3.0, -40.0)) {
        let eig = model_eigenvalues(&model, 6, 20).unwrap();
        for m in model.modes(6) {
            let ch = reduce(&model, m).unwrap();
            let chan: Vec<_> = discrete_spectrum(&ch, SpectrumBound::MaxIndex(20));
            let mine: Vec<_> = eig.iter().filter(|p| p.m == m).collect();
            assert_eq!(chan.len(), mine.len());
            for (a, b) in chan.iter().zip(mine) {
                assert_eq!((a.n, a.z), (b.n, b.z));
                // branch coherence with the same nu
                let (offset, step) = ch.ladder();
                let q = offset - step * a.n as f64;
                assert!((b.z - (ch.shift - q * q)).norm() <= 1e-12 * b.z.norm().max(1.0));
            }
        }
    }
}

#[test]
fn plane_formula_in_terms_of_omega() {
    let omega2 = fig_omega2();
    let model = ModelSpec::HyperbolicPlane { omega2 };
    let root = principal_sqrt(omega2 + 0.25);
    for p in model_eigenvalues(&model, 40, 40).unwrap() {
        let q = root - p.m as f64 - 1.0 - 2.0 * p.n as f64;
        assert!((p.z - (omega2 + 0.25 - q * q)).norm() <= 1e-12 * p.z.norm());
        assert!(2.0 * (p.n as f64) < root.re - p.m as f64 - 1.0);
    }
}

#[test]
fn free_plane_resonances_on_the_real_axis() {
    let model = ModelSpec::HyperbolicPlane {
        omega2: c(0.0, 0.0),
    };
    let window = WindowRect::new(-50.0, 1.0, -1.0, 1.0).unwrap();
    let res = model_resonances(&model, &window, 20, 20).unwrap();
    assert!(res.complete);
    let mut expected = Vec::new();
    for m in 0..=20i64 {
        for n in 0..=20u32 {
            let z = 0.25 - (m as f64 + 2.0 * n as f64 + 0.5).powi(2);
            if z >= -50.0 {
                expected.push((m, n, z));
            }
        }
    }
    let got: Vec<_> = res.points.iter().map(|p| (p.m, p.n, p.z.re)).collect();
    assert_eq!(got.len(), expected.len());
    for ((m, n, z), (gm, gn, gz)) in expected.iter().zip(&got) {
        assert_eq!((m, n), (gm, gn));
        assert!((z - gz).abs() < 1e-12);
    }
    assert!(res.points.iter().all(|p| p.z.im == 0.0));
}

#[test]
fn eckart_without_barrier_is_the_line_oscillator() {
    let omega2 = c(12.0, -3.0);
    let model = ModelSpec::EckartHiggs {
        omega2,
        alpha: c(0.0, 0.0),
    };
    let nu = principal_sqrt(omega2 + 0.25) - 0.5;
    let eig = model_eigenvalues(&model, 0, 50).unwrap();
    assert_eq!(eig.len(), 4);
    for p in eig {
        let q = nu - p.n as f64;
        assert!((p.z - (omega2 - q * q)).norm() <= 1e-12 * p.z.norm());
    }
    let counts = eckart_counts(c(9.0, 0.0), c(5.0, 0.0)).unwrap();
    assert_eq!((counts.with_alpha, counts.without_alpha), (2, 3));
}

#[test]
fn half_cylinder_channels_are_symmetric_in_m() {
    let model = ModelSpec::HalfCylinder {
        omega2: fig_omega2(),
        ell: 2.0 * PI,
    };
    let ch = reduce(&model, 10).unwrap();
    assert_eq!(ch.nu, principal_sqrt(c(-100.0, -100.0)) - 0.5);
    assert_eq!(ch.shift, c(0.25, -100.0));
    for m in 1..8 {
        assert_eq!(reduce(&model, m).unwrap(), reduce(&model, -m).unwrap());
    }
}

/// Argument-principle count of the closed-form poles of one channel's
/// determinant, as a function of the model's spectral value below the
/// channel's threshold line.
fn channel_pole_count(model: &ModelSpec, m: i64, window: &WindowRect) -> i64 {
    let ch = reduce(model, m).unwrap();
    let f = |z: ComplexScalar| {
        let q = -principal_sqrt(ch.shift - z);
        ch.reciprocal_det(c(0.0, 1.0) * q).unwrap()
    };
    count_poles(f, window, 256).unwrap().count
}

#[test]
fn figure_two_channels_against_pole_counts() {
    let model = ModelSpec::HalfCylinder {
        omega2: fig_omega2(),
        ell: 2.0 * PI,
    };
    // below the threshold line Im z = -100
    let window = WindowRect::new(-90.3, 40.7, -260.2, -100.9).unwrap();
    let res = resonances_for_modes(&model, &[0, 10, 20], &window, 200, CutSide::Upper).unwrap();
    assert!(res.complete);
    assert!(res.points.len() >= 3);
    for m in [0i64, 10, 20] {
        let expected = res.points.iter().filter(|p| p.m == m).count() as i64;
        let channel = resonances(&reduce(&model, m).unwrap(), &window, 200);
        assert_eq!(channel.points.len() as i64, expected);
        assert_eq!(channel_pole_count(&model, m, &window), expected, "m={m}");
    }
}

#[test]
fn deformation_from_the_free_plane() {
    let model = ModelSpec::HyperbolicPlane {
        omega2: fig_omega2(),
    };
    let path = deformation_path(&model, 0, 0, 200).unwrap();
    assert!(path.branch_jumps.is_empty());
    assert_eq!(path.samples[0], c(0.0, 0.0));
    let steps = path.samples.windows(2).map(|w| (w[1] - w[0]).norm());
    assert!(steps.fold(0.0, f64::max) < 2.0);
    let window = WindowRect::new(-1e3, 1e3, -1e3, 1e3).unwrap();
    let res = model_resonances(&model, &window, 0, 0).unwrap();
    assert_eq!(*path.samples.last().unwrap(), res.points[0].z);
    for m in 0..=10i64 {
        for n in 0..=((10 - m) / 2) as u32 {
            for model in [
                model,
                ModelSpec::HalfCylinder {
                    omega2: fig_omega2(),
                    ell: 2.0 * PI,
                },
            ] {
                let p = deformation_path(&model, m, n, 200).unwrap();
                assert!(p.branch_jumps.is_empty(), "{} m={m} n={n}", model.name());
            }
        }
    }
}
