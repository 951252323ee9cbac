use higgs_core::models::{reduce, ModelSpec, WindowRect};
use higgs_core::numerics::{
    count_poles, integrate_radial, matrix_eigens, numeric_reflection, oracle_eigenvalues,
    refine_root, series_start, Closure, MatrixOptions,
};
use higgs_core::poschl_teller::{
    discrete_spectrum, eigenfunction_e, scattering_det_munu, ChannelParams, SpectrumBound,
};
use higgs_core::special_functions::ComplexScalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> ComplexScalar {
    ComplexScalar::new(re, im)
}

fn r(x: f64) -> ComplexScalar {
    c(x, 0.0)
}

#[test]
fn integrated_solution_matches_closed_form() {
    let (mu, nu, k) = (c(0.8, 0.3), c(2.4, -0.6), c(1.1, 0.2));
    let ch = ChannelParams::regular(mu, nu);
    let init = series_start(mu, nu, k, 1e-3);
    let sol = integrate_radial(&ch, k, 1e-3, 3.0, init).unwrap();
    let (end, value, _) = sol.last();
    assert_eq!(end, 3.0);
    let exact = eigenfunction_e(mu, nu, k, 3.0).unwrap();
    assert!((value - exact).norm() <= 1e-8 * exact.norm());
    assert!(sol.r_grid.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(sol.r_grid.len(), sol.values.len());
    assert_eq!(sol.values.len(), sol.derivs.len());
}

#[test]
fn reflection_for_random_real_channels() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let nu = r(rng.gen_range(0.0..4.5));
        let k = rng.gen_range(0.2..5.0);
        let ch = match i % 3 {
            0 => ChannelParams::regular(r(rng.gen_range(-0.45..2.5)), nu),
            1 => ChannelParams::dirichlet(nu),
            _ => ChannelParams::full_line(nu),
        };
        let numeric = numeric_reflection(&ch, k, 15.0).unwrap();
        let exact = ch.scattering_det(r(k)).unwrap();
        worst = worst.max((numeric - exact).norm() / exact.norm());
    }
    assert!(worst <= 1e-6, "worst relative error {worst:e}");
}

#[test]
fn reflection_for_complex_strength() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..5 {
        let nu = c(rng.gen_range(0.0..4.0), rng.gen_range(-5.0..5.0));
        let mu = r(rng.gen_range(0.0..2.0));
        let k = rng.gen_range(0.5..4.0);
        let ch = ChannelParams::regular(mu, nu);
        let numeric = numeric_reflection(&ch, k, 15.0).unwrap();
        let exact = scattering_det_munu(mu, nu, r(k)).unwrap();
        assert!(
            (numeric - exact).norm() <= 1e-5 * exact.norm(),
            "mu={mu} nu={nu} k={k}"
        );
    }
}

#[test]
fn newton_on_the_reciprocal_determinant() {
    let nu = r(2.3);
    let ch = ChannelParams::full_line(nu);
    let inv = |k: ComplexScalar| ch.reciprocal_det(k).unwrap();
    let root = refine_root(inv, c(0.0, -2.6)).unwrap();
    assert!((root.root - c(0.0, -2.7)).norm() <= 1e-10, "{}", root.root);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let seed = c(0.0, -2.7)
            + ComplexScalar::from_polar(rng.gen_range(0.0..0.1), rng.gen_range(0.0..6.3));
        let again = refine_root(inv, seed).unwrap();
        assert!((again.root - root.root).norm() <= 1e-10, "seed {seed}");
    }
}

#[test]
fn perturbed_closed_form_poles_are_recovered() {
    let channels = [
        ChannelParams::regular(r(0.5), r(4.0)),
        ChannelParams::regular(r(0.5), c(4.0, 2.0)),
        ChannelParams::regular(c(1.5, 0.0), c(6.2, -3.0)),
        ChannelParams::full_line(c(3.4, 1.0)),
        ChannelParams::dirichlet(c(5.1, -0.5)),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for ch in channels {
        let (offset, step) = ch.ladder();
        for n in 0..6 {
            let k = c(0.0, 1.0) * (offset - step * n as f64);
            let seed = k + ComplexScalar::from_polar(1e-3, rng.gen_range(0.0..6.3));
            let found = refine_root(|k| ch.reciprocal_det(k).unwrap(), seed).unwrap();
            assert!(
                (found.root - k).norm() <= 1e-9,
                "{ch:?} n={n}: {} vs {k}",
                found.root
            );
        }
    }
}

#[test]
fn contour_count_away_from_poles_is_zero() {
    let ch = ChannelParams::regular(r(0.5), r(4.0));
    let w = WindowRect::new(0.5, 2.0, 0.3, 1.2).unwrap();
    let pc = count_poles(|k| ch.reciprocal_det(k).unwrap(), &w, 64).unwrap();
    assert_eq!(pc.count, 0);
    assert!(pc.residual < 0.2);
}

#[test]
fn matrix_oracle_complex_channel() {
    let ch = ChannelParams::regular(r(0.5), c(4.0, 2.0));
    let targets: Vec<ComplexScalar> = discrete_spectrum(&ch, SpectrumBound::MaxIndex(10))
        .into_iter()
        .map(|p| p.z)
        .collect();
    assert_eq!(targets.len(), 2);
    let ev = matrix_eigens(&ch, 20.0, 4000, 2).unwrap();
    assert_eq!(ev.len(), 2);
    for (z, t) in ev.iter().zip(&targets) {
        assert!((z - t).norm() <= 1e-4 * t.norm(), "{z} vs {t}");
    }
}

#[test]
fn matrix_oracle_plane_figure_channel() {
    let model = ModelSpec::HyperbolicPlane {
        omega2: c(0.0, -100.0),
    };
    let ch = reduce(&model, 0).unwrap();
    let targets: Vec<ComplexScalar> = discrete_spectrum(&ch, SpectrumBound::MaxIndex(40))
        .into_iter()
        .map(|p| p.z)
        .filter(|z| (z - ch.shift).norm() <= 50.0)
        .collect();
    assert!(!targets.is_empty());
    let opts = MatrixOptions {
        closure: Closure::Transparent,
        richardson: true,
        ..MatrixOptions::default()
    };
    let report = oracle_eigenvalues(&ch, &targets, 20.0, 4000, &opts).unwrap();
    assert!(report.unmatched().is_empty());
    assert!(
        report.max_relative_error() <= 1e-4,
        "{}",
        report.max_relative_error()
    );
}

#[test]
fn matrix_oracle_finds_both_parities_on_the_line() {
    let model = ModelSpec::EckartHiggs {
        omega2: c(0.0, -100.0),
        alpha: c(3.0, 0.0),
    };
    let ch = reduce(&model, 0).unwrap();
    let targets: Vec<ComplexScalar> = discrete_spectrum(&ch, SpectrumBound::MaxIndex(40))
        .into_iter()
        .map(|p| p.z)
        .collect();
    assert_eq!(targets.len(), 7);
    let opts = MatrixOptions {
        closure: Closure::Transparent,
        richardson: true,
        ..MatrixOptions::default()
    };
    let report = oracle_eigenvalues(&ch, &targets, 20.0, 4000, &opts).unwrap();
    assert!(report.unmatched().is_empty(), "{:?}", report.unmatched());
    assert!(
        report.max_relative_error() <= 1e-4,
        "{}",
        report.max_relative_error()
    );
}

#[test]
fn matrix_oracle_second_order_convergence() {
    let ch = ChannelParams::regular(r(0.5), c(5.0, -1.0));
    let target = discrete_spectrum(&ch, SpectrumBound::MaxIndex(0))[0].z;
    let opts = MatrixOptions {
        check_truncation: false,
        ..MatrixOptions::default()
    };
    let sizes = [500usize, 1000, 2000, 4000];
    let errs: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let rep = oracle_eigenvalues(&ch, &[target], 20.0, n, &opts).unwrap();
            (rep.matches[0].raw.unwrap() - target).norm()
        })
        .collect();
    // least-squares slope of log(err) against log(N)
    let xs: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = num / den;
    assert!(
        (slope + 2.0).abs() <= 0.15,
        "slope {slope}, errors {errs:?}"
    );
}
