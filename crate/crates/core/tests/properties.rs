//! Randomized checks against independent references.

use librate_core::equilibria::{locate, Label, RefineOptions};
use librate_core::propagate::{integrate, IntegrateOptions};
use librate_core::report::{format_float, round_sig};
use librate_core::stability::oracle::solve_quartic;
use librate_core::stability::{char_coeffs_exact, roots_ferrari, FerrariForm, DEFAULT_THRESHOLD};
use librate_core::{Complex64, Model, State, SystemParams};
use nalgebra::Matrix4;
use proptest::prelude::*;

/// Eigenvalues of the companion matrix of `z^4 + a z^3 + b z^2 + c z + d`.
fn companion_roots([a, b, c, d]: [f64; 4]) -> Vec<Complex64> {
    #[rustfmt::skip]
    let m = Matrix4::new(
        0.0, 0.0, 0.0, -d,
        1.0, 0.0, 0.0, -c,
        0.0, 1.0, 0.0, -b,
        0.0, 0.0, 1.0, -a,
    );
    m.complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

fn nearest(z: Complex64, set: &[Complex64]) -> f64 {
    set.iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

fn model(q1: f64, a2: f64) -> Model {
    Model::new(SystemParams::with_defaults(q1, a2)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_agrees_with_companion_eigenvalues(
        re1 in -2.0..2.0f64, im1 in 0.1..2.0f64,
        re2 in -2.0..2.0f64, im2 in 0.1..2.0f64,
    ) {
        let (p, q) = (-2.0 * re1, re1 * re1 + im1 * im1);
        let (r, s) = (-2.0 * re2, re2 * re2 + im2 * im2);
        let poly = [p + r, q + s + p * r, p * s + q * r, q * s];
        let roots = solve_quartic(poly).unwrap();
        let reference = companion_roots(poly);
        for z in roots {
            prop_assert!(nearest(z, &reference) < 1e-7 * (1.0 + z.norm()), "{z} not among {reference:?}");
        }
        for z in [Complex64::new(re1, im1), Complex64::new(re2, im2)] {
            prop_assert!(nearest(z, &roots) < 1e-7);
        }
    }

    #[test]
    fn triangular_points_refine_and_mirror(q1 in 0.2..=1.0f64, a2 in 0.0..0.06f64) {
        let m = model(q1, a2);
        let opts = RefineOptions::default();
        let l4 = locate(&m, Label::L4, &opts).unwrap();
        let l5 = locate(&m, Label::L5, &opts).unwrap();
        prop_assert!(l4.residual < 1e-10 && l4.y > 0.0);
        let mirror_gap = (l4.x - l5.x).abs().max((l4.y + l5.y).abs());
        if q1 == 1.0 {
            prop_assert!(mirror_gap < 1e-12);
        } else {
            // the tangential stiffness at L4 is O(mu), so drag shifts the points by O(W1 / mu)
            let scale = m.derived().w1 / m.params().mu;
            prop_assert!(mirror_gap > 0.0 && mirror_gap < 4.0 * scale, "gap {mirror_gap} for W1/mu {scale}");
        }
    }

    #[test]
    fn series_roots_track_companion_eigenvalues(q1 in 0.2..1.0f64, a2 in 0.0..0.06f64) {
        let m = model(q1, a2);
        let point = locate(&m, Label::L4, &RefineOptions::default()).unwrap();
        let co = char_coeffs_exact(&m, &point).unwrap();
        let series = roots_ferrari(&co, FerrariForm::Consistent, DEFAULT_THRESHOLD).unwrap();
        let reference = companion_roots(co.poly());
        for z in series.roots {
            prop_assert!(nearest(z, &reference) < 1e-7);
        }
    }

    #[test]
    fn jacobi_asymmetry_comes_from_drag_angle(
        x in -1.4..1.4f64, y in 0.05..1.4f64, q1 in 0.0..=1.0f64, a2 in 0.0..0.2f64,
    ) {
        let m = model(q1, a2);
        let upper = m.jacobi(&State::at_rest(x, y)).unwrap();
        let lower = m.jacobi(&State::at_rest(x, -y)).unwrap();
        let d = m.derived();
        let angle = y.atan2(x + m.params().mu);
        let expected = -4.0 * d.n * d.w1 * angle;
        prop_assert!((upper - lower - expected).abs() <= 1e-13 * upper.abs().max(1.0));
    }

    #[test]
    fn drag_free_flow_is_reversible(dx in -0.05..0.05f64, dy in -0.05..0.05f64, a2 in 0.0..0.05f64) {
        let m = model(1.0, a2);
        let start = State::new(0.5 + dx, 0.85 + dy, 0.0, 0.0);
        let opts = IntegrateOptions { step: 1e-2, record_every: 1000 };
        let forward = integrate(&m, start, 5.0, &opts).unwrap().last().state;
        let back = integrate(&m, forward.reflected(), 5.0, &opts).unwrap().last().state.reflected();
        for (p, q) in start.to_array().iter().zip(back.to_array()) {
            prop_assert!((p - q).abs() < 1e-9);
        }
    }

    #[test]
    fn formatting_round_trips_at_twelve_digits(v in prop::num::f64::NORMAL) {
        let printed: f64 = format_float(v).parse().unwrap();
        prop_assert_eq!(printed, round_sig(v));
        prop_assert!((printed - v).abs() <= 1e-11 * v.abs());
    }
}
