//! Time-stepping examples on the standard experiment grids.

use ndarray::Array1;
use nnlif_core::experiments::presets;
use nnlif_core::model::{mass, DensityState, ScalarFn};
use nnlif_core::quasisteady::{quasi_steady, QuasiSteadyOptions};
use nnlif_core::stepper::{convect, run, step, OutputSpec, SchemeOptions, SchemeVariant};

#[test]
fn ten_steps_conserve_mass_and_sign() {
    let problem = presets::convergence(0.01, 0.1, 0.01, 1e-3);
    let g = &problem.grid;
    let state = DensityState::initial(&problem.initial, g, problem.coeffs.a).unwrap();
    let m0 = state.mass(g);
    for variant in [SchemeVariant::Si, SchemeVariant::fi()] {
        let mut s = state.clone();
        for _ in 0..10 {
            let (next, report) = step(&s, g, &problem.coeffs, &SchemeOptions::new(variant)).unwrap();
            assert!(report.relative_mass_drift() <= 1e-12);
            assert!(next.min_density() >= 0.0);
            s = next;
        }
        assert!((s.mass(g) - m0).abs() <= 1e-12 * m0);
    }
}

#[test]
fn constant_firing_transfer_makes_fi_equal_si() {
    let mut problem = presets::convergence(0.005, 0.1, 0.01, 1e-3);
    problem.coeffs.firing = ScalarFn::Constant { value: 0.4 };
    let g = &problem.grid;
    let mut si = DensityState::initial(&problem.initial, g, problem.coeffs.a).unwrap();
    let mut fi = si.clone();
    for _ in 0..5 {
        si = step(&si, g, &problem.coeffs, &SchemeOptions::new(SchemeVariant::Si))
            .unwrap()
            .0;
        let (next, report) = step(&fi, g, &problem.coeffs, &SchemeOptions::new(SchemeVariant::fi())).unwrap();
        assert_eq!(report.fi_iterations, 1);
        fi = next;
    }
    let diff = (&si.p - &fi.p).mapv(f64::abs).sum();
    assert!(diff <= 1e-14 * si.p.sum(), "{diff:e}");
}

#[test]
fn enormous_epsilon_leaves_the_convected_state() {
    let mut problem = presets::convergence(0.001, 0.1, 0.01, 1e-3);
    problem.coeffs.epsilon = 1e12;
    let g = &problem.grid;
    let s0 = DensityState::initial(&problem.initial, g, problem.coeffs.a).unwrap();
    let options = SchemeOptions::default();
    let (p_star, _) = convect(&s0, g, &problem.coeffs, &options).unwrap();
    let (s1, _) = step(&s0, g, &problem.coeffs, &options).unwrap();
    let rel = (&s1.p - &p_star).mapv(f64::abs).sum() / p_star.sum();
    assert!(rel < 1e-9, "{rel:e}");
}

#[test]
fn quasi_steady_state_is_a_fixed_point_without_transport() {
    let mut problem = presets::convergence(0.002, 0.1, 0.01, 1e-3);
    problem.coeffs.learning = ScalarFn::Constant { value: 0.0 };
    let g = &problem.grid;
    // Mass only on the node w = 0, where the relaxation velocity vanishes.
    let j0 = (0..=g.n_w)
        .min_by(|&a, &b| g.w(a).abs().total_cmp(&g.w(b).abs()))
        .unwrap();
    assert!(g.w(j0).abs() < 1e-12);
    let mut h = Array1::zeros(g.n_w + 1);
    h[j0] = 1.0 / g.dw;
    let qs = quasi_steady(&h, g, &problem.coeffs, &QuasiSteadyOptions::default()).unwrap();
    assert!(qs.converged);
    let state = DensityState::new(qs.p.clone(), 0, g, problem.coeffs.a);
    for variant in [SchemeVariant::Si, SchemeVariant::fi()] {
        let (next, _) = step(&state, g, &problem.coeffs, &SchemeOptions::new(variant)).unwrap();
        let diff = (&next.p - &state.p).mapv(f64::abs).fold(0.0, |a: f64, &b| a.max(b));
        let max = state.max_density();
        assert!(diff <= 1e-10 * max, "{variant:?}: {diff:e}");
    }
}

#[test]
fn empty_horizon_reports_initial_row_only() {
    let problem = presets::convergence(0.0, 0.1, 0.01, 1e-3);
    let g = &problem.grid;
    let s0 = DensityState::initial(&problem.initial, g, problem.coeffs.a).unwrap();
    let m0 = mass(&s0.p, g);
    let out = run(
        s0,
        g,
        &problem.coeffs,
        &SchemeOptions::default(),
        &OutputSpec::default(),
    )
    .unwrap();
    assert_eq!(out.trajectory.len(), 1);
    assert_eq!(out.trajectory[0].step, 0);
    assert_eq!(out.trajectory[0].mass, m0);
}

#[test]
fn fixed_point_iterations_stay_small() {
    let problem = presets::asymptotic(1e-4, 5e-4, SchemeVariant::fi());
    let g = &problem.grid;
    let mut s = DensityState::initial(&problem.initial, g, problem.coeffs.a).unwrap();
    let mut counts = Vec::new();
    for _ in 0..40 {
        let (next, report) = step(&s, g, &problem.coeffs, &SchemeOptions::new(problem.variant)).unwrap();
        assert!(report.fi_converged);
        assert!(report.fi_residual <= 1e-12);
        counts.push(report.fi_iterations);
        s = next;
    }
    counts.sort_unstable();
    assert!(counts[counts.len() / 2] < 10, "{counts:?}");
    assert!(*counts.last().unwrap() <= 12, "{counts:?}");
}
