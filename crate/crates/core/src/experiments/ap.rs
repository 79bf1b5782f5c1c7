//! Distance of the scheme to the discrete quasi-steady state as `ε` shrinks.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::experiments::presets;
use crate::model::DensityState;
use crate::quasisteady::{ap_distance, quasi_steady, QuasiSteadyOptions};
use crate::stepper::{run_with, OutputSpec, SchemeOptions, SchemeVariant};

/// `ε = 10^{-1}, ..., 10^{-7}`.
pub fn default_epsilons() -> Vec<f64> {
    (1..=7).map(|k| 10f64.powi(-k)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApPoint {
    pub step: usize,
    pub t: f64,
    pub distance: f64,
    #[serde(rename = "Nbar")]
    pub n_bar: f64,
    pub qs_iterations: usize,
    pub qs_converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApCurve {
    pub variant: &'static str,
    pub epsilon: f64,
    pub dt: f64,
    pub points: Vec<ApPoint>,
    /// Smallest `min p / max p` over all time levels.
    pub worst_negativity: f64,
    pub max_relative_mass_drift: f64,
    pub fi_nonconverged_steps: usize,
}

impl ApCurve {
    pub fn final_distance(&self) -> f64 {
        self.points.last().map_or(f64::NAN, |p| p.distance)
    }
}

/// Runs the asymptotic-limit problem at `epsilon` and records the distance to
/// the quasi-steady state every `stride` steps and at the final step.
pub fn ap_curve(epsilon: f64, dt: f64, variant: SchemeVariant, stride: usize) -> Result<ApCurve> {
    let problem = presets::asymptotic(epsilon, dt, variant);
    let grid = &problem.grid;
    let coeffs = &problem.coeffs;
    let stride = stride.max(1);
    let initial = DensityState::initial(&problem.initial, grid, coeffs.a)?;
    let mut points = Vec::new();
    let mut worst_negativity = f64::INFINITY;
    let out = run_with(
        initial,
        grid,
        coeffs,
        &SchemeOptions::new(variant),
        &OutputSpec::default(),
        |state, _| {
            let max = state.max_density();
            if max > 0.0 {
                worst_negativity = worst_negativity.min(state.min_density() / max);
            }
            if state.step % stride == 0 || state.step == grid.n_t {
                let options = QuasiSteadyOptions {
                    n_bar_initial: state.obs.n_bar,
                    ..QuasiSteadyOptions::default()
                };
                let qs = quasi_steady(&state.obs.h_j, grid, coeffs, &options)?;
                points.push(ApPoint {
                    step: state.step,
                    t: state.time(grid),
                    distance: ap_distance(&state.p, &qs.p, grid),
                    n_bar: state.obs.n_bar,
                    qs_iterations: qs.iterations,
                    qs_converged: qs.converged,
                });
            }
            Ok(())
        },
    )?;
    Ok(ApCurve {
        variant: variant.label(),
        epsilon,
        dt,
        points,
        worst_negativity,
        max_relative_mass_drift: out.summary.max_relative_mass_drift,
        fi_nonconverged_steps: out.summary.fi_nonconverged_steps,
    })
}

/// One curve per `ε`, computed in parallel and returned in input order.
pub fn ap_sweep(variant: SchemeVariant, epsilons: &[f64], dt: f64, stride: usize) -> Result<Vec<ApCurve>> {
    epsilons
        .par_iter()
        .map(|&eps| ap_curve(eps, dt, variant, stride))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn epsilon_ladder() {
        let e = default_epsilons();
        assert_eq!(e.len(), 7);
        assert_eq!(e[0], 0.1);
        assert!((e[6] - 1e-7).abs() < 1e-22);
    }

    #[test]
    fn short_curve_records_stride_and_end() {
        let c = ap_curve(1e-2, 5e-3, SchemeVariant::Si, 25).unwrap();
        let steps: Vec<usize> = c.points.iter().map(|p| p.step).collect();
        assert_eq!(steps, [0, 25, 50, 60]);
        assert!(c.points.iter().all(|p| p.qs_converged && p.distance.is_finite()));
        assert!(c.worst_negativity >= 0.0);
    }
}
