//! Discrete voltage-wise quasi-steady state `P^H` for a prescribed weight marginal `H`.
//!
//! Each column of `P^H` is the positive kernel of the voltage operator built
//! with `N̄^H`, scaled to carry mass `H_j`; `N̄^H` itself is found by fixed-point
//! iteration on the total firing rate.

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::maxwellian::{build_column_with_input, kernel_vector, DEFAULT_EXPONENT_GUARD};
use crate::model::density::{firing_rates, total_firing_rate};
use crate::model::{CoefficientFns, GridSpec, ScalarFn};

pub const DEFAULT_QS_TOL: f64 = 1e-12;
pub const DEFAULT_QS_MAX_ITER: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSteadyOptions<'a> {
    /// Replaces the model input `I` (testing-phase signal `J`).
    pub input_override: Option<&'a ScalarFn>,
    pub n_bar_initial: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub exponent_guard: f64,
}

impl Default for QuasiSteadyOptions<'_> {
    fn default() -> Self {
        Self {
            input_override: None,
            n_bar_initial: 0.0,
            tol: DEFAULT_QS_TOL,
            max_iter: DEFAULT_QS_MAX_ITER,
            exponent_guard: DEFAULT_EXPONENT_GUARD,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSteadyState {
    pub p: Array2<f64>,
    pub n_j: Array1<f64>,
    pub n_bar: f64,
    pub iterations: usize,
    /// `|N̄^{(K)} - N̄^{(K-1)}|` at exit.
    pub residual: f64,
    pub converged: bool,
    /// `N̄^{(k)}` for `k = 0..=K`.
    pub trace: Vec<f64>,
}

/// Column profiles for a given `N̄`: `P_{:,j} = H_j q / (Δv Σ_i q_i)`.
pub fn profiles_for(
    h: &Array1<f64>,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    input: &ScalarFn,
    n_bar: f64,
    guard: f64,
) -> Result<Array2<f64>> {
    let n_v = grid.n_v;
    let columns: Vec<Vec<f64>> = (0..=grid.n_w)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            if h[j] == 0.0 {
                return Ok(vec![0.0; n_v]);
            }
            let column = build_column_with_input(grid, coeffs, input, j, n_bar, guard)?;
            let q = kernel_vector(&column)?;
            let scale = h[j] / (grid.dv * q.iter().sum::<f64>());
            Ok(q.into_iter().map(|x| x * scale).collect())
        })
        .collect::<Result<_>>()?;
    let mut p = Array2::zeros((n_v + 1, grid.n_w + 1));
    for (j, col) in columns.into_iter().enumerate() {
        for (i, x) in col.into_iter().enumerate() {
            p[[i, j]] = x;
        }
    }
    Ok(p)
}

/// Fixed-point iteration `N̄^{(k)} -> P^{(k+1)} -> N̄^{(k+1)}` until
/// `|N̄^{(k+1)} - N̄^{(k)}| <= tol`. Running out of iterations is flagged in
/// the result rather than raised.
pub fn quasi_steady(
    h: &Array1<f64>,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &QuasiSteadyOptions<'_>,
) -> Result<QuasiSteadyState> {
    assert_eq!(h.len(), grid.n_w + 1, "H length mismatch");
    let input = options.input_override.unwrap_or(&coeffs.input);
    let mut n_bar = options.n_bar_initial.max(0.0);
    let mut trace = vec![n_bar];
    let mut iterations = 0;
    loop {
        let p = profiles_for(h, grid, coeffs, input, n_bar, options.exponent_guard)?;
        let n_j = firing_rates(&p, grid, coeffs.a);
        let next = total_firing_rate(&n_j, grid);
        iterations += 1;
        trace.push(next);
        let residual = (next - n_bar).abs();
        let converged = residual <= options.tol || coeffs.firing.is_constant();
        if converged || iterations >= options.max_iter {
            // P was built with N̄^{(k)}; report the firing rate recomputed from it.
            return Ok(QuasiSteadyState {
                p,
                n_j,
                n_bar: next,
                iterations,
                residual,
                converged,
                trace,
            });
        }
        n_bar = next;
    }
}

/// `Δv Δw Σ_{i,j} |p_{i,j} - P_{i,j}|`.
pub fn ap_distance(p: &Array2<f64>, reference: &Array2<f64>, grid: &GridSpec) -> f64 {
    assert_eq!(p.dim(), reference.dim(), "shape mismatch");
    grid.dv * grid.dw * p.iter().zip(reference.iter()).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

/// Per-column discrete voltage fluxes `F_{i+1/2}` of a profile, with the
/// firing rate `N_j = a P_{n_v-1,j}/Δv` and the Maxwellian built from `n_bar`.
/// Returned scaled by `Δv / a` (the flux differences then vanish for a
/// quasi-steady column).
pub fn scaled_fluxes(
    column_profile: &[f64],
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    input: &ScalarFn,
    j: usize,
    n_bar: f64,
) -> Result<Vec<f64>> {
    let col = build_column_with_input(grid, coeffs, input, j, n_bar, DEFAULT_EXPONENT_GUARD)?;
    let n = grid.n_v;
    let firing = column_profile[n - 1];
    // M_{i+1/2}(P_{i+1}/M_{i+1} - P_i/M_i) = ρ⁻_i P_{i+1} - ρ⁺_i P_i
    Ok((0..n - 1)
        .map(|i| {
            let shift = if i >= grid.r { firing } else { 0.0 };
            col.rho_minus[i] * column_profile[i + 1] - col.rho_plus[i] * column_profile[i] + shift
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub w: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

pub fn profile_rows(grid: &GridSpec, n_j: &Array1<f64>, h_j: &Array1<f64>) -> Vec<ProfileRow> {
    (0..=grid.n_w)
        .map(|j| ProfileRow {
            w: grid.w(j),
            n: n_j[j],
            h: h_j[j],
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DomainBounds;

    fn setup() -> (GridSpec, CoefficientFns) {
        let g = GridSpec::new(DomainBounds::voltage_standard(-1.1, 0.1, 0.1), 60, 120, 100).unwrap();
        let c = CoefficientFns {
            a: 1.0,
            epsilon: 0.1,
            input: ScalarFn::Gaussian {
                amplitude: 0.5,
                scale: 10.0,
                shift: 5.0,
            },
            learning: ScalarFn::Constant { value: 0.0 },
            firing: ScalarFn::Identity,
        };
        (g, c)
    }

    #[test]
    fn zero_marginal() {
        let (g, c) = setup();
        let qs = quasi_steady(&Array1::zeros(121), &g, &c, &QuasiSteadyOptions::default()).unwrap();
        assert!(qs.p.iter().all(|&x| x == 0.0));
        assert_eq!(qs.n_bar, 0.0);
        assert_eq!(qs.iterations, 1);
        assert!(qs.converged);
    }

    #[test]
    fn single_column_without_feedback() {
        let (g, mut c) = setup();
        c.firing = ScalarFn::Constant { value: 0.0 };
        let mut h = Array1::zeros(121);
        h[40] = 2.0;
        let qs = quasi_steady(&h, &g, &c, &QuasiSteadyOptions::default()).unwrap();
        assert_eq!(qs.iterations, 1);
        let col: Vec<f64> = (0..g.n_v).map(|i| qs.p[[i, 40]]).collect();
        assert!((g.dv * col.iter().sum::<f64>() - 2.0).abs() < 1e-12);
        assert!(col.iter().all(|&x| x > 0.0));
        for j in (0..=120).filter(|&j| j != 40) {
            assert!(qs.p.column(j).iter().all(|&x| x == 0.0));
        }
    }

    #[test]
    fn converged_state_invariants() {
        let (g, c) = setup();
        let h = Array1::from_shape_fn(121, |j| {
            let w = g.w(j);
            if -1.0 < w && w < 0.0 {
                (std::f64::consts::PI * w).sin().powi(2)
            } else {
                0.0
            }
        });
        let qs = quasi_steady(&h, &g, &c, &QuasiSteadyOptions::default()).unwrap();
        assert!(qs.converged, "{:?}", qs.trace);
        for j in 0..=120 {
            let m = g.dv * qs.p.column(j).sum();
            assert!((m - h[j]).abs() <= 1e-12 * h[j].max(1e-300), "column {j}");
        }
        let n_j = firing_rates(&qs.p, &g, 1.0);
        assert_eq!(n_j, qs.n_j);
        assert_eq!(total_firing_rate(&n_j, &g), qs.n_bar);
    }

    #[test]
    fn distance_examples() {
        let (g, _) = setup();
        let p = Array2::from_elem((61, 121), 0.3);
        assert_eq!(ap_distance(&p, &p, &g), 0.0);
        let zero = Array2::zeros((61, 121));
        let m = crate::model::mass(&p, &g);
        assert!((ap_distance(&p, &zero, &g) - m).abs() < 1e-12 * m);
    }
}
