//! Explicit weight-direction convection with Godunov-type face fluxes.

use ndarray::{Array1, Array2};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::model::{GridSpec, ScalarFn};

/// Threshold (relative to `max p`) below which a negative `p*` entry is roundoff.
pub const NEGATIVITY_TOL: f64 = 1e-13;

/// Marginal mass at a weight boundary above which the truncation is flagged.
pub const BOUNDARY_SUPPORT_TOL: f64 = 1e-8;

/// Learning velocities `c_j = N̄ N_j K(w_j) - w_j`.
pub fn velocities(n_j: &Array1<f64>, n_bar: f64, learning: &ScalarFn, grid: &GridSpec) -> Array1<f64> {
    Array1::from_shape_fn(grid.n_w + 1, |j| {
        let w = grid.w(j);
        n_bar * n_j[j] * learning.eval(w) - w
    })
}

/// Face flux between two neighbouring nodes: the smaller point flux when the
/// density does not decrease across the face, the larger one otherwise.
#[inline]
pub fn godunov_flux(p_left: f64, p_right: f64, phi_left: f64, phi_right: f64) -> f64 {
    if p_left <= p_right {
        phi_left.min(phi_right)
    } else {
        phi_left.max(phi_right)
    }
}

/// Donor-cell flux `c_j⁺ p_j + c_{j+1}⁻ p_{j+1}`.
#[inline]
pub fn upwind_flux(p_left: f64, p_right: f64, c_left: f64, c_right: f64) -> f64 {
    c_left.max(0.0) * p_left + c_right.min(0.0) * p_right
}

/// Rule that turns the two neighbouring point fluxes into a face flux.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FluxSelector {
    /// Min/max of the point fluxes keyed on the density comparison.
    #[default]
    Godunov,
    /// Donor cell on the sign of each node velocity.
    Upwind,
}

/// Face fluxes `Φ_{i,j+1/2}` for faces `j = -1 ..= n_w`, stored at column `j + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WFluxField {
    pub faces: Array2<f64>,
    pub velocity: Array1<f64>,
}

impl WFluxField {
    pub fn build(p: &Array2<f64>, velocity: Array1<f64>) -> Self {
        Self::build_with(p, velocity, FluxSelector::Godunov)
    }

    pub fn build_with(p: &Array2<f64>, velocity: Array1<f64>, selector: FluxSelector) -> Self {
        let (rows, cols) = p.dim();
        let mut faces = Array2::zeros((rows, cols + 1));
        for i in 0..rows {
            for j in 0..cols - 1 {
                let (pl, pr) = (p[[i, j]], p[[i, j + 1]]);
                let (cl, cr) = (velocity[j], velocity[j + 1]);
                faces[[i, j + 1]] = match selector {
                    FluxSelector::Godunov => godunov_flux(pl, pr, cl * pl, cr * pr),
                    FluxSelector::Upwind => upwind_flux(pl, pr, cl, cr),
                };
            }
        }
        Self { faces, velocity }
    }

    /// `Φ_{i,j+1/2}` with `j` in `-1 ..= n_w`.
    #[inline]
    pub fn face(&self, i: usize, j: isize) -> f64 {
        self.faces[[i, (j + 1) as usize]]
    }
}

/// `p* = p - (Δt/Δw)(Φ_{j+1/2} - Φ_{j-1/2})`.
pub fn convection_step(p: &Array2<f64>, flux: &WFluxField, grid: &GridSpec) -> Array2<f64> {
    let ratio = grid.dt / grid.dw;
    let mut out = p.clone();
    let (rows, cols) = p.dim();
    for i in 0..rows {
        for j in 0..cols {
            out[[i, j]] -= ratio * (flux.faces[[i, j + 1]] - flux.faces[[i, j]]);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum PositivityPolicy {
    #[default]
    Abort,
    Warn,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub min_value: f64,
    pub min_at: (usize, usize),
    /// `(Δt/Δw) max_j |c_j|`
    pub courant: f64,
    pub violated: bool,
}

/// Checks `p* >= 0` up to roundoff. Under [`PositivityPolicy::Abort`] a
/// violation is an error; under `Warn` it is only reported.
pub fn positivity_check(
    p_star: &Array2<f64>,
    velocity: &Array1<f64>,
    grid: &GridSpec,
    policy: PositivityPolicy,
    step: usize,
) -> Result<PositivityReport> {
    let mut min_value = f64::INFINITY;
    let mut min_at = (0, 0);
    let mut max_value: f64 = 0.0;
    for ((i, j), &x) in p_star.indexed_iter() {
        if x < min_value {
            min_value = x;
            min_at = (i, j);
        }
        max_value = max_value.max(x);
    }
    let courant = grid.dt / grid.dw * velocity.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let violated = min_value < -NEGATIVITY_TOL * max_value;
    if violated && policy == PositivityPolicy::Abort {
        return Err(SolverError::CflViolation {
            step,
            i: min_at.0,
            j: min_at.1,
            value: min_value,
        });
    }
    Ok(PositivityReport {
        min_value,
        min_at,
        courant,
        violated,
    })
}

/// True when the weight marginal at either boundary node exceeds the tolerance.
pub fn support_near_boundary(h_j: &Array1<f64>) -> bool {
    let n = h_j.len();
    h_j[0] > BOUNDARY_SUPPORT_TOL || h_j[n - 1] > BOUNDARY_SUPPORT_TOL
}
