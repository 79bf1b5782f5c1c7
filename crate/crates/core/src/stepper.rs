//! One time step of the semi-implicit (SI) and fully-implicit (FI) schemes:
//! explicit weight convection followed by an implicit voltage solve per
//! weight column, with the reset shift always taken at the new time level.

use std::time::Instant;

use ndarray::{Array1, Array2};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::maxwellian::{assemble_matrix, build_column, solve_shifted, DEFAULT_EXPONENT_GUARD};
use crate::model::density::{firing_rates, total_firing_rate};
use crate::model::{mass, support_edges, CoefficientFns, DensityState, GridSpec};
use crate::transport_w::{
    convection_step, positivity_check, support_near_boundary, velocities, FluxSelector, PositivityPolicy,
    PositivityReport, WFluxField,
};

pub const DEFAULT_FIXPOINT_TOL: f64 = 1e-12;
pub const DEFAULT_FIXPOINT_MAX_ITER: usize = 100;

/// Relative firing-rate threshold used for support edges in trajectories.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchemeVariant {
    /// Maxwellian built from `N̄^m`.
    Si,
    /// Maxwellian built from `N̄^{m+1}` by fixed-point iteration on `N̄`.
    Fi {
        #[serde(default = "default_tol")]
        tol: f64,
        #[serde(default = "default_max_iter")]
        max_iter: usize,
    },
}

fn default_tol() -> f64 {
    DEFAULT_FIXPOINT_TOL
}

fn default_max_iter() -> usize {
    DEFAULT_FIXPOINT_MAX_ITER
}

impl SchemeVariant {
    pub fn fi() -> Self {
        SchemeVariant::Fi {
            tol: DEFAULT_FIXPOINT_TOL,
            max_iter: DEFAULT_FIXPOINT_MAX_ITER,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SchemeVariant::Si => "si",
            SchemeVariant::Fi { .. } => "fi",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchemeOptions {
    pub variant: SchemeVariant,
    pub positivity: PositivityPolicy,
    pub exponent_guard: f64,
    pub flux: FluxSelector,
}

impl SchemeOptions {
    pub fn new(variant: SchemeVariant) -> Self {
        Self {
            variant,
            positivity: PositivityPolicy::Abort,
            exponent_guard: DEFAULT_EXPONENT_GUARD,
            flux: FluxSelector::Godunov,
        }
    }
}

impl Default for SchemeOptions {
    fn default() -> Self {
        Self::new(SchemeVariant::Si)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepReport {
    /// Index of the new time level.
    pub step: usize,
    pub mass_before: f64,
    pub mass_after: f64,
    pub min_density: f64,
    pub n_bar_before: f64,
    pub n_bar_after: f64,
    /// Number of column-solve rounds (always 1 for SI).
    pub fi_iterations: usize,
    pub fi_residual: f64,
    pub fi_converged: bool,
    pub courant: f64,
    pub positivity_violated: bool,
    pub boundary_support: bool,
    pub wall_time_s: f64,
}

impl StepReport {
    pub fn relative_mass_drift(&self) -> f64 {
        if self.mass_before == 0.0 {
            self.mass_after.abs()
        } else {
            ((self.mass_after - self.mass_before) / self.mass_before).abs()
        }
    }
}

/// Implicit voltage stage: for every column `j` solves
/// `(εI + (aΔt/Δv^2) M_j^{N̄}) p_{:,j} = ε p*_{:,j}`.
pub fn implicit_v_solve(
    p_star: &Array2<f64>,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    n_bar: f64,
    guard: f64,
) -> Result<Array2<f64>> {
    let n_v = grid.n_v;
    let lambda = grid.implicit_scale(coeffs.a);
    let eps = coeffs.epsilon;
    let columns: Vec<Vec<f64>> = (0..=grid.n_w)
        .into_par_iter()
        .map(|j| -> Result<Vec<f64>> {
            let rhs: Vec<f64> = (0..n_v).map(|i| eps * p_star[[i, j]]).collect();
            if rhs.iter().all(|&x| x == 0.0) {
                return Ok(vec![0.0; n_v]);
            }
            let column = build_column(grid, coeffs, j, n_bar, guard)?;
            let matrix = assemble_matrix(&column, eps, lambda);
            solve_shifted(&matrix, &rhs)
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

/// Explicit weight-convection stage with the positivity diagnostic.
pub fn convect(
    state: &DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
) -> Result<(Array2<f64>, PositivityReport)> {
    let c = velocities(&state.obs.n_j, state.obs.n_bar, &coeffs.learning, grid);
    let flux = WFluxField::build_with(&state.p, c, options.flux);
    let p_star = convection_step(&state.p, &flux, grid);
    let report = positivity_check(&p_star, &flux.velocity, grid, options.positivity, state.step + 1)?;
    Ok((p_star, report))
}

fn finish(
    state: &DensityState,
    p_next: Array2<f64>,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    fi: (usize, f64, bool),
    positivity: PositivityReport,
    started: Instant,
) -> (DensityState, StepReport) {
    let next = DensityState::new(p_next, state.step + 1, grid, coeffs.a);
    let report = StepReport {
        step: next.step,
        mass_before: state.mass(grid),
        mass_after: next.mass(grid),
        min_density: next.min_density(),
        n_bar_before: state.obs.n_bar,
        n_bar_after: next.obs.n_bar,
        fi_iterations: fi.0,
        fi_residual: fi.1,
        fi_converged: fi.2,
        courant: positivity.courant,
        positivity_violated: positivity.violated,
        boundary_support: support_near_boundary(&next.obs.h_j),
        wall_time_s: started.elapsed().as_secs_f64(),
    };
    (next, report)
}

/// Semi-implicit step: Maxwellian from `N̄^m`, reset shift at `m + 1`.
pub fn step_si(
    state: &DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
) -> Result<(DensityState, StepReport)> {
    let started = Instant::now();
    let (p_star, positivity) = convect(state, grid, coeffs, options)?;
    let p_next = implicit_v_solve(&p_star, grid, coeffs, state.obs.n_bar, options.exponent_guard)?;
    Ok(finish(state, p_next, grid, coeffs, (1, 0.0, true), positivity, started))
}

/// Fully-implicit step: iterates `N̄^{(k)}` from `N̄^m` until
/// `|N̄^{(k+1)} - N̄^{(k)}| <= tol`. Hitting `max_iter` is reported, not fatal;
/// the last iterate is kept.
pub fn step_fi(
    state: &DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
    tol: f64,
    max_iter: usize,
) -> Result<(DensityState, StepReport)> {
    let started = Instant::now();
    let (p_star, positivity) = convect(state, grid, coeffs, options)?;
    let guard = options.exponent_guard;

    let mut n_bar = state.obs.n_bar;
    let mut p_next = implicit_v_solve(&p_star, grid, coeffs, n_bar, guard)?;
    let mut iterations = 1;
    if coeffs.firing.is_constant() {
        // The operator does not depend on N̄: one solve is the fixed point.
        return Ok(finish(state, p_next, grid, coeffs, (1, 0.0, true), positivity, started));
    }
    let mut next_n_bar = total_firing_rate(&firing_rates(&p_next, grid, coeffs.a), grid);
    let mut residual = (next_n_bar - n_bar).abs();
    while residual > tol && iterations < max_iter {
        n_bar = next_n_bar;
        p_next = implicit_v_solve(&p_star, grid, coeffs, n_bar, guard)?;
        iterations += 1;
        next_n_bar = total_firing_rate(&firing_rates(&p_next, grid, coeffs.a), grid);
        residual = (next_n_bar - n_bar).abs();
    }
    let converged = residual <= tol;
    Ok(finish(
        state,
        p_next,
        grid,
        coeffs,
        (iterations, residual, converged),
        positivity,
        started,
    ))
}

/// Advances one step with the configured variant.
pub fn step(
    state: &DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
) -> Result<(DensityState, StepReport)> {
    match options.variant {
        SchemeVariant::Si => step_si(state, grid, coeffs, options),
        SchemeVariant::Fi { tol, max_iter } => step_fi(state, grid, coeffs, options, tol, max_iter),
    }
}

/// One row of the time series.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRow {
    pub step: usize,
    pub t: f64,
    #[serde(rename = "Nbar")]
    pub n_bar: f64,
    pub mass: f64,
    pub min_p: f64,
    pub w_support_left: Option<f64>,
    pub w_support_right: Option<f64>,
}

impl TrajectoryRow {
    pub fn of(state: &DensityState, grid: &GridSpec) -> Self {
        let edges = support_edges(&state.obs.n_j, grid, SUPPORT_THRESHOLD);
        Self {
            step: state.step,
            t: state.time(grid),
            n_bar: state.obs.n_bar,
            mass: mass(&state.p, grid),
            min_p: state.min_density(),
            w_support_left: edges.map(|e| e.0),
            w_support_right: edges.map(|e| e.1),
        }
    }
}

/// Full-grid snapshot with its marginals.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub p: Array2<f64>,
    pub n_j: Array1<f64>,
    pub h_j: Array1<f64>,
}

impl Snapshot {
    pub fn of(state: &DensityState, grid: &GridSpec) -> Self {
        Self {
            step: state.step,
            t: state.time(grid),
            p: state.p.clone(),
            n_j: state.obs.n_j.clone(),
            h_j: state.obs.h_j.clone(),
        }
    }
}

/// What a run records besides the final state.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputSpec {
    /// Record a trajectory row every `stride` steps (and always the last one).
    pub stride: usize,
    /// Snapshot times; each maps to the nearest time level.
    pub snapshot_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub steps: usize,
    pub max_relative_mass_drift: f64,
    pub min_density: f64,
    pub fi_max_iterations: usize,
    pub fi_nonconverged_steps: usize,
    pub positivity_warnings: usize,
    pub boundary_support_steps: usize,
    pub max_courant: f64,
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub trajectory: Vec<TrajectoryRow>,
    pub snapshots: Vec<Snapshot>,
    pub summary: RunSummary,
    pub final_state: DensityState,
}

/// Executes `grid.n_t` steps from `initial`, calling `observe` after every
/// completed step (and once for the initial state).
pub fn run_with<F>(
    initial: DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
    output: &OutputSpec,
    mut observe: F,
) -> Result<RunOutput>
where
    F: FnMut(&DensityState, Option<&StepReport>) -> Result<()>,
{
    let stride = output.stride.max(1);
    let snapshot_steps: Vec<usize> = output
        .snapshot_times
        .iter()
        .map(|&t| {
            if grid.dt > 0.0 {
                ((t / grid.dt).round().max(0.0) as usize).min(grid.n_t)
            } else {
                0
            }
        })
        .collect();

    let mut summary = RunSummary {
        steps: 0,
        max_relative_mass_drift: 0.0,
        min_density: initial.min_density(),
        fi_max_iterations: 0,
        fi_nonconverged_steps: 0,
        positivity_warnings: 0,
        boundary_support_steps: 0,
        max_courant: 0.0,
    };
    let mut trajectory = vec![TrajectoryRow::of(&initial, grid)];
    let mut snapshots: Vec<Snapshot> = Vec::new();
    if snapshot_steps.contains(&0) {
        snapshots.push(Snapshot::of(&initial, grid));
    }
    observe(&initial, None)?;

    let mut state = initial;
    for _ in 0..grid.n_t {
        let (next, report) = step(&state, grid, coeffs, options)?;
        summary.steps += 1;
        summary.max_relative_mass_drift = summary.max_relative_mass_drift.max(report.relative_mass_drift());
        summary.min_density = summary.min_density.min(report.min_density);
        summary.fi_max_iterations = summary.fi_max_iterations.max(report.fi_iterations);
        summary.fi_nonconverged_steps += usize::from(!report.fi_converged);
        summary.positivity_warnings += usize::from(report.positivity_violated);
        summary.boundary_support_steps += usize::from(report.boundary_support);
        summary.max_courant = summary.max_courant.max(report.courant);
        observe(&next, Some(&report))?;
        if next.step % stride == 0 || next.step == grid.n_t {
            trajectory.push(TrajectoryRow::of(&next, grid));
        }
        if snapshot_steps.contains(&next.step) {
            snapshots.push(Snapshot::of(&next, grid));
        }
        state = next;
    }
    Ok(RunOutput {
        trajectory,
        snapshots,
        summary,
        final_state: state,
    })
}

pub fn run(
    initial: DensityState,
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    options: &SchemeOptions,
    output: &OutputSpec,
) -> Result<RunOutput> {
    run_with(initial, grid, coeffs, options, output, |_, _| Ok(()))
}
