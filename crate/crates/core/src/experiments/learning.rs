//! Learning then testing: the network learns an input until its weight
//! distribution settles, then reacts to a test input through the
//! quasi-steady response.

use ndarray::Array1;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::experiments::hermite::HermiteInput;
use crate::experiments::presets::{self, Problem};
use crate::model::{support_edges, DensityState, GridSpec, ScalarFn};
use crate::quasisteady::{quasi_steady, QuasiSteadyOptions, QuasiSteadyState};
use crate::stepper::{run_with, OutputSpec, SchemeOptions};

/// Relative threshold for the firing-rate support.
pub const SUPPORT_THRESHOLD: f64 = 1e-6;

/// Number of steps back used for the end-of-run drift `‖H(T) - H(T - kΔt)‖₁`.
pub const DRIFT_LAG: usize = 10;

/// Least-squares line `y = slope x + intercept` with its coefficient of determination.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

pub fn fit_line(xs: &[f64], ys: &[f64]) -> Option<LinearFit> {
    let n = xs.len();
    if n < 3 || ys.len() != n {
        return None;
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
        points: n,
    })
}

/// Which way a triangular firing pattern is expected to grow.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `N ∝ -w` on `[-A, 0)`.
    Inhibitory,
    /// `N ∝ w` on `(0, A]`.
    Excitatory,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Triangularity {
    pub support: Option<(f64, f64)>,
    /// Fit of `N` against `-w` (inhibitory) or `w` (excitatory) on the
    /// interior of the support.
    pub fit: Option<LinearFit>,
    pub min_rate: f64,
}

impl Triangularity {
    pub fn r_squared(&self) -> f64 {
        self.fit.as_ref().map_or(f64::NEG_INFINITY, |f| f.r_squared)
    }

    /// Interior fit explains at least `r2` of the variance with a positive slope.
    pub fn is_triangular(&self, r2: f64) -> bool {
        self.fit.as_ref().is_some_and(|f| f.slope > 0.0 && f.r_squared >= r2)
    }
}

pub fn triangularity(n_j: &Array1<f64>, grid: &GridSpec, orientation: Orientation) -> Triangularity {
    let support = support_edges(n_j, grid, SUPPORT_THRESHOLD);
    let min_rate = n_j.iter().copied().fold(f64::INFINITY, f64::min);
    let fit = support.and_then(|(lo, hi)| {
        let tol = 1e-9 * grid.dw;
        let (xs, ys): (Vec<f64>, Vec<f64>) = (0..=grid.n_w)
            .filter(|&j| grid.w(j) > lo + tol && grid.w(j) < hi - tol)
            .map(|j| {
                let w = grid.w(j);
                let x = match orientation {
                    Orientation::Inhibitory => -w,
                    Orientation::Excitatory => w,
                };
                (x, n_j[j])
            })
            .unzip();
        fit_line(&xs, &ys)
    });
    Triangularity { support, fit, min_rate }
}

/// End of a learning phase.
#[derive(Debug, Clone)]
pub struct Learned {
    pub state: DensityState,
    pub h_lagged: Array1<f64>,
    /// `Δw Σ_j |H_j(T) - H_j(T - 10Δt)|`
    pub drift: f64,
}

/// Runs the learning problem to its final time.
pub fn learn(problem: &Problem) -> Result<Learned> {
    let grid = &problem.grid;
    let initial = DensityState::initial(&problem.initial, grid, problem.coeffs.a)?;
    let lag_step = grid.n_t.saturating_sub(DRIFT_LAG);
    let mut h_lagged = initial.obs.h_j.clone();
    let out = run_with(
        initial,
        grid,
        &problem.coeffs,
        &SchemeOptions::new(problem.variant),
        &OutputSpec::default(),
        |s, _| {
            if s.step == lag_step {
                h_lagged = s.obs.h_j.clone();
            }
            Ok(())
        },
    )?;
    let state = out.final_state;
    let drift = grid.dw
        * state
            .obs
            .h_j
            .iter()
            .zip(h_lagged.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    Ok(Learned { state, h_lagged, drift })
}

/// Quasi-steady reaction of a learned weight distribution to `test_input`.
pub fn respond(learned: &Learned, problem: &Problem, test_input: &ScalarFn) -> Result<QuasiSteadyState> {
    let options = QuasiSteadyOptions {
        input_override: Some(test_input),
        n_bar_initial: learned.state.obs.n_bar,
        ..QuasiSteadyOptions::default()
    };
    quasi_steady(&learned.state.obs.h_j, &problem.grid, &problem.coeffs, &options)
}

#[derive(Debug, Clone, Serialize)]
pub struct RecognitionCell {
    pub learn_index: usize,
    pub test_index: usize,
    pub n_bar: f64,
    pub qs_converged: bool,
    pub qs_iterations: usize,
    pub learning_drift: f64,
    pub diagnostics: Triangularity,
    #[serde(skip)]
    pub n_star: Array1<f64>,
    #[serde(skip)]
    pub h_star: Array1<f64>,
}

/// Learn with input `I`, test with input `J`.
pub fn learning_task(learn_input: HermiteInput, test_input: HermiteInput, t_max: f64) -> Result<RecognitionCell> {
    let problem = presets::learning(learn_input.as_fn(), t_max);
    let learned = learn(&problem)?;
    cell(&problem, &learned, learn_input.index, &test_input)
}

fn cell(problem: &Problem, learned: &Learned, learn_index: usize, test: &HermiteInput) -> Result<RecognitionCell> {
    let qs = respond(learned, problem, &test.as_fn())?;
    let diagnostics = triangularity(&qs.n_j, &problem.grid, Orientation::Inhibitory);
    Ok(RecognitionCell {
        learn_index,
        test_index: test.index,
        n_bar: qs.n_bar,
        qs_converged: qs.converged,
        qs_iterations: qs.iterations,
        learning_drift: learned.drift,
        diagnostics,
        n_star: qs.n_j,
        h_star: learned.state.obs.h_j.clone(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct RecognitionMatrix {
    pub indices: Vec<usize>,
    pub t_max: f64,
    pub grid: GridSpec,
    pub cells: Vec<RecognitionCell>,
}

impl RecognitionMatrix {
    pub fn get(&self, learn: usize, test: usize) -> Option<&RecognitionCell> {
        self.cells
            .iter()
            .find(|c| c.learn_index == learn && c.test_index == test)
    }
}

/// Learns each Hermite input once (in parallel) and tests it against every
/// input in `indices`, or only against itself when `diagonal_only`.
pub fn recognition_matrix(indices: &[usize], t_max: f64, diagonal_only: bool) -> Result<RecognitionMatrix> {
    let learned: Vec<(usize, Problem, Learned)> = indices
        .par_iter()
        .map(|&i| {
            let problem = presets::learning(HermiteInput::inhibitory(i).as_fn(), t_max);
            let l = learn(&problem)?;
            Ok((i, problem, l))
        })
        .collect::<Result<_>>()?;
    let jobs: Vec<(usize, usize)> = learned
        .iter()
        .enumerate()
        .flat_map(|(k, (i, _, _))| {
            indices
                .iter()
                .filter(move |&&j| !diagonal_only || j == *i)
                .map(move |&j| (k, j))
        })
        .collect();
    let cells = jobs
        .par_iter()
        .map(|&(k, j)| {
            let (i, problem, l) = &learned[k];
            cell(problem, l, *i, &HermiteInput::inhibitory(j))
        })
        .collect::<Result<Vec<_>>>()?;
    let grid = learned
        .first()
        .map(|(_, p, _)| p.grid.clone())
        .unwrap_or_else(|| presets::learning(ScalarFn::Constant { value: 0.0 }, t_max).grid);
    Ok(RecognitionMatrix {
        indices: indices.to_vec(),
        t_max,
        grid,
        cells,
    })
}
