//! Excitatory networks: a bounded firing transfer that settles and a steeper
//! one whose weight support keeps spreading.

use ndarray::Array1;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::experiments::learning::{triangularity, Orientation, Triangularity, DRIFT_LAG};
use crate::experiments::presets::{self, Problem};
use crate::model::{support_edges, DensityState, ScalarFn};
use crate::stepper::{run_with, OutputSpec, SchemeOptions, TrajectoryRow, SUPPORT_THRESHOLD};

/// `‖H(T) - H(T - 10Δt)‖₁` below which the weight marginal counts as settled.
pub const H_DRIFT_TOL: f64 = 1e-3;
/// `|N̄(T) - N̄(T - 10Δt)|` below which the total rate counts as settled.
pub const N_BAR_DRIFT_TOL: f64 = 1e-3;
/// R² required for a triangular firing pattern.
pub const TRIANGLE_R2: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Classification {
    Converged,
    Expanding,
    Undetermined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Warning {
    SupportReachesBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    Steady,
    Unsteady,
}

impl Scenario {
    pub fn label(self) -> &'static str {
        match self {
            Scenario::Steady => "steady",
            Scenario::Unsteady => "unsteady",
        }
    }

    pub fn gain(self) -> f64 {
        match self {
            Scenario::Steady => 1.0,
            Scenario::Unsteady => 3.0,
        }
    }
}

/// Growth of the right support edge over the final third of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub nondecreasing: bool,
    /// Mean edge advance per recorded row over the first and second halves
    /// of the final third.
    pub early_advance: f64,
    pub late_advance: f64,
    pub n_bar_increasing: bool,
}

impl Expansion {
    pub fn accelerating(&self) -> bool {
        self.nondecreasing && self.late_advance > self.early_advance && self.late_advance > 0.0
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    pub classification: Classification,
    pub warnings: Vec<Warning>,
    pub h_drift: f64,
    pub n_bar_drift: f64,
    pub final_n_bar: f64,
    pub triangle: Triangularity,
    pub expansion: Expansion,
    #[serde(skip)]
    pub trajectory: Vec<TrajectoryRow>,
    #[serde(skip)]
    pub final_state: DensityState,
}

/// Classifies a completed trajectory. Every row of `trajectory` must be one
/// time step apart for the final-third window to be meaningful.
pub fn expansion(trajectory: &[TrajectoryRow]) -> Expansion {
    let n = trajectory.len();
    let window = &trajectory[n - n.div_ceil(3).max(1)..];
    let edges: Vec<f64> = window
        .iter()
        .map(|r| r.w_support_right.unwrap_or(f64::NEG_INFINITY))
        .collect();
    let nondecreasing = edges.windows(2).all(|e| e[1] >= e[0]);
    let last = edges.len() - 1;
    let mid = last / 2;
    let rate = |a: usize, b: usize| {
        if b > a && edges[a].is_finite() && edges[b].is_finite() {
            (edges[b] - edges[a]) / (b - a) as f64
        } else {
            0.0
        }
    };
    let early_advance = rate(0, mid);
    let late_advance = rate(mid, last);
    let n_bar_increasing = window.windows(2).all(|r| r[1].n_bar > r[0].n_bar);
    Expansion {
        nondecreasing,
        early_advance,
        late_advance,
        n_bar_increasing,
    }
}

/// Runs an excitatory problem and classifies its long-time behaviour.
pub fn classify_run(problem: &Problem) -> Result<ScenarioReport> {
    let grid = &problem.grid;
    let initial = DensityState::initial(&problem.initial, grid, problem.coeffs.a)?;
    let lag_step = grid.n_t.saturating_sub(DRIFT_LAG);
    let mut lagged: Option<(Array1<f64>, f64)> = None;
    let output = OutputSpec {
        stride: 1,
        snapshot_times: Vec::new(),
    };
    let out = run_with(
        initial,
        grid,
        &problem.coeffs,
        &SchemeOptions::new(problem.variant),
        &output,
        |s, _| {
            if s.step == lag_step {
                lagged = Some((s.obs.h_j.clone(), s.obs.n_bar));
            }
            Ok(())
        },
    )?;
    let fin = out.final_state;
    let (h_lag, n_bar_lag) = lagged.unwrap_or_else(|| (fin.obs.h_j.clone(), fin.obs.n_bar));
    let h_drift = grid.dw
        * fin
            .obs
            .h_j
            .iter()
            .zip(h_lag.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>();
    let n_bar_drift = (fin.obs.n_bar - n_bar_lag).abs();
    let triangle = triangularity(&fin.obs.n_j, grid, Orientation::Excitatory);
    let expansion = expansion(&out.trajectory);

    let mut warnings = Vec::new();
    let touches =
        support_edges(&fin.obs.n_j, grid, SUPPORT_THRESHOLD).is_some_and(|(_, hi)| hi >= grid.w_max - 0.5 * grid.dw);
    if out.summary.boundary_support_steps > 0 || touches {
        warnings.push(Warning::SupportReachesBoundary);
    }

    let settled = h_drift <= H_DRIFT_TOL && n_bar_drift <= N_BAR_DRIFT_TOL;
    let classification = if settled && (triangle.support.is_none() || triangle.is_triangular(TRIANGLE_R2)) {
        Classification::Converged
    } else if expansion.accelerating() {
        Classification::Expanding
    } else {
        Classification::Undetermined
    };

    Ok(ScenarioReport {
        classification,
        warnings,
        h_drift,
        n_bar_drift,
        final_n_bar: fin.obs.n_bar,
        triangle,
        expansion,
        trajectory: out.trajectory,
        final_state: fin,
    })
}

pub fn excitatory_scenario(scenario: Scenario, t_max: f64) -> Result<ScenarioReport> {
    classify_run(&presets::excitatory(scenario.gain(), t_max))
}

/// The same network with the firing transfer switched off.
pub fn decoupled(t_max: f64) -> Result<ScenarioReport> {
    let mut problem = presets::excitatory(1.0, t_max);
    problem.coeffs.firing = ScalarFn::Constant { value: 0.0 };
    classify_run(&problem)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(step: usize, edge: f64, n_bar: f64) -> TrajectoryRow {
        TrajectoryRow {
            step,
            t: step as f64,
            n_bar,
            mass: 1.0,
            min_p: 0.0,
            w_support_left: Some(0.0),
            w_support_right: Some(edge),
        }
    }

    #[test]
    fn accelerating_edge() {
        let rows: Vec<_> = (0..30).map(|k| row(k, 0.01 * (k * k) as f64, k as f64)).collect();
        let e = expansion(&rows);
        assert!(e.accelerating() && e.n_bar_increasing);
    }

    #[test]
    fn stalled_edge() {
        let rows: Vec<_> = (0..30).map(|k| row(k, 1.0, 0.5)).collect();
        let e = expansion(&rows);
        assert!(e.nondecreasing && !e.accelerating() && !e.n_bar_increasing);
    }

    #[test]
    fn receding_edge() {
        let rows: Vec<_> = (0..30).map(|k| row(k, 3.0 - 0.01 * k as f64, 1.0)).collect();
        assert!(!expansion(&rows).nondecreasing);
    }
}
