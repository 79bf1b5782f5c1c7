//! Pass/fail judgements over campaign results.

use serde::Serialize;

use crate::experiments::ap::ApCurve;
use crate::experiments::excitatory::{Classification, ScenarioReport};
use crate::experiments::learning::RecognitionMatrix;
use crate::experiments::orders::{Direction, OrderStudy};

/// Accepted range of the estimated orders at the short horizon.
pub fn order_band(direction: Direction) -> (f64, f64) {
    match direction {
        Direction::V => (1.8, 2.2),
        Direction::W => (0.85, 1.1),
        Direction::T => (0.9, 1.1),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderVerdict {
    pub direction: Direction,
    pub band: (f64, f64),
    pub l1_orders: Vec<f64>,
    pub pass: bool,
}

pub fn order_verdict(study: &OrderStudy) -> OrderVerdict {
    let band = order_band(study.direction);
    let l1_orders = study.l1_orders();
    let pass = !l1_orders.is_empty() && l1_orders.iter().all(|o| (band.0..=band.1).contains(o));
    OrderVerdict {
        direction: study.direction,
        band,
        l1_orders,
        pass,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApVerdict {
    pub dt: f64,
    pub fi_final: Vec<(f64, f64)>,
    pub si_final: Vec<(f64, f64)>,
    /// FI terminal distances strictly decrease with `ε`.
    pub fi_decreasing: bool,
    /// SI distances at `ε = 1e-6` and `1e-7`, larger over smaller.
    pub si_plateau_ratio: f64,
    pub si_plateau: bool,
    /// Smallest SI/FI ratio at `ε = 1e-6` and `1e-7`.
    pub si_over_fi: f64,
    pub si_above_fi: bool,
    /// SI/FI ratio at `ε = 1e-1` (expected within a factor 3 either way).
    pub large_epsilon_ratio: f64,
    pub pass: bool,
}

fn finals(curves: &[ApCurve]) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = curves.iter().map(|c| (c.epsilon, c.final_distance())).collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

fn at(list: &[(f64, f64)], eps: f64) -> f64 {
    list.iter()
        .find(|(e, _)| ((e - eps) / eps).abs() < 1e-9)
        .map_or(f64::NAN, |p| p.1)
}

/// Judges FI and SI sweeps run with the same time step.
pub fn ap_verdict(fi: &[ApCurve], si: &[ApCurve]) -> ApVerdict {
    let dt = fi.first().or(si.first()).map_or(f64::NAN, |c| c.dt);
    let fi_final = finals(fi);
    let si_final = finals(si);
    let fi_decreasing = fi_final.len() >= 2 && fi_final.windows(2).all(|w| w[1].1 < w[0].1);
    let (s6, s7) = (at(&si_final, 1e-6), at(&si_final, 1e-7));
    let (f6, f7) = (at(&fi_final, 1e-6), at(&fi_final, 1e-7));
    let si_plateau_ratio = s6.max(s7) / s6.min(s7);
    let si_over_fi = (s6 / f6).min(s7 / f7);
    let large_epsilon_ratio = at(&si_final, 1e-1) / at(&fi_final, 1e-1);
    let si_plateau = si_plateau_ratio <= 2.0;
    let si_above_fi = si_over_fi >= 10.0;
    ApVerdict {
        dt,
        fi_final,
        si_final,
        fi_decreasing,
        si_plateau_ratio,
        si_plateau,
        si_over_fi,
        si_above_fi,
        large_epsilon_ratio,
        pass: fi_decreasing && si_plateau && si_above_fi,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecognitionVerdict {
    /// R² of each diagonal cell, by learn index.
    pub diagonal_r2: Vec<(usize, f64)>,
    /// Largest drop from the diagonal R² among off-diagonal cells of each row.
    pub row_margin: Vec<(usize, Option<f64>)>,
    pub all_nonnegative: bool,
    pub diagonal_ok: bool,
    pub off_diagonal_ok: bool,
}

impl RecognitionVerdict {
    /// The diagonal gate alone (enough when only the diagonal was computed).
    pub fn diagonal_pass(&self) -> bool {
        self.diagonal_ok && self.all_nonnegative
    }

    pub fn pass(&self) -> bool {
        self.diagonal_pass() && self.off_diagonal_ok
    }
}

pub const DIAGONAL_R2: f64 = 0.95;
pub const OFF_DIAGONAL_MARGIN: f64 = 0.1;

pub fn recognition_verdict(matrix: &RecognitionMatrix) -> RecognitionVerdict {
    let mut diagonal_r2 = Vec::new();
    let mut row_margin = Vec::new();
    for &i in &matrix.indices {
        let Some(diag) = matrix.get(i, i) else { continue };
        let r2 = diag.diagnostics.r_squared();
        diagonal_r2.push((i, r2));
        let margin = matrix
            .cells
            .iter()
            .filter(|c| c.learn_index == i && c.test_index != i)
            .map(|c| r2 - c.diagnostics.r_squared())
            .reduce(f64::max);
        row_margin.push((i, margin));
    }
    let all_nonnegative = matrix.cells.iter().all(|c| c.n_star.iter().all(|&x| x >= 0.0));
    let diagonal_ok = !diagonal_r2.is_empty()
        && diagonal_r2.iter().all(|&(i, r2)| {
            r2 >= DIAGONAL_R2
                && matrix
                    .get(i, i)
                    .is_some_and(|c| c.diagnostics.is_triangular(DIAGONAL_R2))
        });
    let off_diagonal_ok = !row_margin.is_empty()
        && row_margin
            .iter()
            .all(|(_, m)| m.is_some_and(|m| m >= OFF_DIAGONAL_MARGIN));
    RecognitionVerdict {
        diagonal_r2,
        row_margin,
        all_nonnegative,
        diagonal_ok,
        off_diagonal_ok,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcitatoryVerdict {
    pub steady: Classification,
    pub steady_triangular: bool,
    pub unsteady: Classification,
    pub unsteady_n_bar_increasing: bool,
    pub pass: bool,
}

pub fn excitatory_verdict(steady: &ScenarioReport, unsteady: &ScenarioReport) -> ExcitatoryVerdict {
    let steady_triangular = steady
        .triangle
        .is_triangular(crate::experiments::excitatory::TRIANGLE_R2)
        && steady.triangle.support.is_some_and(|(lo, _)| lo >= -1e-12);
    let steady_ok = steady.classification == Classification::Converged && steady_triangular;
    let unsteady_ok = unsteady.classification == Classification::Expanding && unsteady.expansion.n_bar_increasing;
    ExcitatoryVerdict {
        steady: steady.classification,
        steady_triangular,
        unsteady: unsteady.classification,
        unsteady_n_bar_increasing: unsteady.expansion.n_bar_increasing,
        pass: steady_ok && unsteady_ok,
    }
}
