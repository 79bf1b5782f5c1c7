//! Grid-refinement order estimates along one discretization direction.

use ndarray::Array2;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};
use crate::experiments::presets;
use crate::model::{DensityState, GridSpec};
use crate::stepper::{run, OutputSpec, SchemeOptions};
use crate::transport_w::FluxSelector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    V,
    W,
    T,
}

impl Direction {
    pub const ALL: [Direction; 3] = [Direction::V, Direction::W, Direction::T];

    pub fn label(self) -> &'static str {
        match self {
            Direction::V => "v",
            Direction::W => "w",
            Direction::T => "t",
        }
    }

    /// Coarsest step of the refinement ladder used in the tables.
    pub fn coarsest_step(self) -> f64 {
        match self {
            Direction::V => 0.2,
            Direction::W => 0.04,
            Direction::T => 2e-3,
        }
    }

    /// `(Δv, Δw, Δt)` with the varied step set to `h`.
    pub fn steps(self, h: f64) -> (f64, f64, f64) {
        match self {
            Direction::V => (h, 1e-2, 1e-3),
            Direction::W => (0.1, h, 1e-3),
            Direction::T => (0.1, 1e-2, h),
        }
    }
}

/// One row of an order table: the step `h`, the differences between the
/// solutions at `h` and `h/2`, and the orders (absent on the last row).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderRow {
    pub h: f64,
    pub l1_diff: f64,
    pub l2_diff: f64,
    pub l1_order: Option<f64>,
    pub l2_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderStudy {
    pub direction: Direction,
    pub flux: FluxSelector,
    pub t_max: f64,
    pub steps: Vec<f64>,
    pub rows: Vec<OrderRow>,
}

impl OrderStudy {
    pub fn l1_orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.l1_order).collect()
    }

    pub fn l2_orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.l2_order).collect()
    }

    pub fn all_finite(&self) -> bool {
        self.rows
            .iter()
            .flat_map(|r| [r.l1_order, r.l2_order])
            .flatten()
            .all(f64::is_finite)
    }
}

/// Samples a fine-grid density at the nodes of a grid coarser by `(fv, fw)`.
pub fn restrict(p: &Array2<f64>, fv: usize, fw: usize, coarse: &GridSpec) -> Array2<f64> {
    Array2::from_shape_fn((coarse.n_v + 1, coarse.n_w + 1), |(i, j)| p[[i * fv, j * fw]])
}

/// `(Δv Δw Σ|a-b|, (Δv Δw Σ|a-b|²)^{1/2})` on `grid`.
pub fn grid_norms(a: &Array2<f64>, b: &Array2<f64>, grid: &GridSpec) -> (f64, f64) {
    let cell = grid.dv * grid.dw;
    let (l1, l2) = a.iter().zip(b.iter()).fold((0.0, 0.0), |(s1, s2), (x, y)| {
        let d = (x - y).abs();
        (s1 + d, s2 + d * d)
    });
    (cell * l1, (cell * l2).sqrt())
}

/// Final density of the convergence problem on the given steps.
pub fn solve_level(t_max: f64, steps: (f64, f64, f64), flux: FluxSelector) -> Result<(GridSpec, Array2<f64>)> {
    let pb = presets::convergence(t_max, steps.0, steps.1, steps.2);
    let initial = DensityState::initial(&pb.initial, &pb.grid, pb.coeffs.a)?;
    let options = SchemeOptions {
        flux,
        ..SchemeOptions::new(pb.variant)
    };
    let out = run(initial, &pb.grid, &pb.coeffs, &options, &OutputSpec::default())?;
    Ok((pb.grid, out.final_state.p))
}

/// Runs `levels` nested resolutions halving the step along `direction` and
/// forms the order table. Levels run in parallel.
pub fn order_study(direction: Direction, t_max: f64, levels: usize, flux: FluxSelector) -> Result<OrderStudy> {
    if levels < 3 {
        return Err(SolverError::DegenerateDomain(format!(
            "an order study needs at least 3 levels, got {levels}"
        )));
    }
    let h0 = direction.coarsest_step();
    let steps: Vec<f64> = (0..levels).map(|k| h0 / f64::from(1u32 << k)).collect();
    let solutions: Vec<(GridSpec, Array2<f64>)> = steps
        .par_iter()
        .map(|&h| solve_level(t_max, direction.steps(h), flux))
        .collect::<Result<_>>()?;

    let diffs: Vec<(f64, f64)> = solutions
        .windows(2)
        .map(|pair| {
            let (coarse, pc) = &pair[0];
            let (_, pf) = &pair[1];
            let fine = match direction {
                Direction::V => restrict(pf, 2, 1, coarse),
                Direction::W => restrict(pf, 1, 2, coarse),
                Direction::T => pf.clone(),
            };
            grid_norms(pc, &fine, coarse)
        })
        .collect();

    let rows = diffs
        .iter()
        .enumerate()
        .map(|(k, &(l1, l2))| {
            let next = diffs.get(k + 1);
            OrderRow {
                h: steps[k],
                l1_diff: l1,
                l2_diff: l2,
                l1_order: next.map(|n| (l1 / n.0).log2()),
                l2_order: next.map(|n| (l2 / n.1).log2()),
            }
        })
        .collect();

    Ok(OrderStudy {
        direction,
        flux,
        t_max,
        steps,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DomainBounds;

    #[test]
    fn restriction_samples_coincident_nodes() {
        let coarse = GridSpec::new(DomainBounds::voltage_standard(-1.1, 0.1, 0.0), 30, 12, 0).unwrap();
        let fine = Array2::from_shape_fn((61, 25), |(i, j)| (100 * i + j) as f64);
        let r = restrict(&fine, 2, 2, &coarse);
        assert_eq!(r.dim(), (31, 13));
        assert_eq!(r[[3, 5]], 610.0);
        assert_eq!(r[[30, 12]], 6024.0);
    }

    #[test]
    fn norms_of_constant_difference() {
        let g = GridSpec::new(DomainBounds::voltage_standard(-1.1, 0.1, 0.0), 30, 12, 0).unwrap();
        let a = Array2::from_elem((31, 13), 1.5);
        let b = Array2::from_elem((31, 13), 1.0);
        let (l1, l2) = grid_norms(&a, &b, &g);
        let area = 31.0 * 13.0 * g.dv * g.dw;
        assert!((l1 - 0.5 * area).abs() < 1e-12);
        assert!((l2 - (0.25 * area).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn too_few_levels() {
        assert!(order_study(Direction::T, 0.0, 2, FluxSelector::Godunov).is_err());
    }
}
