//! Grid density `p_{i,j}` with its macroscopic observables.

use ndarray::{Array1, Array2, Axis};
use serde::{Deserialize, Serialize};

use crate::error::{Result, SchemaIssue, SolverError};
use crate::model::grid::GridSpec;

/// Initial-condition catalogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialCondition {
    /// `sin^2(πv) sin^2(πw)` on the open window `v_lo < v < v_hi`,
    /// `w_lo < w < w_hi`, zero elsewhere.
    ProductSineWindow {
        v_lo: f64,
        v_hi: f64,
        w_lo: f64,
        w_hi: f64,
        #[serde(default)]
        normalize: bool,
    },
    /// `amplitude * exp(-(v-v0)^2/(2 sv^2)) * exp(-(w-w0)^2/(2 sw^2))`
    GaussianProduct {
        amplitude: f64,
        v_center: f64,
        v_width: f64,
        w_center: f64,
        w_width: f64,
        #[serde(default)]
        normalize: bool,
    },
    /// Node values, `values[i][j]` for `i = 0..=n_v`, `j = 0..=n_w`.
    Tabulated {
        values: Vec<Vec<f64>>,
        #[serde(default)]
        normalize: bool,
    },
}

impl InitialCondition {
    /// The window used throughout the experiments: `-1 < v < 1`, `-1 < w < 0`.
    pub fn standard_window() -> Self {
        Self::sine_window_on(-1.0, 0.0)
    }

    /// Same sine-squared window with the weight support moved to `(w_lo, w_hi)`.
    pub fn sine_window_on(w_lo: f64, w_hi: f64) -> Self {
        InitialCondition::ProductSineWindow {
            v_lo: -1.0,
            v_hi: 1.0,
            w_lo,
            w_hi,
            normalize: false,
        }
    }

    fn normalize(&self) -> bool {
        match *self {
            InitialCondition::ProductSineWindow { normalize, .. }
            | InitialCondition::GaussianProduct { normalize, .. }
            | InitialCondition::Tabulated { normalize, .. } => normalize,
        }
    }

    pub fn validate(&self, path: &str, issues: &mut Vec<SchemaIssue>) {
        match self {
            InitialCondition::ProductSineWindow {
                v_lo, v_hi, w_lo, w_hi, ..
            } => {
                if !(v_lo < v_hi) {
                    issues.push(SchemaIssue::new(format!("{path}.v_lo"), "need v_lo < v_hi"));
                }
                if !(w_lo < w_hi) {
                    issues.push(SchemaIssue::new(format!("{path}.w_lo"), "need w_lo < w_hi"));
                }
            }
            InitialCondition::GaussianProduct {
                amplitude,
                v_width,
                w_width,
                ..
            } => {
                if !(*amplitude >= 0.0) {
                    issues.push(SchemaIssue::new(format!("{path}.amplitude"), "must be >= 0"));
                }
                if !(*v_width > 0.0) {
                    issues.push(SchemaIssue::new(format!("{path}.v_width"), "must be > 0"));
                }
                if !(*w_width > 0.0) {
                    issues.push(SchemaIssue::new(format!("{path}.w_width"), "must be > 0"));
                }
            }
            InitialCondition::Tabulated { values, .. } => {
                if values.is_empty() {
                    issues.push(SchemaIssue::new(format!("{path}.values"), "must not be empty"));
                }
            }
        }
    }

    /// Samples the initial density at the grid nodes.
    pub fn sample(&self, grid: &GridSpec) -> Result<Array2<f64>> {
        let shape = (grid.n_v + 1, grid.n_w + 1);
        let mut p = match self {
            InitialCondition::ProductSineWindow {
                v_lo, v_hi, w_lo, w_hi, ..
            } => Array2::from_shape_fn(shape, |(i, j)| {
                let (v, w) = (grid.v(i), grid.w(j));
                if *v_lo < v && v < *v_hi && *w_lo < w && w < *w_hi {
                    let sv = (std::f64::consts::PI * v).sin();
                    let sw = (std::f64::consts::PI * w).sin();
                    sv * sv * sw * sw
                } else {
                    0.0
                }
            }),
            InitialCondition::GaussianProduct {
                amplitude,
                v_center,
                v_width,
                w_center,
                w_width,
                ..
            } => Array2::from_shape_fn(shape, |(i, j)| {
                let zv = (grid.v(i) - v_center) / v_width;
                let zw = (grid.w(j) - w_center) / w_width;
                amplitude * (-0.5 * (zv * zv + zw * zw)).exp()
            }),
            InitialCondition::Tabulated { values, .. } => {
                if values.len() != shape.0 || values.iter().any(|row| row.len() != shape.1) {
                    return Err(SolverError::schema(
                        "initial.values",
                        format!("expected a {} x {} table", shape.0, shape.1),
                    ));
                }
                Array2::from_shape_fn(shape, |(i, j)| values[i][j])
            }
        };
        for ((i, j), &x) in p.indexed_iter() {
            if !(x >= 0.0) {
                return Err(SolverError::NegativeInitial { i, j, value: x });
            }
        }
        p.row_mut(grid.n_v).fill(0.0);
        if self.normalize() {
            let m = mass(&p, grid);
            if m > 0.0 {
                p.mapv_inplace(|x| x / m);
            }
        }
        Ok(p)
    }
}

/// `Δv Δw Σ_{i,j} p_{i,j}`.
pub fn mass(p: &Array2<f64>, grid: &GridSpec) -> f64 {
    grid.dv * grid.dw * p.sum()
}

/// Firing rates, total firing rate and weight marginal of a density.
#[derive(Debug, Clone, PartialEq)]
pub struct Observables {
    /// `N_j = a p_{n_v-1,j} / Δv`
    pub n_j: Array1<f64>,
    /// `N̄ = Δw Σ_j N_j`
    pub n_bar: f64,
    /// `H_j = Δv Σ_i p_{i,j}`
    pub h_j: Array1<f64>,
}

impl Observables {
    pub fn compute(p: &Array2<f64>, grid: &GridSpec, a: f64) -> Self {
        let n_j = firing_rates(p, grid, a);
        let n_bar = total_firing_rate(&n_j, grid);
        // Every node row counts; row n_v is identically zero, so this is the
        // full column mass the v-solve conserves.
        let h_j = p.sum_axis(Axis(0)) * grid.dv;
        Self { n_j, n_bar, h_j }
    }
}

pub fn firing_rates(p: &Array2<f64>, grid: &GridSpec, a: f64) -> Array1<f64> {
    p.row(grid.n_v - 1).mapv(|x| a * x / grid.dv)
}

pub fn total_firing_rate(n_j: &Array1<f64>, grid: &GridSpec) -> f64 {
    // Sum over weight nodes j = 0..=n_w.
    grid.dw * n_j.iter().sum::<f64>()
}

/// The density at time level `step` together with its cached observables.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    pub p: Array2<f64>,
    pub step: usize,
    pub obs: Observables,
}

impl DensityState {
    pub fn new(p: Array2<f64>, step: usize, grid: &GridSpec, a: f64) -> Self {
        debug_assert_eq!(p.dim(), (grid.n_v + 1, grid.n_w + 1));
        let obs = Observables::compute(&p, grid, a);
        Self { p, step, obs }
    }

    pub fn initial(ic: &InitialCondition, grid: &GridSpec, a: f64) -> Result<Self> {
        Ok(Self::new(ic.sample(grid)?, 0, grid, a))
    }

    pub fn mass(&self, grid: &GridSpec) -> f64 {
        mass(&self.p, grid)
    }

    pub fn min_density(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_density(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn time(&self, grid: &GridSpec) -> f64 {
        grid.t(self.step)
    }
}

/// Leftmost and rightmost weight nodes whose firing rate exceeds
/// `rel_threshold * max_j N_j`; `None` when every rate is zero.
pub fn support_edges(n_j: &Array1<f64>, grid: &GridSpec, rel_threshold: f64) -> Option<(f64, f64)> {
    let max = n_j.iter().copied().fold(0.0, f64::max);
    if !(max > 0.0) {
        return None;
    }
    let theta = rel_threshold * max;
    let first = n_j.iter().position(|&x| x > theta)?;
    let last = n_j.iter().rposition(|&x| x > theta)?;
    Some((grid.w(first), grid.w(last)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::grid::DomainBounds;

    fn grid(n_v: usize, n_w: usize) -> GridSpec {
        GridSpec::new(DomainBounds::voltage_standard(-1.1, 0.1, 0.1), n_v, n_w, 100).unwrap()
    }

    #[test]
    fn sine_window_values() {
        let g = GridSpec::new(DomainBounds::voltage_standard(-1.5, 0.5, 0.1), 60, 200, 100).unwrap();
        let p = InitialCondition::standard_window().sample(&g).unwrap();
        // v = 0.5 is node 45, w = -0.5 is node 100.
        assert!((g.v(45) - 0.5).abs() < 1e-12 && (g.w(100) + 0.5).abs() < 1e-12);
        assert!((p[[45, 100]] - 1.0).abs() < 1e-12);
        // v = 1.5 is outside the window.
        assert!((g.v(55) - 1.5).abs() < 1e-12);
        assert_eq!(p[[55, 100]], 0.0);
        assert!(p.row(g.n_v).iter().all(|&x| x == 0.0));
    }

    /// Composite Simpson quadrature of the window, independent of the grid sampler.
    fn window_mass_quadrature(n: usize) -> f64 {
        let simpson = |f: &dyn Fn(f64) -> f64, a: f64, b: f64| {
            let h = (b - a) / n as f64;
            let mut s = f(a) + f(b);
            for k in 1..n {
                s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
            }
            s * h / 3.0
        };
        let sin2 = |x: f64| (std::f64::consts::PI * x).sin().powi(2);
        simpson(&sin2, -1.0, 1.0) * simpson(&sin2, -1.0, 0.0)
    }

    #[test]
    fn sine_window_mass() {
        let exact = window_mass_quadrature(20_000);
        assert!((exact - 0.5).abs() < 1e-12);
        let g = grid(60, 120);
        let m = mass(&InitialCondition::standard_window().sample(&g).unwrap(), &g);
        assert!((m - exact).abs() < 10.0 * (g.dv * g.dv + g.dw * g.dw), "{m}");
    }

    #[test]
    fn normalization_flag() {
        let g = grid(60, 120);
        let ic = InitialCondition::ProductSineWindow {
            v_lo: -1.0,
            v_hi: 1.0,
            w_lo: -1.0,
            w_hi: 0.0,
            normalize: true,
        };
        let m = mass(&ic.sample(&g).unwrap(), &g);
        assert!((m - 1.0).abs() < 1e-12);
    }

    #[test]
    fn negative_tabulated_rejected() {
        let g = GridSpec::new(DomainBounds::voltage_standard(0.0, 1.0, 0.1), 6, 2, 10).unwrap();
        let mut values = vec![vec![0.0; 3]; 7];
        values[2][1] = -0.5;
        let ic = InitialCondition::Tabulated {
            values,
            normalize: false,
        };
        assert!(matches!(
            ic.sample(&g),
            Err(SolverError::NegativeInitial { i: 2, j: 1, .. })
        ));
    }

    #[test]
    fn observables_examples() {
        let g = grid(60, 120);
        let mut p = Array2::zeros((g.n_v + 1, g.n_w + 1));
        let zero = Observables::compute(&p, &g, 1.0);
        assert!(zero.n_j.iter().all(|&x| x == 0.0));
        assert_eq!(zero.n_bar, 0.0);
        assert!(zero.h_j.iter().all(|&x| x == 0.0));

        p[[g.n_v - 1, 7]] = 0.02;
        let obs = Observables::compute(&p, &g, 1.0);
        assert!((obs.n_j[7] - 0.2).abs() < 1e-14);
        assert!((obs.n_bar - 0.002).abs() < 1e-15);
    }

    #[test]
    fn marginal_sums_to_mass() {
        let g = grid(60, 120);
        let p = InitialCondition::standard_window().sample(&g).unwrap();
        let obs = Observables::compute(&p, &g, 1.0);
        let lhs = g.dw * obs.h_j.sum();
        let rhs = mass(&p, &g);
        assert!((lhs - rhs).abs() <= 1e-14 * rhs);
    }

    #[test]
    fn support_edge_detection() {
        let g = grid(60, 10);
        let mut n = Array1::zeros(11);
        assert_eq!(support_edges(&n, &g, 1e-6), None);
        n[3] = 1.0;
        n[6] = 0.5;
        let (l, r) = support_edges(&n, &g, 1e-6).unwrap();
        assert!((l - g.w(3)).abs() < 1e-15 && (r - g.w(6)).abs() < 1e-15);
    }
}
