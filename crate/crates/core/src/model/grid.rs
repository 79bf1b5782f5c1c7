//! Uniform (v, w, t) lattice on the truncated domain.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SolverError};

/// Relative tolerance (in units of Δv) for placing the reset potential on a node.
const RESET_NODE_TOL: f64 = 1e-12;

/// Interval bounds of the truncated domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainBounds {
    pub v_min: f64,
    pub v_f: f64,
    pub v_r: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub t_max: f64,
}

impl DomainBounds {
    /// Voltage window `[-4, 2]` with reset at 1, used by every experiment.
    pub fn voltage_standard(w_min: f64, w_max: f64, t_max: f64) -> Self {
        Self {
            v_min: -4.0,
            v_f: 2.0,
            v_r: 1.0,
            w_min,
            w_max,
            t_max,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub v_min: f64,
    pub v_f: f64,
    pub v_r: f64,
    pub w_min: f64,
    pub w_max: f64,
    pub t_max: f64,
    pub n_v: usize,
    pub n_w: usize,
    pub n_t: usize,
    pub dv: f64,
    pub dw: f64,
    pub dt: f64,
    /// Node index of the reset potential, `v_r == v_min + r * dv`.
    pub r: usize,
}

impl GridSpec {
    /// Builds the lattice from interval counts.
    ///
    /// `n_t = 0` is accepted only together with `t_max = 0` (a zero-length run).
    pub fn new(bounds: DomainBounds, n_v: usize, n_w: usize, n_t: usize) -> Result<Self> {
        let DomainBounds {
            v_min,
            v_f,
            v_r,
            w_min,
            w_max,
            t_max,
        } = bounds;
        for (name, x) in [
            ("v_min", v_min),
            ("v_f", v_f),
            ("v_r", v_r),
            ("w_min", w_min),
            ("w_max", w_max),
            ("t_max", t_max),
        ] {
            if !x.is_finite() {
                return Err(SolverError::DegenerateDomain(format!("{name} is not finite")));
            }
        }
        if !(v_min < v_r && v_r < v_f) {
            return Err(SolverError::DegenerateDomain(format!(
                "need v_min < v_r < v_f, got {v_min} / {v_r} / {v_f}"
            )));
        }
        if !(w_min < w_max) {
            return Err(SolverError::DegenerateDomain(format!(
                "need w_min < w_max, got {w_min} / {w_max}"
            )));
        }
        if t_max < 0.0 {
            return Err(SolverError::DegenerateDomain("t_max must be >= 0".into()));
        }
        if n_v < 2 || n_w < 2 {
            return Err(SolverError::DegenerateDomain(format!(
                "n_v and n_w must be >= 2, got {n_v} and {n_w}"
            )));
        }
        if (n_t == 0) != (t_max == 0.0) {
            return Err(SolverError::DegenerateDomain(format!(
                "n_t = 0 exactly when t_max = 0 (got n_t = {n_t}, t_max = {t_max})"
            )));
        }

        let dv = (v_f - v_min) / n_v as f64;
        let dw = (w_max - w_min) / n_w as f64;
        let dt = if n_t == 0 { 0.0 } else { t_max / n_t as f64 };

        let r_real = (v_r - v_min) / dv;
        let nearest = r_real.round();
        if (v_min + nearest * dv - v_r).abs() > RESET_NODE_TOL * dv {
            return Err(SolverError::ResetOffGrid {
                v_r,
                nearest: nearest as i64,
            });
        }
        // v_min < v_r < v_f already puts r in 1..=n_v-1.
        let r = nearest as usize;
        debug_assert!(r >= 1 && r < n_v);

        Ok(Self {
            v_min,
            v_f,
            v_r,
            w_min,
            w_max,
            t_max,
            n_v,
            n_w,
            n_t,
            dv,
            dw,
            dt,
            r,
        })
    }

    /// Builds the lattice from step sizes; each interval must be an integer
    /// multiple of its step to within `1e-9` relative.
    pub fn from_steps(bounds: DomainBounds, dv: f64, dw: f64, dt: f64) -> Result<Self> {
        let count = |name: &str, len: f64, h: f64| -> Result<usize> {
            if len == 0.0 && name == "t" {
                return Ok(0);
            }
            if !(h > 0.0) {
                return Err(SolverError::DegenerateDomain(format!("step d{name} must be > 0")));
            }
            let n = (len / h).round();
            if n < 1.0 || ((n * h - len) / len).abs() > 1e-9 {
                return Err(SolverError::DegenerateDomain(format!(
                    "interval length {len} is not a multiple of d{name} = {h}"
                )));
            }
            Ok(n as usize)
        };
        let n_v = count("v", bounds.v_f - bounds.v_min, dv)?;
        let n_w = count("w", bounds.w_max - bounds.w_min, dw)?;
        let n_t = count("t", bounds.t_max, dt)?;
        Self::new(bounds, n_v, n_w, n_t)
    }

    pub fn bounds(&self) -> DomainBounds {
        DomainBounds {
            v_min: self.v_min,
            v_f: self.v_f,
            v_r: self.v_r,
            w_min: self.w_min,
            w_max: self.w_max,
            t_max: self.t_max,
        }
    }

    #[inline]
    pub fn v(&self, i: usize) -> f64 {
        self.v_min + i as f64 * self.dv
    }

    #[inline]
    pub fn w(&self, j: usize) -> f64 {
        self.w_min + j as f64 * self.dw
    }

    #[inline]
    pub fn t(&self, m: usize) -> f64 {
        m as f64 * self.dt
    }

    /// Voltage nodes `v_0 ..= v_{n_v}`.
    pub fn v_nodes(&self) -> Vec<f64> {
        (0..=self.n_v).map(|i| self.v(i)).collect()
    }

    /// Weight nodes `w_0 ..= w_{n_w}`.
    pub fn w_nodes(&self) -> Vec<f64> {
        (0..=self.n_w).map(|j| self.w(j)).collect()
    }

    /// `a * dt / dv^2`, the scale of the implicit v-operator.
    pub fn implicit_scale(&self, a: f64) -> f64 {
        a * self.dt / (self.dv * self.dv)
    }

    /// Same domain, different time horizon at the same Δt.
    pub fn with_horizon(&self, t_max: f64) -> Result<Self> {
        let mut b = self.bounds();
        b.t_max = t_max;
        Self::from_steps(b, self.dv, self.dw, self.dt)
    }

    /// Same domain and counts with `n_t` rescaled so that the run stops at `t_max`.
    pub fn with_counts(&self, n_v: usize, n_w: usize, n_t: usize) -> Result<Self> {
        Self::new(self.bounds(), n_v, n_w, n_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bounds(v_min: f64, v_f: f64, v_r: f64) -> DomainBounds {
        DomainBounds {
            v_min,
            v_f,
            v_r,
            w_min: -1.1,
            w_max: 0.1,
            t_max: 0.1,
        }
    }

    #[test]
    fn standard_voltage_window() {
        let g = GridSpec::new(bounds(-4.0, 2.0, 1.0), 60, 120, 100).unwrap();
        assert!((g.dv - 0.1).abs() < 1e-15);
        assert_eq!(g.r, 50);
        assert!((g.v(g.r) - 1.0).abs() < 1e-12);
        assert!((g.v(g.n_v) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_cell_symmetric() {
        let g = GridSpec::new(bounds(-1.0, 1.0, 0.0), 2, 4, 10).unwrap();
        assert_eq!(g.dv, 1.0);
        assert_eq!(g.r, 1);
    }

    #[test]
    fn reset_off_grid_rejected() {
        // (1 + 4) / (6 / 7) = 35 / 6 is not an integer.
        let err = GridSpec::new(bounds(-4.0, 2.0, 1.0), 7, 10, 10).unwrap_err();
        assert!(matches!(err, SolverError::ResetOffGrid { nearest: 6, .. }), "{err}");
    }

    #[test]
    fn degenerate_domains() {
        assert!(matches!(
            GridSpec::new(bounds(1.0, 2.0, 1.0), 10, 10, 10),
            Err(SolverError::DegenerateDomain(_))
        ));
        let mut b = bounds(-4.0, 2.0, 1.0);
        b.w_max = b.w_min;
        assert!(matches!(
            GridSpec::new(b, 60, 10, 10),
            Err(SolverError::DegenerateDomain(_))
        ));
        assert!(GridSpec::new(bounds(-4.0, 2.0, 1.0), 1, 10, 10).is_err());
    }

    #[test]
    fn from_steps_matches_counts() {
        let g = GridSpec::from_steps(bounds(-4.0, 2.0, 1.0), 0.1, 0.01, 1e-3).unwrap();
        assert_eq!((g.n_v, g.n_w, g.n_t), (60, 120, 100));
        assert!(GridSpec::from_steps(bounds(-4.0, 2.0, 1.0), 0.07, 0.01, 1e-3).is_err());
    }

    #[test]
    fn zero_horizon() {
        let mut b = bounds(-4.0, 2.0, 1.0);
        b.t_max = 0.0;
        let g = GridSpec::new(b, 60, 120, 0).unwrap();
        assert_eq!(g.dt, 0.0);
        assert!(GridSpec::new(b, 60, 120, 5).is_err());
    }

    #[test]
    fn deterministic() {
        let a = GridSpec::new(bounds(-4.0, 2.0, 1.0), 60, 120, 100).unwrap();
        let b = GridSpec::new(bounds(-4.0, 2.0, 1.0), 60, 120, 100).unwrap();
        assert_eq!(a.dv.to_bits(), b.dv.to_bits());
        assert_eq!(a, b);
    }
}
