//! Structure-preserving finite-volume solver for the multiscale Fokker-Planck
//! equation of weight-structured nonlinear noisy leaky integrate-and-fire
//! networks with Hebbian learning.
//!
//! The density `p(v, w, t)` lives on a uniform grid. Each time step convects
//! in the synaptic weight `w` explicitly (Godunov fluxes) and then solves, per
//! weight column, an implicit Scharfetter-Gummel voltage problem whose reset
//! shift is taken at the new time level. The resulting matrices are
//! M-matrices, so every step conserves mass and keeps the density nonnegative
//! for any `ε` and `Δv`, subject only to a weight-direction CFL condition.
//!
//! Modules:
//! - [`model`]: grid, coefficients, initial data, observables
//! - [`maxwellian`]: voltage operator, its kernel and the shifted solve
//! - [`transport_w`]: explicit weight convection
//! - [`stepper`]: SI / FI time steps and trajectories
//! - [`quasisteady`]: the voltage-wise quasi-steady state for a given marginal
//! - [`experiments`]: convergence, asymptotic-limit, learning and excitatory campaigns
//! - [`config`], [`artifacts`]: JSON configuration and CSV/JSON outputs

pub mod artifacts;
pub mod config;
pub mod error;
pub mod experiments;
pub mod maxwellian;
pub mod model;
pub mod quasisteady;
pub mod stepper;
pub mod transport_w;

pub use error::{Result, SchemaIssue, SolverError};
