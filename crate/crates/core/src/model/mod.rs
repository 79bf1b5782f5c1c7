//! Grid, coefficients, initial data and the macroscopic observables `N_j`, `N̄`, `H_j`.

pub mod coefficients;
pub mod density;
pub mod grid;

pub use coefficients::{CoefficientFns, ScalarFn};
pub use density::{mass, support_edges, DensityState, InitialCondition, Observables};
pub use grid::{DomainBounds, GridSpec};
