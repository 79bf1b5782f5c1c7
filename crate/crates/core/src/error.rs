use std::fmt;

use thiserror::Error;

/// A single configuration problem, addressed by its dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchemaIssue {
    pub path: String,
    pub message: String,
}

impl SchemaIssue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for SchemaIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("reset potential {v_r} does not lie on the voltage lattice (nearest index {nearest})")]
    ResetOffGrid { v_r: f64, nearest: i64 },

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("initial density is negative ({value}) at node ({i}, {j})")]
    NegativeInitial { i: usize, j: usize, value: f64 },

    #[error("Maxwellian exponent jump {jump} exceeds guard {guard} in column {j} at cell {i}")]
    ExponentOverflow { j: usize, i: usize, jump: f64, guard: f64 },

    #[error("kernel residual {residual:e} exceeds tolerance in column {j}")]
    KernelResidual { j: usize, residual: f64 },

    #[error("singular shifted system (n = {n})")]
    SingularSystem { n: usize },

    #[error("CFL violation at step {step}: p* = {value:e} at node ({i}, {j})")]
    CflViolation {
        step: usize,
        i: usize,
        j: usize,
        value: f64,
    },

    #[error("invalid configuration:\n{}", format_issues(.0))]
    Schema(Vec<SchemaIssue>),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl SolverError {
    pub fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        SolverError::Schema(vec![SchemaIssue::new(path, message)])
    }

    /// True for errors caused by bad input rather than numerical faults.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            SolverError::ResetOffGrid { .. }
                | SolverError::DegenerateDomain(_)
                | SolverError::NegativeInitial { .. }
                | SolverError::Schema(_)
        )
    }
}

fn format_issues(issues: &[SchemaIssue]) -> String {
    issues.iter().map(|i| format!("  - {i}")).collect::<Vec<_>>().join("\n")
}

pub type Result<T> = std::result::Result<T, SolverError>;
