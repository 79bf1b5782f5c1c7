//! Parameter sets of the numerical campaigns.

use crate::model::{CoefficientFns, DomainBounds, GridSpec, InitialCondition, ScalarFn};
use crate::stepper::SchemeVariant;

/// A complete problem definition: grid, coefficients, initial data and scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub grid: GridSpec,
    pub coeffs: CoefficientFns,
    pub initial: InitialCondition,
    pub variant: SchemeVariant,
}

/// Weight window of the inhibitory experiments.
pub const INHIBITORY_W: (f64, f64) = (-1.1, 0.1);

/// Inhibitory learning strength `K(w) = -1` for `w <= 0`, zero above.
pub fn inhibitory_learning() -> ScalarFn {
    ScalarFn::Indicator {
        value: -1.0,
        threshold: 0.0,
    }
}

/// `I(w) = exp(-(10w + 5)^2) / 2`.
pub fn bump_input() -> ScalarFn {
    ScalarFn::Gaussian {
        amplitude: 0.5,
        scale: 10.0,
        shift: 5.0,
    }
}

fn grid(w: (f64, f64), t_max: f64, dv: f64, dw: f64, dt: f64) -> GridSpec {
    GridSpec::from_steps(DomainBounds::voltage_standard(w.0, w.1, t_max), dv, dw, dt).expect("preset grid is valid")
}

/// Convergence-order base case: `ε = 0.5`, `σ(N̄) = N̄`, `I ≡ 0`.
pub fn convergence(t_max: f64, dv: f64, dw: f64, dt: f64) -> Problem {
    Problem {
        grid: grid(INHIBITORY_W, t_max, dv, dw, dt),
        coeffs: CoefficientFns {
            a: 1.0,
            epsilon: 0.5,
            input: ScalarFn::Constant { value: 0.0 },
            learning: inhibitory_learning(),
            firing: ScalarFn::Identity,
        },
        initial: InitialCondition::standard_window(),
        variant: SchemeVariant::Si,
    }
}

/// Asymptotic-limit study: `T = 0.3`, `Δv = 0.1`, `Δw = 0.01`, bump input.
pub fn asymptotic(epsilon: f64, dt: f64, variant: SchemeVariant) -> Problem {
    Problem {
        grid: grid(INHIBITORY_W, 0.3, 0.1, 0.01, dt),
        coeffs: CoefficientFns {
            a: 1.0,
            epsilon,
            input: bump_input(),
            learning: inhibitory_learning(),
            firing: ScalarFn::Identity,
        },
        initial: InitialCondition::standard_window(),
        variant,
    }
}

/// Inhibitory learning phase: `ε = 0.1`, `T = 5`, `Δt = 0.005`.
pub fn learning(input: ScalarFn, t_max: f64) -> Problem {
    Problem {
        grid: grid(INHIBITORY_W, t_max, 0.1, 0.01, 0.005),
        coeffs: CoefficientFns {
            a: 1.0,
            epsilon: 0.1,
            input,
            learning: inhibitory_learning(),
            firing: ScalarFn::Identity,
        },
        initial: InitialCondition::standard_window(),
        variant: SchemeVariant::Si,
    }
}

/// Weight window of the excitatory experiments.
pub const EXCITATORY_W: (f64, f64) = (-0.1, 3.9);

/// Excitatory network with `σ(N̄) = k N̄ / (1 + N̄)`, `K ≡ 1`, `I ≡ 1`,
/// initial window moved to `0 < w < 1`.
pub fn excitatory(k: f64, t_max: f64) -> Problem {
    Problem {
        grid: grid(EXCITATORY_W, t_max, 0.1, 0.01, 0.005),
        coeffs: CoefficientFns {
            a: 1.0,
            epsilon: 0.2,
            input: ScalarFn::Constant { value: 1.0 },
            learning: ScalarFn::Constant { value: 1.0 },
            firing: ScalarFn::BoundedSigmoid { k },
        },
        initial: InitialCondition::sine_window_on(0.0, 1.0),
        variant: SchemeVariant::Si,
    }
}
