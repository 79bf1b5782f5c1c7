//! Model coefficients drawn from a closed catalogue of named function families.

use serde::{Deserialize, Serialize};

use crate::error::SchemaIssue;
use crate::experiments::hermite::hermite;

/// A scalar function of one variable, configured declaratively.
///
/// Used for the input signal `I(w)`, the learning strength `K(w)` and the
/// firing transfer `σ(N̄)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarFn {
    Constant {
        value: f64,
    },
    /// `amplitude * exp(-(scale * x + shift)^2)`
    Gaussian {
        amplitude: f64,
        scale: f64,
        shift: f64,
    },
    /// `ψ_index(scale * x + shift) + offset`, with ψ the normalized Hermite functions.
    Hermite {
        index: usize,
        scale: f64,
        shift: f64,
        offset: f64,
    },
    /// `value` where `x <= threshold`, zero elsewhere.
    Indicator {
        value: f64,
        threshold: f64,
    },
    Identity,
    /// `k * x / (1 + x)`
    BoundedSigmoid {
        k: f64,
    },
}

impl ScalarFn {
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ScalarFn::Constant { value } => value,
            ScalarFn::Gaussian {
                amplitude,
                scale,
                shift,
            } => {
                let y = scale * x + shift;
                amplitude * (-y * y).exp()
            }
            ScalarFn::Hermite {
                index,
                scale,
                shift,
                offset,
            } => hermite(index, scale * x + shift) + offset,
            ScalarFn::Indicator { value, threshold } => {
                if x <= threshold {
                    value
                } else {
                    0.0
                }
            }
            ScalarFn::Identity => x,
            ScalarFn::BoundedSigmoid { k } => k * x / (1.0 + x),
        }
    }

    /// True when the function does not depend on its argument.
    pub fn is_constant(&self) -> bool {
        matches!(self, ScalarFn::Constant { .. })
    }

    fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            ScalarFn::Constant { value } => vec![("value", value)],
            ScalarFn::Gaussian {
                amplitude,
                scale,
                shift,
            } => vec![("amplitude", amplitude), ("scale", scale), ("shift", shift)],
            ScalarFn::Hermite {
                scale, shift, offset, ..
            } => vec![("scale", scale), ("shift", shift), ("offset", offset)],
            ScalarFn::Indicator { value, threshold } => {
                vec![("value", value), ("threshold", threshold)]
            }
            ScalarFn::Identity => vec![],
            ScalarFn::BoundedSigmoid { k } => vec![("k", k)],
        }
    }

    pub fn validate(&self, path: &str, issues: &mut Vec<SchemaIssue>) {
        for (name, x) in self.params() {
            if !x.is_finite() {
                issues.push(SchemaIssue::new(format!("{path}.{name}"), "must be finite"));
            }
        }
    }
}

/// Coefficients of the multiscale equation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFns {
    /// Diffusion amplitude.
    pub a: f64,
    /// Scale-separation parameter.
    pub epsilon: f64,
    /// Input signal `I(w)`.
    pub input: ScalarFn,
    /// Learning strength `K(w)`.
    pub learning: ScalarFn,
    /// Firing transfer `σ(N̄)`.
    pub firing: ScalarFn,
}

impl CoefficientFns {
    pub fn validate(&self) -> Vec<SchemaIssue> {
        let mut issues = Vec::new();
        if !(self.a > 0.0 && self.a.is_finite()) {
            issues.push(SchemaIssue::new("coefficients.a", "must be finite and > 0"));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            issues.push(SchemaIssue::new("coefficients.epsilon", "must be finite and > 0"));
        }
        self.input.validate("coefficients.input", &mut issues);
        self.learning.validate("coefficients.learning", &mut issues);
        // With finite parameters every family is finite on N̄ >= 0.
        self.firing.validate("coefficients.firing", &mut issues);
        issues
    }

    /// Drift center `I(w) + w σ(N̄)` of the voltage transport at weight `w`.
    #[inline]
    pub fn drift_center(&self, input: &ScalarFn, w: f64, n_bar: f64) -> f64 {
        input.eval(w) + w * self.firing.eval(n_bar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalogue_values() {
        assert_eq!(ScalarFn::Constant { value: 2.5 }.eval(-3.0), 2.5);
        let g = ScalarFn::Gaussian {
            amplitude: 0.5,
            scale: 10.0,
            shift: 5.0,
        };
        assert!((g.eval(-0.5) - 0.5).abs() < 1e-15);
        assert!((g.eval(-0.4) - 0.5 * (-1.0f64).exp()).abs() < 1e-15);
        let k = ScalarFn::Indicator {
            value: -1.0,
            threshold: 0.0,
        };
        assert_eq!(k.eval(0.0), -1.0);
        assert_eq!(k.eval(-0.3), -1.0);
        assert_eq!(k.eval(0.01), 0.0);
        assert_eq!(ScalarFn::BoundedSigmoid { k: 3.0 }.eval(1.0), 1.5);
        assert_eq!(ScalarFn::Identity.eval(0.7), 0.7);
        let h = ScalarFn::Hermite {
            index: 0,
            scale: 10.0,
            shift: 5.0,
            offset: 1.0,
        };
        assert!((h.eval(-0.5) - (1.0 + std::f64::consts::PI.powf(-0.25))).abs() < 1e-14);
    }

    #[test]
    fn serde_tagging() {
        let f: ScalarFn = serde_json::from_str(r#"{"kind":"bounded_sigmoid","k":3.0}"#).unwrap();
        assert_eq!(f, ScalarFn::BoundedSigmoid { k: 3.0 });
        assert!(serde_json::from_str::<ScalarFn>(r#"{"kind":"constant","value":1,"x":1}"#).is_err());
    }

    #[test]
    fn validation_collects_all() {
        let c = CoefficientFns {
            a: -1.0,
            epsilon: 0.0,
            input: ScalarFn::Constant { value: f64::NAN },
            learning: ScalarFn::Constant { value: 0.0 },
            firing: ScalarFn::Identity,
        };
        let issues = c.validate();
        let paths: Vec<_> = issues.iter().map(|i| i.path.as_str()).collect();
        assert_eq!(
            paths,
            ["coefficients.a", "coefficients.epsilon", "coefficients.input.value"]
        );
    }
}
