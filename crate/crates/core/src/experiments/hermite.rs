//! Normalized Hermite functions and the Hermite input signals built from them.

use crate::model::ScalarFn;

/// `ψ_n(y)`, the `n`-th normalized Hermite function, by the stable upward
/// three-term recurrence.
pub fn hermite(n: usize, y: f64) -> f64 {
    let c = std::f64::consts::PI.powf(-0.25);
    let psi0 = c * (-0.5 * y * y).exp();
    if n == 0 {
        return psi0;
    }
    let mut prev = psi0;
    let mut cur = c * std::f64::consts::SQRT_2 * y * (-0.5 * y * y).exp();
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * y * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Input signal `ψ_index(scale * w + shift) + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteInput {
    pub index: usize,
    pub scale: f64,
    pub shift: f64,
}

impl HermiteInput {
    /// Centered at `w = -1/2`: argument `10w + 5`.
    pub fn inhibitory(index: usize) -> Self {
        Self {
            index,
            scale: 10.0,
            shift: 5.0,
        }
    }

    /// Centered at `w = +1/2`: argument `10w - 5`.
    pub fn excitatory(index: usize) -> Self {
        Self {
            index,
            scale: 10.0,
            shift: -5.0,
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        hermite(self.index, self.scale * w + self.shift) + 1.0
    }

    pub fn as_fn(&self) -> ScalarFn {
        ScalarFn::Hermite {
            index: self.index,
            scale: self.scale,
            shift: self.shift,
            offset: 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let c = std::f64::consts::PI.powf(-0.25);
        assert!((hermite(0, 0.0) - 0.751_125_544_464_942_5).abs() < 1e-15);
        assert_eq!(hermite(1, 0.0), 0.0);
        // ψ_2(0) = -sqrt(1/2) ψ_0(0)
        assert!((hermite(2, 0.0) + c / std::f64::consts::SQRT_2).abs() < 1e-15);
        assert!((hermite(2, 0.0) + 0.531_125_966_013_598_4).abs() < 1e-12);
    }

    #[test]
    fn parity() {
        for n in 0..5 {
            for y in [0.3, 1.1, 2.7] {
                let s = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((hermite(n, -y) - s * hermite(n, y)).abs() < 1e-14);
            }
        }
    }

    /// Orthonormality by composite Simpson quadrature on [-10, 10].
    #[test]
    fn orthonormal() {
        let n = 20_000;
        let h = 20.0 / n as f64;
        for a in 0..5 {
            for b in 0..5 {
                let f = |y: f64| hermite(a, y) * hermite(b, y);
                let mut s = f(-10.0) + f(10.0);
                for k in 1..n {
                    s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(-10.0 + k as f64 * h);
                }
                let integral = s * h / 3.0;
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((integral - expected).abs() < 1e-8, "({a},{b}): {integral}");
            }
        }
    }

    #[test]
    fn input_centering() {
        let c = std::f64::consts::PI.powf(-0.25);
        assert!((HermiteInput::inhibitory(0).eval(-0.5) - (1.0 + c)).abs() < 1e-15);
        assert!((HermiteInput::excitatory(0).eval(0.5) - (1.0 + c)).abs() < 1e-15);
        assert_eq!(
            HermiteInput::inhibitory(3).as_fn().eval(-0.37),
            HermiteInput::inhibitory(3).eval(-0.37)
        );
    }
}
