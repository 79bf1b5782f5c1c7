//! Scharfetter-Gummel Maxwellian weights and the per-column voltage operator.
//!
//! For a weight column `j` and a total firing rate `N̄`, the voltage operator
//! is the `n_v x n_v` matrix `M` acting on the interior unknowns
//! `p_0 ..= p_{n_v-1}` (the node `n_v` is the absorbing boundary). Writing the
//! Maxwellian as `M_i = exp(-g_i)` with `g_i = (v_i - I(w_j) - w_j σ(N̄))^2 / (2a)`
//! and the harmonic face weight `M_{i+1/2} = 2 M_i M_{i+1} / (M_i + M_{i+1})`,
//! all entries are the two ratio tables
//!
//! ```text
//! ρ⁺_i = M_{i+1/2} / M_i     = 2 / (1 + exp(g_{i+1} - g_i))
//! ρ⁻_i = M_{i+1/2} / M_{i+1} = 2 / (1 + exp(g_i - g_{i+1}))
//! ```
//!
//! Index mapping from 1-based matrix rows `k` to 0-based cells `i = k - 1`:
//!
//! | entry             | 1-based             | 0-based cell form        |
//! |-------------------|---------------------|--------------------------|
//! | sub-diagonal      | `(k, k-1)`          | `(i, i-1) = -ρ⁺_{i-1}`   |
//! | super-diagonal    | `(k, k+1)`          | `(i, i+1) = -ρ⁻_i`       |
//! | first diagonal    | `(1, 1)`            | `(0, 0) = ρ⁺_0`          |
//! | interior diagonal | `(k, k)`            | `ρ⁻_{i-1} + ρ⁺_i`        |
//! | last diagonal     | `(n_v, n_v)`        | `ρ⁻_{n_v-2} + 1`         |
//! | reset shift       | `(r+1, n_v)`        | `(r, n_v-1) = -1`        |
//!
//! Every column of the tridiagonal part sums to zero except the last, which
//! sums to one; the shift entry brings that column back to zero. The solver
//! and the kernel recurrence both lean on this column-sum structure.
//!
//! The drift inside `g_i` carries the `w_j` factor on `σ(N̄)`, matching the
//! continuous equation.

use crate::error::{Result, SolverError};
use crate::model::{CoefficientFns, GridSpec, ScalarFn};

/// Default bound on `|g_{i+1} - g_i|`.
pub const DEFAULT_EXPONENT_GUARD: f64 = 700.0;

/// Relative residual accepted for a computed kernel vector.
pub const KERNEL_RESIDUAL_TOL: f64 = 1e-10;

/// Maxwellian data for one weight column.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxwellianColumn {
    pub j: usize,
    pub n_bar: f64,
    /// Exponents `g_i`, `i = 0..n_v`.
    pub g: Vec<f64>,
    /// `ρ⁺_i`, `i = 0..n_v-1`.
    pub rho_plus: Vec<f64>,
    /// `ρ⁻_i`, `i = 0..n_v-1`.
    pub rho_minus: Vec<f64>,
    /// Reset index `r`.
    pub r: usize,
}

/// `(ρ⁺, ρ⁻)` for an exponent jump `d = g_{i+1} - g_i`, without overflow.
#[inline]
pub fn harmonic_ratios(d: f64) -> (f64, f64) {
    if d > 0.0 {
        let e = (-d).exp();
        (2.0 * e / (1.0 + e), 2.0 / (1.0 + e))
    } else {
        let e = d.exp();
        (2.0 / (1.0 + e), 2.0 * e / (1.0 + e))
    }
}

impl MaxwellianColumn {
    /// Builds the column from the drift center `c`: `g_i = (v_i - c)^2 / (2a)`.
    pub fn from_center(grid: &GridSpec, a: f64, center: f64, j: usize, n_bar: f64, guard: f64) -> Result<Self> {
        let n = grid.n_v;
        let g: Vec<f64> = (0..n)
            .map(|i| {
                let x = grid.v(i) - center;
                x * x / (2.0 * a)
            })
            .collect();
        let mut rho_plus = Vec::with_capacity(n - 1);
        let mut rho_minus = Vec::with_capacity(n - 1);
        for i in 0..n - 1 {
            let d = g[i + 1] - g[i];
            if !(d.abs() <= guard) {
                return Err(SolverError::ExponentOverflow { j, i, jump: d, guard });
            }
            let (rp, rm) = harmonic_ratios(d);
            rho_plus.push(rp);
            rho_minus.push(rm);
        }
        Ok(Self {
            j,
            n_bar,
            g,
            rho_plus,
            rho_minus,
            r: grid.r,
        })
    }

    /// Number of interior unknowns `n_v`.
    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// `M_i / M_{i+1} = exp(g_{i+1} - g_i)`.
    #[inline]
    fn node_ratio(&self, i: usize) -> f64 {
        (self.g[i + 1] - self.g[i]).exp()
    }
}

/// Builds the Maxwellian column for weight index `j` with the model input `I`.
pub fn build_column(
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    j: usize,
    n_bar: f64,
    guard: f64,
) -> Result<MaxwellianColumn> {
    build_column_with_input(grid, coeffs, &coeffs.input, j, n_bar, guard)
}

/// As [`build_column`] with the input signal replaced by `input`.
pub fn build_column_with_input(
    grid: &GridSpec,
    coeffs: &CoefficientFns,
    input: &ScalarFn,
    j: usize,
    n_bar: f64,
    guard: f64,
) -> Result<MaxwellianColumn> {
    if !(n_bar.is_finite() && n_bar >= 0.0) {
        return Err(SolverError::DegenerateDomain(format!(
            "total firing rate must be finite and >= 0, got {n_bar}"
        )));
    }
    let center = coeffs.drift_center(input, grid.w(j), n_bar);
    MaxwellianColumn::from_center(grid, coeffs.a, center, j, n_bar, guard)
}

/// `εI + λM` for one column: tridiagonal part of `M`, plus the reset shift.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedTridiagonal {
    pub n: usize,
    /// Diagonal of `M`, length `n`.
    pub diag: Vec<f64>,
    /// `sub[k] = M_{k+1,k}`, length `n - 1`.
    pub sub: Vec<f64>,
    /// `sup[k] = M_{k,k+1}`, length `n - 1`.
    pub sup: Vec<f64>,
    /// 0-based row of the `-1` entry in the last column.
    pub shift_row: usize,
    pub epsilon: f64,
    /// `a Δt / Δv^2`.
    pub lambda: f64,
}

impl ShiftedTridiagonal {
    /// Assembles `M` for `column`; `epsilon` and `lambda` define `A = εI + λM`.
    pub fn assemble(column: &MaxwellianColumn, epsilon: f64, lambda: f64) -> Self {
        let n = column.len();
        let rp = &column.rho_plus;
        let rm = &column.rho_minus;
        let mut diag = vec![0.0; n];
        diag[0] = rp[0];
        for i in 1..n - 1 {
            diag[i] = rm[i - 1] + rp[i];
        }
        diag[n - 1] = rm[n - 2] + 1.0;
        Self {
            n,
            diag,
            sub: rp.iter().map(|x| -x).collect(),
            sup: rm.iter().map(|x| -x).collect(),
            shift_row: column.r,
            epsilon,
            lambda,
        }
    }

    /// `(M x)` including the shift entry.
    pub fn apply_operator(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for k in 0..n {
            let mut s = self.diag[k] * x[k];
            if k > 0 {
                s += self.sub[k - 1] * x[k - 1];
            }
            if k + 1 < n {
                s += self.sup[k] * x[k + 1];
            }
            y[k] = s;
        }
        y[self.shift_row] -= x[n - 1];
        y
    }

    /// `(εI + λM) x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.apply_operator(x)
            .into_iter()
            .zip(x)
            .map(|(mx, xi)| self.epsilon * xi + self.lambda * mx)
            .collect()
    }

    /// Dense row-major `M` (shift included).
    pub fn dense_operator(&self) -> Vec<Vec<f64>> {
        let n = self.n;
        let mut m = vec![vec![0.0; n]; n];
        for k in 0..n {
            m[k][k] = self.diag[k];
            if k > 0 {
                m[k][k - 1] = self.sub[k - 1];
            }
            if k + 1 < n {
                m[k][k + 1] = self.sup[k];
            }
        }
        m[self.shift_row][n - 1] -= 1.0;
        m
    }

    /// Dense row-major `εI + λM`.
    pub fn dense(&self) -> Vec<Vec<f64>> {
        let mut m = self.dense_operator();
        for (k, row) in m.iter_mut().enumerate() {
            for x in row.iter_mut() {
                *x *= self.lambda;
            }
            row[k] += self.epsilon;
        }
        m
    }

    /// Nonzero entries of `εI + λM` as `(row, col, value)`, 0-based.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let dense = self.dense();
        let mut out = Vec::new();
        for (k, row) in dense.iter().enumerate() {
            for (l, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    out.push((k, l, v));
                }
            }
        }
        out
    }

    /// Thomas elimination for the tridiagonal part `T = εI + λ M_tri`.
    ///
    /// Pivots are formed from column excesses: column `k` of `T` sums to
    /// `s_k = ε` (plus `λ` for the last column), and the excess `E_k` of the
    /// eliminated Schur complement obeys `E_k = s_k + λ|sup_{k-1}| E_{k-1} / piv_{k-1}`
    /// with `piv_k = E_k + λ|sub_k|`. Only nonnegative terms are added, so
    /// the factorization stays accurate for `ε → 0`.
    fn factor_tridiagonal(&self) -> Option<TridiagonalFactor> {
        let n = self.n;
        let (eps, lam) = (self.epsilon, self.lambda);
        let mut piv = vec![0.0; n];
        let mut prev = (0.0, 1.0);
        for k in 0..n {
            let col_sum = if k == n - 1 { eps + lam } else { eps };
            let excess = if k == 0 {
                col_sum
            } else {
                col_sum + lam * (-self.sup[k - 1]) * prev.0 / prev.1
            };
            piv[k] = if k + 1 < n {
                excess + lam * (-self.sub[k])
            } else {
                excess
            };
            if !(piv[k] > 0.0 && piv[k].is_finite()) {
                return None;
            }
            prev = (excess, piv[k]);
        }
        Some(TridiagonalFactor { piv })
    }

    fn solve_tridiagonal(&self, f: &TridiagonalFactor, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let lam = self.lambda;
        let mut y = vec![0.0; n];
        y[0] = b[0] / f.piv[0];
        for k in 1..n {
            y[k] = (b[k] + lam * (-self.sub[k - 1]) * y[k - 1]) / f.piv[k];
        }
        for k in (0..n - 1).rev() {
            y[k] += lam * (-self.sup[k]) / f.piv[k] * y[k + 1];
        }
        y
    }
}

struct TridiagonalFactor {
    piv: Vec<f64>,
}

/// Assembles the operator matrix of a column for `A = εI + λM`.
pub fn assemble_matrix(column: &MaxwellianColumn, epsilon: f64, lambda: f64) -> ShiftedTridiagonal {
    ShiftedTridiagonal::assemble(column, epsilon, lambda)
}

/// Strictly positive kernel of `M`, scaled so that its last entry is one
/// (before any overflow rescaling).
///
/// Zero-flux backward recurrence: from `q_{n_v-1}`, for `i = n_v-2 ..= r`
/// `q_i = (M_i/M_{i+1}) q_{i+1} + (M_i/M_{i+1/2}) q_{n_v-1}`, then for
/// `i < r` `q_i = (M_i/M_{i+1}) q_{i+1}`.
pub fn kernel_vector(column: &MaxwellianColumn) -> Result<Vec<f64>> {
    let q = kernel_unchecked(column);
    let matrix = ShiftedTridiagonal::assemble(column, 0.0, 1.0);
    let residual = kernel_residual(&matrix, &q);
    if !(residual <= KERNEL_RESIDUAL_TOL) {
        return Err(SolverError::KernelResidual { j: column.j, residual });
    }
    Ok(q)
}

/// Recurrence only, without the residual check.
pub(crate) fn kernel_unchecked(column: &MaxwellianColumn) -> Vec<f64> {
    let n = column.len();
    let r = column.r;
    let mut q = vec![0.0; n];
    q[n - 1] = 1.0;
    // q_{n-1} tracked separately so a rescale keeps the recurrence linear.
    let mut tail = 1.0;
    for i in (0..n - 1).rev() {
        let mut qi = column.node_ratio(i) * q[i + 1];
        if i >= r {
            // M_i / M_{i+1/2} = 1 / ρ⁺_i
            qi += tail / column.rho_plus[i];
        }
        q[i] = qi;
        if qi > 1e250 {
            let s = 1.0 / qi;
            for x in &mut q[i..] {
                *x *= s;
            }
            tail *= s;
        }
    }
    q
}

/// `‖M q‖_1 / Σ_k Σ_l |M_kl q_l|`.
pub fn kernel_residual(matrix: &ShiftedTridiagonal, q: &[f64]) -> f64 {
    let n = matrix.n;
    let num: f64 = matrix.apply_operator(q).iter().map(|x| x.abs()).sum();
    let mut scale = q[n - 1].abs();
    for k in 0..n {
        scale += matrix.diag[k].abs() * q[k].abs();
        if k > 0 {
            scale += matrix.sub[k - 1].abs() * q[k - 1].abs();
        }
        if k + 1 < n {
            scale += matrix.sup[k].abs() * q[k + 1].abs();
        }
    }
    if scale > 0.0 {
        num / scale
    } else {
        0.0
    }
}

/// Solves `(εI + λM) x = b`.
///
/// The reset shift is a rank-one update `-λ e_r e_{n-1}^T` of the tridiagonal
/// part `T`. With `T y = b` and `T z = e_r`, the column sums `1^T T = ε 1^T + λ e_{n-1}^T`
/// give the Sherman-Morrison denominator `1 - λ z_{n-1} = ε Σ z` exactly, so
///
/// ```text
/// x = y + λ z y_{n-1} / (ε Σ_k z_k)
/// ```
///
/// is formed from nonnegative terms whenever `b >= 0`. A dense partial-pivot
/// elimination is the fallback if the factorization or denominator degenerates.
pub fn solve_shifted(matrix: &ShiftedTridiagonal, b: &[f64]) -> Result<Vec<f64>> {
    let n = matrix.n;
    assert_eq!(b.len(), n, "rhs length mismatch");
    if let Some(f) = matrix.factor_tridiagonal() {
        let y = matrix.solve_tridiagonal(&f, b);
        let mut e_r = vec![0.0; n];
        e_r[matrix.shift_row] = 1.0;
        let z = matrix.solve_tridiagonal(&f, &e_r);
        let denom = matrix.epsilon * z.iter().sum::<f64>();
        if denom > f64::MIN_POSITIVE && denom.is_finite() {
            let coef = matrix.lambda * y[n - 1] / denom;
            let x: Vec<f64> = y.iter().zip(&z).map(|(yi, zi)| yi + coef * zi).collect();
            if x.iter().all(|v| v.is_finite()) {
                return Ok(x);
            }
        }
    }
    dense_solve(matrix.dense(), b.to_vec()).ok_or(SolverError::SingularSystem { n })
}

/// Gaussian elimination with partial pivoting on a dense row-major system.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs()))?;
        if !(a[pivot][col].abs() > 0.0) {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let factor = a[row][col] / a[col][col];
            if factor != 0.0 {
                for k in col..n {
                    a[row][k] -= factor * a[col][k];
                }
                b[row] -= factor * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x.iter().all(|v| v.is_finite()).then_some(x)
}
