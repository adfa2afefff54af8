use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, C64, I};
use crate::optimize::{nelder_mead, SimplexOptions};

/// Result of [`symmetric_roof_infimum`].
#[derive(Debug, Clone)]
pub struct RoofInfimum {
    /// `max{σ₁ − Σ_{i>1} σ_i, 0}`.
    pub value: f64,
    /// Singular values of τ in decreasing order.
    pub singular_values: Vec<f64>,
    /// Left-unitary `V` (`K × n`, `K` the next power of two) attaining the
    /// infimum: `Σ_i |[V τ Vᵀ]_ii| = value`.
    pub transform: CMatrix,
}

/// `σ₁ − Σ_{i>1} σ_i` for decreasing singular values.
pub fn gap(sv: &[f64]) -> f64 {
    linalg::singular_gap(sv)
}

/// `Σ_i |[V τ Vᵀ]_ii|`.
pub fn diagonal_sum(v: &CMatrix, tau: &CMatrix) -> f64 {
    let m = v * tau * v.transpose();
    (0..m.nrows()).map(|i| m[(i, i)].norm()).sum()
}

/// Exact infimum of `Σ_i |[V τ Vᵀ]_ii|` over left-unitary `V`, with a
/// realizing transform.
///
/// With `U τ Uᵀ = diag(σ)` and `D = diag(1, i e^{iφ₂/2}, …)`, the matrix
/// `Y = D U τ Uᵀ D` has diagonal `(σ₁, −σ₂ e^{iφ₂}, …)`. Rows of a normalized
/// Hadamard matrix `H` all give `[H Y Hᵀ]_ii = Tr Y / K`, so `V = H D U` yields
/// `|Tr Y|`. The phases are zero when `σ₁` dominates; otherwise they close the
/// polygon `σ₁ = Σ_j σ_j e^{iφ_j}`.
pub fn symmetric_roof_infimum(tau: &CMatrix) -> Result<RoofInfimum> {
    let n = tau.nrows();
    if n == 0 || tau.ncols() != n {
        return Err(Error::BadDimension(format!("τ is {}×{}", tau.nrows(), tau.ncols())));
    }
    let dev = linalg::symmetry_deviation(tau);
    let scale = linalg::max_abs(tau).max(1.0);
    if dev > 1e-10 * scale {
        return Err(Error::NotSymmetric(dev));
    }
    let (u, sigma) = linalg::takagi(tau);
    let raw = gap(&sigma);
    let phases = if raw >= 0.0 { vec![0.0; n] } else { closing_phases(&sigma) };

    let k = n.next_power_of_two();
    let h = linalg::sylvester_hadamard(k.trailing_zeros());
    let norm = 1.0 / (k as f64).sqrt();
    let mut vh = CMatrix::from_fn(k, n, |r, col| c(h[(r, col)] * norm, 0.0));
    for (col, &phi) in phases.iter().enumerate().skip(1) {
        let d = I * C64::from_polar(1.0, phi / 2.0);
        for r in 0..k {
            vh[(r, col)] *= d;
        }
    }
    let transform = vh * u;
    Ok(RoofInfimum { value: raw.max(0.0), singular_values: sigma, transform })
}

/// Phases `φ_j` (`φ₁ = 0`) with `σ₁ = Σ_{j>1} σ_j e^{iφ_j}`, assuming
/// `σ₁ ≤ Σ_{j>1} σ_j`.
fn closing_phases(sigma: &[f64]) -> Vec<f64> {
    let n = sigma.len();
    let s1 = sigma[0];
    // Greedy two-way partition of σ₂.. (already decreasing): |A − B| ≤ σ₂ ≤ σ₁
    // and A + B ≥ σ₁, so sides (σ₁, A, B) form a triangle.
    let mut group = vec![0usize; n];
    let (mut a, mut b) = (0.0, 0.0);
    for j in 1..n {
        if a <= b {
            a += sigma[j];
            group[j] = 0;
        } else {
            b += sigma[j];
            group[j] = 1;
        }
    }
    let angle = |x: f64, y: f64| -> f64 {
        if x <= 0.0 || s1 <= 0.0 {
            0.0
        } else {
            ((s1 * s1 + x * x - y * y) / (2.0 * s1 * x)).clamp(-1.0, 1.0).acos()
        }
    };
    let theta_a = angle(a, b);
    let theta_b = -angle(b, a);
    let mut phases: Vec<f64> = (0..n).map(|j| if group[j] == 0 { theta_a } else { theta_b }).collect();
    phases[0] = 0.0;
    if residual(sigma, &phases) < 1e-10 * s1.max(1.0) {
        return phases;
    }
    // Numeric fallback: minimize the squared residual over the phases.
    let x0: Vec<f64> = phases[1..].to_vec();
    let obj = |x: &[f64]| {
        let mut p = vec![0.0];
        p.extend_from_slice(x);
        residual(sigma, &p).powi(2)
    };
    let opts = SimplexOptions { max_iters: 20_000, f_tol: 1e-30, x_tol: 1e-14, initial_step: 0.3 };
    let mut best = nelder_mead(obj, &x0, &opts);
    for _ in 0..20 {
        if best.value.sqrt() < 1e-12 {
            break;
        }
        best = nelder_mead(obj, &best.x, &opts);
    }
    let mut p = vec![0.0];
    p.extend_from_slice(&best.x);
    p
}

fn residual(sigma: &[f64], phases: &[f64]) -> f64 {
    let s: C64 = sigma.iter().zip(phases).skip(1).map(|(&s, &p)| C64::from_polar(s, p)).sum();
    (c(sigma[0], 0.0) - s).norm()
}

/// Applies the transform to a diagonal check; exposed for tests and callers
/// that want the per-member values.
pub fn transformed_diagonal(v: &CMatrix, tau: &CMatrix) -> Vec<C64> {
    let m = v * tau * v.transpose();
    (0..m.nrows()).map(|i| m[(i, i)]).collect()
}
