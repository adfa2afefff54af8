use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, CVector, C64};
use crate::optimize::{nelder_mead, SimplexOptions};
use crate::rng::SplitMix64;

use crate::pure::ProjectorMix;
use crate::state::{eigen_ensemble, DensityMatrix};

use super::infimum::gap;
use super::tensor::{anchored_block, CorrelationTensor};
use super::tfamily::TMatrixFamily;

/// `σ₁ − Σ_{i>1} σ_i` of each `T^α` (unclamped).
pub fn algebraic_lower_bounds(family: &TMatrixFamily) -> Result<Vec<f64>> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    Ok(family.matrices.iter().map(|t| gap(&linalg::singular_values(t))).collect())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct LowerBoundOptions {
    /// Random simplex starts on top of the deterministic ones.
    pub restarts: usize,
    /// Iterations per simplex run.
    pub max_iters: usize,
    /// Absolute convergence threshold on the objective.
    pub tol: f64,
    /// Fresh simplex runs around the incumbent; the first one that improves it
    /// by at most `tol` confirms convergence.
    pub polish_rounds: usize,
}

impl Default for LowerBoundOptions {
    fn default() -> Self {
        LowerBoundOptions { restarts: 20, max_iters: 5000, tol: 1e-9, polish_rounds: 10 }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizedBound {
    /// Best `σ₁ − Σ_{i>1} σ_i` found (may be negative).
    pub value: f64,
    pub z: CVector,
    pub iterations: usize,
    /// Number of starts confirmed by a non-improving restart.
    pub converged_starts: usize,
    pub starts: usize,
}

fn z_from_params(x: &[f64]) -> CVector {
    let m = x.len() / 2;
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let norm = if norm > 0.0 { norm } else { 1.0 };
    CVector::from_fn(m, |a, _| c(x[2 * a] / norm, x[2 * a + 1] / norm))
}

fn params_from_z(z: &[C64]) -> Vec<f64> {
    z.iter().flat_map(|w| [w.re, w.im]).collect()
}

/// Objective of the optimized bound for a unit `z`.
pub fn combined_gap(family: &TMatrixFamily, z: &[C64]) -> f64 {
    gap(&linalg::singular_values(&family.combine(z)))
}

/// Maximizes `σ₁ − Σ_{i>1} σ_i` of `Σ_α z_α T^α` over unit `z ∈ ℂ^m`.
///
/// The sphere is parametrized by `2m` unconstrained reals mapped through
/// normalization. Starting points: every `e_α` (the algebraic bounds), the
/// quasi-pure direction `z_α ∝ (T^α_{11})*`, and `restarts` Gaussian points
/// seeded by `(seed, restart index)`. Each start runs a simplex of
/// `max_iters` iterations followed by up to `polish_rounds` fresh simplices
/// around the incumbent.
pub fn optimized_lower_bound(family: &TMatrixFamily, opts: &LowerBoundOptions, seed: u64) -> Result<OptimizedBound> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let m = family.len();
    let mut starts: Vec<Vec<f64>> = (0..m)
        .map(|a| {
            let mut x = vec![0.0; 2 * m];
            x[2 * a] = 1.0;
            x
        })
        .collect();
    let anchor: Vec<C64> = family.matrices.iter().map(|t| t[(0, 0)].conj()).collect();
    let an = anchor.iter().map(|w| w.norm_sqr()).sum::<f64>().sqrt();
    if an > 1e-14 {
        let z: Vec<C64> = anchor.iter().map(|w| w / an).collect();
        starts.push(params_from_z(&z));
    }
    let root = SplitMix64::new(seed);
    for r in 0..opts.restarts {
        let mut g = root.split(r as u64);
        starts.push((0..2 * m).map(|_| g.next_gaussian()).collect());
    }

    let simplex = SimplexOptions { max_iters: opts.max_iters, f_tol: opts.tol, x_tol: 1e-12, initial_step: 0.5 };
    let objective = |x: &[f64]| -combined_gap(family, z_from_params(x).as_slice());
    let results: Vec<(f64, Vec<f64>, usize, bool)> = starts
        .par_iter()
        .map(|x0| {
            // Start points are normalized so the simplex step is on the sphere's scale.
            let x0: Vec<f64> = params_from_z(z_from_params(x0).as_slice());
            let mut best = nelder_mead(objective, &x0, &simplex);
            let mut iters = best.iterations;
            // A start counts as converged once a fresh simplex around the
            // incumbent no longer improves it by more than `tol`.
            let mut converged = false;
            for _ in 0..opts.polish_rounds {
                let x = params_from_z(z_from_params(&best.x).as_slice());
                let next = nelder_mead(objective, &x, &SimplexOptions { initial_step: 0.1, ..simplex });
                iters += next.iterations;
                let improvement = best.value - next.value;
                if next.value < best.value {
                    best = next;
                }
                if improvement <= opts.tol {
                    converged = true;
                    break;
                }
            }
            (-best.value, best.x, iters, converged)
        })
        .collect();

    let mut best_i = 0;
    for (i, r) in results.iter().enumerate() {
        if r.0 > results[best_i].0 {
            best_i = i;
        }
    }
    let (value, x, _, _) = &results[best_i];
    Ok(OptimizedBound {
        value: *value,
        z: z_from_params(x),
        iterations: results.iter().map(|r| r.2).sum(),
        converged_starts: results.iter().filter(|r| r.3).count(),
        starts: results.len(),
    })
}

/// `𝒯_{jk} = 𝒜_{jk}^{aa} / √𝒜_{aa}^{aa}` from the anchored block `𝒜_{jk}^{aa}`.
pub fn quasi_pure_matrix(block: &CMatrix, anchor: usize) -> Result<CMatrix> {
    let aa = block[(anchor, anchor)].re;
    if aa < 1e-14 {
        return Err(Error::SeparableDominantEigenvector(aa));
    }
    Ok(block.unscale(aa.sqrt()))
}

/// `max{σ₁ − Σ_{i>1} σ_i, 0}` of the quasi-pure `𝒯`.
pub fn quasi_pure_from_block(block: &CMatrix, anchor: usize) -> Result<f64> {
    let t = quasi_pure_matrix(block, anchor)?;
    Ok(gap(&linalg::singular_values(&t)).max(0.0))
}

/// Quasi-pure approximation for a tensor built on an eigenvalue-ordered ensemble.
pub fn quasi_pure_approximation(tensor: &CorrelationTensor) -> Result<f64> {
    quasi_pure_from_block(&tensor.anchored(0), 0)
}

/// Quasi-pure approximation of `ρ` anchored on its dominant eigenvector, as
/// `(value, anchor)`. If that eigenvector is separable, every other
/// eigenvector is tried as the anchor and the largest value is kept. Any
/// anchor `a` corresponds to the unit direction `z_α ∝ (T^α_{aa})*`, so each
/// candidate is itself a lower bound. Gives `(0, None)` when all anchors are
/// separable.
pub fn anchored_quasi_pure(rho: &DensityMatrix, mix: &ProjectorMix) -> Result<(f64, Option<usize>)> {
    let e = eigen_ensemble(rho);
    match quasi_pure_from_block(&anchored_block(&e, rho.factors(), mix, 0)?, 0) {
        Ok(v) => return Ok((v, Some(0))),
        Err(Error::SeparableDominantEigenvector(_)) => {}
        Err(err) => return Err(err),
    }
    let mut best: (f64, Option<usize>) = (0.0, None);
    for a in 1..e.len() {
        let v = match quasi_pure_from_block(&anchored_block(&e, rho.factors(), mix, a)?, a) {
            Ok(v) => v,
            Err(Error::SeparableDominantEigenvector(_)) => continue,
            Err(err) => return Err(err),
        };
        if best.1.is_none() || v > best.0 {
            best = (v, Some(a));
        }
    }
    Ok(best)
}
