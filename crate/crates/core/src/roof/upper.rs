use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{self, CMatrix, CVector, C64, I, ZERO};
use crate::pure::ProjectorMix;
use crate::rng::SplitMix64;
use crate::state::{eigen_ensemble, transform_unchecked, DensityMatrix, Ensemble};

use super::infimum::symmetric_roof_infimum;
use super::lower::quasi_pure_matrix;
use super::tensor::build_correlation_tensor;
use super::tfamily::{spectral_t, TMatrixFamily};

/// Member terms with `𝒜_ii^ii` below this are dropped from the gradient.
const DENOMINATOR_FLOOR: f64 = 1e-14;
/// Trial steps may not push a member's `𝒜_ii^ii` below this.
const CROSSING_FLOOR: f64 = 1e-16;
const ARMIJO: f64 = 1e-4;

#[derive(Debug, Clone, Copy, Serialize)]
pub struct UpperBoundOptions {
    /// Ensemble cardinality; `None` selects [`default_cardinality`].
    pub cardinality: Option<usize>,
    pub max_iters: usize,
    pub initial_step: f64,
    pub backtrack: f64,
    /// Random unitary starts on top of the deterministic ones.
    pub restarts: usize,
}

impl Default for UpperBoundOptions {
    fn default() -> Self {
        UpperBoundOptions { cardinality: None, max_iters: 2000, initial_step: 1e-2, backtrack: 0.5, restarts: 4 }
    }
}

#[derive(Debug, Clone)]
pub struct UpperBound {
    pub value: f64,
    /// Decomposition realizing `value`.
    pub ensemble: Ensemble,
    pub cardinality: usize,
    pub iterations: usize,
    /// Gradient norm fell below `1e-12` before `max_iters` (normal termination).
    pub stalled: bool,
    /// The best start terminated by a convergence test rather than `max_iters`.
    pub converged: bool,
}

/// `max(min(r², r + 4), 2^⌈log₂ r⌉)`, capped at 16 but never below `r`.
pub fn default_cardinality(rank: usize) -> usize {
    let base = (rank * rank).min(rank + 4).max(rank.next_power_of_two());
    base.min(16).max(rank)
}

/// `𝒞(U) = Σ_i √(Σ_α |[U T^α Uᵀ]_ii|²)` and the per-member `𝒜_ii^ii`.
pub fn objective(ts: &[CMatrix], u: &CMatrix) -> (f64, Vec<f64>) {
    let k = u.nrows();
    let mut a = vec![0.0; k];
    for t in ts {
        let ut = u * t;
        for (i, ai) in a.iter_mut().enumerate() {
            let d: C64 = ut.row(i).iter().zip(u.row(i).iter()).map(|(x, y)| x * y).sum();
            *ai += d.norm_sqr();
        }
    }
    (a.iter().map(|x| x.sqrt()).sum(), a)
}

/// Hermitian `G` with `𝒞(e^{iεK} U) = 𝒞(U) + ε Tr[K G] + O(ε²)`:
/// `G_ji = i (𝒜'_{ji}^{ii} / √𝒜'_{ii}^{ii} − 𝒜'_{jj}^{ij} / √𝒜'_{jj}^{jj})`
/// with `𝒜'` the tensor of the transformed ensemble.
pub fn gradient(ts: &[CMatrix], u: &CMatrix) -> CMatrix {
    let k = u.nrows();
    let tp: Vec<CMatrix> = ts.iter().map(|t| u * t * u.transpose()).collect();
    let a: Vec<f64> = (0..k).map(|i| tp.iter().map(|t| t[(i, i)].norm_sqr()).sum()).collect();
    // B[j][i] = 𝒜'_{ji}^{ii} / √𝒜'_{ii}^{ii}
    let mut b = CMatrix::from_element(k, k, ZERO);
    for i in 0..k {
        if a[i] < DENOMINATOR_FLOOR {
            continue;
        }
        let s = a[i].sqrt();
        for j in 0..k {
            let v: C64 = tp.iter().map(|t| t[(j, i)] * t[(i, i)].conj()).sum();
            b[(j, i)] = v / s;
        }
    }
    // 𝒜'_{jj}^{ij} / √𝒜'_{jj}^{jj} is the conjugate of B[i][j].
    CMatrix::from_fn(k, k, |j, i| I * (b[(j, i)] - b[(i, j)].conj()))
}

fn trace_product(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.transpose().iter()).map(|(x, y)| x * y).sum::<C64>().re
}

struct Descent {
    value: f64,
    u: CMatrix,
    iterations: usize,
    stalled: bool,
    converged: bool,
}

/// Conjugate-gradient descent of `𝒞` over unitaries, `U ← e^{−iεH} U`.
fn descend(ts: &[CMatrix], u0: CMatrix, opts: &UpperBoundOptions) -> Descent {
    let mut u = u0;
    let (mut value, mut a) = objective(ts, &u);
    let mut g = gradient(ts, &u);
    let mut h = g.clone();
    let mut g_prev_sq = trace_product(&g, &g);
    let mut eps = opts.initial_step;
    let mut quiet = 0;
    let k = u.nrows();
    for it in 0..opts.max_iters {
        let gnorm = trace_product(&g, &g).max(0.0).sqrt();
        if gnorm < 1e-12 {
            return Descent { value, u, iterations: it, stalled: true, converged: true };
        }
        let mut slope = trace_product(&h, &g);
        if slope <= 0.0 {
            h = g.clone();
            slope = trace_product(&h, &g);
        }
        let (vals, vecs) = linalg::hermitian_eigen(&h);
        let mut step = eps * 2.0;
        let mut accepted = None;
        while step > 1e-18 {
            let trial = linalg::unitary_step(&vals, &vecs, step) * &u;
            let (tv, ta) = objective(ts, &trial);
            let crosses = ta.iter().zip(&a).any(|(&n, &o)| o >= CROSSING_FLOOR && n < CROSSING_FLOOR);
            if !crosses && tv <= value - ARMIJO * step * slope {
                accepted = Some((trial, tv, ta));
                break;
            }
            step *= opts.backtrack;
        }
        let Some((trial, tv, ta)) = accepted else {
            if h != g {
                // Retry along the plain gradient before giving up.
                h = g.clone();
                continue;
            }
            return Descent { value, u, iterations: it, stalled: false, converged: true };
        };
        eps = step;
        let improvement = value - tv;
        u = trial;
        value = tv;
        a = ta;
        let g_new = gradient(ts, &u);
        let g_new_sq = trace_product(&g_new, &g_new);
        let beta = if (it + 1) % (k * k).max(1) == 0 || g_prev_sq <= 0.0 {
            0.0
        } else {
            (trace_product(&(&g_new - &g), &g_new) / g_prev_sq).max(0.0)
        };
        h = &g_new + h.scale(beta);
        g = g_new;
        g_prev_sq = g_new_sq;
        if improvement <= 1e-15 * value.max(1.0) {
            quiet += 1;
            if quiet >= 10 {
                return Descent { value, u, iterations: it + 1, stalled: false, converged: true };
            }
        } else {
            quiet = 0;
        }
    }
    Descent { value, u, iterations: opts.max_iters, stalled: false, converged: false }
}

/// Starting unitary whose first columns realize the symmetric-roof infimum of
/// `𝒯`, when the transform fits into `k` members.
fn roof_start(tau: &CMatrix, k: usize) -> Option<CMatrix> {
    let inf = symmetric_roof_infimum(&linalg::symmetrize(tau)).ok()?;
    if inf.transform.nrows() > k {
        return None;
    }
    // ψ_i = Σ_j V_ij φ_j: V becomes the first n columns of U.
    Some(linalg::complete_unitary(&inf.transform, k))
}

/// Gradient upper bound over an explicit family (members `φ_j` of `ensemble`).
pub fn upper_bound_from_family(
    family: &TMatrixFamily,
    ensemble: &Ensemble,
    warm: &[CVector],
    opts: &UpperBoundOptions,
    seed: u64,
) -> UpperBound {
    let n = ensemble.len();
    let k = opts.cardinality.unwrap_or_else(|| default_cardinality(n)).max(n).max(1);
    if family.is_empty() {
        let ens = ensemble.padded(k);
        return UpperBound { value: 0.0, ensemble: ens, cardinality: k, iterations: 0, stalled: true, converged: true };
    }
    let ts = family.padded(k);

    let mut starts: Vec<CMatrix> = Vec::new();
    if let Ok(tq) = quasi_pure_matrix(&family.combine(&family.matrices.iter().map(|t| t[(0, 0)].conj()).collect::<Vec<_>>()), 0) {
        if let Some(u) = roof_start(&tq, k) {
            starts.push(u);
        }
    }
    for z in warm {
        if let Some(u) = roof_start(&family.combine(z.as_slice()), k) {
            starts.push(u);
        }
    }
    starts.push(linalg::identity(k));
    let root = SplitMix64::new(seed);
    for r in 0..opts.restarts {
        let mut g = root.split(r as u64);
        starts.push(linalg::random_unitary(k, &mut g));
    }

    let results: Vec<Descent> = starts.into_par_iter().map(|u0| descend(&ts, u0, opts)).collect();
    let best = results
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
        .map(|(i, _)| i)
        .expect("at least one start");
    let iterations = results.iter().map(|d| d.iterations).sum();
    let d = &results[best];
    let vcols = d.u.columns(0, n).into_owned();
    UpperBound {
        value: d.value,
        ensemble: transform_unchecked(ensemble, &vcols),
        cardinality: k,
        iterations,
        stalled: d.stalled,
        converged: d.converged,
    }
}

/// Minimum of `Σ_i c(ψ_i)` over cardinality-`K` decompositions found by
/// conjugate-gradient descent; an upper bound on the mixed-state concurrence.
pub fn concurrence_upper_bound(
    rho: &DensityMatrix,
    mix: &ProjectorMix,
    opts: &UpperBoundOptions,
    seed: u64,
) -> Result<UpperBound> {
    let e = eigen_ensemble(rho);
    let tensor = build_correlation_tensor(rho, mix)?;
    let family = spectral_t(&tensor)?;
    Ok(upper_bound_from_family(&family, &e, &[], opts, seed))
}
