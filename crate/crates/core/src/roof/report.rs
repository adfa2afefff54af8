use serde::Serialize;

use crate::error::Result;
use crate::pure::ProjectorMix;
use crate::state::{eigen_ensemble, is_ppt, DensityMatrix};

use super::exact::wootters_concurrence_2x2;
use super::lower::{algebraic_lower_bounds, optimized_lower_bound, quasi_pure_approximation, LowerBoundOptions};
use super::tensor::tensor_of_ensemble;
use super::tfamily::{antisymmetric_basis_t, spectral_t, Provenance, TMatrixFamily};
use super::upper::{upper_bound_from_family, UpperBoundOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyChoice {
    Spectral,
    /// Bipartite default mix only; split after the first factor.
    AntisymmetricBasis,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundConfig {
    pub lower: LowerBoundOptions,
    pub upper: UpperBoundOptions,
    pub compute_upper: bool,
    pub family: FamilyChoice,
    pub seed: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            lower: LowerBoundOptions::default(),
            upper: UpperBoundOptions::default(),
            compute_upper: true,
            family: FamilyChoice::Spectral,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub provenance: Option<Provenance>,
    pub family_size: usize,
    pub simplex_starts: usize,
    pub simplex_converged: usize,
    pub simplex_iterations: usize,
    pub upper_cardinality: Option<usize>,
    pub upper_iterations: usize,
    pub upper_converged: bool,
    pub upper_stalled: bool,
    pub notes: Vec<String>,
}

/// The estimation hierarchy for one state.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub dims: Vec<usize>,
    pub rank: usize,
    pub ppt: bool,
    pub ppt_min_eigenvalue: f64,
    /// One `σ₁ − Σ_{i>1} σ_i` per `T^α`, unclamped.
    pub lower_algebraic: Vec<f64>,
    pub best_algebraic: Option<f64>,
    /// `max{optimized, 0}`.
    pub lower_optimized: f64,
    pub lower_optimized_raw: f64,
    /// Absent when the dominant eigenvector is separable.
    pub quasi_pure: Option<f64>,
    pub upper: Option<f64>,
    /// Exact value for two qubits.
    pub exact: Option<f64>,
    pub diagnostics: Diagnostics,
}

/// Runs every applicable estimate on `ρ`.
pub fn compute_bounds(rho: &DensityMatrix, mix: &ProjectorMix, config: &BoundConfig) -> Result<BoundReport> {
    mix.check_factors(rho.factors())?;
    let e = eigen_ensemble(rho);
    let tensor = tensor_of_ensemble(&e, rho.factors(), mix)?;
    let mut notes = Vec::new();
    let family: TMatrixFamily = match config.family {
        FamilyChoice::AntisymmetricBasis if *mix == ProjectorMix::bipartite() => antisymmetric_basis_t(rho, &[0])?,
        FamilyChoice::AntisymmetricBasis => {
            notes.push("antisymmetric basis requires the bipartite default mix; using spectral family".into());
            spectral_t(&tensor)?
        }
        FamilyChoice::Spectral => spectral_t(&tensor)?,
    };
    if let Provenance::Spectral { degenerate: true } = family.provenance {
        notes.push("degenerate correlation-tensor spectrum: algebraic bounds depend on the eigenbasis".into());
    }
    let (ppt, ppt_min) = if rho.factors().len() >= 2 { is_ppt(rho) } else { (true, 0.0) };
    let exact = if rho.factors().dims() == [2, 2] && *mix == ProjectorMix::bipartite() {
        Some(wootters_concurrence_2x2(rho)?)
    } else {
        None
    };

    let quasi_pure = match quasi_pure_approximation(&tensor) {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("quasi-pure approximation unavailable: {e}"));
            None
        }
    };

    let mut diagnostics = Diagnostics {
        provenance: if family.is_empty() { None } else { Some(family.provenance) },
        family_size: family.len(),
        simplex_starts: 0,
        simplex_converged: 0,
        simplex_iterations: 0,
        upper_cardinality: None,
        upper_iterations: 0,
        upper_converged: true,
        upper_stalled: false,
        notes,
    };

    if family.is_empty() {
        diagnostics.notes.push("correlation tensor vanishes: every decomposition is separable".into());
        let upper = config.compute_upper.then_some(0.0);
        return Ok(BoundReport {
            dims: rho.factors().dims().to_vec(),
            rank: e.len(),
            ppt,
            ppt_min_eigenvalue: ppt_min,
            lower_algebraic: Vec::new(),
            best_algebraic: None,
            lower_optimized: 0.0,
            lower_optimized_raw: 0.0,
            quasi_pure,
            upper,
            exact,
            diagnostics,
        });
    }

    let lower_algebraic = algebraic_lower_bounds(&family)?;
    let best_algebraic = lower_algebraic.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let opt = optimized_lower_bound(&family, &config.lower, config.seed)?;
    diagnostics.simplex_starts = opt.starts;
    diagnostics.simplex_converged = opt.converged_starts;
    diagnostics.simplex_iterations = opt.iterations;
    if opt.converged_starts < opt.starts {
        diagnostics.notes.push(format!(
            "{} of {} simplex starts hit the iteration limit",
            opt.starts - opt.converged_starts,
            opt.starts
        ));
    }

    let upper = if config.compute_upper {
        let ub = upper_bound_from_family(&family, &e, std::slice::from_ref(&opt.z), &config.upper, config.seed);
        diagnostics.upper_cardinality = Some(ub.cardinality);
        diagnostics.upper_iterations = ub.iterations;
        diagnostics.upper_converged = ub.converged;
        diagnostics.upper_stalled = ub.stalled;
        Some(ub.value)
    } else {
        None
    };

    Ok(BoundReport {
        dims: rho.factors().dims().to_vec(),
        rank: e.len(),
        ppt,
        ppt_min_eigenvalue: ppt_min,
        lower_algebraic,
        best_algebraic: Some(best_algebraic),
        lower_optimized: opt.value.max(0.0),
        lower_optimized_raw: opt.value,
        quasi_pure,
        upper,
        exact,
        diagnostics,
    })
}
