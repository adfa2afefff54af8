use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::pure::ProjectorMix;
use crate::roof::{anchored_quasi_pure, compute_bounds, wootters_concurrence_2x2, BoundConfig};
use crate::state::{entropy_of_spectrum, validate_density, DensityMatrix};

use super::lindblad::{build_liouvillian, unvectorize, vectorize, LindbladModel};

/// Tolerance every recorded state must meet.
pub const TRAJECTORY_TOL: f64 = 1e-8;

/// Concurrence estimate recorded along a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    /// Wootters for two qubits, quasi-pure otherwise.
    Auto,
    Wootters,
    QuasiPure,
    /// Optimized lower bound; expensive.
    Optimized,
    None,
}

impl std::str::FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Observable::Auto),
            "wootters" | "exact" => Ok(Observable::Wootters),
            "qp" | "quasi-pure" | "quasi_pure" => Ok(Observable::QuasiPure),
            "opt" | "optimized" => Ok(Observable::Optimized),
            "none" => Ok(Observable::None),
            other => Err(Error::BadDimension(format!("unknown observable {other:?}"))),
        }
    }
}

/// Concurrence estimate of `ρ` for the chosen observable (the `c_N` mix for
/// more than two factors). `None` when the observable records nothing.
pub fn concurrence_estimate(rho: &DensityMatrix, observable: Observable) -> Result<Option<f64>> {
    let two_qubits = rho.factors().dims() == [2, 2];
    match observable {
        Observable::None => Ok(None),
        Observable::Auto if two_qubits => wootters_concurrence_2x2(rho).map(Some),
        Observable::Wootters => wootters_concurrence_2x2(rho).map(Some),
        Observable::Auto | Observable::QuasiPure => {
            let mix = ProjectorMix::default_for(rho.factors().len())?;
            Ok(Some(anchored_quasi_pure(rho, &mix)?.0))
        }
        Observable::Optimized => {
            let mix = ProjectorMix::default_for(rho.factors().len())?;
            let cfg = BoundConfig { compute_upper: false, ..BoundConfig::default() };
            Ok(Some(compute_bounds(rho, &mix, &cfg)?.lower_optimized))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    #[serde(skip)]
    pub states: Vec<DensityMatrix>,
    /// `concurrence` (if requested), `entropy` (nats) and `lambda_max`.
    pub observables: BTreeMap<String, Vec<f64>>,
}

impl Trajectory {
    pub fn observable(&self, name: &str) -> Option<&[f64]> {
        self.observables.get(name).map(|v| v.as_slice())
    }

    pub(crate) fn record(
        times: Vec<f64>,
        states: Vec<DensityMatrix>,
        observable: Observable,
    ) -> Result<Trajectory> {
        let mut conc = Vec::new();
        let mut entropy = Vec::with_capacity(states.len());
        let mut lmax = Vec::with_capacity(states.len());
        for rho in &states {
            let ev = rho.eigenvalues();
            entropy.push(entropy_of_spectrum(&ev));
            lmax.push(ev[0]);
            if let Some(v) = concurrence_estimate(rho, observable)? {
                conc.push(v);
            }
        }
        let mut observables = BTreeMap::new();
        if !conc.is_empty() {
            observables.insert("concurrence".to_string(), conc);
        }
        observables.insert("entropy".to_string(), entropy);
        observables.insert("lambda_max".to_string(), lmax);
        Ok(Trajectory { times, states, observables })
    }
}

#[derive(Debug, Clone)]
pub struct EvolveOptions {
    pub hamiltonian: Option<CMatrix>,
    pub observable: Observable,
    /// Additional halvings in the scaling-and-squaring exponential.
    pub extra_squarings: u32,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions { hamiltonian: None, observable: Observable::Auto, extra_squarings: 0 }
    }
}

fn check_times(times: &[f64]) -> Result<()> {
    let mut prev = 0.0;
    for (i, &t) in times.iter().enumerate() {
        if !t.is_finite() || t < prev || (i > 0 && t == prev) {
            return Err(Error::OutOfRange { value: t, min: prev, max: f64::INFINITY });
        }
        prev = t;
    }
    Ok(())
}

/// Evolves `ρ₀` under the model's Liouvillian and records the states at `times`.
pub fn evolve(rho0: &DensityMatrix, model: &LindbladModel, times: &[f64]) -> Result<Trajectory> {
    evolve_with(rho0, model, times, &EvolveOptions::default())
}

pub fn evolve_with(
    rho0: &DensityMatrix,
    model: &LindbladModel,
    times: &[f64],
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    if rho0.factors() != &model.factors {
        return Err(Error::WrongDims { expected: model.factors.dims().to_vec(), found: rho0.factors().dims().to_vec() });
    }
    check_times(times)?;
    let d = rho0.dim();
    let l = build_liouvillian(model, opts.hamiltonian.as_ref())?;

    // One propagator per distinct step length.
    let mut cache: Vec<(f64, CMatrix)> = Vec::new();
    let mut vec = vectorize(rho0.matrix());
    let mut now = 0.0;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let dt = t - now;
        if dt > 0.0 {
            let hit = cache.iter().position(|(s, _)| (s - dt).abs() <= 1e-12 * dt);
            let i = match hit {
                Some(i) => i,
                None => {
                    cache.push((dt, linalg::expm_with_extra_squarings(&l.scale(dt), opts.extra_squarings)));
                    cache.len() - 1
                }
            };
            vec = &cache[i].1 * vec;
        }
        now = t;
        let mut m = linalg::hermitize(&unvectorize(&vec, d));
        let tr = m.trace().re;
        if (tr - 1.0).abs() > 1e-12 {
            m = m.unscale(tr);
            vec = vectorize(&m);
        }
        let rho = validate_density(m, model.factors.clone(), TRAJECTORY_TOL).map_err(|e| match e {
            Error::InvalidDensity(violations) => Error::ValidationDrift { time: t, violations },
            other => other,
        })?;
        states.push(rho);
    }
    Trajectory::record(times.to_vec(), states, opts.observable)
}

/// Convenience for uniform grids `0, tmax/(points−1), …, tmax`.
pub fn uniform_times(tmax: f64, points: usize) -> Vec<f64> {
    if points <= 1 {
        return vec![0.0];
    }
    (0..points).map(|k| tmax * k as f64 / (points - 1) as f64).collect()
}
