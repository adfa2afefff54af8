use crate::error::{Error, Result};
use crate::linalg::{self, c, CVector, ZERO};
use crate::rng::SplitMix64;
use crate::state::{random_hermitian_with, validate_density, FactorStructure, PureState};

use super::evolve::{Observable, Trajectory};

/// `Σ_{i<m} |i⟩|i⟩ / √m` on `d₁ × d₂` with `m = min(d₁, d₂)`.
fn maximally_entangled_on(d1: usize, d2: usize) -> CVector {
    let m = d1.min(d2);
    let mut v = CVector::from_element(d1 * d2, ZERO);
    for i in 0..m {
        v[i * d2 + i] = c(1.0 / (m as f64).sqrt(), 0.0);
    }
    v
}

/// Joint unitary evolution of a bipartite system and an environment.
///
/// The system starts maximally entangled and the environment in `|0⟩`. The
/// Hamiltonian is `α_se H_se + α_s H_s ⊗ 1 + 1 ⊗ 1`, with `H_se` on the whole
/// space and `H_s` on the system drawn by [`random_hermitian_with`] from one
/// generator seeded with `seed` (in that order). The environment is traced
/// out at every time and the concurrence observable is recorded on the
/// reduced state along with entropy and largest eigenvalue.
pub fn random_open_evolution(
    system_dims: [usize; 2],
    env_dim: usize,
    alpha_se: f64,
    alpha_s: f64,
    seed: u64,
    times: &[f64],
    observable: Observable,
) -> Result<Trajectory> {
    let [d1, d2] = system_dims;
    if d1 < 2 || d2 < 2 || env_dim < 1 {
        return Err(Error::BadDimension(format!("system {d1}×{d2}, environment {env_dim}")));
    }
    let ds = d1 * d2;
    let dim = ds * env_dim;
    let mut rng = SplitMix64::new(seed);
    let h_se = random_hermitian_with(dim, &mut rng);
    let h_s = random_hermitian_with(ds, &mut rng);
    let h = h_se.scale(alpha_se) + h_s.kronecker(&linalg::identity(env_dim)).scale(alpha_s) + linalg::identity(dim);
    let (vals, vecs) = linalg::hermitian_eigen(&h);

    let mut env0 = CVector::from_element(env_dim, ZERO);
    env0[0] = c(1.0, 0.0);
    let psi0 = maximally_entangled_on(d1, d2).kronecker(&env0);
    let coeffs = vecs.adjoint() * &psi0;
    let total = FactorStructure::new(vec![d1, d2, env_dim])?;
    let system = FactorStructure::new(vec![d1, d2])?;

    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        let phased = CVector::from_fn(dim, |k, _| coeffs[k] * c(0.0, -vals[k] * t).exp());
        let psi = PureState::normalized(&vecs * phased, total.clone())?;
        let reduced = linalg::hermitize(&psi.reduced(&[0, 1]));
        states.push(validate_density(reduced, system.clone(), 1e-10)?);
    }
    Trajectory::record(times.to_vec(), states, observable)
}
