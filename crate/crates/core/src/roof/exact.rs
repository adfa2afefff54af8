use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ZERO};
use crate::state::{eigen_ensemble, DensityMatrix, Ensemble};

use super::infimum::symmetric_roof_infimum;
use super::tfamily::TMatrixFamily;

/// `σ_y ⊗ σ_y` in the computational basis.
pub fn sigma_yy() -> CMatrix {
    CMatrix::from_fn(4, 4, |r, s| match (r, s) {
        (0, 3) | (3, 0) => c(-1.0, 0.0),
        (1, 2) | (2, 1) => c(1.0, 0.0),
        _ => ZERO,
    })
}

/// `τ_{jk} = φ_jᵀ S φ_k` over the eigen-ensemble.
pub fn conjugation_tau(e: &Ensemble, s: &CMatrix) -> CMatrix {
    let n = e.len();
    let sphi: Vec<_> = e.members.iter().map(|v| s * v).collect();
    CMatrix::from_fn(n, n, |j, k| e.members[j].iter().zip(sphi[k].iter()).map(|(a, b)| a * b).sum())
}

/// Exact two-qubit concurrence.
pub fn wootters_concurrence_2x2(rho: &DensityMatrix) -> Result<f64> {
    if rho.factors().dims() != [2, 2] {
        return Err(Error::WrongDims { expected: vec![2, 2], found: rho.factors().dims().to_vec() });
    }
    let tau = conjugation_tau(&eigen_ensemble(rho), &sigma_yy());
    Ok(symmetric_roof_infimum(&linalg::symmetrize(&tau))?.value)
}

/// `σ₁ − Σ_{i>1} σ_i` of the two-qubit τ (unclamped); negative below the
/// separability threshold.
pub fn wootters_gap(rho: &DensityMatrix) -> Result<f64> {
    if rho.factors().dims() != [2, 2] {
        return Err(Error::WrongDims { expected: vec![2, 2], found: rho.factors().dims().to_vec() });
    }
    let tau = conjugation_tau(&eigen_ensemble(rho), &sigma_yy());
    Ok(linalg::singular_gap(&linalg::singular_values(&tau)))
}

/// Θ-concurrence for the conjugation `Θ|ψ⟩ = S|ψ*⟩`.
pub fn theta_concurrence(rho: &DensityMatrix, s: &CMatrix) -> Result<f64> {
    let d = rho.dim();
    if s.nrows() != d || s.ncols() != d {
        return Err(Error::NotConjugation(format!("S is {}×{}, state dimension is {d}", s.nrows(), s.ncols())));
    }
    let unit = linalg::max_abs(&(s.adjoint() * s - linalg::identity(d)));
    if unit > 1e-10 {
        return Err(Error::NotConjugation(format!("S is not unitary (deviation {unit:.3e})")));
    }
    let sym = linalg::symmetry_deviation(s);
    if sym > 1e-10 {
        return Err(Error::NotConjugation(format!("S is not symmetric (deviation {sym:.3e})")));
    }
    let tau = conjugation_tau(&eigen_ensemble(rho), s);
    Ok(symmetric_roof_infimum(&linalg::symmetrize(&tau))?.value)
}

/// `𝒞_α = Σ_j |[V T^α Vᵀ]_jj|`.
pub fn concurrence_vector(v: &CMatrix, family: &TMatrixFamily) -> Result<Vec<f64>> {
    let n = family.n();
    if v.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.ncols() });
    }
    let dev = linalg::max_abs(&(v.adjoint() * v - linalg::identity(n)));
    if dev > 1e-10 {
        return Err(Error::NotLeftUnitary(dev));
    }
    Ok(family
        .matrices
        .iter()
        .map(|t| {
            let m = v * t * v.transpose();
            (0..m.nrows()).map(|i| m[(i, i)].norm()).sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CVector;
    use crate::pure::ProjectorMix;
    use crate::rng::SplitMix64;
    use crate::roof::tensor::build_correlation_tensor;
    use crate::roof::tfamily::spectral_t;
    use crate::state::{basis_state, bell, random_density, BellKind, DensityMatrix, FactorStructure};

    fn isotropic(p: f64) -> DensityMatrix {
        let phi = bell(BellKind::PhiPlus).to_density();
        phi.mix(&DensityMatrix::maximally_mixed(FactorStructure::qubits(2)), 1.0 - p)
    }

    #[test]
    fn wootters_examples() {
        assert!((wootters_concurrence_2x2(&bell(BellKind::PhiPlus).to_density()).unwrap() - 1.0).abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(FactorStructure::qubits(2));
        assert!(wootters_concurrence_2x2(&mm).unwrap().abs() < 1e-12);
        // (1−p)Φ⁺ + p 1/4 has τ singular values (1 − 3p/4, p/4, p/4, p/4): c = max(1 − 3p/2, 0).
        for k in 0..=20 {
            let p = k as f64 / 20.0;
            let expected = (1.0 - 1.5 * p).max(0.0);
            assert!((wootters_concurrence_2x2(&isotropic(p)).unwrap() - expected).abs() < 1e-12, "p = {p}");
        }
    }

    #[test]
    fn theta_examples() {
        let mut g = SplitMix64::new(51);
        let rho = random_density(&FactorStructure::qubits(2), 3, &mut g);
        let a = theta_concurrence(&rho, &sigma_yy()).unwrap();
        assert!((a - wootters_concurrence_2x2(&rho).unwrap()).abs() < 1e-12);
        let prod = basis_state(FactorStructure::qubits(2), &[0, 1]).to_density();
        assert!((theta_concurrence(&prod, &linalg::identity(4)).unwrap() - 1.0).abs() < 1e-12);
        for _ in 0..10 {
            let r = random_density(&FactorStructure::new(vec![3, 3]).unwrap(), 4, &mut g);
            assert!(theta_concurrence(&r, &linalg::identity(9)).unwrap() >= 0.0);
        }
        let bad = CMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), c(-1.0, 0.0), ZERO]);
        let q = basis_state(FactorStructure::new(vec![2]).unwrap(), &[0]).to_density();
        assert!(matches!(theta_concurrence(&q, &bad), Err(Error::NotConjugation(_))));
    }

    #[test]
    fn vector_examples() {
        let sep = basis_state(FactorStructure::qubits(2), &[1, 0]).to_density();
        let fam = crate::roof::tfamily::antisymmetric_basis_t(&sep, &[0]).unwrap();
        assert_eq!(concurrence_vector(&linalg::identity(1), &fam).unwrap(), vec![0.0]);
        let phi = bell(BellKind::PhiPlus).to_density();
        let fam = crate::roof::tfamily::antisymmetric_basis_t(&phi, &[0]).unwrap();
        let v = concurrence_vector(&linalg::identity(1), &fam).unwrap();
        assert!((v[0] - 1.0).abs() < 1e-12);

        let mut g = SplitMix64::new(52);
        let rho = random_density(&FactorStructure::new(vec![3, 3]).unwrap(), 3, &mut g);
        let fam = spectral_t(&build_correlation_tensor(&rho, &ProjectorMix::bipartite()).unwrap()).unwrap();
        let u = linalg::random_unitary(5, &mut g);
        let v = u.columns(0, 3).into_owned();
        let phases = CMatrix::from_diagonal(&CVector::from_fn(5, |_, _| crate::linalg::C64::from_polar(1.0, g.next_f64() * 6.0)));
        let a = concurrence_vector(&v, &fam).unwrap();
        let b = concurrence_vector(&(phases * &v), &fam).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(matches!(concurrence_vector(&v.scale(2.0), &fam), Err(Error::NotLeftUnitary(_))));
    }
}
