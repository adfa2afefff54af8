use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::state::{eigen_ensemble, DensityMatrix, Split};

use super::tensor::CorrelationTensor;

/// Source of a [`TMatrixFamily`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Provenance {
    AntisymmetricBasis,
    /// `degenerate` flags repeated eigenvalues of 𝒜: the family (and the
    /// algebraic bounds derived from it) then depends on the eigenbasis chosen.
    Spectral { degenerate: bool },
}

/// Complex symmetric `n × n` matrices with `Σ_α T^α_{jk} (T^α_{lm})* = 𝒜_{jk}^{lm}`.
#[derive(Debug, Clone)]
pub struct TMatrixFamily {
    pub matrices: Vec<CMatrix>,
    pub provenance: Provenance,
}

impl TMatrixFamily {
    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Cardinality `n` of the underlying ensemble.
    pub fn n(&self) -> usize {
        self.matrices.first().map_or(0, |t| t.nrows())
    }

    /// `Σ_α vec(T^α) vec(T^α)†` in the tensor's `(jk),(lm)` layout.
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.n();
        let mut out = CMatrix::zeros(n * n, n * n);
        for t in &self.matrices {
            let v = crate::linalg::CVector::from_fn(n * n, |r, _| t[(r / n, r % n)]);
            out += &v * v.adjoint();
        }
        out
    }

    /// `Σ_α z_α T^α`.
    pub fn combine(&self, z: &[crate::linalg::C64]) -> CMatrix {
        let n = self.n();
        let mut out = CMatrix::from_element(n, n, ZERO);
        for (t, &w) in self.matrices.iter().zip(z) {
            out += t * w;
        }
        out
    }

    /// Matrices padded with zeros to `k × k`.
    pub fn padded(&self, k: usize) -> Vec<CMatrix> {
        self.matrices
            .iter()
            .map(|t| {
                let mut p = CMatrix::zeros(k, k);
                p.view_mut((0, 0), (t.nrows(), t.ncols())).copy_from(t);
                p
            })
            .collect()
    }
}

/// Family from the product basis `χ_α = (|ij⟩ − |ji⟩) ⊗ (|kl⟩ − |lk⟩)` with
/// `i < j` on the first group and `k < l` on the second, in lexicographic order.
/// `Σ_α |χ_α⟩⟨χ_α| = 4 P_- ⊗ P_-`.
pub fn antisymmetric_basis_t(rho: &DensityMatrix, left: &[usize]) -> Result<TMatrixFamily> {
    let nf = rho.factors().len();
    if left.is_empty() || left.len() >= nf || left.iter().any(|&i| i >= nf) {
        return Err(Error::BadBipartition(format!("{left:?} is not a proper nonempty subset of {nf} factors")));
    }
    let e = eigen_ensemble(rho);
    let split = Split::new(rho.factors(), left);
    let (n1, n2) = (split.dk, split.dt);
    let phi: Vec<CMatrix> = e.members.iter().map(|v| split.matrix(v)).collect();
    let n = e.len();
    let mut matrices = Vec::with_capacity(n1 * (n1 - 1) * n2 * (n2 - 1) / 4);
    for i in 0..n1 {
        for j in i + 1..n1 {
            for k in 0..n2 {
                for l in k + 1..n2 {
                    let t = CMatrix::from_fn(n, n, |a, b| {
                        let (p, q) = (&phi[a], &phi[b]);
                        p[(i, k)] * q[(j, l)] - p[(i, l)] * q[(j, k)] - p[(j, k)] * q[(i, l)] + p[(j, l)] * q[(i, k)]
                    });
                    matrices.push(t);
                }
            }
        }
    }
    Ok(TMatrixFamily { matrices, provenance: Provenance::AntisymmetricBasis })
}

/// Eigenvalues of 𝒜 at or below this are dropped from the spectral family.
pub const SPECTRAL_CUTOFF: f64 = 1e-12;

/// Family from the eigendecomposition of 𝒜: `T^α = √μ_α · reshape(v_α)`.
pub fn spectral_t(tensor: &CorrelationTensor) -> Result<TMatrixFamily> {
    let n = tensor.n();
    let (vals, vecs) = linalg::hermitian_eigen(tensor.matrix());
    let kept: Vec<usize> = (0..vals.len()).filter(|&i| vals[i] > SPECTRAL_CUTOFF).collect();
    let mut matrices = Vec::with_capacity(kept.len());
    for &i in &kept {
        let s = vals[i].sqrt();
        let t = CMatrix::from_fn(n, n, |j, k| vecs[(j * n + k, i)] * s);
        let dev = linalg::symmetry_deviation(&t);
        if dev > 1e-9 {
            return Err(Error::Numerical(format!("spectral T matrix not symmetric (deviation {dev:.3e})")));
        }
        matrices.push((&t + t.transpose()).scale(0.5));
    }
    let degenerate = kept.windows(2).any(|w| {
        let (a, b) = (vals[w[0]], vals[w[1]]);
        (a - b).abs() <= 1e-8 * a.abs().max(1e-300)
    });
    Ok(TMatrixFamily { matrices, provenance: Provenance::Spectral { degenerate } })
}
