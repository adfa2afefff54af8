use crate::error::Result;
use crate::linalg::{self, CMatrix, ZERO};
use crate::pure::ProjectorMix;
use crate::state::{eigen_ensemble, DensityMatrix, Ensemble, FactorStructure, Split};

/// `𝒜_{jk}^{lm} = ⟨φ_l φ_m| A |φ_j φ_k⟩`, stored as an `n² × n²` matrix with
/// row `(jk) = j n + k` and column `(lm) = l n + m`.
#[derive(Debug, Clone)]
pub struct CorrelationTensor {
    n: usize,
    matrix: CMatrix,
}

impl CorrelationTensor {
    pub fn from_matrix(n: usize, matrix: CMatrix) -> Self {
        assert_eq!(matrix.nrows(), n * n);
        CorrelationTensor { n, matrix }
    }

    /// Ensemble cardinality.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn entry(&self, j: usize, k: usize, l: usize, m: usize) -> crate::linalg::C64 {
        self.matrix[(j * self.n + k, l * self.n + m)]
    }

    /// Largest violation of `𝒜_{jk}^{lm} = 𝒜_{kj}^{lm} = 𝒜_{jk}^{ml}`.
    pub fn index_symmetry_deviation(&self) -> f64 {
        let n = self.n;
        let mut dev: f64 = 0.0;
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        let a = self.entry(j, k, l, m);
                        dev = dev.max((a - self.entry(k, j, l, m)).norm()).max((a - self.entry(j, k, m, l)).norm());
                    }
                }
            }
        }
        dev
    }

    /// `𝒜_{jk}^{aa}` as an `n × n` matrix.
    pub fn anchored(&self, a: usize) -> CMatrix {
        let n = self.n;
        CMatrix::from_fn(n, n, |j, k| self.entry(j, k, a, a))
    }
}

/// Tensor over the eigen-ensemble of `ρ` (members by decreasing eigenvalue).
pub fn build_correlation_tensor(rho: &DensityMatrix, mix: &ProjectorMix) -> Result<CorrelationTensor> {
    let e = eigen_ensemble(rho);
    tensor_of_ensemble(&e, rho.factors(), mix)
}

/// Tensor over an arbitrary ensemble of (subnormalized) vectors.
///
/// Expanding `A = Σ_X c_X S_X` in subset swaps, each term is
/// `⟨φ_l φ_m|S_X|φ_j φ_k⟩ = Tr[R^{jl}_X R^{km}_X]` with
/// `R^{jl}_X = Tr_{X̄} |φ_j⟩⟨φ_l|`.
pub fn tensor_of_ensemble(e: &Ensemble, factors: &FactorStructure, mix: &ProjectorMix) -> Result<CorrelationTensor> {
    mix.check_factors(factors)?;
    let n = e.len();
    let nf = factors.len();
    let full = (1usize << nf) - 1;
    let coeffs = mix.swap_coefficients();
    let mut out = CMatrix::zeros(n * n, n * n);
    let gram = CMatrix::from_fn(n, n, |l, j| e.members[l].dotc(&e.members[j]));

    for (x, &cx) in coeffs.iter().enumerate() {
        if cx == 0.0 {
            continue;
        }
        if x == 0 || x == full {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        for m in 0..n {
                            let v = if x == 0 { gram[(l, j)] * gram[(m, k)] } else { gram[(l, k)] * gram[(m, j)] };
                            out[(j * n + k, l * n + m)] += v * cx;
                        }
                    }
                }
            }
            continue;
        }
        let keep: Vec<usize> = (0..nf).filter(|i| x >> i & 1 == 1).collect();
        let split = Split::new(factors, &keep);
        let dx = split.dk;
        let mats: Vec<CMatrix> = e.members.iter().map(|v| split.matrix(v)).collect();
        // P[(jl), x x'] = R^{jl}[x, x'];  Q[(km), x x'] = R^{km}[x', x].
        let mut p = CMatrix::zeros(n * n, dx * dx);
        let mut q = CMatrix::zeros(n * n, dx * dx);
        for j in 0..n {
            for l in 0..n {
                let r = linalg::matmul(&mats[j], &mats[l].adjoint());
                for a in 0..dx {
                    for b in 0..dx {
                        p[(j * n + l, a * dx + b)] = r[(a, b)];
                        q[(j * n + l, a * dx + b)] = r[(b, a)];
                    }
                }
            }
        }
        let g = linalg::matmul(&p, &q.transpose());
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    for m in 0..n {
                        out[(j * n + k, l * n + m)] += g[(j * n + l, k * n + m)] * cx;
                    }
                }
            }
        }
    }
    Ok(CorrelationTensor { n, matrix: linalg::hermitize(&out) })
}

/// `𝒜_{jk}^{aa}` for one anchor member without forming the full tensor.
pub fn anchored_block(e: &Ensemble, factors: &FactorStructure, mix: &ProjectorMix, a: usize) -> Result<CMatrix> {
    mix.check_factors(factors)?;
    let n = e.len();
    let nf = factors.len();
    let full = (1usize << nf) - 1;
    let coeffs = mix.swap_coefficients();
    let mut out = CMatrix::from_element(n, n, ZERO);
    let overlaps: Vec<_> = e.members.iter().map(|v| e.members[a].dotc(v)).collect();
    for (x, &cx) in coeffs.iter().enumerate() {
        if cx == 0.0 {
            continue;
        }
        if x == 0 || x == full {
            for j in 0..n {
                for k in 0..n {
                    out[(j, k)] += overlaps[j] * overlaps[k] * cx;
                }
            }
            continue;
        }
        let keep: Vec<usize> = (0..nf).filter(|i| x >> i & 1 == 1).collect();
        let split = Split::new(factors, &keep);
        let anchor = split.matrix(&e.members[a]).adjoint();
        let r: Vec<CMatrix> = e.members.iter().map(|v| linalg::matmul(&split.matrix(v), &anchor)).collect();
        for j in 0..n {
            for k in j..n {
                // Tr[R^{ja} R^{ka}]
                let t: crate::linalg::C64 = r[j].iter().zip(r[k].transpose().iter()).map(|(p, q)| p * q).sum();
                out[(j, k)] += t * cx;
                if j != k {
                    out[(k, j)] += t * cx;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::pure::{selective_concurrence, ProjectorMix};
    use crate::rng::SplitMix64;
    use crate::state::{basis_state, bell, random_density, random_pure, BellKind};

    /// Direct evaluation of `⟨φ_l φ_m|A|φ_j φ_k⟩` with the materialized
    /// operator `A = 4 P_- ⊗ P_-` on two copies of `d₁ × d₂`.
    fn materialized_bipartite(e: &Ensemble, d1: usize, d2: usize) -> CMatrix {
        let d = d1 * d2;
        // index of |a1 b1⟩|a2 b2⟩
        let idx = |a1: usize, b1: usize, a2: usize, b2: usize| (a1 * d2 + b1) * d + a2 * d2 + b2;
        let mut amat = CMatrix::zeros(d * d, d * d);
        for a1 in 0..d1 {
            for b1 in 0..d2 {
                for a2 in 0..d1 {
                    for b2 in 0..d2 {
                        let col = idx(a1, b1, a2, b2);
                        // (1 - S_A)(1 - S_B) = 1 - S_A - S_B + S_AB
                        amat[(idx(a1, b1, a2, b2), col)] += c(1.0, 0.0);
                        amat[(idx(a2, b1, a1, b2), col)] -= c(1.0, 0.0);
                        amat[(idx(a1, b2, a2, b1), col)] -= c(1.0, 0.0);
                        amat[(idx(a2, b2, a1, b1), col)] += c(1.0, 0.0);
                    }
                }
            }
        }
        let n = e.len();
        CMatrix::from_fn(n * n, n * n, |r, s| {
            let (j, k, l, m) = (r / n, r % n, s / n, s % n);
            let ket = e.members[j].kronecker(&e.members[k]);
            let bra = e.members[l].kronecker(&e.members[m]);
            bra.dotc(&(&amat * ket))
        })
    }

    #[test]
    fn matches_materialized_operator() {
        let mut g = SplitMix64::new(21);
        for dims in [vec![2, 2], vec![2, 3], vec![3, 3]] {
            let f = FactorStructure::new(dims.clone()).unwrap();
            let rho = random_density(&f, 3, &mut g);
            let e = eigen_ensemble(&rho);
            let t = tensor_of_ensemble(&e, &f, &ProjectorMix::bipartite()).unwrap();
            let direct = materialized_bipartite(&e, dims[0], dims[1]);
            assert!(linalg::max_abs(&(t.matrix() - direct)) < 1e-12);
        }
    }

    #[test]
    fn pure_state_tensor_is_squared_concurrence() {
        let mut g = SplitMix64::new(22);
        for dims in [vec![2, 2], vec![3, 4], vec![2, 2, 2]] {
            let f = FactorStructure::new(dims.clone()).unwrap();
            let psi = random_pure(&f, &mut g);
            let mix = ProjectorMix::default_for(dims.len()).unwrap();
            let t = build_correlation_tensor(&psi.to_density(), &mix).unwrap();
            assert_eq!(t.n(), 1);
            let cc = selective_concurrence(&psi, &mix).unwrap();
            assert!((t.entry(0, 0, 0, 0).re - cc * cc).abs() < 1e-12);
        }
    }

    #[test]
    fn separable_mixture_has_vanishing_corner() {
        let f = FactorStructure::qubits(2);
        let a = basis_state(f.clone(), &[0, 0]).to_density();
        let b = basis_state(f.clone(), &[1, 1]).to_density();
        let rho = a.mix(&b, 0.7);
        let t = build_correlation_tensor(&rho, &ProjectorMix::bipartite()).unwrap();
        assert_eq!(t.n(), 2);
        assert!(t.entry(0, 0, 0, 0).norm() < 1e-14);
    }

    #[test]
    fn psd_and_symmetric() {
        let mut g = SplitMix64::new(23);
        for dims in [vec![2, 2], vec![3, 3], vec![2, 2, 2]] {
            let f = FactorStructure::new(dims.clone()).unwrap();
            let rho = random_density(&f, 3, &mut g);
            let t = build_correlation_tensor(&rho, &ProjectorMix::default_for(dims.len()).unwrap()).unwrap();
            assert!(t.index_symmetry_deviation() < 1e-10);
            assert!(linalg::hermiticity_deviation(t.matrix()) < 1e-12);
            let ev = linalg::hermitian_eigenvalues(t.matrix());
            assert!(*ev.last().unwrap() > -1e-12);
        }
    }

    #[test]
    fn anchored_block_matches_full_tensor() {
        let mut g = SplitMix64::new(24);
        for dims in [vec![3, 3], vec![2, 2, 2]] {
            let f = FactorStructure::new(dims.clone()).unwrap();
            let rho = random_density(&f, 4, &mut g);
            let e = eigen_ensemble(&rho);
            let mix = ProjectorMix::default_for(dims.len()).unwrap();
            let t = tensor_of_ensemble(&e, &f, &mix).unwrap();
            for a in [0, 2] {
                let b = anchored_block(&e, &f, &mix, a).unwrap();
                assert!(linalg::max_abs(&(b - t.anchored(a))) < 1e-13);
            }
        }
    }

    #[test]
    fn bell_state_value() {
        let t = build_correlation_tensor(&bell(BellKind::PsiMinus).to_density(), &ProjectorMix::bipartite()).unwrap();
        assert!((t.entry(0, 0, 0, 0).re - 1.0).abs() < 1e-14);
    }
}
