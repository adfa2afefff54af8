//! Quantum-state data model: factor structures, pure states, density matrices,
//! reductions, spectral tools, ensembles and named reference states.

use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result, Violation};
use crate::linalg::{self, c, CMatrix, CVector, ONE, ZERO};
use crate::rng::SplitMix64;

/// Default tolerance for density-matrix validation.
pub const DENSITY_TOL: f64 = 1e-10;
/// Eigenvalues below `RANK_CUTOFF * λ_max` are dropped from ensembles.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Ordered subsystem dimensions of a tensor-product Hilbert space.
/// The first factor is the most significant digit of a flat index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorStructure {
    dims: Vec<usize>,
}

impl FactorStructure {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::BadFactors("no factors".into()));
        }
        if let Some(d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::BadFactors(format!("factor dimension {d} < 2")));
        }
        Ok(FactorStructure { dims })
    }

    pub fn qubits(n: usize) -> Self {
        FactorStructure { dims: vec![2; n] }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn restrict(&self, keep: &[usize]) -> FactorStructure {
        FactorStructure { dims: keep.iter().map(|&i| self.dims[i]).collect() }
    }

    /// Digits of a flat index, most significant (factor 0) first.
    pub fn digits(&self, mut index: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims.len()];
        for (k, &d) in self.dims.iter().enumerate().rev() {
            out[k] = index % d;
            index /= d;
        }
        out
    }

    pub fn flat(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.dims).fold(0, |acc, (&x, &d)| acc * d + x)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.len() {
            return Err(Error::BadIndex { index, count: self.len() });
        }
        Ok(())
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::DimensionMismatch { expected: self.total(), found: n });
        }
        Ok(())
    }
}

/// Index bookkeeping for a split of the factors into a kept group `K` and a
/// traced group `T`: `flat[a * dt + t]` is the global index of `(a, t)`.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub dk: usize,
    pub dt: usize,
    pub flat: Vec<usize>,
}

impl Split {
    pub fn new(factors: &FactorStructure, keep: &[usize]) -> Split {
        let traced: Vec<usize> = (0..factors.len()).filter(|i| !keep.contains(i)).collect();
        let kf = factors.restrict(keep);
        let tf = factors.restrict(&traced);
        let dk = kf.total();
        let dt = if traced.is_empty() { 1 } else { tf.total() };
        let mut flat = vec![0; dk * dt];
        let mut digits = vec![0; factors.len()];
        for a in 0..dk {
            let ad = kf.digits(a);
            for (slot, &f) in keep.iter().enumerate() {
                digits[f] = ad[slot];
            }
            for t in 0..dt {
                if !traced.is_empty() {
                    let td = tf.digits(t);
                    for (slot, &f) in traced.iter().enumerate() {
                        digits[f] = td[slot];
                    }
                }
                flat[a * dt + t] = factors.flat(&digits);
            }
        }
        Split { dk, dt, flat }
    }

    /// Reshape a vector into a `dk × dt` matrix.
    pub fn matrix(&self, v: &CVector) -> CMatrix {
        CMatrix::from_fn(self.dk, self.dt, |a, t| v[self.flat[a * self.dt + t]])
    }

    /// `Tr_T |x⟩⟨y|` as a `dk × dk` operator.
    pub fn reduce_outer(&self, x: &CVector, y: &CVector) -> CMatrix {
        let mx = self.matrix(x);
        let my = self.matrix(y);
        linalg::matmul(&mx, &my.adjoint())
    }

    pub fn reduce_operator(&self, m: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dk, self.dk);
        for a in 0..self.dk {
            for b in 0..self.dk {
                let mut s = ZERO;
                for t in 0..self.dt {
                    s += m[(self.flat[a * self.dt + t], self.flat[b * self.dt + t])];
                }
                out[(a, b)] = s;
            }
        }
        out
    }
}

fn check_keep(factors: &FactorStructure, keep: &[usize]) -> Result<()> {
    if keep.is_empty() {
        return Err(Error::EmptySubset);
    }
    for &k in keep {
        factors.check_index(k)?;
    }
    let mut sorted = keep.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != keep.len() {
        return Err(Error::BadBipartition(format!("repeated factor in {keep:?}")));
    }
    if keep.len() == factors.len() {
        return Err(Error::FullSubset);
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVector,
    factors: FactorStructure,
}

impl PureState {
    /// Normalized pure state; the squared norm must be one within `1e-10`.
    pub fn new(amplitudes: CVector, factors: FactorStructure) -> Result<Self> {
        factors.check_len(amplitudes.len())?;
        let n2 = amplitudes.norm_squared();
        if (n2 - 1.0).abs() > DENSITY_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(PureState { amplitudes, factors })
    }

    /// Rescales `amplitudes` to unit norm.
    pub fn normalized(amplitudes: CVector, factors: FactorStructure) -> Result<Self> {
        factors.check_len(amplitudes.len())?;
        let n = amplitudes.norm();
        if n == 0.0 {
            return Err(Error::NotNormalized(0.0));
        }
        Ok(PureState { amplitudes: amplitudes.unscale(n), factors })
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn factors(&self) -> &FactorStructure {
        &self.factors
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.factors.dims.clone();
        dims.extend_from_slice(&other.factors.dims);
        PureState { amplitudes: self.amplitudes.kronecker(&other.amplitudes), factors: FactorStructure { dims } }
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix { matrix: &self.amplitudes * self.amplitudes.adjoint(), factors: self.factors.clone() }
    }

    /// Applies one unitary per factor.
    pub fn apply_local(&self, unitaries: &[CMatrix]) -> PureState {
        let op = local_operator(unitaries);
        PureState { amplitudes: op * &self.amplitudes, factors: self.factors.clone() }
    }

    /// Reduced density operator on the factors in `keep` (not validated).
    pub fn reduced(&self, keep: &[usize]) -> CMatrix {
        Split::new(&self.factors, keep).reduce_outer(&self.amplitudes, &self.amplitudes)
    }
}

pub fn local_operator(unitaries: &[CMatrix]) -> CMatrix {
    unitaries.iter().skip(1).fold(unitaries[0].clone(), |acc, u| acc.kronecker(u))
}

/// Validated density matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
    factors: FactorStructure,
}

/// Checks the three density-matrix invariants and returns a validated matrix or
/// every violation with its measured deviation.
pub fn validate_density(matrix: CMatrix, factors: FactorStructure, tol: f64) -> Result<DensityMatrix> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
    }
    factors.check_len(matrix.nrows())?;
    let mut violations = Vec::new();
    let herm = linalg::hermiticity_deviation(&matrix);
    if herm > tol {
        violations.push(Violation::NonHermitian(herm));
    }
    let tr = matrix.trace();
    let tr_dev = (tr - ONE).norm();
    if tr_dev > tol {
        violations.push(Violation::TraceNotOne(tr_dev));
    }
    let min_eig = linalg::hermitian_eigenvalues(&matrix).last().copied().unwrap_or(0.0);
    if min_eig < -tol {
        violations.push(Violation::NotPositive(min_eig));
    }
    if !violations.is_empty() {
        return Err(Error::InvalidDensity(violations));
    }
    Ok(DensityMatrix { matrix, factors })
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, factors: FactorStructure) -> Result<Self> {
        validate_density(matrix, factors, DENSITY_TOL)
    }

    pub(crate) fn new_unchecked(matrix: CMatrix, factors: FactorStructure) -> Self {
        DensityMatrix { matrix, factors }
    }

    pub fn maximally_mixed(factors: FactorStructure) -> Self {
        let d = factors.total();
        DensityMatrix { matrix: linalg::identity(d).unscale(d as f64), factors }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn factors(&self) -> &FactorStructure {
        &self.factors
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigenvalues(&self.matrix)
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.factors.dims.clone();
        dims.extend_from_slice(&other.factors.dims);
        DensityMatrix { matrix: self.matrix.kronecker(&other.matrix), factors: FactorStructure { dims } }
    }

    /// `U ρ U†` with `U` the tensor product of per-factor unitaries.
    pub fn apply_local(&self, unitaries: &[CMatrix]) -> DensityMatrix {
        let op = local_operator(unitaries);
        DensityMatrix { matrix: &op * &self.matrix * op.adjoint(), factors: self.factors.clone() }
    }

    /// Convex combination `p ρ + (1-p) σ`.
    pub fn mix(&self, other: &DensityMatrix, p: f64) -> DensityMatrix {
        DensityMatrix { matrix: self.matrix.scale(p) + other.matrix.scale(1.0 - p), factors: self.factors.clone() }
    }

    pub fn rank(&self) -> usize {
        let ev = self.eigenvalues();
        let top = ev.first().copied().unwrap_or(0.0);
        ev.iter().filter(|&&l| l > RANK_CUTOFF * top).count()
    }
}

pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    check_keep(&rho.factors, keep)?;
    let split = Split::new(&rho.factors, keep);
    Ok(DensityMatrix { matrix: split.reduce_operator(&rho.matrix), factors: rho.factors.restrict(keep) })
}

/// Transposition on a single factor.
pub fn partial_transpose(rho: &DensityMatrix, subsystem: usize) -> Result<CMatrix> {
    rho.factors.check_index(subsystem)?;
    let f = &rho.factors;
    let n = rho.dim();
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        let di = f.digits(i);
        for j in 0..n {
            let mut dj = f.digits(j);
            let mut dii = di.clone();
            std::mem::swap(&mut dii[subsystem], &mut dj[subsystem]);
            out[(f.flat(&dii), f.flat(&dj))] = rho.matrix[(i, j)];
        }
    }
    Ok(out)
}

/// Peres-Horodecki test. For more than two factors every single-factor
/// transposition is checked and the smallest eigenvalue over all of them is
/// reported.
pub fn is_ppt(rho: &DensityMatrix) -> (bool, f64) {
    let candidates: Vec<usize> = if rho.factors.len() == 2 { vec![1] } else { (0..rho.factors.len()).collect() };
    let min = candidates
        .into_iter()
        .map(|k| {
            let pt = partial_transpose(rho, k).expect("factor index in range");
            linalg::hermitian_eigenvalues(&pt).last().copied().unwrap_or(0.0)
        })
        .fold(f64::INFINITY, f64::min);
    (min >= -DENSITY_TOL, min)
}

pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ.
    rho.matrix.iter().map(|z| z.norm_sqr()).sum()
}

/// `-Σ λ ln λ` with `0 ln 0 = 0`.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues.iter().filter(|&&l| l > 0.0).map(|&l| -l * l.ln()).sum::<f64>().max(0.0)
}

#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    /// Squared Schmidt coefficients, nonincreasing, summing to one.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<CVector>,
    pub right_basis: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// `Σ √λᵢ |uᵢ⟩ ⊗ |vᵢ⟩`, in the ordering (left factors, right factors).
    pub fn reconstruct(&self) -> CVector {
        let dl = self.left_basis.first().map_or(0, |v| v.len());
        let dr = self.right_basis.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(dl * dr);
        for ((l, u), v) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            out += u.kronecker(v).scale(l.max(0.0).sqrt());
        }
        out
    }
}

/// Schmidt decomposition with respect to the split `left | complement`.
pub fn schmidt_decompose(psi: &PureState, left: &[usize]) -> Result<SchmidtDecomposition> {
    match check_keep(&psi.factors, left) {
        Ok(()) => {}
        Err(Error::EmptySubset) | Err(Error::FullSubset) => {
            return Err(Error::BadBipartition("each side needs at least one factor".into()))
        }
        Err(e) => return Err(e),
    }
    let split = Split::new(&psi.factors, left);
    let m = split.matrix(&psi.amplitudes);
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested Vᵀ");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let mut coefficients = Vec::new();
    let mut left_basis = Vec::new();
    let mut right_basis = Vec::new();
    for i in order {
        let s = svd.singular_values[i];
        coefficients.push(s * s);
        left_basis.push(u.column(i).into_owned());
        right_basis.push(vt.row(i).transpose());
    }
    Ok(SchmidtDecomposition { coefficients, left_basis, right_basis })
}

/// Whether `a` majorizes `b` (shorter vector padded with zeros).
pub fn majorizes(a: &[f64], b: &[f64]) -> Result<bool> {
    for v in [a, b] {
        let s: f64 = v.iter().sum();
        if (s - 1.0).abs() > 1e-9 {
            return Err(Error::NotNormalized(s));
        }
    }
    let n = a.len().max(b.len());
    let sorted = |v: &[f64]| {
        let mut s = v.to_vec();
        s.resize(n, 0.0);
        s.sort_by(|x, y| y.total_cmp(x));
        s
    };
    let (sa, sb) = (sorted(a), sorted(b));
    let (mut pa, mut pb) = (0.0, 0.0);
    for k in 0..n {
        pa += sa[k];
        pb += sb[k];
        if pa < pb - 1e-12 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Subnormalized pure states whose projectors sum to a density matrix.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub members: Vec<CVector>,
}

impl Ensemble {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn reconstruct(&self) -> CMatrix {
        let d = self.members.first().map_or(0, |v| v.len());
        self.members.iter().fold(CMatrix::zeros(d, d), |acc, v| acc + v * v.adjoint())
    }

    /// Appends zero vectors up to `cardinality` members.
    pub fn padded(&self, cardinality: usize) -> Ensemble {
        let d = self.members.first().map_or(0, |v| v.len());
        let mut members = self.members.clone();
        while members.len() < cardinality {
            members.push(CVector::zeros(d));
        }
        Ensemble { members }
    }
}

/// Eigenvectors scaled by `√λ`, ordered by decreasing eigenvalue, with
/// eigenvalues below `1e-12 λ_max` dropped.
pub fn eigen_ensemble(rho: &DensityMatrix) -> Ensemble {
    let (vals, vecs) = linalg::hermitian_eigen(&rho.matrix);
    let top = vals.first().copied().unwrap_or(0.0);
    let members = vals
        .iter()
        .enumerate()
        .take_while(|(_, &l)| l > RANK_CUTOFF * top)
        .map(|(i, &l)| vecs.column(i).scale(l.sqrt()))
        .collect();
    Ensemble { members }
}

/// `|φᵢ⟩ = Σⱼ Vᵢⱼ |ψⱼ⟩` for a left-unitary `V` (`V†V = 1`).
pub fn transform_ensemble(e: &Ensemble, v: &CMatrix) -> Result<Ensemble> {
    if v.ncols() != e.len() {
        return Err(Error::DimensionMismatch { expected: e.len(), found: v.ncols() });
    }
    let dev = linalg::max_abs(&(v.adjoint() * v - linalg::identity(v.ncols())));
    if dev > 1e-10 {
        return Err(Error::NotLeftUnitary(dev));
    }
    Ok(transform_unchecked(e, v))
}

pub(crate) fn transform_unchecked(e: &Ensemble, v: &CMatrix) -> Ensemble {
    let d = e.members.first().map_or(0, |m| m.len());
    let psi = CMatrix::from_columns(&e.members);
    let phi = if e.is_empty() { CMatrix::zeros(d, v.nrows()) } else { psi * v.transpose() };
    Ensemble { members: (0..v.nrows()).map(|i| phi.column(i).into_owned()).collect() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BellKind {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// `Σᵢ |ii⟩ / √d`.
pub fn maximally_entangled(d: usize) -> Result<PureState> {
    if d < 2 {
        return Err(Error::BadDimension(format!("d = {d} < 2")));
    }
    let mut v = CVector::zeros(d * d);
    let a = 1.0 / (d as f64).sqrt();
    for i in 0..d {
        v[i * d + i] = c(a, 0.0);
    }
    Ok(PureState { amplitudes: v, factors: FactorStructure { dims: vec![d, d] } })
}

pub fn bell(kind: BellKind) -> PureState {
    let s = FRAC_1_SQRT_2;
    let v = match kind {
        BellKind::PhiPlus => [s, 0.0, 0.0, s],
        BellKind::PhiMinus => [s, 0.0, 0.0, -s],
        BellKind::PsiPlus => [0.0, s, s, 0.0],
        BellKind::PsiMinus => [0.0, s, -s, 0.0],
    };
    PureState { amplitudes: CVector::from_iterator(4, v.iter().map(|&x| c(x, 0.0))), factors: FactorStructure::qubits(2) }
}

pub fn ghz(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::BadDimension(format!("N = {n} < 2")));
    }
    let d = 1usize << n;
    let mut v = CVector::zeros(d);
    v[0] = c(FRAC_1_SQRT_2, 0.0);
    v[d - 1] = c(FRAC_1_SQRT_2, 0.0);
    Ok(PureState { amplitudes: v, factors: FactorStructure::qubits(n) })
}

pub fn w_state(n: usize) -> Result<PureState> {
    if n < 2 {
        return Err(Error::BadDimension(format!("N = {n} < 2")));
    }
    let mut v = CVector::zeros(1 << n);
    let a = 1.0 / (n as f64).sqrt();
    for k in 0..n {
        v[1 << k] = c(a, 0.0);
    }
    Ok(PureState { amplitudes: v, factors: FactorStructure::qubits(n) })
}

/// Computational basis state `|digits⟩`.
pub fn basis_state(factors: FactorStructure, digits: &[usize]) -> PureState {
    let mut v = CVector::zeros(factors.total());
    v[factors.flat(digits)] = ONE;
    PureState { amplitudes: v, factors }
}

/// Hermitian matrix whose independent real parameters are `sin(r)`, `r` a
/// uniform integer in `[0, 10^15)` from [`SplitMix64`] seeded with `seed`.
/// Draw order: row-major over the upper triangle; a diagonal entry takes one
/// draw, an off-diagonal entry takes two (real part, then imaginary part).
pub fn random_hermitian(dim: usize, seed: u64) -> CMatrix {
    let mut rng = SplitMix64::new(seed);
    random_hermitian_with(dim, &mut rng)
}

pub fn random_hermitian_with(dim: usize, rng: &mut SplitMix64) -> CMatrix {
    const RANGE: u64 = 1_000_000_000_000_000;
    let mut draw = || (rng.next_below(RANGE) as f64).sin();
    let mut h = CMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            if i == j {
                h[(i, i)] = c(draw(), 0.0);
            } else {
                let re = draw();
                let im = draw();
                h[(i, j)] = c(re, im);
                h[(j, i)] = c(re, -im);
            }
        }
    }
    h
}

/// Pure state with i.i.d. complex Gaussian amplitudes.
pub fn random_pure(factors: &FactorStructure, rng: &mut SplitMix64) -> PureState {
    let v = CVector::from_fn(factors.total(), |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
    PureState::normalized(v, factors.clone()).expect("nonzero Gaussian vector")
}

/// `G G† / Tr(G G†)` with a complex Gaussian `d × rank` matrix `G`.
pub fn random_density(factors: &FactorStructure, rank: usize, rng: &mut SplitMix64) -> DensityMatrix {
    let d = factors.total();
    let g = CMatrix::from_fn(d, rank, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityMatrix { matrix: m.unscale(tr), factors: factors.clone() }
}

pub fn random_local_unitaries(factors: &FactorStructure, rng: &mut SplitMix64) -> Vec<CMatrix> {
    factors.dims().iter().map(|&d| linalg::random_unitary(d, rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let f = FactorStructure::new(vec![2, 2]).unwrap();
        let rho = validate_density(linalg::identity(4).unscale(4.0), f, 1e-10).unwrap();
        for l in rho.eigenvalues() {
            assert!(close(l, 0.25, 1e-14));
        }
    }

    #[test]
    fn negative_eigenvalue_reported() {
        let f = FactorStructure::new(vec![2]).unwrap();
        let m = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0, 0.0), c(-1e-3, 0.0)])).unscale(1.0 - 1e-3);
        match validate_density(m, f, 1e-10) {
            Err(Error::InvalidDensity(v)) => {
                assert_eq!(v.len(), 1);
                assert!(matches!(v[0], Violation::NotPositive(e) if e < -1e-4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn every_violation_listed() {
        let f = FactorStructure::new(vec![2]).unwrap();
        let m = CMatrix::from_row_slice(2, 2, &[c(1.5, 0.0), c(0.1, 0.0), c(0.3, 0.0), c(-0.2, 0.0)]);
        match validate_density(m, f, 1e-10) {
            Err(Error::InvalidDensity(v)) => assert_eq!(v.len(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dimension_mismatch() {
        let f = FactorStructure::new(vec![2, 3]).unwrap();
        assert!(matches!(
            validate_density(linalg::identity(4), f, 1e-10),
            Err(Error::DimensionMismatch { expected: 6, found: 4 })
        ));
        assert!(FactorStructure::new(vec![2, 1]).is_err());
    }

    #[test]
    fn bell_reduction_is_maximally_mixed() {
        let rho = bell(BellKind::PhiPlus).to_density();
        let r = partial_trace(&rho, &[0]).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - linalg::identity(2).unscale(2.0))) < 1e-15);
        assert!(matches!(partial_trace(&rho, &[]), Err(Error::EmptySubset)));
        assert!(matches!(partial_trace(&rho, &[0, 1]), Err(Error::FullSubset)));
    }

    #[test]
    fn product_state_reduction() {
        let mut g = SplitMix64::new(1);
        let r1 = random_density(&FactorStructure::new(vec![2]).unwrap(), 2, &mut g);
        let r2 = random_density(&FactorStructure::new(vec![3]).unwrap(), 3, &mut g);
        let prod = r1.tensor(&r2);
        assert!(linalg::max_abs(&(partial_trace(&prod, &[0]).unwrap().matrix() - r1.matrix())) < 1e-14);
        assert!(linalg::max_abs(&(partial_trace(&prod, &[1]).unwrap().matrix() - r2.matrix())) < 1e-14);
    }

    #[test]
    fn complementary_reductions_share_spectrum() {
        let mut g = SplitMix64::new(2);
        let psi = random_pure(&FactorStructure::qubits(3), &mut g);
        let rho = psi.to_density();
        let a = partial_trace(&rho, &[0, 1]).unwrap().eigenvalues();
        let b = partial_trace(&rho, &[2]).unwrap().eigenvalues();
        for k in 0..4 {
            let expected = if k < 2 { b[k] } else { 0.0 };
            assert!(close(a[k], expected, 1e-9));
        }
    }

    #[test]
    fn singlet_partial_transpose() {
        let rho = bell(BellKind::PsiMinus).to_density();
        let pt = partial_transpose(&rho, 1).unwrap();
        let ev = linalg::hermitian_eigenvalues(&pt);
        assert!(close(*ev.last().unwrap(), -0.5, 1e-12));
        assert!(linalg::hermiticity_deviation(&pt) < 1e-15);
        assert!(partial_transpose(&rho, 2).is_err());
        let (ppt, _) = is_ppt(&DensityMatrix::maximally_mixed(FactorStructure::qubits(2)));
        assert!(ppt);
    }

    #[test]
    fn purity_and_entropy() {
        let psi = bell(BellKind::PsiPlus).to_density();
        assert!(close(purity(&psi), 1.0, 1e-14));
        assert!(close(von_neumann_entropy(&psi), 0.0, 1e-12));
        let mm = DensityMatrix::maximally_mixed(FactorStructure::new(vec![3, 2]).unwrap());
        assert!(close(purity(&mm), 1.0 / 6.0, 1e-14));
        assert!(close(von_neumann_entropy(&mm), 6f64.ln(), 1e-12));
        let red = partial_trace(&maximally_entangled(3).unwrap().to_density(), &[0]).unwrap();
        assert!(close(von_neumann_entropy(&red), 3f64.ln(), 1e-12));
    }

    #[test]
    fn schmidt_examples() {
        let f = FactorStructure::new(vec![2, 3]).unwrap();
        let prod = basis_state(f.clone(), &[1, 2]);
        let s = schmidt_decompose(&prod, &[0]).unwrap();
        assert!(close(s.coefficients[0], 1.0, 1e-14));
        assert!(s.coefficients[1..].iter().all(|&l| l.abs() < 1e-14));
        let me = schmidt_decompose(&maximally_entangled(4).unwrap(), &[0]).unwrap();
        assert!(me.coefficients.iter().all(|&l| close(l, 0.25, 1e-12)));
        let mut g = SplitMix64::new(5);
        let psi = random_pure(&f, &mut g);
        let s = schmidt_decompose(&psi, &[0]).unwrap();
        let ev = partial_trace(&psi.to_density(), &[0]).unwrap().eigenvalues();
        for (a, b) in s.coefficients.iter().zip(&ev) {
            assert!(close(*a, *b, 1e-12));
        }
        assert!((s.reconstruct() - psi.amplitudes()).norm() < 1e-9);
        assert!(matches!(schmidt_decompose(&psi, &[0, 1]), Err(Error::BadBipartition(_))));
    }

    #[test]
    fn majorization_examples() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(!majorizes(&[0.6, 0.4], &[0.7, 0.3]).unwrap());
        assert!(majorizes(&[0.7, 0.2, 0.1], &[1.0 / 3.0; 3]).unwrap());
        assert!(majorizes(&[1.0], &[0.5, 0.5]).unwrap());
        assert!(matches!(majorizes(&[0.5, 0.4], &[1.0]), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn eigen_ensembles() {
        let pure = bell(BellKind::PhiMinus).to_density();
        assert_eq!(eigen_ensemble(&pure).len(), 1);
        let mm = DensityMatrix::maximally_mixed(FactorStructure::new(vec![2]).unwrap());
        let e = eigen_ensemble(&mm);
        assert_eq!(e.len(), 2);
        for m in &e.members {
            assert!(close(m.norm(), FRAC_1_SQRT_2, 1e-14));
        }
        let mut g = SplitMix64::new(8);
        let rho = random_density(&FactorStructure::new(vec![3, 3]).unwrap(), 4, &mut g);
        let e = eigen_ensemble(&rho);
        assert_eq!(e.len(), 4);
        assert!(linalg::max_abs(&(e.reconstruct() - rho.matrix())) < 1e-10);
        let norms: Vec<f64> = e.members.iter().map(|m| m.norm()).collect();
        assert!(norms.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn ensemble_transforms() {
        let mut g = SplitMix64::new(9);
        let rho = random_density(&FactorStructure::new(vec![3, 3]).unwrap(), 3, &mut g);
        let e = eigen_ensemble(&rho);
        let same = transform_ensemble(&e, &linalg::identity(3)).unwrap();
        for (a, b) in same.members.iter().zip(&e.members) {
            assert!((a - b).norm() < 1e-15);
        }
        let u = linalg::random_unitary(9, &mut g);
        let v = u.columns(0, 3).into_owned();
        let t = transform_ensemble(&e, &v).unwrap();
        assert_eq!(t.len(), 9);
        assert!(linalg::max_abs(&(t.reconstruct() - rho.matrix())) < 1e-10);
        assert!(matches!(transform_ensemble(&e, &v.scale(2.0)), Err(Error::NotLeftUnitary(_))));

        // Hadamard-type mixing of a rank-one ensemble padded with a zero vector.
        let pure = eigen_ensemble(&bell(BellKind::PsiPlus).to_density()).padded(2);
        let s = FRAC_1_SQRT_2;
        let h = CMatrix::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
        let mixed = transform_ensemble(&pure, &h).unwrap();
        assert_eq!(mixed.len(), 2);
        assert!(linalg::max_abs(&(mixed.reconstruct() - bell(BellKind::PsiPlus).to_density().matrix())) < 1e-14);
    }

    #[test]
    fn named_states() {
        let g3 = ghz(3).unwrap();
        let a = g3.amplitudes();
        assert!(close(a[0].re, FRAC_1_SQRT_2, 1e-15) && close(a[7].re, FRAC_1_SQRT_2, 1e-15));
        assert!(close(a.norm(), 1.0, 1e-15));
        let w = w_state(3).unwrap();
        for idx in [1, 2, 4] {
            assert!(close(w.amplitudes()[idx].re, 1.0 / 3f64.sqrt(), 1e-15));
        }
        assert!(close(w.amplitudes().norm(), 1.0, 1e-15));
        assert!((maximally_entangled(2).unwrap().amplitudes() - bell(BellKind::PhiPlus).amplitudes()).norm() < 1e-15);
        assert!(ghz(1).is_err() && w_state(0).is_err() && maximally_entangled(1).is_err());
    }

    #[test]
    fn random_hermitian_contract() {
        let a = random_hermitian(5, 77);
        let b = random_hermitian(5, 77);
        assert_eq!(a, b);
        assert_eq!(linalg::hermiticity_deviation(&a), 0.0);
        assert_ne!(a, random_hermitian(5, 78));
        // |sin| of a uniform phase has mean 2/π.
        let mut g = SplitMix64::new(12345);
        let n = 10_000;
        let mut sum = 0.0;
        let mut count = 0;
        while count < n {
            let h = random_hermitian_with(10, &mut g);
            for i in 0..10 {
                for j in i..10 {
                    if count < n {
                        sum += h[(i, j)].re.abs();
                        count += 1;
                    }
                }
            }
        }
        let mean = sum / n as f64;
        let sd = (0.5 - 4.0 / std::f64::consts::PI.powi(2)).sqrt() / (n as f64).sqrt();
        assert!((mean - 2.0 / std::f64::consts::PI).abs() < 3.0 * sd, "mean {mean}");
    }
}
