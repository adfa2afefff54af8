//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::rng::SplitMix64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Largest entrywise modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

pub fn symmetry_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i + 1..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)]).norm());
        }
    }
    dev
}

pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn symmetrize(m: &CMatrix) -> CMatrix {
    (m + m.transpose()).scale(0.5)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues in decreasing order.
/// Column `i` of the returned matrix is the eigenvector of eigenvalue `i`.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let eig = SymmetricEigen::new(hermitize(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, col| eig.eigenvectors[(r, order[col])]);
    (values, vectors)
}

pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 {
        return Vec::new();
    }
    let mut v: Vec<f64> = SymmetricEigen::new(hermitize(m)).eigenvalues.iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Singular values in decreasing order.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return vec![m[(0, 0)].norm()];
    }
    let mut v: Vec<f64> = m.clone().singular_values().iter().copied().collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// `σ₁ - Σ_{i>1} σᵢ` for singular values sorted in decreasing order.
pub fn singular_gap(sv: &[f64]) -> f64 {
    match sv.split_first() {
        Some((first, rest)) => first - rest.iter().sum::<f64>(),
        None => 0.0,
    }
}

/// Takagi factorization of a complex symmetric matrix: returns a unitary `U` and
/// nonnegative `σ` (decreasing) with `U τ Uᵀ = diag(σ)`.
///
/// Uses the real symmetric embedding `[[Re τ, Im τ], [Im τ, -Re τ]]`, whose
/// eigenpairs `(σ, [a; b])` with `σ > 0` give Takagi vectors `q = a + i b`
/// satisfying `τ q̄ = σ q`. Null directions are completed by Gram-Schmidt.
pub fn takagi(tau: &CMatrix) -> (CMatrix, Vec<f64>) {
    let n = tau.nrows();
    let sym = (tau + tau.transpose()).scale(0.5);
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = sym[(i, j)];
            big[(i, j)] = z.re;
            big[(i, j + n)] = z.im;
            big[(i + n, j)] = z.im;
            big[(i + n, j + n)] = -z.re;
        }
    }
    let eig = SymmetricEigen::new(big);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let cutoff = 1e-12 * scale.max(f64::MIN_POSITIVE);

    let mut q: Vec<CVector> = Vec::with_capacity(n);
    let mut sigma = Vec::with_capacity(n);
    for &k in order.iter().take(n) {
        let s = eig.eigenvalues[k];
        if s <= cutoff {
            break;
        }
        let v = CVector::from_fn(n, |r, _| c(eig.eigenvectors[(r, k)], eig.eigenvectors[(r + n, k)]));
        q.push(v.unscale(v.norm()));
        sigma.push(s);
    }
    // Complete to a unitary basis; any vector orthogonal to the Takagi vectors
    // of nonzero σ satisfies τ q̄ = 0.
    let mut e = 0;
    while q.len() < n {
        let mut v = CVector::zeros(n);
        v[e % n] = ONE;
        e += 1;
        for _ in 0..2 {
            for u in &q {
                let p = u.dotc(&v);
                v -= u * p;
            }
        }
        let nv = v.norm();
        if nv > 1e-6 {
            q.push(v.unscale(nv));
            sigma.push(0.0);
        }
    }
    let qm = CMatrix::from_columns(&q);
    // τ = Q diag(σ) Qᵀ  =>  U = Q†.
    (qm.adjoint(), sigma)
}

/// Extends the orthonormal columns of `v` (zero-padded to `k` rows) to a
/// `k × k` unitary.
pub fn complete_unitary(v: &CMatrix, k: usize) -> CMatrix {
    assert!(v.nrows() <= k && v.ncols() <= k);
    let mut cols: Vec<CVector> = (0..v.ncols())
        .map(|j| CVector::from_fn(k, |i, _| if i < v.nrows() { v[(i, j)] } else { ZERO }))
        .collect();
    let mut e = 0;
    while cols.len() < k {
        let mut w = CVector::zeros(k);
        w[e] = ONE;
        e += 1;
        for _ in 0..2 {
            for u in &cols {
                let p = u.dotc(&w);
                w -= u * p;
            }
        }
        let nw = w.norm();
        if nw > 1e-6 {
            cols.push(w.unscale(nw));
        }
    }
    CMatrix::from_columns(&cols)
}

/// `exp(-i ε H)` for Hermitian `H` given its eigen-decomposition.
pub fn unitary_step(vals: &[f64], vecs: &CMatrix, eps: f64) -> CMatrix {
    let phases = CVector::from_iterator(vals.len(), vals.iter().map(|&l| C64::from_polar(1.0, -eps * l)));
    let mut scaled = vecs.clone();
    for (j, p) in phases.iter().enumerate() {
        for z in scaled.column_mut(j).iter_mut() {
            *z *= p;
        }
    }
    scaled * vecs.adjoint()
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Square Sylvester-Hadamard matrix of order `2^k` with entries ±1.
pub fn sylvester_hadamard(k: u32) -> DMatrix<f64> {
    let mut h = DMatrix::from_element(1, 1, 1.0);
    for _ in 0..k {
        let n = h.nrows();
        let mut next = DMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let x = h[(i, j)];
                next[(i, j)] = x;
                next[(i, j + n)] = x;
                next[(i + n, j)] = x;
                next[(i + n, j + n)] = -x;
            }
        }
        h = next;
    }
    h
}

/// Haar-random unitary via QR of a complex Ginibre matrix with phase fixing.
pub fn random_unitary(n: usize, rng: &mut SplitMix64) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let ph = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    q
}

pub fn random_hermitian_gaussian(n: usize, rng: &mut SplitMix64) -> CMatrix {
    let g = CMatrix::from_fn(n, n, |_, _| c(rng.next_gaussian(), rng.next_gaussian()));
    hermitize(&g)
}

/// Dense product that routes large complex products through four real GEMMs.
pub fn matmul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    if a.nrows() * a.ncols() * b.ncols() < 64 * 64 * 64 {
        return a * b;
    }
    let ar = a.map(|z| z.re);
    let ai = a.map(|z| z.im);
    let br = b.map(|z| z.re);
    let bi = b.map(|z| z.im);
    let re = &ar * &br - &ai * &bi;
    let im = &ar * &bi + &ai * &br;
    CMatrix::from_fn(a.nrows(), b.ncols(), |i, j| c(re[(i, j)], im[(i, j)]))
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.539398330063230e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA13: f64 = 5.371920351148152;

fn pade_coeffs(m: usize) -> Vec<f64> {
    match m {
        3 => vec![120.0, 60.0, 12.0, 1.0],
        5 => vec![30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0],
        7 => vec![17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0],
        9 => vec![
            17643225600.0,
            8821612800.0,
            2075673600.0,
            302702400.0,
            30270240.0,
            2162160.0,
            110880.0,
            3960.0,
            90.0,
            1.0,
        ],
        _ => PADE13.to_vec(),
    }
}

fn pade_solve(u: CMatrix, v: CMatrix) -> CMatrix {
    let p = &v + &u;
    let q = &v - &u;
    q.lu().solve(&p).expect("Padé denominator is singular")
}

fn pade_low(a: &CMatrix, m: usize) -> CMatrix {
    let n = a.nrows();
    let b = pade_coeffs(m);
    let id = identity(n);
    let a2 = matmul(a, a);
    let mut powers = vec![id.clone(), a2.clone()];
    for _ in 2..=m / 2 {
        let last = powers.last().unwrap().clone();
        powers.push(matmul(&last, &a2));
    }
    let mut u_inner = CMatrix::zeros(n, n);
    let mut v = CMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        u_inner += p.scale(b[2 * k + 1]);
        v += p.scale(b[2 * k]);
    }
    let u = matmul(a, &u_inner);
    pade_solve(u, v)
}

fn pade13(a: &CMatrix) -> CMatrix {
    let b = &PADE13;
    let n = a.nrows();
    let id = identity(n);
    let a2 = matmul(a, a);
    let a4 = matmul(&a2, &a2);
    let a6 = matmul(&a4, &a2);
    let u_inner = matmul(&a6, &(a6.scale(b[13]) + a4.scale(b[11]) + a2.scale(b[9])))
        + a6.scale(b[7])
        + a4.scale(b[5])
        + a2.scale(b[3])
        + id.scale(b[1]);
    let u = matmul(a, &u_inner);
    let v = matmul(&a6, &(a6.scale(b[12]) + a4.scale(b[10]) + a2.scale(b[8])))
        + a6.scale(b[6])
        + a4.scale(b[4])
        + a2.scale(b[2])
        + id.scale(b[0]);
    pade_solve(u, v)
}

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn expm(a: &CMatrix) -> CMatrix {
    expm_with_extra_squarings(a, 0)
}

/// As [`expm`], but scales by `2^extra` more before squaring back. Used to
/// check that results are insensitive to the scaling parameter.
pub fn expm_with_extra_squarings(a: &CMatrix, extra: u32) -> CMatrix {
    let n = a.nrows();
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let norm = one_norm(a);
    if extra == 0 {
        for &(m, theta) in THETA.iter() {
            if norm <= theta {
                return pade_low(a, m);
            }
        }
    }
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as u32
    } else {
        0
    } + extra;
    let scaled = a.unscale((1u64 << s) as f64);
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = matmul(&r, &r);
    }
    r
}
