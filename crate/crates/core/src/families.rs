//! Horodecki families of bound-entangled (positive partial transpose) states.
//!
//! Matrices are transcribed row by row from their published layouts.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix};
use crate::state::{DensityMatrix, FactorStructure};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Hor3x3,
    Hor4x2,
    Hor3x3Beta,
}

impl FamilyId {
    /// Closed parameter domain.
    pub fn domain(self) -> (f64, f64) {
        match self {
            FamilyId::Hor3x3 | FamilyId::Hor4x2 => (0.0, 1.0),
            FamilyId::Hor3x3Beta => (-2.5, 2.5),
        }
    }

    pub fn build(self, a: f64) -> Result<DensityMatrix> {
        match self {
            FamilyId::Hor3x3 => horodecki_3x3(a),
            FamilyId::Hor4x2 => horodecki_4x2(a),
            FamilyId::Hor3x3Beta => horodecki_3x3_beta(a),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hor33" | "hor3x3" => Ok(FamilyId::Hor3x3),
            "hor24" | "hor42" | "hor4x2" => Ok(FamilyId::Hor4x2),
            "horror" | "hor3x3beta" => Ok(FamilyId::Hor3x3Beta),
            other => Err(Error::BadDimension(format!("unknown family {other:?}"))),
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyId::Hor3x3 => "hor33",
            FamilyId::Hor4x2 => "hor24",
            FamilyId::Hor3x3Beta => "horror",
        })
    }
}

fn check(id: FamilyId, a: f64) -> Result<()> {
    let (min, max) = id.domain();
    if !(min..=max).contains(&a) {
        return Err(Error::OutOfRange { value: a, min, max });
    }
    Ok(())
}

fn from_rows<const N: usize>(rows: &[[f64; N]; N], norm: f64, dims: Vec<usize>) -> DensityMatrix {
    let m = CMatrix::from_fn(N, N, |i, j| c(rows[i][j] / norm, 0.0));
    DensityMatrix::new_unchecked(m, FactorStructure::new(dims).expect("valid dims"))
}

/// Spin-1 pair, `a ∈ [0, 1]`.
pub fn horodecki_3x3(a: f64) -> Result<DensityMatrix> {
    check(FamilyId::Hor3x3, a)?;
    let b = (1.0 + a) / 2.0;
    let g = (1.0 - a * a).sqrt() / 2.0;
    let rows = [
        [a, 0., 0., 0., a, 0., 0., 0., a],
        [0., a, 0., 0., 0., 0., 0., 0., 0.],
        [0., 0., a, 0., 0., 0., 0., 0., 0.],
        [0., 0., 0., a, 0., 0., 0., 0., 0.],
        [a, 0., 0., 0., a, 0., 0., 0., a],
        [0., 0., 0., 0., 0., a, 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., b, 0., g],
        [0., 0., 0., 0., 0., 0., 0., a, 0.],
        [a, 0., 0., 0., a, 0., g, 0., b],
    ];
    Ok(from_rows(&rows, 1.0 + 8.0 * a, vec![3, 3]))
}

/// Qubit-ququart family, `a ∈ [0, 1]`. The printed layout is positive under
/// partial transposition with the qubit as the first (most significant)
/// factor, so the state carries dims `[2, 4]`.
pub fn horodecki_4x2(a: f64) -> Result<DensityMatrix> {
    check(FamilyId::Hor4x2, a)?;
    let b = (1.0 + a) / 2.0;
    let g = (1.0 - a * a).sqrt() / 2.0;
    let rows = [
        [a, 0., 0., 0., 0., a, 0., 0.],
        [0., a, 0., 0., 0., 0., a, 0.],
        [0., 0., a, 0., 0., 0., 0., a],
        [0., 0., 0., a, 0., 0., 0., 0.],
        [0., 0., 0., 0., b, 0., 0., g],
        [a, 0., 0., 0., 0., a, 0., 0.],
        [0., a, 0., 0., 0., 0., a, 0.],
        [0., 0., a, 0., g, 0., 0., b],
    ];
    Ok(from_rows(&rows, 1.0 + 7.0 * a, vec![2, 4]))
}

/// Qutrit pair with `β± = 5/2 ± a`, `a ∈ [−5/2, 5/2]`.
pub fn horodecki_3x3_beta(a: f64) -> Result<DensityMatrix> {
    check(FamilyId::Hor3x3Beta, a)?;
    let (bp, bm) = (2.5 + a, 2.5 - a);
    let rows = [
        [2., 0., 0., 0., 2., 0., 0., 0., 2.],
        [0., bm, 0., 0., 0., 0., 0., 0., 0.],
        [0., 0., bp, 0., 0., 0., 0., 0., 0.],
        [0., 0., 0., bp, 0., 0., 0., 0., 0.],
        [2., 0., 0., 0., 2., 0., 0., 0., 2.],
        [0., 0., 0., 0., 0., bm, 0., 0., 0.],
        [0., 0., 0., 0., 0., 0., bm, 0., 0.],
        [0., 0., 0., 0., 0., 0., 0., bp, 0.],
        [2., 0., 0., 0., 2., 0., 0., 0., 2.],
    ];
    Ok(from_rows(&rows, 21.0, vec![3, 3]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::state::{is_ppt, validate_density};

    fn entries(rho: &DensityMatrix) -> Vec<Vec<f64>> {
        let m = rho.matrix();
        assert!(m.iter().all(|z| z.im == 0.0));
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)].re).collect()).collect()
    }

    #[test]
    fn hor33_pinned_at_half() {
        // a = 0.5: norm 5, β = 0.75, γ = √0.75 / 2.
        let g = 0.75f64.sqrt() / 2.0 / 5.0;
        let e = entries(&horodecki_3x3(0.5).unwrap());
        let expected: Vec<(usize, usize, f64)> = vec![
            (0, 0, 0.1), (0, 4, 0.1), (0, 8, 0.1), (1, 1, 0.1), (2, 2, 0.1), (3, 3, 0.1),
            (4, 0, 0.1), (4, 4, 0.1), (4, 8, 0.1), (5, 5, 0.1), (6, 6, 0.15), (6, 8, g),
            (7, 7, 0.1), (8, 0, 0.1), (8, 4, 0.1), (8, 6, g), (8, 8, 0.15),
        ];
        let mut count = 0;
        for (i, row) in e.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                match expected.iter().find(|&&(r, s, _)| r == i && s == j) {
                    Some(&(_, _, x)) => {
                        assert!((v - x).abs() < 1e-15, "({i},{j})");
                        count += 1;
                    }
                    None => assert_eq!(v, 0.0, "({i},{j})"),
                }
            }
        }
        assert_eq!(count, expected.len());
    }

    #[test]
    fn hor24_pinned_at_half() {
        // a = 0.5: norm 4.5, β = 0.75, γ = √0.75 / 2.
        let (a, b, g) = (0.5 / 4.5, 0.75 / 4.5, 0.75f64.sqrt() / 2.0 / 4.5);
        let e = entries(&horodecki_4x2(0.5).unwrap());
        let expected: Vec<(usize, usize, f64)> = vec![
            (0, 0, a), (0, 5, a), (1, 1, a), (1, 6, a), (2, 2, a), (2, 7, a), (3, 3, a),
            (4, 4, b), (4, 7, g), (5, 0, a), (5, 5, a), (6, 1, a), (6, 6, a),
            (7, 2, a), (7, 4, g), (7, 7, b),
        ];
        for (i, row) in e.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let x = expected.iter().find(|&&(r, s, _)| r == i && s == j).map_or(0.0, |t| t.2);
                assert!((v - x).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn horror_pinned_at_one() {
        let e = entries(&horodecki_3x3_beta(1.0).unwrap());
        let diag = [2.0, 1.5, 3.5, 3.5, 2.0, 1.5, 1.5, 3.5, 2.0];
        for (i, row) in e.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                let x = if i == j {
                    diag[i]
                } else if [0, 4, 8].contains(&i) && [0, 4, 8].contains(&j) {
                    2.0
                } else {
                    0.0
                };
                assert!((v - x / 21.0).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn endpoints_and_domain() {
        let r = horodecki_3x3(1.0).unwrap();
        let m = r.matrix();
        assert!((m[(6, 6)].re - 1.0 / 9.0).abs() < 1e-15);
        assert_eq!(m[(6, 8)].re, 0.0);
        assert!(matches!(horodecki_3x3(1.1), Err(Error::OutOfRange { .. })));
        assert!(horodecki_4x2(-0.1).is_err());
        assert!(horodecki_3x3_beta(2.6).is_err());
        assert!(horodecki_3x3_beta(-2.5).is_ok());
    }

    #[test]
    fn all_valid_at_tight_tolerance() {
        for k in 0..=50 {
            let t = k as f64 / 50.0;
            for id in [FamilyId::Hor3x3, FamilyId::Hor4x2, FamilyId::Hor3x3Beta] {
                let (lo, hi) = id.domain();
                let rho = id.build(lo + t * (hi - lo)).unwrap();
                validate_density(rho.matrix().clone(), rho.factors().clone(), 1e-12).unwrap();
            }
        }
    }

    #[test]
    fn ppt_regions() {
        for k in 0..50 {
            let a = (k as f64 + 0.5) / 50.0;
            assert!(is_ppt(&horodecki_3x3(a).unwrap()).0, "hor33 a = {a}");
            assert!(is_ppt(&horodecki_4x2(a).unwrap()).0, "hor24 a = {a}");
            let b = 2.5 * a;
            let (ppt, _) = is_ppt(&horodecki_3x3_beta(b).unwrap());
            assert_eq!(ppt, b <= 1.5, "horror a = {b}");
        }
        assert!(!is_ppt(&horodecki_3x3_beta(2.0).unwrap()).0);
        assert!(is_ppt(&horodecki_3x3_beta(1.0).unwrap()).0);
    }

    #[test]
    fn sign_flip_swaps_subsystems() {
        for a in [0.3, 1.2, 2.0] {
            let p = linalg::hermitian_eigenvalues(horodecki_3x3_beta(a).unwrap().matrix());
            let m = linalg::hermitian_eigenvalues(horodecki_3x3_beta(-a).unwrap().matrix());
            for (x, y) in p.iter().zip(&m) {
                assert!((x - y).abs() < 1e-14);
            }
            // Explicit swap of the two qutrits maps a to −a.
            let swap = CMatrix::from_fn(9, 9, |i, j| if i == (j % 3) * 3 + j / 3 { c(1.0, 0.0) } else { c(0.0, 0.0) });
            let swapped = &swap * horodecki_3x3_beta(a).unwrap().matrix() * swap.transpose();
            assert!(linalg::max_abs(&(swapped - horodecki_3x3_beta(-a).unwrap().matrix())) < 1e-15);
        }
    }
}
