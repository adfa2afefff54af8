//! JSON state files. Complex numbers are `[re, im]` pairs, matrices row-major:
//!
//! ```text
//! {"dims": [2, 2], "matrix": [[[re, im], ...], ...]}
//! {"dims": [2, 2], "vector": [[re, im], ...]}
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, CVector};
use crate::state::{DensityMatrix, FactorStructure, PureState};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateFile {
    pub dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<[f64; 2]>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vector: Option<Vec<[f64; 2]>>,
}

/// Either kind of state read from a file.
#[derive(Debug, Clone)]
pub enum AnyState {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl AnyState {
    pub fn to_density(&self) -> DensityMatrix {
        match self {
            AnyState::Pure(p) => p.to_density(),
            AnyState::Mixed(m) => m.clone(),
        }
    }

    pub fn factors(&self) -> &FactorStructure {
        match self {
            AnyState::Pure(p) => p.factors(),
            AnyState::Mixed(m) => m.factors(),
        }
    }
}

pub fn matrix_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect()
}

pub fn vector_to_pairs(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

impl StateFile {
    pub fn from_density(rho: &DensityMatrix) -> Self {
        StateFile { dims: rho.factors().dims().to_vec(), matrix: Some(matrix_to_pairs(rho.matrix())), vector: None }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        StateFile { dims: psi.factors().dims().to_vec(), matrix: None, vector: Some(vector_to_pairs(psi.amplitudes())) }
    }

    pub fn into_state(self) -> Result<AnyState> {
        let factors = FactorStructure::new(self.dims)?;
        match (self.matrix, self.vector) {
            (Some(rows), None) => {
                let n = rows.len();
                if let Some(r) = rows.iter().find(|r| r.len() != n) {
                    return Err(Error::DimensionMismatch { expected: n, found: r.len() });
                }
                let m = CMatrix::from_fn(n, n, |i, j| c(rows[i][j][0], rows[i][j][1]));
                Ok(AnyState::Mixed(DensityMatrix::new(m, factors)?))
            }
            (None, Some(v)) => {
                let v = CVector::from_iterator(v.len(), v.iter().map(|p| c(p[0], p[1])));
                Ok(AnyState::Pure(PureState::new(v, factors)?))
            }
            _ => Err(Error::BadDimension("state file needs exactly one of \"matrix\" or \"vector\"".into())),
        }
    }
}

pub fn parse_state(json: &str) -> std::result::Result<Result<AnyState>, serde_json::Error> {
    let file: StateFile = serde_json::from_str(json)?;
    Ok(file.into_state())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{bell, BellKind};

    #[test]
    fn round_trip() {
        let rho = bell(BellKind::PsiMinus).to_density();
        let text = serde_json::to_string(&StateFile::from_density(&rho)).unwrap();
        match parse_state(&text).unwrap().unwrap() {
            AnyState::Mixed(r) => assert_eq!(r.matrix(), rho.matrix()),
            _ => panic!("expected mixed"),
        }
        let psi = bell(BellKind::PhiPlus);
        let text = serde_json::to_string(&StateFile::from_pure(&psi)).unwrap();
        assert!(text.contains("\"vector\""));
        assert!(matches!(parse_state(&text).unwrap().unwrap(), AnyState::Pure(_)));
    }

    #[test]
    fn invalid_states_are_rejected() {
        let bad = r#"{"dims":[2],"matrix":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(matches!(parse_state(bad).unwrap(), Err(Error::InvalidDensity(_))));
        assert!(parse_state("{\"dims\":").is_err());
        let both = r#"{"dims":[2]}"#;
        assert!(parse_state(both).unwrap().is_err());
    }
}
