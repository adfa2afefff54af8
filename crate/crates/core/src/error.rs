use std::fmt;

use thiserror::Error;

/// A single violated density-matrix invariant together with the measured deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Violation {
    /// Largest entrywise modulus of `M - M†`.
    NonHermitian(f64),
    /// `|Tr M - 1|`.
    TraceNotOne(f64),
    /// The most negative eigenvalue.
    NotPositive(f64),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonHermitian(d) => write!(f, "not hermitian (max |M - M†| = {d:.3e})"),
            Violation::TraceNotOne(d) => write!(f, "trace differs from one by {d:.3e}"),
            Violation::NotPositive(e) => write!(f, "negative eigenvalue {e:.3e}"),
        }
    }
}

fn list(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid density matrix: {}", list(.0))]
    InvalidDensity(Vec<Violation>),
    #[error("invalid factor structure: {0}")]
    BadFactors(String),
    #[error("subsystem selection is empty")]
    EmptySubset,
    #[error("subsystem selection covers every factor")]
    FullSubset,
    #[error("factor index {index} out of range for {count} factors")]
    BadIndex { index: usize, count: usize },
    #[error("invalid bipartition: {0}")]
    BadBipartition(String),
    #[error("probability vector not normalized (sum = {0})")]
    NotNormalized(f64),
    #[error("matrix is not left-unitary (max |V†V - 1| = {0:.3e})")]
    NotLeftUnitary(f64),
    #[error("invalid dimension: {0}")]
    BadDimension(String),
    #[error("operation requires dims {expected:?}, found {found:?}")]
    WrongDims { expected: Vec<usize>, found: Vec<usize> },
    #[error("value {value} outside [{min}, {max}]")]
    OutOfRange { value: f64, min: f64, max: f64 },
    #[error("matrix is not symmetric (max |M - Mᵀ| = {0:.3e})")]
    NotSymmetric(f64),
    #[error("operator does not define a conjugation: {0}")]
    NotConjugation(String),
    #[error("sign pattern contains no antisymmetric projector")]
    AllSymmetricPattern,
    #[error("invalid projector mix: {0}")]
    BadMix(String),
    #[error("empty T-matrix family")]
    EmptyFamily,
    #[error("dominant eigenvector is separable (A_11^11 = {0:.3e})")]
    SeparableDominantEigenvector(f64),
    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionTooLarge { dim: usize, cap: usize },
    #[error("evolved state violates density invariants at t = {time}: {}", list(.violations))]
    ValidationDrift { time: f64, violations: Vec<Violation> },
    #[error("no exact closed form: {0}")]
    UnsupportedExactForm(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("exponential fit diverged: {0}")]
    FitDiverged(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True for errors that describe an invalid input state rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidDensity(_)
                | Error::BadFactors(_)
                | Error::EmptySubset
                | Error::FullSubset
                | Error::BadIndex { .. }
                | Error::BadBipartition(_)
                | Error::NotNormalized(_)
                | Error::NotLeftUnitary(_)
                | Error::BadDimension(_)
                | Error::WrongDims { .. }
                | Error::OutOfRange { .. }
                | Error::NotSymmetric(_)
                | Error::NotConjugation(_)
                | Error::AllSymmetricPattern
                | Error::BadMix(_)
                | Error::DimensionTooLarge { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
