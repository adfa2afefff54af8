use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMatrix, ONE, ZERO};
use crate::state::FactorStructure;

/// Default cap on the Hilbert-space dimension of a Liouvillian (`d ≤ 64`).
pub const DEFAULT_DIM_CAP: usize = 64;

/// Per-qubit reservoir. Rates are in inverse time units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ChannelKind {
    ZeroTemperature { gamma: f64 },
    Thermal { gamma: f64, nbar: f64 },
    /// `Γ n̄ → Γ̃` with `n̄ → ∞`: decay and excitation at the same rate.
    InfiniteTemperature { gamma: f64 },
    Dephasing { gamma: f64 },
}

/// `σ₋ = |0⟩⟨1|`, with `|1⟩` the excited level.
pub fn sigma_minus() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ZERO, ZERO])
}

pub fn sigma_plus() -> CMatrix {
    sigma_minus().transpose()
}

impl ChannelKind {
    pub fn validate(&self) -> Result<()> {
        let rates: &[f64] = match self {
            ChannelKind::ZeroTemperature { gamma }
            | ChannelKind::InfiniteTemperature { gamma }
            | ChannelKind::Dephasing { gamma } => &[*gamma],
            ChannelKind::Thermal { gamma, nbar } => &[*gamma, *nbar],
        };
        for &r in rates {
            if !(r >= 0.0 && r.is_finite()) {
                return Err(Error::OutOfRange { value: r, min: 0.0, max: f64::INFINITY });
            }
        }
        Ok(())
    }

    /// Overall rate `Γ` (or `Γ̃`).
    pub fn gamma(&self) -> f64 {
        match *self {
            ChannelKind::ZeroTemperature { gamma }
            | ChannelKind::Thermal { gamma, .. }
            | ChannelKind::InfiniteTemperature { gamma }
            | ChannelKind::Dephasing { gamma } => gamma,
        }
    }

    /// `(rate, operator)` pairs for one qubit.
    pub fn jump_operators(&self) -> Vec<(f64, CMatrix)> {
        match *self {
            ChannelKind::ZeroTemperature { gamma } => vec![(gamma, sigma_minus())],
            ChannelKind::Thermal { gamma, nbar } => {
                vec![(gamma * (nbar + 1.0), sigma_minus()), (gamma * nbar, sigma_plus())]
            }
            ChannelKind::InfiniteTemperature { gamma } => vec![(gamma, sigma_minus()), (gamma, sigma_plus())],
            ChannelKind::Dephasing { gamma } => vec![(gamma, sigma_plus() * sigma_minus())],
        }
    }
}

/// Independent identical reservoirs on every qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    pub factors: FactorStructure,
    pub per_site_channel: ChannelKind,
    pub dim_cap: usize,
}

impl LindbladModel {
    pub fn new(factors: FactorStructure, channel: ChannelKind) -> Result<Self> {
        if let Some(&d) = factors.dims().iter().find(|&&d| d != 2) {
            return Err(Error::BadDimension(format!("builtin channels act on qubits, found a factor of dimension {d}")));
        }
        channel.validate()?;
        Ok(LindbladModel { factors, per_site_channel: channel, dim_cap: DEFAULT_DIM_CAP })
    }

    pub fn qubits(n: usize, channel: ChannelKind) -> Result<Self> {
        Self::new(FactorStructure::qubits(n), channel)
    }

    pub fn with_dim_cap(mut self, cap: usize) -> Self {
        self.dim_cap = cap;
        self
    }
}

fn embed(op: &CMatrix, site: usize, n: usize) -> CMatrix {
    let left = linalg::identity(1 << site);
    let right = linalg::identity(1 << (n - site - 1));
    left.kronecker(op).kronecker(&right)
}

/// Generator acting on `vec(ρ)` (columns stacked), so that
/// `vec(AρB) = (Bᵀ ⊗ A) vec(ρ)`.
pub fn build_liouvillian(model: &LindbladModel, hamiltonian: Option<&CMatrix>) -> Result<CMatrix> {
    let d = model.factors.total();
    if d > model.dim_cap {
        return Err(Error::DimensionTooLarge { dim: d, cap: model.dim_cap });
    }
    let id = linalg::identity(d);
    let mut l = CMatrix::zeros(d * d, d * d);
    if let Some(h) = hamiltonian {
        if h.nrows() != d || h.ncols() != d {
            return Err(Error::DimensionMismatch { expected: d, found: h.nrows() });
        }
        // −i(Hρ − ρH)
        l += (id.kronecker(h) - h.transpose().kronecker(&id)) * c(0.0, -1.0);
    }
    let n = model.factors.len();
    for (rate, op) in model.per_site_channel.jump_operators() {
        if rate == 0.0 {
            continue;
        }
        for site in 0..n {
            let dk = embed(&op, site, n);
            let dd = dk.adjoint() * &dk;
            let term = dk.conjugate().kronecker(&dk).scale(2.0) - id.kronecker(&dd) - dd.transpose().kronecker(&id);
            l += term.scale(rate / 2.0);
        }
    }
    Ok(l)
}

pub(crate) fn vectorize(m: &CMatrix) -> crate::linalg::CVector {
    crate::linalg::CVector::from_column_slice(m.as_slice())
}

pub(crate) fn unvectorize(v: &crate::linalg::CVector, d: usize) -> CMatrix {
    CMatrix::from_column_slice(d, d, v.as_slice())
}
