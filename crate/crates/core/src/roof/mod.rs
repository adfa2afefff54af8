//! Mixed-state concurrence: correlation tensor, T-matrix families, the exact
//! symmetric-roof infimum, lower bounds, quasi-pure approximation and the
//! gradient upper bound.

pub mod exact;
pub mod infimum;
pub mod lower;
pub mod report;
pub mod tensor;
pub mod tfamily;
pub mod upper;

pub use exact::{concurrence_vector, theta_concurrence, wootters_concurrence_2x2, wootters_gap};
pub use infimum::{symmetric_roof_infimum, RoofInfimum};
pub use lower::{
    algebraic_lower_bounds, anchored_quasi_pure, optimized_lower_bound, quasi_pure_approximation, LowerBoundOptions,
};
pub use report::{compute_bounds, BoundConfig, BoundReport, Diagnostics, FamilyChoice};
pub use tensor::{build_correlation_tensor, CorrelationTensor};
pub use tfamily::{antisymmetric_basis_t, spectral_t, Provenance, TMatrixFamily};
pub use upper::{concurrence_upper_bound, UpperBound, UpperBoundOptions};
