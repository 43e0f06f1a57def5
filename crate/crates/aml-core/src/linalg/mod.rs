//! Labeled tensor-product linear algebra.
//!
//! Operators carry an ordered list of named tensor factors; the factor order
//! is part of an operator's identity and reordering is an explicit
//! permutation. Vectorization is column-stacking throughout, so the inner
//! product of two vectorizations equals the Hilbert-Schmidt inner product.

mod density;
mod entropy;
mod label;
mod operator;
mod random;
mod spectral;

pub use density::{DensityOperator, DensityTol};
pub use entropy::{relative_entropy, trace_distance, von_neumann_entropy, RelEntropy};
pub use label::SubsystemLabel;
pub use operator::{c64, r64, CMat, CVec, LabeledOperator, C64};
pub use random::{ginibre, haar_unitary, haar_unitary_rng, random_pure_rng, stream_rng};
pub use spectral::{hermitian_eig, min_eigenvalue, Spectrum};

pub(crate) use operator::fresh_reference_name;
pub(crate) use spectral::hermitian_eig_mat;
