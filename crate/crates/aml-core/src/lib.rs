//! Numerical toolkit for open-system reduced dynamics built from sets of
//! system-environment initial states.
//!
//! The crate is organized in four layers:
//!
//! - [`linalg`]: labeled tensor-product operators, partial traces, Hermitian
//!   spectral analysis, entropic functionals, and Haar sampling.
//! - [`states`]: constructors and validators for density operators,
//!   classical-quantum ensembles, Markov states, and the strong-subadditivity
//!   gap (conditional mutual information).
//! - [`assignment`]: assignment maps built from state pairs, their Choi
//!   operators, complete-positivity and positivity probes, block-structured CP
//!   reconstructions, and the trace-kernel component of a state span.
//! - [`dynamics`]: reference states, Markovianity reports, reduced dynamical
//!   maps, operator-sum decompositions, contraction probes, and randomized
//!   searches for non-positivity witnesses.

pub mod assignment;
pub mod dynamics;
pub mod error;
pub mod linalg;
pub mod states;

pub use error::{Error, Result};

/// Default numerical tolerances used across the crate.
///
/// These reflect double-precision eigensolver accuracy at the matrix sizes
/// this crate targets (sides up to a few hundred).
pub mod tol {
    /// Maximum allowed `max |H - H^dag|` entry for an operator to count as
    /// Hermitian.
    pub const HERMITICITY: f64 = 1e-9;
    /// How far below zero the minimum eigenvalue of a nominal density
    /// operator may dip.
    pub const PSD: f64 = 1e-9;
    /// Allowed deviation of a density operator's trace from one.
    pub const TRACE: f64 = 1e-9;
    /// Eigenvalues at or below this clip are treated as exact zeros when
    /// evaluating entropies and support projectors.
    pub const EIG_CLIP: f64 = 1e-12;
    /// Probability mass outside the reference support above which a relative
    /// entropy is reported as infinite.
    pub const SUPPORT_MASS: f64 = 1e-9;
    /// Singular-value threshold for rank decisions and pseudo-inverse solves.
    pub const SPAN_SVD: f64 = 1e-10;
    /// Maximum residual for an operator to count as a member of a subspace.
    pub const SPAN_RESIDUAL: f64 = 1e-9;
    /// Allowed `max |U^dag U - I|` entry for a matrix to count as unitary.
    pub const UNITARITY: f64 = 1e-9;
    /// Markovianity decision threshold on the entropy gap, in bits. Kept a
    /// decade above floating-point noise so model error and rounding error
    /// stay separated.
    pub const MARKOV_GAP: f64 = 1e-7;
    /// How negative an output eigenvalue must be before a searched state
    /// counts as a non-positivity witness.
    pub const WITNESS_MARGIN: f64 = 1e-3;
}
