use super::operator::{LabeledOperator, C64};
use super::spectral::hermitian_eig_with_tol;
use crate::{tol, Error, Result};

/// Tolerances for density-operator validation.
#[derive(Clone, Copy, Debug)]
pub struct DensityTol {
    pub hermiticity: f64,
    pub psd: f64,
    pub trace: f64,
}

impl Default for DensityTol {
    fn default() -> Self {
        Self { hermiticity: tol::HERMITICITY, psd: tol::PSD, trace: tol::TRACE }
    }
}

/// A labeled operator validated to be Hermitian, positive semidefinite, and
/// unit trace (each within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    op: LabeledOperator,
}

impl DensityOperator {
    /// Validates and wraps an operator. Each violated invariant yields its
    /// own error kind carrying the measured deviation.
    pub fn new(op: LabeledOperator, tols: DensityTol) -> Result<Self> {
        let deviation = op.hermiticity_deviation();
        if deviation > tols.hermiticity {
            return Err(Error::NotHermitian { deviation, tol: tols.hermiticity });
        }
        let spectrum = hermitian_eig_with_tol(&op, tols.hermiticity)?;
        let min_eig = spectrum.min_eigenvalue();
        if min_eig < -tols.psd {
            return Err(Error::NotPositiveSemidefinite { min_eig });
        }
        let trace_dev = (op.trace() - C64::new(1.0, 0.0)).norm();
        if trace_dev > tols.trace {
            return Err(Error::TraceNotOne { deviation: trace_dev });
        }
        Ok(Self { op })
    }

    /// Wraps without validation. For constructions that guarantee the
    /// invariants by design (convexity, partial traces of valid states).
    pub(crate) fn new_unchecked(op: LabeledOperator) -> Self {
        Self { op }
    }

    pub fn op(&self) -> &LabeledOperator {
        &self.op
    }

    pub fn into_op(self) -> LabeledOperator {
        self.op
    }

    pub fn side(&self) -> usize {
        self.op.side()
    }

    /// Partial trace over the named factors. The result is again a density
    /// operator (trace preservation and positivity survive the trace).
    pub fn marginal(&self, traced: &[&str]) -> Result<DensityOperator> {
        Ok(Self::new_unchecked(self.op.partial_trace(traced)?))
    }

    /// Reinterprets the state over a different factor list of the same total
    /// dimension.
    pub fn with_factors(self, factors: Vec<super::label::SubsystemLabel>) -> Result<Self> {
        Ok(Self::new_unchecked(self.op.with_factors(factors)?))
    }

    /// `Tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.op.vectorize().dotc(&self.op.vectorize()).re
    }
}

impl AsRef<LabeledOperator> for DensityOperator {
    fn as_ref(&self) -> &LabeledOperator {
        &self.op
    }
}
