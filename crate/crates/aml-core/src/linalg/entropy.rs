//! Entropic functionals and state distances, all in bits (base-2 logarithms).

use super::density::DensityOperator;
use super::spectral::hermitian_eig;
use crate::{tol, Error, Result};

/// Relative entropy value: finite bits, or the tagged infinity used when the
/// support condition fails. Never a floating-point overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RelEntropy {
    Bits(f64),
    Infinite,
}

impl RelEntropy {
    pub fn is_infinite(self) -> bool {
        matches!(self, RelEntropy::Infinite)
    }

    pub fn bits(self) -> Option<f64> {
        match self {
            RelEntropy::Bits(v) => Some(v),
            RelEntropy::Infinite => None,
        }
    }

    /// Collapses to `f64`, mapping the tagged infinity to `f64::INFINITY`.
    pub fn to_f64(self) -> f64 {
        match self {
            RelEntropy::Bits(v) => v,
            RelEntropy::Infinite => f64::INFINITY,
        }
    }
}

impl std::fmt::Display for RelEntropy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RelEntropy::Bits(v) => write!(f, "{v}"),
            RelEntropy::Infinite => write!(f, "+inf"),
        }
    }
}

/// Von Neumann entropy `-Tr(rho log2 rho)` in bits. Eigenvalues at or below
/// the clip threshold contribute zero.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    let spectrum = hermitian_eig(rho.op()).expect("density operators are Hermitian");
    spectrum
        .eigenvalues()
        .iter()
        .filter(|&&p| p > tol::EIG_CLIP)
        .map(|&p| -p * p.log2())
        .sum()
}

/// Relative entropy `S(rho || sigma) = Tr(rho log2 rho) - Tr(rho log2 sigma)`
/// in bits when `supp(rho) <= supp(sigma)`, and the tagged infinity
/// otherwise. Support membership is decided by the eigenvalue clip: the mass
/// of `rho` on the numerical null space of `sigma` must stay below
/// [`tol::SUPPORT_MASS`].
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<RelEntropy> {
    if rho.op().factors() != sigma.op().factors() {
        return Err(Error::Shape(format!(
            "relative entropy needs matching factors, got {:?} vs {:?}",
            rho.op().factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            sigma.op().factors().iter().map(|f| f.to_string()).collect::<Vec<_>>()
        )));
    }
    let sigma_spec = hermitian_eig(sigma.op()).expect("density operators are Hermitian");

    // Mass of rho outside the support of sigma.
    let mut null_mass = 0.0;
    for (i, &s) in sigma_spec.eigenvalues().iter().enumerate() {
        if s <= tol::EIG_CLIP {
            let v = sigma_spec.eigenvector(i);
            null_mass += (v.dotc(&(rho.op().entries() * &v))).re;
        }
    }
    if null_mass > tol::SUPPORT_MASS {
        return Ok(RelEntropy::Infinite);
    }

    let rho_spec = hermitian_eig(rho.op()).expect("density operators are Hermitian");
    let tr_rho_log_rho: f64 = rho_spec
        .eigenvalues()
        .iter()
        .filter(|&&p| p > tol::EIG_CLIP)
        .map(|&p| p * p.log2())
        .sum();

    let mut tr_rho_log_sigma = 0.0;
    for (i, &s) in sigma_spec.eigenvalues().iter().enumerate() {
        if s > tol::EIG_CLIP {
            let v = sigma_spec.eigenvector(i);
            let weight = (v.dotc(&(rho.op().entries() * &v))).re;
            tr_rho_log_sigma += weight * s.log2();
        }
    }
    Ok(RelEntropy::Bits(tr_rho_log_rho - tr_rho_log_sigma))
}

/// Trace distance `0.5 * ||rho - sigma||_1` via the eigenvalues of the
/// difference. Lies in `[0, 1]`.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.op().factors() != sigma.op().factors() {
        return Err(Error::Shape(format!(
            "trace distance needs matching factors, got {:?} vs {:?}",
            rho.op().factors().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            sigma.op().factors().iter().map(|f| f.to_string()).collect::<Vec<_>>()
        )));
    }
    let diff = rho.op() - sigma.op();
    let spectrum = hermitian_eig(&diff)?;
    Ok(0.5 * spectrum.eigenvalues().iter().map(|e| e.abs()).sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{r64, CMat, DensityTol, LabeledOperator, SubsystemLabel};

    fn lbl(name: &str, dim: usize) -> SubsystemLabel {
        SubsystemLabel::new(name, dim).unwrap()
    }

    fn diag_state(name: &str, probs: &[f64]) -> DensityOperator {
        let d = probs.len();
        let mut m = CMat::zeros(d, d);
        for (i, &p) in probs.iter().enumerate() {
            m[(i, i)] = r64(p);
        }
        DensityOperator::new(
            LabeledOperator::new(vec![lbl(name, d)], m).unwrap(),
            DensityTol::default(),
        )
        .unwrap()
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = diag_state("Q", &[1.0, 0.0]);
        assert!(von_neumann_entropy(&rho).abs() <= 1e-12);
    }

    #[test]
    fn maximally_mixed_entropy_is_log_dim() {
        for d in [2usize, 3, 4] {
            let rho = diag_state("Q", &vec![1.0 / d as f64; d]);
            assert!((von_neumann_entropy(&rho) - (d as f64).log2()).abs() <= 1e-12);
        }
    }

    #[test]
    fn entropy_of_three_quarters_one_quarter() {
        // -(3/4 log2 3/4 + 1/4 log2 1/4) = 2 - (3/4) log2 3
        let rho = diag_state("Q", &[0.75, 0.25]);
        let expected = 2.0 - 0.75 * 3f64.log2();
        assert!((von_neumann_entropy(&rho) - expected).abs() <= 1e-12);
        assert!((expected - 0.811_278_124_459_132_8).abs() <= 1e-12);
    }

    #[test]
    fn relative_entropy_of_state_with_itself_is_zero() {
        let rho = diag_state("Q", &[0.6, 0.4]);
        let v = relative_entropy(&rho, &rho).unwrap();
        assert!(v.bits().unwrap().abs() <= 1e-12);
    }

    #[test]
    fn relative_entropy_disjoint_support_is_infinite() {
        let rho = diag_state("Q", &[1.0, 0.0]);
        let sigma = diag_state("Q", &[0.0, 1.0]);
        assert!(relative_entropy(&rho, &sigma).unwrap().is_infinite());
    }

    #[test]
    fn relative_entropy_pure_vs_maximally_mixed_is_one_bit() {
        let rho = diag_state("Q", &[1.0, 0.0]);
        let sigma = diag_state("Q", &[0.5, 0.5]);
        let v = relative_entropy(&rho, &sigma).unwrap().bits().unwrap();
        assert!((v - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn relative_entropy_dimension_mismatch_errors() {
        let rho = diag_state("Q", &[1.0, 0.0]);
        let sigma = diag_state("Q", &[1.0, 0.0, 0.0]);
        assert!(matches!(relative_entropy(&rho, &sigma), Err(Error::Shape(_))));
    }

    #[test]
    fn trace_distance_basic_cases() {
        let rho = diag_state("Q", &[0.7, 0.3]);
        assert!(trace_distance(&rho, &rho).unwrap().abs() <= 1e-14);

        let zero = diag_state("Q", &[1.0, 0.0]);
        let one = diag_state("Q", &[0.0, 1.0]);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn trace_distance_of_diagonal_states_is_probability_gap() {
        let p = 0.81;
        let q = 0.33;
        let rho = diag_state("Q", &[p, 1.0 - p]);
        let sigma = diag_state("Q", &[q, 1.0 - q]);
        assert!((trace_distance(&rho, &sigma).unwrap() - (p - q).abs()).abs() <= 1e-13);
    }
}
