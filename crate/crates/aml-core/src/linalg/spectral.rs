use nalgebra::SymmetricEigen;

use super::operator::{CMat, CVec, LabeledOperator, C64};
use crate::{tol, Error, Result};

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: CMat,
}

impl Spectrum {
    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Unitary matrix whose columns are the eigenvectors, ordered to match
    /// the eigenvalues.
    pub fn eigenvectors(&self) -> &CMat {
        &self.eigenvectors
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("spectrum is never empty")
    }

    pub fn eigenvector(&self, i: usize) -> CVec {
        self.eigenvectors.column(i).into_owned()
    }

    /// `V diag(f(lambda)) V^dag` for a real function of the eigenvalues.
    pub fn apply_function(&self, f: impl Fn(f64) -> f64) -> CMat {
        let n = self.eigenvalues.len();
        let mut out = CMat::zeros(n, n);
        for (i, &ev) in self.eigenvalues.iter().enumerate() {
            let fv = f(ev);
            if fv == 0.0 {
                continue;
            }
            let v = self.eigenvectors.column(i);
            for r in 0..n {
                for c in 0..n {
                    out[(r, c)] += v[r] * v[c].conj() * C64::new(fv, 0.0);
                }
            }
        }
        out
    }
}

/// Eigendecomposition of a Hermitian labeled operator.
///
/// The input must be Hermitian within [`tol::HERMITICITY`]; the deviation is
/// reported in the error otherwise. The matrix is symmetrized before the
/// solve so roundoff in the input cannot leak imaginary parts into the
/// spectrum.
pub fn hermitian_eig(h: &LabeledOperator) -> Result<Spectrum> {
    hermitian_eig_with_tol(h, tol::HERMITICITY)
}

pub fn hermitian_eig_with_tol(h: &LabeledOperator, hermiticity_tol: f64) -> Result<Spectrum> {
    let deviation = h.hermiticity_deviation();
    if deviation > hermiticity_tol {
        return Err(Error::NotHermitian { deviation, tol: hermiticity_tol });
    }
    let symmetrized = (h.entries() + h.entries().adjoint()).scale(0.5);
    let se = SymmetricEigen::new(symmetrized);

    // nalgebra does not sort; order ascending with eigenvectors in lockstep.
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    Ok(Spectrum { eigenvalues, eigenvectors })
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue(h: &LabeledOperator) -> Result<f64> {
    Ok(hermitian_eig(h)?.min_eigenvalue())
}

/// Eigendecomposition of a plain Hermitian matrix (symmetrized first),
/// eigenvalues ascending. Used for Gram matrices during rank analysis.
pub(crate) fn hermitian_eig_mat(m: &CMat) -> (Vec<f64>, CMat) {
    let symmetrized = (m + m.adjoint()).scale(0.5);
    let se = SymmetricEigen::new(symmetrized);
    let n = se.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
    let mut eigenvectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &se.eigenvectors.column(src));
    }
    (eigenvalues, eigenvectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, r64, SubsystemLabel};
    use rand::{Rng, SeedableRng};

    fn lbl(name: &str, dim: usize) -> SubsystemLabel {
        SubsystemLabel::new(name, dim).unwrap()
    }

    fn random_hermitian(dim: usize, seed: u64) -> LabeledOperator {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let g = CMat::from_fn(dim, dim, |_, _| c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5));
        let h = (&g + g.adjoint()).scale(0.5);
        LabeledOperator::new(vec![lbl("Q", dim)], h).unwrap()
    }

    #[test]
    fn identity_spectrum() {
        let eye = LabeledOperator::identity(vec![lbl("Q", 2)]).unwrap();
        let s = hermitian_eig(&eye).unwrap();
        assert_eq!(s.eigenvalues(), &[1.0, 1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let x = LabeledOperator::new(
            vec![lbl("Q", 2)],
            CMat::from_row_slice(2, 2, &[r64(0.0), r64(1.0), r64(1.0), r64(0.0)]),
        )
        .unwrap();
        let s = hermitian_eig(&x).unwrap();
        assert!((s.eigenvalues()[0] + 1.0).abs() <= 1e-12);
        assert!((s.eigenvalues()[1] - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        let h = random_hermitian(6, 42);
        let s = hermitian_eig(&h).unwrap();
        let sum: f64 = s.eigenvalues().iter().sum();
        assert!((sum - h.trace().re).abs() <= 1e-10);
    }

    #[test]
    fn reconstruction_from_spectrum() {
        let h = random_hermitian(5, 43);
        let s = hermitian_eig(&h).unwrap();
        let recon = s.apply_function(|x| x);
        let dev = (h.entries() - recon).iter().map(|z| z.norm()).fold(0.0, f64::max);
        assert!(dev <= 1e-12, "reconstruction deviation {dev}");
    }

    #[test]
    fn eigenvalues_are_ascending() {
        let h = random_hermitian(7, 44);
        let s = hermitian_eig(&h).unwrap();
        for w in s.eigenvalues().windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn non_hermitian_input_rejected_with_violation_norm() {
        let m = LabeledOperator::new(
            vec![lbl("Q", 2)],
            CMat::from_row_slice(2, 2, &[r64(0.0), r64(1.0), r64(0.0), r64(0.0)]),
        )
        .unwrap();
        match hermitian_eig(&m) {
            Err(Error::NotHermitian { deviation, .. }) => {
                assert!((deviation - 1.0).abs() <= 1e-15)
            }
            other => panic!("expected non-Hermitian error, got {other:?}"),
        }
    }

    #[test]
    fn min_eigenvalue_agrees_with_full_spectrum() {
        let z = LabeledOperator::new(
            vec![lbl("Q", 2)],
            CMat::from_row_slice(2, 2, &[r64(1.0), r64(0.0), r64(0.0), r64(-1.0)]),
        )
        .unwrap();
        assert!((min_eigenvalue(&z).unwrap() + 1.0).abs() <= 1e-14);

        let h = random_hermitian(6, 45);
        let via_min = min_eigenvalue(&h).unwrap();
        let via_spec = hermitian_eig(&h).unwrap().min_eigenvalue();
        assert_eq!(via_min, via_spec);
    }
}
