//! Operator subspaces spanned by sets of states, rank analysis, the
//! trace-kernel component, and the unitary-consistency membership test.

use crate::linalg::{CMat, CVec, LabeledOperator, SubsystemLabel, C64};
use crate::{tol, Error, Result};

/// A subspace of the operator space over fixed factors, held as an
/// orthonormal set of vectorized operators (matrix columns).
#[derive(Clone, Debug)]
pub struct OperatorSubspace {
    factors: Vec<SubsystemLabel>,
    /// `side^2 x dim`, orthonormal columns.
    basis: CMat,
}

impl OperatorSubspace {
    /// Orthonormalizes the span of the given operators, dropping directions
    /// whose singular value is at most `sqrt(SPAN_SVD)` (the Gram-matrix
    /// rank convention).
    pub fn from_span(ops: &[LabeledOperator]) -> Result<Self> {
        Self::from_span_with_threshold(ops, tol::SPAN_SVD.sqrt())
    }

    pub fn from_span_with_threshold(ops: &[LabeledOperator], sv_threshold: f64) -> Result<Self> {
        let factors = check_common_factors(ops)?;
        let side: usize = factors.iter().map(|f| f.dim()).product();
        let mut stacked = CMat::zeros(side * side, ops.len());
        for (j, op) in ops.iter().enumerate() {
            stacked.set_column(j, &op.vectorize());
        }
        let svd = nalgebra::SVD::new(stacked, true, false);
        let u = svd.u.as_ref().expect("left singular vectors requested");
        let dim = svd.singular_values.iter().filter(|&&s| s > sv_threshold).count();
        let mut basis = CMat::zeros(side * side, dim);
        // nalgebra returns singular values in descending order.
        for j in 0..dim {
            basis.set_column(j, &u.column(j));
        }
        Ok(Self { factors, basis })
    }

    /// Wraps an already-orthonormal set of vectorized operators.
    pub fn from_orthonormal(factors: Vec<SubsystemLabel>, basis: CMat) -> Result<Self> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        if basis.nrows() != side * side {
            return Err(Error::Shape(format!(
                "basis vectors of length {} do not match operator side {side}",
                basis.nrows()
            )));
        }
        let gram = basis.adjoint() * &basis;
        for r in 0..basis.ncols() {
            for c in 0..basis.ncols() {
                let expected = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                if (gram[(r, c)] - expected).norm() > 1e-10 {
                    return Err(Error::Invalid(format!(
                        "basis is not orthonormal at ({r},{c})"
                    )));
                }
            }
        }
        Ok(Self { factors, basis })
    }

    /// The zero subspace over the given factors.
    pub fn trivial(factors: Vec<SubsystemLabel>) -> Self {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        Self { factors, basis: CMat::zeros(side * side, 0) }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn factors(&self) -> &[SubsystemLabel] {
        &self.factors
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn basis_operators(&self) -> Vec<LabeledOperator> {
        (0..self.dim())
            .map(|j| {
                LabeledOperator::devectorize(
                    &self.basis.column(j).into_owned(),
                    self.factors.clone(),
                )
                .expect("basis vectors match the factor dimensions")
            })
            .collect()
    }

    /// Coefficients of the orthogonal projection onto the subspace.
    pub fn coefficients_of(&self, op: &LabeledOperator) -> Result<CVec> {
        self.check_factors(op)?;
        Ok(self.basis.adjoint() * op.vectorize())
    }

    /// Norm of the component of `op` orthogonal to the subspace.
    pub fn residual(&self, op: &LabeledOperator) -> Result<f64> {
        let v = op.vectorize();
        let coeffs = self.basis.adjoint() * &v;
        Ok((&v - &self.basis * coeffs).norm())
    }

    pub fn contains(&self, op: &LabeledOperator, tol: f64) -> Result<bool> {
        self.check_factors(op)?;
        Ok(self.residual(op)? <= tol)
    }

    fn check_factors(&self, op: &LabeledOperator) -> Result<()> {
        if op.factors() != self.factors.as_slice() {
            return Err(Error::Shape("operator factors do not match the subspace".into()));
        }
        Ok(())
    }
}

/// Rank of the Gram matrix of the vectorized operators, with singular values
/// at or below `threshold` treated as zero.
pub fn independence_rank(ops: &[LabeledOperator], threshold: f64) -> Result<usize> {
    check_common_factors(ops)?;
    let n = ops.len();
    let vecs: Vec<CVec> = ops.iter().map(|op| op.vectorize()).collect();
    let gram = CMat::from_fn(n, n, |r, c| vecs[r].dotc(&vecs[c]));
    let svd = nalgebra::SVD::new(gram, false, false);
    Ok(svd.singular_values.iter().filter(|&&s| s > threshold).count())
}

/// Index of the first operator linearly dependent on its predecessors, if
/// any. Uses Gram-Schmidt with the `sqrt(SPAN_SVD)` residual threshold.
pub(crate) fn first_dependent_index(ops: &[LabeledOperator]) -> Option<usize> {
    let mut ortho: Vec<CVec> = Vec::new();
    for (i, op) in ops.iter().enumerate() {
        let mut v = op.vectorize();
        for b in &ortho {
            let overlap = b.dotc(&v);
            v -= b * overlap;
        }
        let norm = v.norm();
        if norm <= tol::SPAN_SVD.sqrt() {
            return Some(i);
        }
        ortho.push(v / C64::new(norm, 0.0));
    }
    None
}

fn check_common_factors(ops: &[LabeledOperator]) -> Result<Vec<SubsystemLabel>> {
    let first = ops
        .first()
        .ok_or_else(|| Error::Invalid("need at least one operator".into()))?
        .factors()
        .to_vec();
    for (i, op) in ops.iter().enumerate() {
        if op.factors() != first.as_slice() {
            return Err(Error::Shape(format!("operator {i} lives on different factors")));
        }
    }
    Ok(first)
}

/// Splits a span of joint operators into the part visible to the
/// environment trace and the trace-kernel component: the second return
/// value collects everything the partial trace over `env` annihilates.
pub fn kernel_component(
    v: &OperatorSubspace,
    env: &[&str],
) -> Result<(OperatorSubspace, OperatorSubspace)> {
    for name in env {
        if !v.factors().iter().any(|f| f.name() == *name) {
            return Err(Error::UnknownLabel((*name).to_string()));
        }
    }
    let dim = v.dim();
    if dim == 0 {
        return Ok((
            OperatorSubspace::trivial(v.factors().to_vec()),
            OperatorSubspace::trivial(v.factors().to_vec()),
        ));
    }

    // Partial-trace matrix restricted to the subspace basis.
    let probe = v.basis_operators();
    let traced0 = probe[0].partial_trace(env)?;
    let kept_len = traced0.side() * traced0.side();
    let mut restricted = CMat::zeros(kept_len, dim);
    restricted.set_column(0, &traced0.vectorize());
    for (j, op) in probe.iter().enumerate().skip(1) {
        restricted.set_column(j, &op.partial_trace(env)?.vectorize());
    }

    // Null space from the Gram matrix so we get a complete right basis even
    // when dim exceeds the reduced operator-space dimension.
    let gram = restricted.adjoint() * &restricted;
    let (eigenvalues, eigenvectors) = crate::linalg::hermitian_eig_mat(&gram);
    let kernel_dim = eigenvalues.iter().filter(|&&l| l <= tol::SPAN_SVD).count();

    let mut kernel_basis = CMat::zeros(v.basis().nrows(), kernel_dim);
    let mut range_basis = CMat::zeros(v.basis().nrows(), dim - kernel_dim);
    for j in 0..dim {
        let coeffs = eigenvectors.column(j).into_owned();
        let vec = v.basis() * coeffs;
        if j < kernel_dim {
            kernel_basis.set_column(j, &vec);
        } else {
            range_basis.set_column(j - kernel_dim, &vec);
        }
    }
    let v_hat = OperatorSubspace::from_orthonormal(v.factors().to_vec(), range_basis)?;
    let v_zero = OperatorSubspace::from_orthonormal(v.factors().to_vec(), kernel_basis)?;
    Ok((v_hat, v_zero))
}

/// Result of the unitary-consistency membership test.
#[derive(Clone, Copy, Debug)]
pub struct UConsistency {
    pub consistent: bool,
    pub max_violation: f64,
}

/// A unitary is consistent with a trace-kernel component when conjugation by
/// it keeps every kernel element inside the kernel of the environment trace.
pub fn u_consistency_check(
    u: &LabeledOperator,
    v0: &OperatorSubspace,
    env: &[&str],
    tol: f64,
) -> Result<UConsistency> {
    if u.factors() != v0.factors() {
        return Err(Error::Shape("unitary factors do not match the subspace".into()));
    }
    let deviation = u.unitarity_deviation();
    if deviation > crate::tol::UNITARITY {
        return Err(Error::NotUnitary { deviation, tol: crate::tol::UNITARITY });
    }
    let mut max_violation: f64 = 0.0;
    for w in v0.basis_operators() {
        let rotated = w.conjugate_by(u)?;
        let traced = rotated.partial_trace(env)?;
        max_violation = max_violation.max(traced.frobenius_norm());
    }
    Ok(UConsistency { consistent: max_violation <= tol, max_violation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c64, haar_unitary, r64};
    use crate::states::{basis_projector, pure_state, random_density};

    fn lbl(name: &str, dim: usize) -> SubsystemLabel {
        SubsystemLabel::new(name, dim).unwrap()
    }

    #[test]
    fn rank_of_distinct_projectors_is_two() {
        let p0 = basis_projector(lbl("S", 2), 0).unwrap().into_op();
        let p1 = basis_projector(lbl("S", 2), 1).unwrap().into_op();
        assert_eq!(independence_rank(&[p0, p1], tol::SPAN_SVD).unwrap(), 2);
    }

    #[test]
    fn rank_of_a_repeated_state_is_one() {
        let rho = random_density(2, 2, 1).unwrap().into_op();
        assert_eq!(independence_rank(&[rho.clone(), rho], tol::SPAN_SVD).unwrap(), 1);
    }

    #[test]
    fn rank_of_five_tomography_states_is_four() {
        // (I + sx)/2, (I - sx)/2, (I + sz)/2, (I - sz)/2, (I + sy)/2
        let mk = |x: f64, y: f64, z: f64| {
            let m = CMat::from_row_slice(
                2,
                2,
                &[
                    r64((1.0 + z) / 2.0),
                    c64(x / 2.0, -y / 2.0),
                    c64(x / 2.0, y / 2.0),
                    r64((1.0 - z) / 2.0),
                ],
            );
            LabeledOperator::new(vec![lbl("S", 2)], m).unwrap()
        };
        let states = [
            mk(1.0, 0.0, 0.0),
            mk(-1.0, 0.0, 0.0),
            mk(0.0, 0.0, 1.0),
            mk(0.0, 0.0, -1.0),
            mk(0.0, 1.0, 0.0),
        ];
        assert_eq!(independence_rank(&states, tol::SPAN_SVD).unwrap(), 4);
    }

    #[test]
    fn subspace_basis_is_orthonormal() {
        let ops: Vec<_> = (0..3).map(|i| random_density(4, 2, 40 + i).unwrap().into_op()).collect();
        let v = OperatorSubspace::from_span(&ops).unwrap();
        assert_eq!(v.dim(), 3);
        let gram = v.basis().adjoint() * v.basis();
        for r in 0..3 {
            for c in 0..3 {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert!((gram[(r, c)] - r64(expected)).norm() <= 1e-10);
            }
        }
        for op in &ops {
            assert!(v.contains(op, 1e-9).unwrap());
        }
    }

    #[test]
    fn kernel_of_one_to_one_span_is_trivial() {
        // Joint states with independent marginals: nothing in the kernel.
        let joints: Vec<_> = (0..2)
            .map(|k| {
                basis_projector(lbl("S", 2), k)
                    .unwrap()
                    .op()
                    .tensor(random_density(2, 2, 60 + k as u64).unwrap().op())
                    .unwrap()
                    .with_factors(vec![lbl("S", 2), lbl("E", 2)])
                    .unwrap()
            })
            .collect();
        let v = OperatorSubspace::from_span(&joints).unwrap();
        let (v_hat, v_zero) = kernel_component(&v, &["E"]).unwrap();
        assert_eq!(v_zero.dim(), 0);
        assert_eq!(v_hat.dim(), 2);
    }

    #[test]
    fn shared_marginal_yields_one_kernel_direction() {
        let rho = random_density(2, 2, 70).unwrap().with_factors(vec![lbl("S", 2)]).unwrap();
        let sigma1 = random_density(2, 2, 71).unwrap().with_factors(vec![lbl("E", 2)]).unwrap();
        let sigma2 = random_density(2, 1, 72).unwrap().with_factors(vec![lbl("E", 2)]).unwrap();
        let joints = vec![
            rho.op().tensor(sigma1.op()).unwrap(),
            rho.op().tensor(sigma2.op()).unwrap(),
        ];
        let v = OperatorSubspace::from_span(&joints).unwrap();
        let (v_hat, v_zero) = kernel_component(&v, &["E"]).unwrap();
        assert_eq!(v_zero.dim(), 1);
        assert_eq!(v_hat.dim(), 1);

        // The kernel direction is proportional to rho (x) (sigma1 - sigma2).
        let diff = &(rho.op().tensor(sigma1.op()).unwrap())
            - &(rho.op().tensor(sigma2.op()).unwrap());
        assert!(v_zero.contains(&diff, 1e-9 * diff.frobenius_norm().max(1.0)).unwrap());
        // And the environment trace annihilates the returned basis element.
        for w in v_zero.basis_operators() {
            assert!(w.partial_trace(&["E"]).unwrap().frobenius_norm() <= 1e-10);
        }
    }

    #[test]
    fn kernel_dimension_matches_marginal_rank_deficit() {
        // Random span of joint states, kernel dimension = M - marginal rank.
        for seed in 0..10u64 {
            let joints: Vec<_> = (0..4)
                .map(|i| {
                    random_density(4, 3, 1000 + 10 * seed + i)
                        .unwrap()
                        .with_factors(vec![lbl("S", 2), lbl("E", 2)])
                        .unwrap()
                        .into_op()
                })
                .collect();
            let marginals: Vec<_> =
                joints.iter().map(|j| j.partial_trace(&["E"]).unwrap()).collect();
            let big_m = independence_rank(&joints, tol::SPAN_SVD).unwrap();
            let small_m = independence_rank(&marginals, tol::SPAN_SVD).unwrap();
            let v = OperatorSubspace::from_span(&joints).unwrap();
            let (v_hat, v_zero) = kernel_component(&v, &["E"]).unwrap();
            assert_eq!(v.dim(), big_m, "seed {seed}");
            assert_eq!(v_zero.dim(), big_m - small_m, "seed {seed}");
            assert_eq!(v_hat.dim() + v_zero.dim(), v.dim(), "seed {seed}");
        }
    }

    #[test]
    fn direct_sum_reconstructs_the_original_span() {
        let joints: Vec<_> = (0..3)
            .map(|i| {
                random_density(4, 2, 2000 + i)
                    .unwrap()
                    .with_factors(vec![lbl("S", 2), lbl("E", 2)])
                    .unwrap()
                    .into_op()
            })
            .collect();
        let v = OperatorSubspace::from_span(&joints).unwrap();
        let (v_hat, v_zero) = kernel_component(&v, &["E"]).unwrap();
        let mut recon_ops = v_hat.basis_operators();
        recon_ops.extend(v_zero.basis_operators());
        let recon = OperatorSubspace::from_span(&recon_ops).unwrap();
        assert_eq!(recon.dim(), v.dim());
        for op in v.basis_operators() {
            assert!(recon.contains(&op, 1e-10).unwrap());
        }
    }

    fn swap_unitary(d: usize, a: &str, b: &str) -> LabeledOperator {
        let mut m = CMat::zeros(d * d, d * d);
        for i in 0..d {
            for j in 0..d {
                m[(j * d + i, i * d + j)] = r64(1.0);
            }
        }
        LabeledOperator::new(vec![lbl(a, d), lbl(b, d)], m).unwrap()
    }

    fn shared_marginal_kernel() -> (OperatorSubspace, LabeledOperator, LabeledOperator) {
        let rho = random_density(2, 2, 80).unwrap().with_factors(vec![lbl("S", 2)]).unwrap();
        let sigma1 = random_density(2, 2, 81).unwrap().with_factors(vec![lbl("E", 2)]).unwrap();
        let sigma2 = random_density(2, 1, 82).unwrap().with_factors(vec![lbl("E", 2)]).unwrap();
        let joints = vec![
            rho.op().tensor(sigma1.op()).unwrap(),
            rho.op().tensor(sigma2.op()).unwrap(),
        ];
        let v = OperatorSubspace::from_span(&joints).unwrap();
        let (_, v_zero) = kernel_component(&v, &["E"]).unwrap();
        let diff = &sigma1.op().clone() - sigma2.op();
        (v_zero, rho.into_op(), diff)
    }

    #[test]
    fn environment_unitaries_are_always_consistent() {
        let (v_zero, _, _) = shared_marginal_kernel();
        for seed in 0..20u64 {
            let u_e = haar_unitary(vec![lbl("E", 2)], seed).unwrap();
            let u = LabeledOperator::identity(vec![lbl("S", 2)])
                .unwrap()
                .tensor(&u_e)
                .unwrap();
            let report = u_consistency_check(&u, &v_zero, &["E"], 1e-9).unwrap();
            assert!(report.consistent, "seed {seed}: violation {}", report.max_violation);
        }
    }

    #[test]
    fn swap_breaks_consistency_with_predicted_violation() {
        let (v_zero, rho, diff) = shared_marginal_kernel();
        let u = swap_unitary(2, "S", "E");
        let report = u_consistency_check(&u, &v_zero, &["E"], 1e-9).unwrap();
        assert!(!report.consistent);

        // Oracle: the normalized kernel element is (rho (x) diff) / ||.||,
        // and SWAP turns it into (diff (x) rho); tracing E leaves
        // diff * Tr(rho) = diff. So the violation is ||diff|| / ||rho (x) diff||.
        let w_norm = rho.frobenius_norm() * diff.frobenius_norm();
        let expected = diff.frobenius_norm() / w_norm;
        assert!(
            (report.max_violation - expected).abs() <= 1e-10,
            "violation {} expected {expected}",
            report.max_violation
        );
        assert!(report.max_violation > 0.1);
    }

    #[test]
    fn trivial_kernel_accepts_all_unitaries() {
        let v_zero = OperatorSubspace::trivial(vec![lbl("S", 2), lbl("E", 2)]);
        for seed in 0..100u64 {
            let u = haar_unitary(vec![lbl("S", 2), lbl("E", 2)], seed).unwrap();
            let report = u_consistency_check(&u, &v_zero, &["E"], 1e-9).unwrap();
            assert!(report.consistent);
            assert_eq!(report.max_violation, 0.0);
        }
    }

    #[test]
    fn non_unitary_is_rejected() {
        let (v_zero, _, _) = shared_marginal_kernel();
        let m = LabeledOperator::identity(vec![lbl("S", 2), lbl("E", 2)])
            .unwrap()
            .scale(r64(0.5));
        assert!(matches!(
            u_consistency_check(&m, &v_zero, &["E"], 1e-9),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn pure_state_span_projection_coefficients() {
        let ket0 = crate::states::basis_ket(2, 0);
        let p0 = pure_state(vec![lbl("S", 2)], &ket0).unwrap().into_op();
        let v = OperatorSubspace::from_span(std::slice::from_ref(&p0)).unwrap();
        let coeffs = v.coefficients_of(&p0).unwrap();
        assert_eq!(coeffs.len(), 1);
        assert!((coeffs[0].norm() - 1.0).abs() <= 1e-12);
    }
}
