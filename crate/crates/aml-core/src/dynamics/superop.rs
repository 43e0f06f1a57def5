//! Superoperators: matrix representations of linear maps on operators,
//! their Choi forms, operator-sum decompositions, and classification of
//! reduced dynamical maps.

use rand::Rng;

use super::DomainSampler;
use crate::assignment::AssignmentMap;
use crate::linalg::{
    fresh_reference_name, hermitian_eig, r64, stream_rng, CMat, DensityOperator, LabeledOperator,
    SubsystemLabel, C64,
};
use crate::{tol, Error, Result};

/// A linear map on operators in the column-stacking convention:
/// `matrix * vec(x) = vec(map(x))`.
#[derive(Clone, Debug)]
pub struct SuperOperator {
    in_factors: Vec<SubsystemLabel>,
    out_factors: Vec<SubsystemLabel>,
    /// `out_side^2 x in_side^2`.
    matrix: CMat,
}

impl SuperOperator {
    pub fn new(
        in_factors: Vec<SubsystemLabel>,
        out_factors: Vec<SubsystemLabel>,
        matrix: CMat,
    ) -> Result<Self> {
        let in_side: usize = in_factors.iter().map(|f| f.dim()).product();
        let out_side: usize = out_factors.iter().map(|f| f.dim()).product();
        if matrix.nrows() != out_side * out_side || matrix.ncols() != in_side * in_side {
            return Err(Error::Shape(format!(
                "superoperator must be {}x{}, got {}x{}",
                out_side * out_side,
                in_side * in_side,
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { in_factors, out_factors, matrix })
    }

    /// Builds the matrix by applying `f` to every matrix unit of the input
    /// space.
    pub fn from_fn(
        in_factors: Vec<SubsystemLabel>,
        out_factors: Vec<SubsystemLabel>,
        mut f: impl FnMut(&LabeledOperator) -> Result<LabeledOperator>,
    ) -> Result<Self> {
        let in_side: usize = in_factors.iter().map(|f| f.dim()).product();
        let out_side: usize = out_factors.iter().map(|f| f.dim()).product();
        let mut matrix = CMat::zeros(out_side * out_side, in_side * in_side);
        for j in 0..in_side {
            for i in 0..in_side {
                let unit = LabeledOperator::matrix_unit(in_factors.clone(), i, j)?;
                let image = f(&unit)?;
                if image.factors() != out_factors.as_slice() {
                    return Err(Error::Shape("image factors do not match the codomain".into()));
                }
                // vec(|i><j|) has its 1 at column-stacking index j*in_side + i.
                matrix.set_column(j * in_side + i, &image.vectorize());
            }
        }
        Ok(Self { in_factors, out_factors, matrix })
    }

    pub fn identity(factors: Vec<SubsystemLabel>) -> Self {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        Self {
            in_factors: factors.clone(),
            out_factors: factors,
            matrix: CMat::identity(side * side, side * side),
        }
    }

    pub fn in_factors(&self) -> &[SubsystemLabel] {
        &self.in_factors
    }

    pub fn out_factors(&self) -> &[SubsystemLabel] {
        &self.out_factors
    }

    pub fn in_side(&self) -> usize {
        self.in_factors.iter().map(|f| f.dim()).product()
    }

    pub fn out_side(&self) -> usize {
        self.out_factors.iter().map(|f| f.dim()).product()
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn apply(&self, x: &LabeledOperator) -> Result<LabeledOperator> {
        if x.factors() != self.in_factors.as_slice() {
            return Err(Error::Shape("input factors do not match the superoperator".into()));
        }
        LabeledOperator::devectorize(&(&self.matrix * x.vectorize()), self.out_factors.clone())
    }

    /// Choi operator normalized to unit trace for trace-preserving maps:
    /// `(1/d_in) sum_ij |i><j| (x) map(|i><j|)`.
    pub fn choi(&self) -> Result<LabeledOperator> {
        let d_in = self.in_side();
        let out_side = self.out_side();
        let side = d_in * out_side;
        let mut out = CMat::zeros(side, side);
        for l in 0..d_in {
            for lp in 0..d_in {
                let col = self.matrix.column(lp * d_in + l);
                for r in 0..out_side {
                    for c in 0..out_side {
                        out[(l * out_side + r, lp * out_side + c)] =
                            col[c * out_side + r] * r64(1.0 / d_in as f64);
                    }
                }
            }
        }
        let mut factors = vec![SubsystemLabel::new(
            fresh_reference_name(&self.out_factors),
            d_in,
        )?];
        factors.extend_from_slice(&self.out_factors);
        LabeledOperator::new(factors, out)
    }

    pub fn choi_min_eig(&self) -> Result<f64> {
        Ok(hermitian_eig(&self.choi()?)?.min_eigenvalue())
    }

    /// Trace preservation as an exact matrix identity:
    /// `matrix^dag vec(I_out) = vec(I_in)` within `tol`.
    pub fn is_trace_preserving(&self, tol: f64) -> bool {
        let eye_out = CMat::identity(self.out_side(), self.out_side());
        let eye_in = CMat::identity(self.in_side(), self.in_side());
        let lhs = self.matrix.adjoint()
            * nalgebra::DVector::from_column_slice(eye_out.as_slice());
        let rhs = nalgebra::DVector::from_column_slice(eye_in.as_slice());
        (lhs - rhs).iter().map(|z: &C64| z.norm()).fold(0.0, f64::max) <= tol
    }

    /// Hermiticity preservation, decided through the Choi operator.
    pub fn is_hermiticity_preserving(&self, tol: f64) -> bool {
        match self.choi() {
            Ok(choi) => choi.hermiticity_deviation() <= tol,
            Err(_) => false,
        }
    }
}

/// Builds a superoperator from an unnormalized Choi operator
/// `sum_ij |i><j| (x) map(|i><j|)`.
pub(crate) fn superop_from_choi(
    choi: &CMat,
    in_factors: Vec<SubsystemLabel>,
    out_factors: Vec<SubsystemLabel>,
) -> Result<SuperOperator> {
    let in_side: usize = in_factors.iter().map(|f| f.dim()).product();
    let out_side: usize = out_factors.iter().map(|f| f.dim()).product();
    let mut matrix = CMat::zeros(out_side * out_side, in_side * in_side);
    for r in 0..in_side {
        for rp in 0..in_side {
            for s in 0..out_side {
                for sp in 0..out_side {
                    matrix[(sp * out_side + s, rp * in_side + r)] =
                        choi[(r * out_side + s, rp * out_side + sp)];
                }
            }
        }
    }
    SuperOperator::new(in_factors, out_factors, matrix)
}

/// The reduced dynamical map induced by an assignment map and a joint
/// unitary: trace out the environment after conjugating the assigned state.
pub fn reduced_dynamics(map: &AssignmentMap, u: &LabeledOperator) -> Result<SuperOperator> {
    if u.factors() != map.joint_factors() {
        return Err(Error::Shape("unitary factors do not match the joint space".into()));
    }
    let deviation = u.unitarity_deviation();
    if deviation > tol::UNITARITY {
        return Err(Error::NotUnitary { deviation, tol: tol::UNITARITY });
    }
    let env: Vec<String> = map.basis().env_names();
    let env_refs: Vec<&str> = env.iter().map(|s| s.as_str()).collect();
    SuperOperator::from_fn(
        map.system_factors().to_vec(),
        map.system_factors().to_vec(),
        |x| map.apply(x)?.conjugate_by(u)?.partial_trace(&env_refs),
    )
}

/// One term of an operator-sum representation: a real weight and its
/// operator (codomain x domain).
#[derive(Clone, Debug)]
pub struct OperatorSumTerm {
    pub weight: f64,
    pub operator: CMat,
}

/// Operator-sum representation of a Hermiticity-preserving map from the
/// eigendecomposition of its Choi operator:
/// `map(x) = sum_i weight_i K_i x K_i^dag` with real weights, and
/// `sum_i weight_i K_i^dag K_i = I` when the map is trace-preserving.
pub fn operator_sum_decomposition(e: &SuperOperator) -> Result<Vec<OperatorSumTerm>> {
    let choi = e.choi()?;
    let deviation = choi.hermiticity_deviation();
    if deviation > tol::HERMITICITY {
        return Err(Error::NotHermitian { deviation, tol: tol::HERMITICITY });
    }
    let spectrum = hermitian_eig(&choi)?;
    let d_in = e.in_side();
    let out_side = e.out_side();
    let mut terms = Vec::new();
    for (i, &lambda) in spectrum.eigenvalues().iter().enumerate() {
        // Undo the 1/d_in Choi normalization.
        let weight = lambda * d_in as f64;
        if weight.abs() <= tol::EIG_CLIP {
            continue;
        }
        let v = spectrum.eigenvector(i);
        let operator = CMat::from_fn(out_side, d_in, |s, r| v[r * out_side + s]);
        terms.push(OperatorSumTerm { weight, operator });
    }
    Ok(terms)
}

/// Evidence about positivity of a map on a sampled domain.
#[derive(Clone, Debug)]
pub enum PositivityEvidence {
    NoWitness { samples: usize },
    Witness { input: DensityOperator, min_output_eig: f64 },
}

impl PositivityEvidence {
    pub fn witness(&self) -> Option<(&DensityOperator, f64)> {
        match self {
            PositivityEvidence::Witness { input, min_output_eig } => {
                Some((input, *min_output_eig))
            }
            PositivityEvidence::NoWitness { .. } => None,
        }
    }
}

/// Classification of a reduced dynamical map.
#[derive(Clone, Debug)]
pub struct DynamicsVerdict {
    pub cp: bool,
    pub choi_min_eig: f64,
    pub hermitian: bool,
    pub positivity: PositivityEvidence,
}

/// Classifies a map: complete positivity through the Choi spectrum,
/// positivity by sampling the given domain, Hermiticity preservation from
/// the Choi operator.
pub fn classify_dynamics(
    e: &SuperOperator,
    domain: &DomainSampler,
    samples: usize,
    seed: u64,
    tol_psd: f64,
) -> Result<DynamicsVerdict> {
    let hermitian = e.is_hermiticity_preserving(tol::HERMITICITY);
    let choi_min_eig = e.choi_min_eig()?;
    let cp = choi_min_eig >= -tol_psd;

    let mut worst: Option<(DensityOperator, f64)> = None;
    for k in 0..samples {
        let mut rng = stream_rng(seed, k as u64 + 1);
        let input = domain.sample(&mut rng)?;
        let image = e.apply(input.op())?;
        let min_eig = hermitian_eig(&image)?.min_eigenvalue();
        if worst.as_ref().map_or(true, |(_, w)| min_eig < *w) {
            worst = Some((input, min_eig));
        }
    }
    let positivity = match worst {
        Some((input, min_output_eig)) if min_output_eig < -tol_psd => {
            PositivityEvidence::Witness { input, min_output_eig }
        }
        _ => PositivityEvidence::NoWitness { samples },
    };
    Ok(DynamicsVerdict { cp, choi_min_eig, hermitian, positivity })
}

/// Which distinguishability functional a contraction probe evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistanceKind {
    TraceDistance,
    RelativeEntropy,
}

/// One before/after record of a contraction probe.
#[derive(Clone, Copy, Debug)]
pub struct ProbeRecord {
    pub before: f64,
    pub after: f64,
    pub contracted: bool,
}

/// Evaluates the functional on each pair and on its image under the map.
/// Contraction failures are recorded, not raised. Relative-entropy probes
/// require the images to stay inside the state space; trace-distance probes
/// only need Hermitian images.
pub fn contraction_probe(
    e: &SuperOperator,
    pairs: &[(DensityOperator, DensityOperator)],
    which: DistanceKind,
    tol_contract: f64,
) -> Result<Vec<ProbeRecord>> {
    use crate::linalg::{relative_entropy, trace_distance, DensityTol};

    let mut records = Vec::with_capacity(pairs.len());
    for (rho, sigma) in pairs {
        let (before, after) = match which {
            DistanceKind::TraceDistance => {
                let before = trace_distance(rho, sigma)?;
                let ir = DensityOperator::new_unchecked(e.apply(rho.op())?);
                let is = DensityOperator::new_unchecked(e.apply(sigma.op())?);
                (before, trace_distance(&ir, &is)?)
            }
            DistanceKind::RelativeEntropy => {
                let before = relative_entropy(rho, sigma)?.to_f64();
                let loose =
                    DensityTol { psd: tol::PSD, ..DensityTol::default() };
                let ir = DensityOperator::new(e.apply(rho.op())?, loose)?;
                let is = DensityOperator::new(e.apply(sigma.op())?, loose)?;
                (before, relative_entropy(&ir, &is)?.to_f64())
            }
        };
        let contracted = after <= before + tol_contract;
        records.push(ProbeRecord { before, after, contracted });
    }
    Ok(records)
}

/// Random completely positive trace-preserving map by applying a Haar
/// unitary on system plus auxiliary space to the input tensored with a
/// fixed pure auxiliary state, then tracing the auxiliary space out.
pub fn random_cptp(factors: Vec<SubsystemLabel>, aux_dim: usize, seed: u64) -> Result<SuperOperator> {
    use crate::linalg::haar_unitary_rng;
    let d: usize = factors.iter().map(|f| f.dim()).product();
    let mut rng = stream_rng(seed, 0);
    let u = haar_unitary_rng(d * aux_dim, &mut rng);
    // Isometry V |psi> = U (|psi> (x) |0>); columns of V are U applied to
    // the aux-ground basis states.
    let mut v = CMat::zeros(d * aux_dim, d);
    for j in 0..d {
        v.set_column(j, &u.column(j * aux_dim));
    }
    let matrix_of = move |x: &LabeledOperator| -> Result<LabeledOperator> {
        let big = &v * x.entries() * v.adjoint();
        // Trace out the auxiliary (trailing) index.
        let mut out = CMat::zeros(d, d);
        for r in 0..d {
            for c in 0..d {
                let mut acc = C64::new(0.0, 0.0);
                for a in 0..aux_dim {
                    acc += big[(r * aux_dim + a, c * aux_dim + a)];
                }
                out[(r, c)] = acc;
            }
        }
        LabeledOperator::new(x.factors().to_vec(), out)
    };
    SuperOperator::from_fn(factors.clone(), factors, |x| matrix_of(x))
}

/// Random Hermiticity- and trace-preserving map (not positive in general):
/// a random Hermitian Choi operator corrected to satisfy the
/// trace-preservation marginal condition.
pub fn random_hermitian_tp(factors: Vec<SubsystemLabel>, seed: u64) -> Result<SuperOperator> {
    use crate::linalg::ginibre;
    let d: usize = factors.iter().map(|f| f.dim()).product();
    let mut rng = stream_rng(seed, 0);
    let g = ginibre(d * d, d * d, &mut rng);
    let c0 = (&g + g.adjoint()).scale(0.5);
    // Trace over the output slot of each |r><rp| block.
    let mut marginal = CMat::zeros(d, d);
    for r in 0..d {
        for rp in 0..d {
            let mut acc = C64::new(0.0, 0.0);
            for s in 0..d {
                acc += c0[(r * d + s, rp * d + s)];
            }
            marginal[(r, rp)] = acc;
        }
    }
    let correction = (CMat::identity(d, d) - marginal).scale(1.0 / d as f64);
    let mut choi = c0;
    for r in 0..d {
        for rp in 0..d {
            for s in 0..d {
                choi[(r * d + s, rp * d + s)] += correction[(r, rp)];
            }
        }
    }
    superop_from_choi(&choi, factors.clone(), factors)
}
