//! Assignment maps: linear maps sending system states to joint
//! system-environment operators, built from a finite set of state pairs.
//!
//! A map is assembled from pairs `(rho_S^(i), rho_SE^(i))` whose marginals
//! are consistent, optionally extended by arbitrary joint states until the
//! system states span the whole operator space. Classification distinguishes
//! completely positive maps (positive-semidefinite Choi operator), maps that
//! are not CP but where random sampling finds no positivity violation, and
//! Hermitian maps with an explicit non-positivity witness.

mod subspace;

pub use subspace::{
    independence_rank, kernel_component, u_consistency_check, OperatorSubspace, UConsistency,
};

use rand::Rng;

use crate::linalg::fresh_reference_name;
use crate::linalg::{
    hermitian_eig, r64, random_pure_rng, stream_rng, CMat, DensityOperator, DensityTol,
    LabeledOperator, SubsystemLabel, C64,
};
use crate::states::{basis_ket, pure_state, random_density_rng, validate_density, MarkovStructure};
use crate::{tol, Error, Result};

/// Maximum allowed deviation between a joint state's marginal and its paired
/// system state.
const MARGINAL_TOL: f64 = 1e-9;

/// A pair of a system state and a joint system-environment state.
#[derive(Clone, Debug)]
pub struct StatePair {
    pub system: DensityOperator,
    pub joint: DensityOperator,
}

/// The data an assignment map is built from: marginal-consistent pairs for
/// the admissible subspace, plus arbitrary extension pairs completing the
/// system states to a full operator basis.
#[derive(Clone, Debug)]
pub struct AssignmentBasis {
    pairs: Vec<StatePair>,
    extension: Vec<StatePair>,
    system_factors: Vec<SubsystemLabel>,
    joint_factors: Vec<SubsystemLabel>,
}

impl AssignmentBasis {
    /// Validates the consistent pairs: equal factor layouts, marginal
    /// consistency within `1e-9`, linear independence of the system states,
    /// and no more pairs than the operator-space dimension.
    pub fn new(pairs: Vec<(DensityOperator, DensityOperator)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Invalid("assignment basis needs at least one pair".into()));
        }
        let system_factors = pairs[0].0.op().factors().to_vec();
        let joint_factors = pairs[0].1.op().factors().to_vec();
        if joint_factors.len() <= system_factors.len()
            || joint_factors[..system_factors.len()] != system_factors[..]
        {
            return Err(Error::Shape(
                "joint factors must start with the system factors and add an environment".into(),
            ));
        }
        let env: Vec<String> = joint_factors[system_factors.len()..]
            .iter()
            .map(|f| f.name().to_string())
            .collect();

        let mut basis =
            Self { pairs: Vec::new(), extension: Vec::new(), system_factors, joint_factors };
        for (i, (system, joint)) in pairs.into_iter().enumerate() {
            basis.check_layout(i, &system, &joint)?;
            let env_refs: Vec<&str> = env.iter().map(|s| s.as_str()).collect();
            let marginal = joint.op().partial_trace(&env_refs)?;
            let deviation = marginal.max_diff(system.op());
            if deviation > MARGINAL_TOL {
                return Err(Error::MarginalMismatch { index: i, deviation });
            }
            basis.pairs.push(StatePair { system, joint });
        }
        basis.check_independence()?;
        Ok(basis)
    }

    /// Appends extension pairs. Their joints are arbitrary density operators
    /// (no marginal condition); their system states must keep the whole set
    /// linearly independent.
    pub fn with_extension(
        mut self,
        extension: Vec<(DensityOperator, DensityOperator)>,
    ) -> Result<Self> {
        for (j, (system, joint)) in extension.into_iter().enumerate() {
            self.check_layout(self.pairs.len() + j, &system, &joint)?;
            self.extension.push(StatePair { system, joint });
        }
        self.check_independence()?;
        Ok(self)
    }

    /// Completes the basis to the full operator-space dimension with seeded
    /// random system states, each assigned the product of itself with the
    /// maximally mixed environment.
    pub fn with_canonical_extension(mut self, seed: u64) -> Result<Self> {
        let d_s: usize = self.system_factors.iter().map(|f| f.dim()).product();
        let env_factors = self.joint_factors[self.system_factors.len()..].to_vec();
        let d_e: usize = env_factors.iter().map(|f| f.dim()).product();
        let mixed_env = LabeledOperator::identity(env_factors)?.scale(r64(1.0 / d_e as f64));

        let mut rng = stream_rng(seed, 0);
        let mut attempts = 0usize;
        while self.total_count() < d_s * d_s {
            attempts += 1;
            if attempts > 64 * d_s * d_s {
                return Err(Error::Invalid(
                    "failed to complete the basis with independent random states".into(),
                ));
            }
            let candidate = random_density_rng(self.system_factors.clone(), d_s, &mut rng)?;
            let mut all: Vec<LabeledOperator> =
                self.system_states().map(|s| s.op().clone()).collect();
            all.push(candidate.op().clone());
            if subspace::first_dependent_index(&all).is_some() {
                continue;
            }
            let joint_op = candidate.op().tensor(&mixed_env)?;
            let joint = DensityOperator::new(joint_op, DensityTol::default())?;
            self.extension.push(StatePair { system: candidate, joint });
        }
        Ok(self)
    }

    fn check_layout(
        &self,
        index: usize,
        system: &DensityOperator,
        joint: &DensityOperator,
    ) -> Result<()> {
        if system.op().factors() != self.system_factors.as_slice() {
            return Err(Error::Shape(format!("system state {index} lives on different factors")));
        }
        if joint.op().factors() != self.joint_factors.as_slice() {
            return Err(Error::Shape(format!("joint state {index} lives on different factors")));
        }
        Ok(())
    }

    fn check_independence(&self) -> Result<()> {
        let d_s: usize = self.system_factors.iter().map(|f| f.dim()).product();
        if self.total_count() > d_s * d_s {
            return Err(Error::Invalid(format!(
                "{} system states exceed the operator-space dimension {}",
                self.total_count(),
                d_s * d_s
            )));
        }
        let ops: Vec<LabeledOperator> = self.system_states().map(|s| s.op().clone()).collect();
        if let Some(index) = subspace::first_dependent_index(&ops) {
            return Err(Error::RankDeficient { index });
        }
        Ok(())
    }

    /// The marginal-consistent pairs (the admissible data).
    pub fn pairs(&self) -> &[StatePair] {
        &self.pairs
    }

    /// The extension pairs (arbitrary joints).
    pub fn extension(&self) -> &[StatePair] {
        &self.extension
    }

    /// Number of consistent pairs.
    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn total_count(&self) -> usize {
        self.pairs.len() + self.extension.len()
    }

    /// Whether the system states span the full operator space.
    pub fn is_complete(&self) -> bool {
        let d_s: usize = self.system_factors.iter().map(|f| f.dim()).product();
        self.total_count() == d_s * d_s
    }

    pub fn system_factors(&self) -> &[SubsystemLabel] {
        &self.system_factors
    }

    pub fn joint_factors(&self) -> &[SubsystemLabel] {
        &self.joint_factors
    }

    pub fn env_names(&self) -> Vec<String> {
        self.joint_factors[self.system_factors.len()..]
            .iter()
            .map(|f| f.name().to_string())
            .collect()
    }

    fn system_states(&self) -> impl Iterator<Item = &DensityOperator> {
        self.pairs.iter().chain(self.extension.iter()).map(|p| &p.system)
    }

    /// Span of the consistent system states (the admissible subspace).
    pub fn system_span(&self) -> OperatorSubspace {
        let ops: Vec<_> = self.pairs.iter().map(|p| p.system.op().clone()).collect();
        OperatorSubspace::from_span(&ops).expect("pair states share factors")
    }

    /// Span of the consistent joint states.
    pub fn joint_span(&self) -> OperatorSubspace {
        let ops: Vec<_> = self.pairs.iter().map(|p| p.joint.op().clone()).collect();
        OperatorSubspace::from_span(&ops).expect("pair states share factors")
    }
}

/// A linear assignment map as a superoperator, together with the basis it
/// was built from. Trace-preserving and Hermiticity-preserving by
/// construction.
#[derive(Clone, Debug)]
pub struct AssignmentMap {
    basis: AssignmentBasis,
    /// `(d_S d_E)^2 x d_S^2` in the column-stacking convention.
    matrix: CMat,
    /// `d_S^2 x n` stacked vectorized system states.
    system_stack: CMat,
    /// Pseudo-inverse of the stack, singular values below threshold dropped.
    system_pinv: CMat,
    total: bool,
}

/// Builds the assignment map from its basis by solving for expansion
/// coefficients against the stacked system states.
pub fn build_assignment(basis: AssignmentBasis) -> Result<AssignmentMap> {
    let ops: Vec<LabeledOperator> = basis.system_states().map(|s| s.op().clone()).collect();
    if let Some(index) = subspace::first_dependent_index(&ops) {
        return Err(Error::RankDeficient { index });
    }
    let d_s: usize = basis.system_factors().iter().map(|f| f.dim()).product();
    let joint_side: usize = basis.joint_factors().iter().map(|f| f.dim()).product();
    let n = basis.total_count();

    let mut system_stack = CMat::zeros(d_s * d_s, n);
    let mut joint_stack = CMat::zeros(joint_side * joint_side, n);
    for (j, pair) in basis.pairs.iter().chain(basis.extension.iter()).enumerate() {
        system_stack.set_column(j, &pair.system.op().vectorize());
        joint_stack.set_column(j, &pair.joint.op().vectorize());
    }

    let svd = nalgebra::SVD::new(system_stack.clone(), true, true);
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let rank = svd.singular_values.iter().filter(|&&s| s > tol::SPAN_SVD).count();
    if rank < n {
        // The incremental check above is stricter, so reaching this means
        // the basis sits right at the numerical threshold.
        return Err(Error::RankDeficient { index: n - 1 });
    }
    let mut pinv = CMat::zeros(n, d_s * d_s);
    for k in 0..n {
        let inv = r64(1.0 / svd.singular_values[k]);
        let col = v_t.row(k).adjoint() * inv;
        let row = u.column(k).adjoint();
        pinv += col * row;
    }
    let matrix = &joint_stack * &pinv;
    let total = n == d_s * d_s;
    Ok(AssignmentMap { basis, matrix, system_stack, system_pinv: pinv, total })
}

impl AssignmentMap {
    pub fn basis(&self) -> &AssignmentBasis {
        &self.basis
    }

    /// The superoperator matrix in the column-stacking convention.
    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    /// Whether the map is defined on the whole system operator space.
    pub fn is_total(&self) -> bool {
        self.total
    }

    pub fn system_factors(&self) -> &[SubsystemLabel] {
        self.basis.system_factors()
    }

    pub fn joint_factors(&self) -> &[SubsystemLabel] {
        self.basis.joint_factors()
    }

    pub fn system_side(&self) -> usize {
        self.system_factors().iter().map(|f| f.dim()).product()
    }

    /// Applies the map. For a map that is not total, inputs outside the span
    /// of the basis are rejected with the solve residual.
    pub fn apply(&self, x: &LabeledOperator) -> Result<LabeledOperator> {
        if x.factors() != self.system_factors() {
            return Err(Error::Shape("input factors do not match the map's system".into()));
        }
        let vec_x = x.vectorize();
        if !self.total {
            let coeffs = &self.system_pinv * &vec_x;
            let residual = (&self.system_stack * coeffs - &vec_x).norm();
            if residual > tol::SPAN_RESIDUAL * vec_x.norm().max(1.0) {
                return Err(Error::OutsideSpan { residual });
            }
        }
        let out = &self.matrix * vec_x;
        LabeledOperator::devectorize(&out, self.joint_factors().to_vec())
    }

    /// Choi operator of the map: the image of the maximally entangled
    /// projector between a reference copy of the system and the system,
    /// normalized to unit trace. Requires a total map.
    pub fn choi(&self) -> Result<LabeledOperator> {
        if !self.total {
            return Err(Error::PartialMap { dim: self.basis.total_count() });
        }
        let d_s = self.system_side();
        let joint_side: usize = self.joint_factors().iter().map(|f| f.dim()).product();
        let ref_name = fresh_reference_name(self.joint_factors());

        let side = d_s * joint_side;
        let mut out = CMat::zeros(side, side);
        for l in 0..d_s {
            for lp in 0..d_s {
                let unit = LabeledOperator::matrix_unit(self.system_factors().to_vec(), l, lp)?;
                let image = &self.matrix * unit.vectorize();
                let block = LabeledOperator::devectorize(&image, self.joint_factors().to_vec())?;
                for r in 0..joint_side {
                    for c in 0..joint_side {
                        out[(l * joint_side + r, lp * joint_side + c)] =
                            block.entries()[(r, c)] * r64(1.0 / d_s as f64);
                    }
                }
            }
        }
        let mut factors = vec![SubsystemLabel::new(ref_name, d_s)?];
        factors.extend_from_slice(self.joint_factors());
        LabeledOperator::new(factors, out)
    }

    /// Admissible subspace: span of the consistent system states.
    pub fn system_subspace(&self) -> OperatorSubspace {
        self.basis.system_span()
    }
}

/// Consistency report: how far `Tr_E(Lambda(x))` strays from `x` on the
/// admissible subspace, and (for total maps) on the whole operator space.
#[derive(Clone, Copy, Debug)]
pub struct ConsistencyReport {
    pub max_deviation: f64,
    pub consistent: bool,
    pub global_max_deviation: Option<f64>,
    pub globally_consistent: Option<bool>,
}

/// Verifies marginal consistency on each basis element of the given
/// subspace; for total maps, also on the full operator space.
pub fn consistency_check(
    map: &AssignmentMap,
    subspace: &OperatorSubspace,
    tol_dev: f64,
) -> Result<ConsistencyReport> {
    let env: Vec<String> = map.basis().env_names();
    let env_refs: Vec<&str> = env.iter().map(|s| s.as_str()).collect();

    let mut max_deviation: f64 = 0.0;
    for x in subspace.basis_operators() {
        let image = map.apply(&x)?;
        let back = image.partial_trace(&env_refs)?;
        max_deviation = max_deviation.max(back.max_diff(&x));
    }

    let (global_max_deviation, globally_consistent) = if map.is_total() {
        let d_s = map.system_side();
        let mut global_dev: f64 = 0.0;
        for i in 0..d_s {
            for j in 0..d_s {
                let unit = LabeledOperator::matrix_unit(map.system_factors().to_vec(), i, j)?;
                let image = map.apply(&unit)?;
                let back = image.partial_trace(&env_refs)?;
                global_dev = global_dev.max(back.max_diff(&unit));
            }
        }
        (Some(global_dev), Some(global_dev <= tol_dev))
    } else {
        (None, None)
    };

    Ok(ConsistencyReport {
        max_deviation,
        consistent: max_deviation <= tol_dev,
        global_max_deviation,
        globally_consistent,
    })
}

/// Complete-positivity verdict from the Choi spectrum.
#[derive(Clone, Copy, Debug)]
pub struct CpVerdict {
    pub cp: bool,
    pub choi_min_eig: f64,
}

/// A map is CP exactly when its Choi operator is positive semidefinite.
pub fn is_cp(map: &AssignmentMap, tol_psd: f64) -> Result<CpVerdict> {
    let choi = map.choi()?;
    let min = hermitian_eig(&choi)?.min_eigenvalue();
    Ok(CpVerdict { cp: min >= -tol_psd, choi_min_eig: min })
}

/// A sampled state whose image under the map has a negative eigenvalue.
#[derive(Clone, Debug)]
pub struct PositivityWitness {
    pub input: DensityOperator,
    pub min_output_eig: f64,
    pub sample: usize,
}

/// Randomized positivity falsifier: samples pure and mixed states, applies
/// the map, and returns the most violating input if any image fails
/// positive semidefiniteness by more than `tol_psd`. A `None` is evidence at
/// the given sample size, not a proof of positivity.
pub fn positivity_falsifier(
    map: &AssignmentMap,
    samples: usize,
    seed: u64,
    tol_psd: f64,
) -> Result<Option<PositivityWitness>> {
    if !map.is_total() {
        return Err(Error::PartialMap { dim: map.basis().total_count() });
    }
    let d_s = map.system_side();
    let factors = map.system_factors().to_vec();
    let mut best: Option<PositivityWitness> = None;
    for k in 0..samples {
        let mut rng = stream_rng(seed, k as u64 + 1);
        let input = if k % 2 == 0 {
            pure_state(factors.clone(), &random_pure_rng(d_s, &mut rng))?
        } else {
            let rank = rng.gen_range(1..=d_s);
            random_density_rng(factors.clone(), rank, &mut rng)?
        };
        let image = map.apply(input.op())?;
        let min_eig = hermitian_eig(&image)?.min_eigenvalue();
        if best.as_ref().map_or(true, |w| min_eig < w.min_output_eig) {
            best = Some(PositivityWitness { input, min_output_eig: min_eig, sample: k });
        }
    }
    Ok(best.filter(|w| w.min_output_eig < -tol_psd))
}

/// Three-way classification of an assignment map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapVerdict {
    /// Positive-semidefinite Choi operator.
    Cp,
    /// Not CP, but sampling found no positivity violation.
    PositiveNoCpFound,
    /// Not CP and a sampled input maps to a non-positive operator.
    HermitianNonpositive,
}

impl MapVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            MapVerdict::Cp => "cp",
            MapVerdict::PositiveNoCpFound => "positive_no_cp_found",
            MapVerdict::HermitianNonpositive => "hermitian_nonpositive",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapClassification {
    pub verdict: MapVerdict,
    pub choi_min_eig: f64,
    /// Present exactly when the verdict is `HermitianNonpositive`.
    pub witness: Option<PositivityWitness>,
    /// Sample count behind a no-witness result.
    pub falsifier_samples: usize,
}

/// Classifies a total assignment map: CP by Choi spectrum, otherwise by
/// whether the positivity falsifier finds a witness.
pub fn classify_map(
    map: &AssignmentMap,
    samples: usize,
    seed: u64,
    tol_psd: f64,
) -> Result<MapClassification> {
    let cp = is_cp(map, tol_psd)?;
    if cp.cp {
        return Ok(MapClassification {
            verdict: MapVerdict::Cp,
            choi_min_eig: cp.choi_min_eig,
            witness: None,
            falsifier_samples: 0,
        });
    }
    let witness = positivity_falsifier(map, samples, seed, tol_psd)?;
    Ok(MapClassification {
        verdict: if witness.is_some() {
            MapVerdict::HermitianNonpositive
        } else {
            MapVerdict::PositiveNoCpFound
        },
        choi_min_eig: cp.choi_min_eig,
        witness,
        falsifier_samples: samples,
    })
}

/// The CP assignment map induced by a Markov block structure: project onto
/// each block, keep the left part, and replace the right part with that
/// block's fixed right-environment state.
///
/// `right_states[k]` lives on two factors `(right_k, environment)`. The
/// structure must saturate the system space, otherwise the map cannot be
/// trace-preserving on the whole operator space.
pub fn cp_assignment_from_structure(
    structure: &MarkovStructure,
    right_states: &[DensityOperator],
) -> Result<AssignmentMap> {
    if !structure.saturates() {
        return Err(Error::StructureNotSaturating {
            covered: structure.total_block_dim(),
            total: structure.d_s(),
        });
    }
    if right_states.len() != structure.block_count() {
        return Err(Error::Shape(format!(
            "{} right states for a {}-block structure",
            right_states.len(),
            structure.block_count()
        )));
    }
    let env_factor = {
        let f = right_states[0].op().factors();
        if f.len() != 2 {
            return Err(Error::Shape("right states must have exactly two factors".into()));
        }
        f[1].clone()
    };
    for (k, &(_, dr)) in structure.blocks().iter().enumerate() {
        let f = right_states[k].op().factors();
        if f.len() != 2 || f[0].dim() != dr || f[1].dim() != env_factor.dim() {
            return Err(Error::Shape(format!(
                "right state {k} does not match block shape ({dr}, {})",
                env_factor.dim()
            )));
        }
    }

    let d_s = structure.d_s();
    let s_factor = SubsystemLabel::new("S", d_s)?;
    let system_factors = vec![s_factor.clone()];
    let joint_factors = vec![s_factor, env_factor.clone()];

    // Consistent generators: per block, a tomography frame on the left part
    // tensored with the marginal of that block's right state. The block map
    // fixes these by construction.
    let mut pairs: Vec<(DensityOperator, DensityOperator)> = Vec::new();
    for (k, &(dl, _)) in structure.blocks().iter().enumerate() {
        let right_marginal = right_states[k].marginal(&[env_factor.name()])?;
        for frame in tomography_frame(dl) {
            let block_state = frame.kronecker(right_marginal.op().entries());
            let y = embed_block(structure, k, &block_state, &system_factors)?;
            let image = apply_block_formula(structure, right_states, y.entries(), &joint_factors)?;
            pairs.push((
                validate_density(&y, DensityTol::default())?,
                validate_density(&image, DensityTol::default())?,
            ));
        }
    }

    // Fill the remaining directions with whichever full-system tomography
    // states extend independence; their images need no marginal condition.
    let mut extension: Vec<(DensityOperator, DensityOperator)> = Vec::new();
    let mut span: Vec<LabeledOperator> = pairs.iter().map(|(s, _)| s.op().clone()).collect();
    for frame in tomography_frame(d_s) {
        if span.len() == d_s * d_s {
            break;
        }
        let y = LabeledOperator::new(system_factors.clone(), frame)?;
        let mut candidate = span.clone();
        candidate.push(y.clone());
        if subspace::first_dependent_index(&candidate).is_some() {
            continue;
        }
        let image = apply_block_formula(structure, right_states, y.entries(), &joint_factors)?;
        extension.push((
            validate_density(&y, DensityTol::default())?,
            validate_density(&image, DensityTol::default())?,
        ));
        span.push(y);
    }

    build_assignment(AssignmentBasis::new(pairs)?.with_extension(extension)?)
}

/// Image under the block map: for each block, `W_k^dag y W_k`, trace out the
/// right part, tensor the block's fixed right-environment state, and embed
/// back.
fn apply_block_formula(
    structure: &MarkovStructure,
    right_states: &[DensityOperator],
    y: &CMat,
    joint_factors: &[SubsystemLabel],
) -> Result<LabeledOperator> {
    let d_e = right_states[0].op().factors()[1].dim();
    let d_s = structure.d_s();
    let eye_e = CMat::identity(d_e, d_e);
    let mut out = CMat::zeros(d_s * d_e, d_s * d_e);
    for (k, &(dl, dr)) in structure.blocks().iter().enumerate() {
        let off = structure.block_offset(k);
        let w_k = structure.embedding().columns(off, dl * dr).into_owned();
        let block = w_k.adjoint() * y * &w_k;
        // Trace over the right part of the block.
        let mut left = CMat::zeros(dl, dl);
        for l in 0..dl {
            for lp in 0..dl {
                let mut acc = C64::new(0.0, 0.0);
                for rr in 0..dr {
                    acc += block[(l * dr + rr, lp * dr + rr)];
                }
                left[(l, lp)] = acc;
            }
        }
        let block_image = left.kronecker(right_states[k].op().entries());
        let embed = w_k.kronecker(&eye_e);
        out += &embed * block_image * embed.adjoint();
    }
    LabeledOperator::new(joint_factors.to_vec(), out)
}

/// Embeds a block-space state into the system space via the structure's
/// isometry.
fn embed_block(
    structure: &MarkovStructure,
    k: usize,
    block_state: &CMat,
    system_factors: &[SubsystemLabel],
) -> Result<LabeledOperator> {
    let (dl, dr) = structure.blocks()[k];
    let off = structure.block_offset(k);
    let w_k = structure.embedding().columns(off, dl * dr).into_owned();
    LabeledOperator::new(system_factors.to_vec(), &w_k * block_state * w_k.adjoint())
}

/// A tomography frame for a `d`-dimensional space: `d^2` pure-state density
/// matrices spanning the operator space (basis projectors plus real and
/// imaginary superposition projectors).
fn tomography_frame(d: usize) -> Vec<CMat> {
    let mut frames = Vec::with_capacity(d * d);
    for a in 0..d {
        let ket = basis_ket(d, a);
        frames.push(CMat::from_fn(d, d, |r, c| ket[r] * ket[c].conj()));
    }
    for a in 0..d {
        for b in (a + 1)..d {
            let mut plus = basis_ket(d, a);
            plus[b] = r64(1.0);
            let plus = plus / C64::new(2f64.sqrt(), 0.0);
            frames.push(CMat::from_fn(d, d, |r, c| plus[r] * plus[c].conj()));

            let mut plus_i = basis_ket(d, a);
            plus_i[b] = C64::new(0.0, 1.0);
            let plus_i = plus_i / C64::new(2f64.sqrt(), 0.0);
            frames.push(CMat::from_fn(d, d, |r, c| plus_i[r] * plus_i[c].conj()));
        }
    }
    frames
}

/// Tomography frame as labeled density operators.
pub fn tomography_states(factors: Vec<SubsystemLabel>) -> Result<Vec<DensityOperator>> {
    let d: usize = factors.iter().map(|f| f.dim()).product();
    tomography_frame(d)
        .into_iter()
        .map(|m| {
            validate_density(&LabeledOperator::new(factors.clone(), m)?, DensityTol::default())
        })
        .collect()
}
