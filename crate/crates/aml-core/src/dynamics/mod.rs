//! Reference states, Markovianity reports, reduced dynamical maps, and the
//! randomized search for non-positivity witnesses.

mod search;
mod superop;

pub use search::{counterexample_search, SearchConfig, SearchOutcome, SearchWitness};
pub use superop::{
    classify_dynamics, contraction_probe, operator_sum_decomposition, random_cptp,
    random_hermitian_tp, reduced_dynamics, DistanceKind, DynamicsVerdict, OperatorSumTerm,
    PositivityEvidence, ProbeRecord, SuperOperator,
};

use rand::Rng;

use crate::assignment::{AssignmentBasis, OperatorSubspace, StatePair};
use crate::linalg::{
    fresh_reference_name, hermitian_eig, r64, random_pure_rng, relative_entropy,
    von_neumann_entropy, DensityOperator, LabeledOperator, SubsystemLabel,
};
use crate::states::{pure_state, random_density_rng};
use crate::{Error, Result};

/// The reference pair: a classical-quantum state enumerating the basis
/// system states on a pointer register, and its lift through the assignment
/// data to the joint space. Markovianity of the lifted state decides whether
/// a completely positive assignment exists for the same data.
#[derive(Clone, Debug)]
pub struct ReferenceState {
    omega_rs: DensityOperator,
    omega_rse: DensityOperator,
    pairs: Vec<StatePair>,
    pointer: SubsystemLabel,
    env_names: Vec<String>,
}

/// Builds the reference pair from the consistent pairs of an assignment
/// basis: uniform weights, orthonormal pointer states.
pub fn build_reference(basis: &AssignmentBasis) -> Result<ReferenceState> {
    let pairs = basis.pairs().to_vec();
    if pairs.is_empty() {
        return Err(Error::Invalid("reference state needs at least one pair".into()));
    }
    let m = pairs.len();
    let probs = vec![1.0 / m as f64; m];
    let pointer_name = fresh_reference_name(basis.joint_factors());

    let systems: Vec<DensityOperator> = pairs.iter().map(|p| p.system.clone()).collect();
    let joints: Vec<DensityOperator> = pairs.iter().map(|p| p.joint.clone()).collect();
    let omega_rs = crate::states::cq_state(&probs, &systems, &pointer_name)?;
    let omega_rse = crate::states::cq_state(&probs, &joints, &pointer_name)?;

    Ok(ReferenceState {
        omega_rs,
        omega_rse,
        pairs,
        pointer: SubsystemLabel::new(pointer_name, m)?,
        env_names: basis.env_names(),
    })
}

impl ReferenceState {
    pub fn m(&self) -> usize {
        self.pointer.dim()
    }

    pub fn omega_rs(&self) -> &DensityOperator {
        &self.omega_rs
    }

    pub fn omega_rse(&self) -> &DensityOperator {
        &self.omega_rse
    }

    pub fn pairs(&self) -> &[StatePair] {
        &self.pairs
    }

    pub fn pointer_label(&self) -> &SubsystemLabel {
        &self.pointer
    }

    /// Average system state `(1/m) sum_l rho_S^(l)`.
    pub fn omega_s(&self) -> Result<DensityOperator> {
        let env: Vec<&str> = self.env_names.iter().map(|s| s.as_str()).collect();
        let mut traced = vec![self.pointer.name()];
        traced.extend(env);
        self.omega_rse.marginal(&traced)
    }

    /// Average joint state `(1/m) sum_l rho_SE^(l)`.
    pub fn omega_se(&self) -> Result<DensityOperator> {
        self.omega_rse.marginal(&[self.pointer.name()])
    }
}

/// The pair of operators steered out of the reference states by one pointer
/// observable.
#[derive(Clone, Debug)]
pub struct SteeredPair {
    pub system: LabeledOperator,
    pub joint: LabeledOperator,
}

/// `Tr_R[(A_R (x) I) omega]` for both reference states. As `A_R` ranges over
/// a basis of pointer operators, the system components span the admissible
/// subspace and the joint components span the image of the assignment data.
pub fn steered_set(omega: &ReferenceState, a_r: &LabeledOperator) -> Result<SteeredPair> {
    if a_r.factors() != std::slice::from_ref(&omega.pointer) {
        return Err(Error::Shape(format!(
            "pointer observable must live on {}, got {:?}",
            omega.pointer,
            a_r.factors().iter().map(|f| f.to_string()).collect::<Vec<_>>()
        )));
    }
    let steer = |state: &DensityOperator| -> Result<LabeledOperator> {
        let rest: Vec<SubsystemLabel> = state.op().factors()[1..].to_vec();
        let probe = a_r.tensor(&LabeledOperator::identity(rest)?)?;
        probe.matmul(state.op())?.partial_trace(&[omega.pointer.name()])
    };
    Ok(SteeredPair { system: steer(&omega.omega_rs)?, joint: steer(&omega.omega_rse)? })
}

/// One side of the Markovianity inequality, computed two ways. The direct
/// value is a single relative entropy against the uniform-pointer product;
/// the block average sums per-pair relative entropies to the ensemble
/// average. The two agree identically for classical-quantum states.
#[derive(Clone, Copy, Debug)]
pub struct EntropySides {
    pub direct_bits: f64,
    pub block_average_bits: f64,
}

/// Markovianity report for a reference state.
#[derive(Clone, Copy, Debug)]
pub struct MarkovianityReport {
    /// Strong-subadditivity gap of the lifted reference state, in bits.
    pub gap_bits: f64,
    pub markov: bool,
    /// Relative entropy side including the environment.
    pub joint_side: EntropySides,
    /// Relative entropy side on the reduced system.
    pub system_side: EntropySides,
}

/// Evaluates the strong-subadditivity gap of the lifted reference state and
/// both sides of the associated relative-entropy inequality, each computed
/// directly and as a per-block average.
pub fn markovianity_report(omega: &ReferenceState, tol: f64) -> Result<MarkovianityReport> {
    let r = omega.pointer.name().to_string();
    let env: Vec<&str> = omega.env_names.iter().map(|s| s.as_str()).collect();

    let omega_rse = &omega.omega_rse;
    let omega_rs = omega_rse.marginal(&env)?;
    let omega_se = omega.omega_se()?;
    let omega_s = omega.omega_s()?;
    let _ = r;

    let gap_bits = von_neumann_entropy(&omega_rs) + von_neumann_entropy(&omega_se)
        - von_neumann_entropy(omega_rse)
        - von_neumann_entropy(&omega_s);

    let m = omega.m();
    let uniform_pointer =
        LabeledOperator::identity(vec![omega.pointer.clone()])?.scale(r64(1.0 / m as f64));

    let joint_reference = DensityOperator::new_unchecked(uniform_pointer.tensor(omega_se.op())?);
    let system_reference = DensityOperator::new_unchecked(uniform_pointer.tensor(omega_s.op())?);

    let joint_direct = relative_entropy(omega_rse, &joint_reference)?.to_f64();
    let system_direct = relative_entropy(&omega.omega_rs, &system_reference)?.to_f64();

    let mut joint_avg = 0.0;
    let mut system_avg = 0.0;
    for pair in &omega.pairs {
        joint_avg += relative_entropy(&pair.joint, &omega_se)?.to_f64() / m as f64;
        system_avg += relative_entropy(&pair.system, &omega_s)?.to_f64() / m as f64;
    }

    Ok(MarkovianityReport {
        gap_bits,
        markov: gap_bits <= tol,
        joint_side: EntropySides { direct_bits: joint_direct, block_average_bits: joint_avg },
        system_side: EntropySides { direct_bits: system_direct, block_average_bits: system_avg },
    })
}

/// Which set of states a positivity probe draws from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateDomain {
    /// All density operators on the system.
    Full,
    /// Density operators inside the admissible subspace.
    AdmissibleSubspace,
}

/// Seeded sampler over a state domain. For the admissible-subspace domain it
/// mixes convex combinations of the anchor states with line segments from
/// the ensemble average toward the boundary of the positive cone, so
/// boundary states are reachable.
#[derive(Clone, Debug)]
pub struct DomainSampler {
    factors: Vec<SubsystemLabel>,
    mode: StateDomain,
    anchors: Vec<DensityOperator>,
    average: Option<DensityOperator>,
}

impl DomainSampler {
    pub fn full(factors: Vec<SubsystemLabel>) -> Self {
        Self { factors, mode: StateDomain::Full, anchors: Vec::new(), average: None }
    }

    /// Sampler over the admissible subspace of an assignment basis.
    pub fn admissible(basis: &AssignmentBasis) -> Result<Self> {
        let anchors: Vec<DensityOperator> =
            basis.pairs().iter().map(|p| p.system.clone()).collect();
        let m = anchors.len();
        let mut avg = anchors[0].op().scale(r64(1.0 / m as f64));
        for a in &anchors[1..] {
            avg = &avg + &a.op().scale(r64(1.0 / m as f64));
        }
        Ok(Self {
            factors: basis.system_factors().to_vec(),
            mode: StateDomain::AdmissibleSubspace,
            average: Some(DensityOperator::new_unchecked(avg)),
            anchors,
        })
    }

    pub fn mode(&self) -> StateDomain {
        self.mode
    }

    /// The subspace the admissible sampler draws from.
    pub fn subspace(&self) -> Option<OperatorSubspace> {
        if self.anchors.is_empty() {
            return None;
        }
        let ops: Vec<LabeledOperator> = self.anchors.iter().map(|a| a.op().clone()).collect();
        OperatorSubspace::from_span(&ops).ok()
    }

    pub fn sample(&self, rng: &mut impl Rng) -> Result<DensityOperator> {
        match self.mode {
            StateDomain::Full => {
                let dim: usize = self.factors.iter().map(|f| f.dim()).product();
                if rng.gen_bool(0.5) {
                    pure_state(self.factors.clone(), &random_pure_rng(dim, rng))
                } else {
                    let rank = rng.gen_range(1..=dim);
                    random_density_rng(self.factors.clone(), rank, rng)
                }
            }
            StateDomain::AdmissibleSubspace => self.sample_admissible(rng),
        }
    }

    fn sample_admissible(&self, rng: &mut impl Rng) -> Result<DensityOperator> {
        let omega = self.average.as_ref().expect("admissible sampler holds the average");
        match rng.gen_range(0..3u8) {
            0 => {
                // Convex mixture of the anchors.
                let weights: Vec<f64> =
                    (0..self.anchors.len()).map(|_| -rng.gen::<f64>().max(1e-12).ln()).collect();
                let total: f64 = weights.iter().sum();
                let mut out = self.anchors[0].op().scale(r64(weights[0] / total));
                for (a, w) in self.anchors[1..].iter().zip(&weights[1..]) {
                    out = &out + &a.op().scale(r64(w / total));
                }
                Ok(DensityOperator::new_unchecked(out))
            }
            boundary_or_interior => {
                let direction = self.random_traceless_direction(omega, rng)?;
                let Some(direction) = direction else {
                    return Ok(omega.clone());
                };
                let t_max = max_feasible_step(omega, &direction)?;
                let t = if boundary_or_interior == 1 { t_max } else { t_max * rng.gen::<f64>() };
                Ok(DensityOperator::new_unchecked(
                    &omega.op().clone() + &direction.scale(r64(t)),
                ))
            }
        }
    }

    /// Random Hermitian traceless direction inside the admissible subspace.
    /// Returns `None` when the subspace admits no such direction.
    fn random_traceless_direction(
        &self,
        omega: &DensityOperator,
        rng: &mut impl Rng,
    ) -> Result<Option<LabeledOperator>> {
        for _ in 0..8 {
            let mut h = LabeledOperator::zeros(self.factors.clone())?;
            for a in &self.anchors {
                let g: f64 = rng.sample(rand_distr::StandardNormal);
                h = &h + &a.op().scale(r64(g));
            }
            let trace = h.trace();
            let d = &h - &omega.op().scale(trace);
            let norm = d.frobenius_norm();
            if norm > 1e-9 {
                return Ok(Some(d.scale(r64(1.0 / norm))));
            }
        }
        Ok(None)
    }
}

/// Largest `t >= 0` keeping `omega + t * direction` positive semidefinite,
/// found by doubling and bisection on the minimum eigenvalue.
fn max_feasible_step(omega: &DensityOperator, direction: &LabeledOperator) -> Result<f64> {
    let psd_at = |t: f64| -> Result<bool> {
        let candidate = &omega.op().clone() + &direction.scale(r64(t));
        Ok(hermitian_eig(&candidate)?.min_eigenvalue() >= -1e-12)
    };
    if !psd_at(0.0)? {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    let mut lo = 0.0;
    let mut doubled = 0;
    while psd_at(hi)? {
        lo = hi;
        hi *= 2.0;
        doubled += 1;
        if doubled > 60 {
            return Ok(lo);
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if psd_at(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

#[cfg(test)]
mod tests;
