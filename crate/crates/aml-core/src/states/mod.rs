//! Constructors and validators for the state families the analysis runs on:
//! generic density operators, maximally entangled states, classical-quantum
//! ensembles, Markov states, and the tripartite entropy diagnostics that
//! decide Markovianity.

mod markov;

pub use markov::{markov_state, MarkovBlocks, MarkovStructure};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{
    ginibre, r64, von_neumann_entropy, CMat, CVec, DensityOperator, DensityTol, LabeledOperator,
    SubsystemLabel, C64,
};
use crate::{Error, Result};

/// Checks Hermiticity, positive semidefiniteness, and unit trace, returning
/// the wrapped operator or the violated invariant.
pub fn validate_density(op: &LabeledOperator, tols: DensityTol) -> Result<DensityOperator> {
    DensityOperator::new(op.clone(), tols)
}

/// Random density operator of the given rank (Ginibre construction),
/// deterministic per seed. The single factor is labeled `Q`.
pub fn random_density(dim: usize, rank: usize, seed: u64) -> Result<DensityOperator> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_density_rng(vec![SubsystemLabel::new("Q", dim)?], rank, &mut rng)
}

/// Random density operator over explicit factors, drawing from the given
/// RNG.
pub fn random_density_rng(
    factors: Vec<SubsystemLabel>,
    rank: usize,
    rng: &mut impl Rng,
) -> Result<DensityOperator> {
    let dim: usize = factors.iter().map(|f| f.dim()).product();
    if rank == 0 || rank > dim {
        return Err(Error::RankOutOfRange { rank, dim });
    }
    let g = ginibre(dim, rank, rng);
    let m = &g * g.adjoint();
    let trace: C64 = m.diagonal().iter().sum();
    let op = LabeledOperator::new(factors, m / trace)?;
    Ok(validate_density(&op, DensityTol::default()).expect("Ginibre construction is PSD"))
}

/// Normalized pure-state projector `|psi><psi|` from a ket.
pub fn pure_state(factors: Vec<SubsystemLabel>, ket: &CVec) -> Result<DensityOperator> {
    let dim: usize = factors.iter().map(|f| f.dim()).product();
    if ket.len() != dim {
        return Err(Error::Shape(format!(
            "ket length {} does not match dimension {dim}",
            ket.len()
        )));
    }
    let norm = ket.norm();
    if norm <= 0.0 {
        return Err(Error::Invalid("cannot normalize the zero vector".into()));
    }
    let v = ket / C64::new(norm, 0.0);
    let m = CMat::from_fn(dim, dim, |r, c| v[r] * v[c].conj());
    Ok(DensityOperator::new_unchecked(LabeledOperator::new(factors, m)?))
}

/// Computational-basis ket `|k>`.
pub fn basis_ket(dim: usize, k: usize) -> CVec {
    let mut v = CVec::from_element(dim, C64::new(0.0, 0.0));
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Basis-state projector `|k><k|` on a single labeled factor.
pub fn basis_projector(label: SubsystemLabel, k: usize) -> Result<DensityOperator> {
    let dim = label.dim();
    pure_state(vec![label], &basis_ket(dim, k))
}

/// Maximally entangled state `(1/sqrt d) sum_l |l>|l>` as a rank-1 projector
/// on two `d`-dimensional factors.
pub fn maximally_entangled(d: usize, left: &str, right: &str) -> Result<DensityOperator> {
    let factors = vec![SubsystemLabel::new(left, d)?, SubsystemLabel::new(right, d)?];
    let side = d * d;
    let mut m = CMat::zeros(side, side);
    let amp = r64(1.0 / d as f64);
    for l in 0..d {
        for k in 0..d {
            m[(l * d + l, k * d + k)] = amp;
        }
    }
    Ok(DensityOperator::new_unchecked(LabeledOperator::new(factors, m)?))
}

/// Classical-quantum state `sum_l p_l |l><l| (x) rho^(l)` with the pointer
/// register first. The marginal on the pointer is `diag(p)`.
pub fn cq_state(
    probs: &[f64],
    payloads: &[DensityOperator],
    pointer: &str,
) -> Result<DensityOperator> {
    if probs.len() != payloads.len() {
        return Err(Error::Invalid(format!(
            "{} probabilities for {} payload states",
            probs.len(),
            payloads.len()
        )));
    }
    if probs.is_empty() {
        return Err(Error::Invalid("empty ensemble".into()));
    }
    check_distribution(probs)?;
    let payload_factors = payloads[0].op().factors().to_vec();
    for (i, p) in payloads.iter().enumerate() {
        if p.op().factors() != payload_factors.as_slice() {
            return Err(Error::Shape(format!("payload {i} lives on different factors")));
        }
    }
    let m = probs.len();
    let ps: usize = payload_factors.iter().map(|f| f.dim()).product();
    let mut factors = vec![SubsystemLabel::new(pointer, m)?];
    factors.extend(payload_factors);

    let mut out = CMat::zeros(m * ps, m * ps);
    for (l, (&p, payload)) in probs.iter().zip(payloads).enumerate() {
        let block = payload.op().entries();
        for r in 0..ps {
            for c in 0..ps {
                out[(l * ps + r, l * ps + c)] = r64(p) * block[(r, c)];
            }
        }
    }
    Ok(DensityOperator::new_unchecked(LabeledOperator::new(factors, out)?))
}

pub(crate) fn check_distribution(probs: &[f64]) -> Result<()> {
    for (i, &p) in probs.iter().enumerate() {
        if !(p >= -1e-12) {
            return Err(Error::NotADistribution(format!("weight {i} is {p}")));
        }
    }
    let sum: f64 = probs.iter().sum();
    if (sum - 1.0).abs() > 1e-9 {
        return Err(Error::NotADistribution(format!("weights sum to {sum}")));
    }
    Ok(())
}

/// Strong-subadditivity gap `S(RS) + S(SE) - S(RSE) - S(S)` in bits for a
/// state over exactly three factors, taken positionally as reference,
/// system, environment.
pub fn conditional_mutual_information(sigma: &DensityOperator) -> Result<f64> {
    let factors = sigma.op().factors();
    if factors.len() != 3 {
        return Err(Error::Shape(format!(
            "conditional mutual information needs a tripartite state, got {} factors",
            factors.len()
        )));
    }
    let r = factors[0].name().to_string();
    let e = factors[2].name().to_string();

    let s_rs = von_neumann_entropy(&sigma.marginal(&[&e])?);
    let s_se = von_neumann_entropy(&sigma.marginal(&[&r])?);
    let s_s = von_neumann_entropy(&sigma.marginal(&[&r, &e])?);
    let s_rse = von_neumann_entropy(sigma);
    Ok(s_rs + s_se - s_rse - s_s)
}

/// Markovianity decision for a tripartite state.
#[derive(Clone, Copy, Debug)]
pub struct MarkovVerdict {
    pub markov: bool,
    /// The strong-subadditivity gap in bits, reported regardless of the
    /// decision.
    pub gap_bits: f64,
}

/// A state is accepted as Markov when its strong-subadditivity gap does not
/// exceed `tol` bits.
pub fn is_markov(sigma: &DensityOperator, tol: f64) -> Result<MarkovVerdict> {
    let gap_bits = conditional_mutual_information(sigma)?;
    Ok(MarkovVerdict { markov: gap_bits <= tol, gap_bits })
}
