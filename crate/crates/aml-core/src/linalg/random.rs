//! Seeded random sampling: Ginibre matrices, Haar unitaries, pure states.
//!
//! Everything is deterministic given a seed. Independent streams for
//! parallel work are derived from a `(seed, stream)` pair.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::label::SubsystemLabel;
use super::operator::{CMat, CVec, LabeledOperator, C64};
use crate::Result;

/// RNG for stream `stream` of the master seed. Used by parallel searches so
/// every trial draws from its own deterministic stream regardless of thread
/// scheduling.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex standard-normal (Ginibre) matrix.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal))
            * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the R diagonal
/// phase-normalized.
pub fn haar_unitary_rng(dim: usize, rng: &mut impl Rng) -> CMat {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Haar-distributed unitary over the given factors, deterministic per seed.
pub fn haar_unitary(factors: Vec<SubsystemLabel>, seed: u64) -> Result<LabeledOperator> {
    let dim: usize = factors.iter().map(|f| f.dim()).product();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    LabeledOperator::new(factors, haar_unitary_rng(dim, &mut rng))
}

/// Haar-random normalized ket.
pub fn random_pure_rng(dim: usize, rng: &mut impl Rng) -> CVec {
    let g = ginibre(dim, 1, rng);
    let v = CVec::from_column_slice(g.as_slice());
    let norm = v.norm();
    v / C64::new(norm, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SubsystemLabel;

    fn lbl(name: &str, dim: usize) -> SubsystemLabel {
        SubsystemLabel::new(name, dim).unwrap()
    }

    #[test]
    fn dimension_one_unitary_is_a_phase() {
        let u = haar_unitary(vec![lbl("Q", 1)], 3).unwrap();
        assert!((u.entries()[(0, 0)].norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        for seed in 0..5u64 {
            let u = haar_unitary(vec![lbl("S", 2), lbl("E", 3)], seed).unwrap();
            assert!(u.unitarity_deviation() <= 1e-10, "seed {seed}");
        }
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = haar_unitary(vec![lbl("Q", 4)], 99).unwrap();
        let b = haar_unitary(vec![lbl("Q", 4)], 99).unwrap();
        assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn different_streams_differ() {
        let mut r0 = stream_rng(5, 0);
        let mut r1 = stream_rng(5, 1);
        let a = haar_unitary_rng(3, &mut r0);
        let b = haar_unitary_rng(3, &mut r1);
        assert!((&a - &b).iter().any(|z| z.norm() > 1e-6));
    }

    #[test]
    fn random_pure_is_normalized() {
        let mut rng = stream_rng(8, 0);
        let v = random_pure_rng(5, &mut rng);
        assert!((v.norm() - 1.0).abs() <= 1e-12);
    }
}
