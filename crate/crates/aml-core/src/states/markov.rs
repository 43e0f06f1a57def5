//! Markov states: tripartite states built from a direct-sum block structure
//! of the system space, with each block splitting into a left part tied to
//! the reference and a right part tied to the environment.

use crate::linalg::{r64, CMat, DensityOperator, DensityTol, LabeledOperator, SubsystemLabel, C64};
use crate::{Error, Result};

/// Decomposition of the system space into blocks `left_k (x) right_k`,
/// together with the isometry embedding the block sum into the system space.
#[derive(Clone, Debug)]
pub struct MarkovStructure {
    blocks: Vec<(usize, usize)>,
    /// `d_s x total_block_dim` matrix with orthonormal columns.
    embedding: CMat,
    d_s: usize,
}

impl MarkovStructure {
    /// Blocks laid out consecutively in the computational basis of the
    /// system space.
    pub fn contiguous(blocks: Vec<(usize, usize)>, d_s: usize) -> Result<Self> {
        let total = Self::check_blocks(&blocks, d_s)?;
        let mut embedding = CMat::zeros(d_s, total);
        for i in 0..total {
            embedding[(i, i)] = r64(1.0);
        }
        Ok(Self { blocks, embedding, d_s })
    }

    /// Blocks embedded by an explicit isometry (unitary when the block
    /// dimensions saturate the system space).
    pub fn with_embedding(blocks: Vec<(usize, usize)>, d_s: usize, embedding: CMat) -> Result<Self> {
        let total = Self::check_blocks(&blocks, d_s)?;
        if embedding.nrows() != d_s || embedding.ncols() != total {
            return Err(Error::Shape(format!(
                "embedding must be {d_s}x{total}, got {}x{}",
                embedding.nrows(),
                embedding.ncols()
            )));
        }
        let gram = embedding.adjoint() * &embedding;
        let mut dev: f64 = 0.0;
        for r in 0..total {
            for c in 0..total {
                let expected = if r == c { r64(1.0) } else { r64(0.0) };
                dev = dev.max((gram[(r, c)] - expected).norm());
            }
        }
        if dev > crate::tol::UNITARITY {
            return Err(Error::NotUnitary { deviation: dev, tol: crate::tol::UNITARITY });
        }
        Ok(Self { blocks, embedding, d_s })
    }

    fn check_blocks(blocks: &[(usize, usize)], d_s: usize) -> Result<usize> {
        if blocks.is_empty() {
            return Err(Error::Invalid("structure needs at least one block".into()));
        }
        if blocks.iter().any(|&(l, r)| l == 0 || r == 0) {
            return Err(Error::ZeroDimension);
        }
        let total: usize = blocks.iter().map(|&(l, r)| l * r).sum();
        if total > d_s {
            return Err(Error::Shape(format!(
                "blocks span {total} dimensions but the system space has {d_s}"
            )));
        }
        Ok(total)
    }

    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn d_s(&self) -> usize {
        self.d_s
    }

    pub fn embedding(&self) -> &CMat {
        &self.embedding
    }

    pub fn total_block_dim(&self) -> usize {
        self.blocks.iter().map(|&(l, r)| l * r).sum()
    }

    pub fn saturates(&self) -> bool {
        self.total_block_dim() == self.d_s
    }

    /// Offset of block `k` inside the concatenated block space.
    pub fn block_offset(&self, k: usize) -> usize {
        self.blocks[..k].iter().map(|&(l, r)| l * r).sum()
    }
}

/// The per-block data of a Markov state: weights, reference-left states, and
/// right-environment states.
#[derive(Clone, Debug)]
pub struct MarkovBlocks {
    weights: Vec<f64>,
    left_states: Vec<DensityOperator>,
    right_states: Vec<DensityOperator>,
}

impl MarkovBlocks {
    /// `left_states[k]` must live on two factors `(reference, left_k)` and
    /// `right_states[k]` on `(right_k, environment)`.
    pub fn new(
        weights: Vec<f64>,
        left_states: Vec<DensityOperator>,
        right_states: Vec<DensityOperator>,
    ) -> Result<Self> {
        if weights.len() != left_states.len() || weights.len() != right_states.len() {
            return Err(Error::Invalid(format!(
                "{} weights, {} left states, {} right states",
                weights.len(),
                left_states.len(),
                right_states.len()
            )));
        }
        super::check_distribution(&weights)?;
        for (k, st) in left_states.iter().chain(right_states.iter()).enumerate() {
            if st.op().factors().len() != 2 {
                return Err(Error::Shape(format!(
                    "block state {k} must have exactly two factors"
                )));
            }
        }
        Ok(Self { weights, left_states, right_states })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn left_states(&self) -> &[DensityOperator] {
        &self.left_states
    }

    pub fn right_states(&self) -> &[DensityOperator] {
        &self.right_states
    }
}

/// Assembles the block direct sum `sum_k w_k left_k (x) right_k`, embeds it
/// into the system space, and returns the tripartite state with factor order
/// (reference, system, environment).
pub fn markov_state(structure: &MarkovStructure, blocks: &MarkovBlocks) -> Result<DensityOperator> {
    if blocks.weights().len() != structure.block_count() {
        return Err(Error::Shape(format!(
            "{} blocks of data for a {}-block structure",
            blocks.weights().len(),
            structure.block_count()
        )));
    }
    let d_r = blocks.left_states()[0].op().factors()[0].dim();
    let d_e = blocks.right_states()[0].op().factors()[1].dim();
    let r_name = blocks.left_states()[0].op().factors()[0].name().to_string();
    let e_name = blocks.right_states()[0].op().factors()[1].name().to_string();

    for (k, &(dl, dr)) in structure.blocks().iter().enumerate() {
        let lf = blocks.left_states()[k].op().factors();
        let rf = blocks.right_states()[k].op().factors();
        if lf[0].dim() != d_r || lf[1].dim() != dl {
            return Err(Error::Shape(format!(
                "left state {k} has dims ({}, {}), structure expects ({d_r}, {dl})",
                lf[0].dim(),
                lf[1].dim()
            )));
        }
        if rf[0].dim() != dr || rf[1].dim() != d_e {
            return Err(Error::Shape(format!(
                "right state {k} has dims ({}, {}), structure expects ({dr}, {d_e})",
                rf[0].dim(),
                rf[1].dim()
            )));
        }
    }

    // Assemble on reference (x) block-sum (x) environment, block-diagonally.
    let b_total = structure.total_block_dim();
    let side = d_r * b_total * d_e;
    let mut inner = CMat::zeros(side, side);
    let idx = |r: usize, b: usize, e: usize| (r * b_total + b) * d_e + e;
    for (k, &(dl, dr)) in structure.blocks().iter().enumerate() {
        let off = structure.block_offset(k);
        let w = r64(blocks.weights()[k]);
        let left = blocks.left_states()[k].op().entries();
        let right = blocks.right_states()[k].op().entries();
        for r in 0..d_r {
            for rp in 0..d_r {
                for l in 0..dl {
                    for lp in 0..dl {
                        let lv = left[(r * dl + l, rp * dl + lp)];
                        if lv == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for rr in 0..dr {
                            for rrp in 0..dr {
                                for e in 0..d_e {
                                    for ep in 0..d_e {
                                        let rv = right[(rr * d_e + e, rrp * d_e + ep)];
                                        inner[(
                                            idx(r, off + l * dr + rr, e),
                                            idx(rp, off + lp * dr + rrp, ep),
                                        )] += w * lv * rv;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Embed the block sum into the system space: W = I_R (x) Gamma (x) I_E.
    let eye_r = CMat::identity(d_r, d_r);
    let eye_e = CMat::identity(d_e, d_e);
    let w = eye_r.kronecker(&structure.embedding().kronecker(&eye_e));
    let out = &w * inner * w.adjoint();

    let factors = vec![
        SubsystemLabel::new(r_name, d_r)?,
        SubsystemLabel::new("S", structure.d_s())?,
        SubsystemLabel::new(e_name, d_e)?,
    ];
    super::validate_density(&LabeledOperator::new(factors, out)?, DensityTol::default())
}
