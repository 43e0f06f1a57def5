use nalgebra::{DMatrix, DVector};

use super::label::SubsystemLabel;
use crate::{Error, Result};

pub type C64 = num_complex::Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

/// Complex scalar from real and imaginary parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Complex scalar from a real value.
#[inline]
pub fn r64(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// A complex square matrix over an ordered list of labeled tensor factors.
///
/// The matrix is indexed in the factors' tensor order: the composite row
/// index of factor indices `(i_0, ..., i_{n-1})` is the row-major mixed-radix
/// number with `i_0` most significant, matching the Kronecker-product
/// convention. The factor order is part of the operator's identity;
/// reordering is the explicit [`LabeledOperator::permute_factors`] operation.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledOperator {
    factors: Vec<SubsystemLabel>,
    entries: CMat,
}

impl LabeledOperator {
    /// Wraps a matrix over the given factors.
    ///
    /// Fails if the matrix is not square with side equal to the product of
    /// the factor dimensions, or if two factors share a name.
    pub fn new(factors: Vec<SubsystemLabel>, entries: CMat) -> Result<Self> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        if entries.nrows() != side || entries.ncols() != side {
            return Err(Error::Shape(format!(
                "expected a {side}x{side} matrix for factors {:?}, got {}x{}",
                factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                entries.nrows(),
                entries.ncols()
            )));
        }
        for (i, f) in factors.iter().enumerate() {
            if factors[..i].iter().any(|g| g.name() == f.name()) {
                return Err(Error::DuplicateLabel(f.name().to_string()));
            }
        }
        Ok(Self { factors, entries })
    }

    pub fn identity(factors: Vec<SubsystemLabel>) -> Result<Self> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        Self::new(factors, CMat::identity(side, side))
    }

    pub fn zeros(factors: Vec<SubsystemLabel>) -> Result<Self> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        Self::new(factors, CMat::zeros(side, side))
    }

    /// Matrix unit `|i><j|` over the given factors.
    pub fn matrix_unit(factors: Vec<SubsystemLabel>, i: usize, j: usize) -> Result<Self> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        let mut m = CMat::zeros(side, side);
        m[(i, j)] = C64::new(1.0, 0.0);
        Self::new(factors, m)
    }

    pub fn factors(&self) -> &[SubsystemLabel] {
        &self.factors
    }

    pub fn entries(&self) -> &CMat {
        &self.entries
    }

    pub fn into_entries(self) -> CMat {
        self.entries
    }

    pub fn side(&self) -> usize {
        self.entries.nrows()
    }

    pub fn factor_position(&self, name: &str) -> Option<usize> {
        self.factors.iter().position(|f| f.name() == name)
    }

    pub fn has_factors(&self, other: &[SubsystemLabel]) -> bool {
        self.factors == other
    }

    /// Reinterprets the matrix over a different factor list with the same
    /// total dimension. The entries are untouched; only the labeling changes.
    pub fn with_factors(self, factors: Vec<SubsystemLabel>) -> Result<Self> {
        Self::new(factors, self.entries)
    }

    /// Kronecker product; factor lists are concatenated.
    pub fn tensor(&self, other: &LabeledOperator) -> Result<LabeledOperator> {
        for f in other.factors() {
            if self.factor_position(f.name()).is_some() {
                return Err(Error::DuplicateLabel(f.name().to_string()));
            }
        }
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        LabeledOperator::new(factors, self.entries.kronecker(&other.entries))
    }

    /// Traces out the named factors, preserving the order of the rest.
    ///
    /// Tracing every factor yields a 1x1 operator holding the trace.
    pub fn partial_trace(&self, traced: &[&str]) -> Result<LabeledOperator> {
        let mut traced_pos = Vec::with_capacity(traced.len());
        for name in traced {
            match self.factor_position(name) {
                Some(p) if traced_pos.contains(&p) => {
                    return Err(Error::DuplicateLabel((*name).to_string()))
                }
                Some(p) => traced_pos.push(p),
                None => return Err(Error::UnknownLabel((*name).to_string())),
            }
        }
        let strides = strides_of(&self.factors);
        let kept_pos: Vec<usize> =
            (0..self.factors.len()).filter(|p| !traced_pos.contains(p)).collect();

        let kept_offsets = enumerate_offsets(&kept_pos, &self.factors, &strides);
        let traced_offsets = enumerate_offsets(&traced_pos, &self.factors, &strides);

        let side = kept_offsets.len();
        let mut out = CMat::zeros(side, side);
        for (r, &ro) in kept_offsets.iter().enumerate() {
            for (c, &co) in kept_offsets.iter().enumerate() {
                let mut acc = C64::new(0.0, 0.0);
                for &to in &traced_offsets {
                    acc += self.entries[(ro + to, co + to)];
                }
                out[(r, c)] = acc;
            }
        }
        let kept_factors: Vec<SubsystemLabel> =
            kept_pos.iter().map(|&p| self.factors[p].clone()).collect();
        LabeledOperator::new(kept_factors, out)
    }

    /// Reorders the tensor factors. `order` must name every factor exactly
    /// once.
    pub fn permute_factors(&self, order: &[&str]) -> Result<LabeledOperator> {
        if order.len() != self.factors.len() {
            return Err(Error::Shape(format!(
                "permutation names {} factors, operator has {}",
                order.len(),
                self.factors.len()
            )));
        }
        let mut old_pos = Vec::with_capacity(order.len());
        for name in order {
            match self.factor_position(name) {
                Some(p) if old_pos.contains(&p) => {
                    return Err(Error::DuplicateLabel((*name).to_string()))
                }
                Some(p) => old_pos.push(p),
                None => return Err(Error::UnknownLabel((*name).to_string())),
            }
        }
        let strides = strides_of(&self.factors);
        let old_offsets = enumerate_offsets(&old_pos, &self.factors, &strides);
        let side = self.side();
        let mut out = CMat::zeros(side, side);
        for (nr, &or) in old_offsets.iter().enumerate() {
            for (nc, &oc) in old_offsets.iter().enumerate() {
                out[(nr, nc)] = self.entries[(or, oc)];
            }
        }
        let factors: Vec<SubsystemLabel> =
            old_pos.iter().map(|&p| self.factors[p].clone()).collect();
        LabeledOperator::new(factors, out)
    }

    /// Column-stacking vectorization. The inner product of two
    /// vectorizations equals the Hilbert-Schmidt inner product
    /// `Tr(X^dag Y)`.
    pub fn vectorize(&self) -> CVec {
        CVec::from_column_slice(self.entries.as_slice())
    }

    /// Inverse of [`LabeledOperator::vectorize`] for the given factors.
    pub fn devectorize(v: &CVec, factors: Vec<SubsystemLabel>) -> Result<LabeledOperator> {
        let side: usize = factors.iter().map(|f| f.dim()).product();
        if v.len() != side * side {
            return Err(Error::Shape(format!(
                "vector of length {} cannot fill a {side}x{side} operator",
                v.len()
            )));
        }
        LabeledOperator::new(factors, CMat::from_column_slice(side, side, v.as_slice()))
    }

    pub fn trace(&self) -> C64 {
        self.entries.diagonal().iter().sum()
    }

    pub fn adjoint(&self) -> LabeledOperator {
        Self { factors: self.factors.clone(), entries: self.entries.adjoint() }
    }

    pub fn transpose(&self) -> LabeledOperator {
        Self { factors: self.factors.clone(), entries: self.entries.transpose() }
    }

    pub fn scale(&self, c: C64) -> LabeledOperator {
        Self { factors: self.factors.clone(), entries: &self.entries * c }
    }

    /// Matrix product; both operands must live on the same factors.
    pub fn matmul(&self, other: &LabeledOperator) -> Result<LabeledOperator> {
        self.require_same_factors(other)?;
        Ok(Self { factors: self.factors.clone(), entries: &self.entries * &other.entries })
    }

    /// `U * self * U^dag` for `U` on the same factors.
    pub fn conjugate_by(&self, u: &LabeledOperator) -> Result<LabeledOperator> {
        self.require_same_factors(u)?;
        Ok(Self {
            factors: self.factors.clone(),
            entries: &u.entries * &self.entries * u.entries.adjoint(),
        })
    }

    /// Hilbert-Schmidt inner product `Tr(self^dag other)`.
    pub fn hs_inner(&self, other: &LabeledOperator) -> Result<C64> {
        self.require_same_factors(other)?;
        Ok(self.vectorize().dotc(&other.vectorize()))
    }

    /// Largest entry magnitude of `self - self^dag`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for r in 0..self.side() {
            for c in r..self.side() {
                dev = dev.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// Largest entry magnitude of `U^dag U - I`.
    pub fn unitarity_deviation(&self) -> f64 {
        let side = self.side();
        let gram = self.entries.adjoint() * &self.entries;
        let mut dev: f64 = 0.0;
        for r in 0..side {
            for c in 0..side {
                let expected = if r == c { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) };
                dev = dev.max((gram[(r, c)] - expected).norm());
            }
        }
        dev
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude of the difference; panics on factor mismatch.
    pub fn max_diff(&self, other: &LabeledOperator) -> f64 {
        assert_eq!(self.factors, other.factors, "max_diff requires identical factors");
        (&self.entries - &other.entries).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn require_same_factors(&self, other: &LabeledOperator) -> Result<()> {
        if self.factors != other.factors {
            return Err(Error::Shape(format!(
                "factor lists differ: {:?} vs {:?}",
                self.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                other.factors.iter().map(|f| f.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(())
    }
}

/// A factor name not already present in `taken`: `R` if free, otherwise
/// `R0`, `R1`, ...
pub(crate) fn fresh_reference_name(taken: &[SubsystemLabel]) -> String {
    if !taken.iter().any(|f| f.name() == "R") {
        return "R".to_string();
    }
    let mut k = 0usize;
    loop {
        let candidate = format!("R{k}");
        if !taken.iter().any(|f| f.name() == candidate) {
            return candidate;
        }
        k += 1;
    }
}

/// Row-major strides: `stride[k]` is the index step of factor `k`.
fn strides_of(factors: &[SubsystemLabel]) -> Vec<usize> {
    let n = factors.len();
    let mut strides = vec![1usize; n];
    for k in (0..n.saturating_sub(1)).rev() {
        strides[k] = strides[k + 1] * factors[k + 1].dim();
    }
    strides
}

/// Composite-index offsets of all assignments to the factors at `positions`,
/// enumerated row-major in the order given.
fn enumerate_offsets(
    positions: &[usize],
    factors: &[SubsystemLabel],
    strides: &[usize],
) -> Vec<usize> {
    let mut offsets = vec![0usize];
    for &p in positions {
        let dim = factors[p].dim();
        let stride = strides[p];
        let mut next = Vec::with_capacity(offsets.len() * dim);
        for &base in &offsets {
            for i in 0..dim {
                next.push(base + i * stride);
            }
        }
        offsets = next;
    }
    offsets
}

impl std::ops::Add for &LabeledOperator {
    type Output = LabeledOperator;
    fn add(self, rhs: &LabeledOperator) -> LabeledOperator {
        assert_eq!(self.factors, rhs.factors, "operator addition requires identical factors");
        LabeledOperator { factors: self.factors.clone(), entries: &self.entries + &rhs.entries }
    }
}

impl std::ops::Sub for &LabeledOperator {
    type Output = LabeledOperator;
    fn sub(self, rhs: &LabeledOperator) -> LabeledOperator {
        assert_eq!(self.factors, rhs.factors, "operator subtraction requires identical factors");
        LabeledOperator { factors: self.factors.clone(), entries: &self.entries - &rhs.entries }
    }
}

impl std::ops::Neg for &LabeledOperator {
    type Output = LabeledOperator;
    fn neg(self) -> LabeledOperator {
        self.scale(C64::new(-1.0, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lbl(name: &str, dim: usize) -> SubsystemLabel {
        SubsystemLabel::new(name, dim).unwrap()
    }

    fn basis_proj(name: &str, dim: usize, k: usize) -> LabeledOperator {
        let mut m = CMat::zeros(dim, dim);
        m[(k, k)] = r64(1.0);
        LabeledOperator::new(vec![lbl(name, dim)], m).unwrap()
    }

    fn random_op(names: &[(&str, usize)], seed: u64) -> LabeledOperator {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let factors: Vec<_> = names.iter().map(|&(n, d)| lbl(n, d)).collect();
        let side: usize = factors.iter().map(|f| f.dim()).product();
        let m = CMat::from_fn(side, side, |_, _| {
            c64(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        LabeledOperator::new(factors, m).unwrap()
    }

    #[test]
    fn tensor_of_identities_is_identity() {
        let a = LabeledOperator::identity(vec![lbl("A", 2)]).unwrap();
        let b = LabeledOperator::identity(vec![lbl("B", 2)]).unwrap();
        let t = a.tensor(&b).unwrap();
        assert_eq!(t.side(), 4);
        assert!(t.max_diff(&LabeledOperator::identity(t.factors().to_vec()).unwrap()) == 0.0);
    }

    #[test]
    fn tensor_of_basis_projectors() {
        let t = basis_proj("A", 2, 0).tensor(&basis_proj("B", 2, 1)).unwrap();
        // |0><0| (x) |1><1| hits exactly composite index 1.
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == 1 && c == 1 { 1.0 } else { 0.0 };
                assert_eq!(t.entries()[(r, c)], r64(expected));
            }
        }
    }

    #[test]
    fn tensor_trace_is_multiplicative() {
        let a = random_op(&[("A", 2)], 1);
        let b = random_op(&[("B", 3)], 2);
        let t = a.tensor(&b).unwrap();
        let lhs = t.trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() <= 1e-12, "trace mismatch: {lhs} vs {rhs}");
    }

    #[test]
    fn tensor_rejects_duplicate_labels() {
        let a = LabeledOperator::identity(vec![lbl("A", 2)]).unwrap();
        match a.tensor(&a) {
            Err(Error::DuplicateLabel(name)) => assert_eq!(name, "A"),
            other => panic!("expected duplicate-label error, got {other:?}"),
        }
    }

    /// Independent partial-trace oracle: explicit double loop over the traced
    /// factor's indices, assuming it is the last factor.
    fn trace_last_factor_oracle(x: &LabeledOperator) -> CMat {
        let d_last = x.factors().last().unwrap().dim();
        let d_kept = x.side() / d_last;
        let mut out = CMat::zeros(d_kept, d_kept);
        for r in 0..d_kept {
            for c in 0..d_kept {
                let mut acc = C64::new(0.0, 0.0);
                for e in 0..d_last {
                    acc += x.entries()[(r * d_last + e, c * d_last + e)];
                }
                out[(r, c)] = acc;
            }
        }
        out
    }

    #[test]
    fn partial_trace_of_product_recovers_marginal() {
        let rho = random_op(&[("S", 2)], 3);
        let sigma = {
            // a normalized state on E so that Tr(sigma) = 1
            let raw = random_op(&[("E", 3)], 4);
            let psd = raw.matmul(&raw.adjoint()).unwrap();
            psd.scale(r64(1.0) / psd.trace())
        };
        let joint = rho.tensor(&sigma).unwrap();
        let back = joint.partial_trace(&["E"]).unwrap();
        assert!(back.max_diff(&rho) <= 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_summation_oracle() {
        let x = random_op(&[("S", 2), ("E", 3)], 5);
        let traced = x.partial_trace(&["E"]).unwrap();
        let oracle = trace_last_factor_oracle(&x);
        assert_eq!(traced.side(), 2);
        for r in 0..2 {
            for c in 0..2 {
                assert!(
                    (traced.entries()[(r, c)] - oracle[(r, c)]).norm() <= 1e-12,
                    "mismatch at ({r},{c})"
                );
            }
        }
    }

    #[test]
    fn partial_trace_over_middle_factor() {
        // Tracing a non-trailing factor must agree with permuting it last
        // and tracing there.
        let x = random_op(&[("R", 2), ("S", 2), ("E", 2)], 6);
        let direct = x.partial_trace(&["S"]).unwrap();
        let via_permute = x
            .permute_factors(&["R", "E", "S"])
            .unwrap()
            .partial_trace(&["S"])
            .unwrap();
        assert!(direct.max_diff(&via_permute) <= 1e-13);
    }

    #[test]
    fn partial_trace_of_everything_is_the_trace() {
        let x = random_op(&[("S", 2), ("E", 2)], 7);
        let t = x.partial_trace(&["S", "E"]).unwrap();
        assert_eq!(t.side(), 1);
        assert!(t.factors().is_empty());
        assert!((t.entries()[(0, 0)] - x.trace()).norm() <= 1e-13);
    }

    #[test]
    fn partial_trace_unknown_label_errors() {
        let x = random_op(&[("S", 2)], 8);
        match x.partial_trace(&["E"]) {
            Err(Error::UnknownLabel(name)) => assert_eq!(name, "E"),
            other => panic!("expected unknown-label error, got {other:?}"),
        }
    }

    #[test]
    fn permute_round_trip() {
        let x = random_op(&[("R", 2), ("S", 3)], 9);
        let back = x.permute_factors(&["S", "R"]).unwrap().permute_factors(&["R", "S"]).unwrap();
        assert!(x.max_diff(&back) == 0.0);
    }

    #[test]
    fn permute_matches_swapped_tensor() {
        let a = random_op(&[("A", 2)], 10);
        let b = random_op(&[("B", 3)], 11);
        let ab = a.tensor(&b).unwrap();
        let ba = b.tensor(&a).unwrap();
        assert!(ab.permute_factors(&["B", "A"]).unwrap().max_diff(&ba) <= 1e-14);
    }

    #[test]
    fn vectorize_round_trip_and_hs_inner() {
        let x = random_op(&[("S", 2), ("E", 2)], 12);
        let v = x.vectorize();
        let back = LabeledOperator::devectorize(&v, x.factors().to_vec()).unwrap();
        assert!(x.max_diff(&back) == 0.0);

        let eye = LabeledOperator::identity(vec![lbl("Q", 2)]).unwrap();
        let ip = eye.hs_inner(&eye).unwrap();
        assert!((ip - r64(2.0)).norm() <= 1e-14);

        // <vec X, vec Y> = Tr(X^dag Y), computed by an explicit trace.
        let y = random_op(&[("S", 2), ("E", 2)], 13);
        let direct = x.adjoint().matmul(&y).unwrap().trace();
        let via_vec = x.vectorize().dotc(&y.vectorize());
        assert!((direct - via_vec).norm() <= 1e-12);
    }

    #[test]
    fn devectorize_length_mismatch_errors() {
        let v = CVec::from_element(5, r64(0.0));
        assert!(matches!(
            LabeledOperator::devectorize(&v, vec![lbl("S", 2)]),
            Err(Error::Shape(_))
        ));
    }
}
