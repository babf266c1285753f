//! The real embeddings `x -> x~` and `T -> T~` that linearize the quadratic
//! form: `<T x, x> = <T~, x~>`.
//!
//! Four variants exist. The full variants embed into `R^{n(n+1)/2}` (real)
//! and `R^{n^2}` (complex); the trace-one variants drop one coordinate and
//! pair against trace-zero operators only. Coordinates follow a fixed block
//! order: block `i` covers index pairs `(i, j)` for `j >= i`, the complex
//! variants interleaving `(Re, Im)` slots for each off-diagonal pair, and the
//! trace-one variants dropping the leading `(1,1)` slot. Every rank test
//! downstream depends on this pairing, so the ordering and the off-diagonal
//! weight 2 are frozen by golden tests.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::frame::{Frame, FrameVector};
use crate::linalg::C64;
use crate::operator::SelfAdjointOperator;

/// Which of the four embeddings to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TildeVariant {
    /// `R^n -> R^{n(n+1)/2}`, all self-adjoint operators.
    RealFull,
    /// `C^n -> R^{n^2}`, all self-adjoint operators.
    ComplexFull,
    /// `R^n -> R^{n(n+1)/2 - 1}`, trace-one (equivalently trace-zero) case.
    RealTraceOne,
    /// `C^n -> R^{n^2 - 1}`, trace-one case.
    ComplexTraceOne,
}

impl TildeVariant {
    pub const ALL: [TildeVariant; 4] = [
        TildeVariant::RealFull,
        TildeVariant::ComplexFull,
        TildeVariant::RealTraceOne,
        TildeVariant::ComplexTraceOne,
    ];

    pub fn field(self) -> ScalarField {
        match self {
            TildeVariant::RealFull | TildeVariant::RealTraceOne => ScalarField::Real,
            TildeVariant::ComplexFull | TildeVariant::ComplexTraceOne => ScalarField::Complex,
        }
    }

    pub fn is_trace_one(self) -> bool {
        matches!(self, TildeVariant::RealTraceOne | TildeVariant::ComplexTraceOne)
    }

    /// The full (non-trace-one) variant for a scalar field.
    pub fn full(field: ScalarField) -> TildeVariant {
        match field {
            ScalarField::Real => TildeVariant::RealFull,
            ScalarField::Complex => TildeVariant::ComplexFull,
        }
    }

    /// The trace-one variant for a scalar field.
    pub fn trace_one(field: ScalarField) -> TildeVariant {
        match field {
            ScalarField::Real => TildeVariant::RealTraceOne,
            ScalarField::Complex => TildeVariant::ComplexTraceOne,
        }
    }

    /// Embedding dimension `D` for vectors of length `n`.
    pub fn embed_dim(self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidArgument("dimension must be >= 1".into()));
        }
        if self.is_trace_one() && n < 2 {
            return Err(Error::InvalidArgument(
                "trace-one variants require dimension >= 2".into(),
            ));
        }
        Ok(match self {
            TildeVariant::RealFull => n * (n + 1) / 2,
            TildeVariant::ComplexFull => n * n,
            TildeVariant::RealTraceOne => n * (n + 1) / 2 - 1,
            TildeVariant::ComplexTraceOne => n * n - 1,
        })
    }

    fn check_field(self, field: ScalarField, what: &str) -> Result<()> {
        if self.field() != field {
            return Err(Error::FieldMismatch(format!(
                "{what} has field {field}, variant {self:?} expects {}",
                self.field()
            )));
        }
        Ok(())
    }
}

impl std::fmt::Display for TildeVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            TildeVariant::RealFull => "real",
            TildeVariant::ComplexFull => "complex",
            TildeVariant::RealTraceOne => "real-trace-one",
            TildeVariant::ComplexTraceOne => "complex-trace-one",
        };
        write!(f, "{s}")
    }
}

/// One coordinate of the embedding, identified by its index pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Slot {
    /// Diagonal pair `(i, i)`. In trace-one variants the vector-side entry is
    /// `x_i^2 - x_1^2` rather than `x_i^2` (and the `(1,1)` slot is absent).
    Diag(usize),
    /// Real part of the off-diagonal pair `(i, j)`, `i < j`. In the real
    /// variants this is the only off-diagonal slot.
    OffRe(usize, usize),
    /// Imaginary part of the off-diagonal pair `(i, j)`, complex variants.
    OffIm(usize, usize),
}

impl Slot {
    /// Larger of the two coordinate indices behind the slot.
    pub(crate) fn max_index(self) -> usize {
        match self {
            Slot::Diag(i) => i,
            Slot::OffRe(_, j) | Slot::OffIm(_, j) => j,
        }
    }
}

/// Slots of the embedding in the frozen block order.
pub(crate) fn slots(variant: TildeVariant, n: usize) -> Result<Vec<Slot>> {
    let d = variant.embed_dim(n)?;
    let complex = !variant.field().is_real();
    let mut out = Vec::with_capacity(d);
    for i in 0..n {
        if !(variant.is_trace_one() && i == 0) {
            out.push(Slot::Diag(i));
        }
        for j in (i + 1)..n {
            out.push(Slot::OffRe(i, j));
            if complex {
                out.push(Slot::OffIm(i, j));
            }
        }
    }
    debug_assert_eq!(out.len(), d);
    Ok(out)
}

/// A vector in the embedding space `R^D`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeVector {
    variant: TildeVariant,
    dim: usize,
    entries: Vec<f64>,
}

impl TildeVector {
    pub fn new(variant: TildeVariant, dim: usize, entries: Vec<f64>) -> Result<Self> {
        let d = variant.embed_dim(dim)?;
        if entries.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "tilde vector has length {}, variant {variant:?} at n={dim} needs {d}",
                entries.len()
            )));
        }
        for (i, v) in entries.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("tilde entry {i} = {v}")));
            }
        }
        Ok(TildeVector { variant, dim, entries })
    }

    pub fn variant(&self) -> TildeVariant {
        self.variant
    }

    /// Ambient dimension `n` of the source space.
    pub fn source_dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &TildeVector) -> Result<f64> {
        if self.variant != other.variant || self.dim != other.dim {
            return Err(Error::DimensionMismatch("tilde pairing shape mismatch".into()));
        }
        Ok(self
            .entries
            .iter()
            .zip(other.entries.iter())
            .map(|(a, b)| a * b)
            .sum())
    }
}

/// Embed a frame vector: `x -> x~`.
pub fn embed_vector(x: &FrameVector, variant: TildeVariant) -> Result<TildeVector> {
    variant.check_field(x.field(), "vector")?;
    let n = x.len();
    let xs = x.entries();
    let entries = slots(variant, n)?
        .iter()
        .map(|slot| match *slot {
            Slot::Diag(i) => {
                let sq = xs[i].norm_sqr();
                if variant.is_trace_one() {
                    sq - xs[0].norm_sqr()
                } else {
                    sq
                }
            }
            Slot::OffRe(i, j) => (xs[i].conj() * xs[j]).re,
            Slot::OffIm(i, j) => (xs[i].conj() * xs[j]).im,
        })
        .collect();
    TildeVector::new(variant, n, entries)
}

/// Embed a Hermitian operator: `T -> T~`, with diagonal weight 1 and
/// off-diagonal weight 2 (complex: `+2 Re`, `-2 Im`).
///
/// For the trace-one variants the pairing `<T~, x~> = <T x, x>` holds only
/// for trace-zero `T`; the trace is not inspected here, callers handle the
/// constraint.
pub fn embed_operator(t: &SelfAdjointOperator, variant: TildeVariant) -> Result<TildeVector> {
    variant.check_field(t.field(), "operator")?;
    let n = t.dim();
    let entries = slots(variant, n)?
        .iter()
        .map(|slot| match *slot {
            Slot::Diag(i) => t.entry(i, i).re,
            Slot::OffRe(i, j) => 2.0 * t.entry(i, j).re,
            Slot::OffIm(i, j) => -2.0 * t.entry(i, j).im,
        })
        .collect();
    TildeVector::new(variant, n, entries)
}

/// Hermitian operator represented by a dual vector: the unique `T` with
/// `<T x, x> = <a, x~>` for all `x`. Trace-one variants produce a trace-zero
/// operator (the missing diagonal entry is `-sum` of the others).
pub fn operator_from_dual(a: &TildeVector) -> Result<SelfAdjointOperator> {
    let variant = a.variant();
    let n = a.source_dim();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for (slot, &v) in slots(variant, n)?.iter().zip(a.entries()) {
        match *slot {
            Slot::Diag(i) => m[(i, i)] = C64::new(v, 0.0),
            Slot::OffRe(i, j) => {
                m[(i, j)] += C64::new(v / 2.0, 0.0);
                m[(j, i)] += C64::new(v / 2.0, 0.0);
            }
            Slot::OffIm(i, j) => {
                m[(i, j)] += C64::new(0.0, -v / 2.0);
                m[(j, i)] += C64::new(0.0, v / 2.0);
            }
        }
    }
    if variant.is_trace_one() {
        let tail: f64 = (1..n).map(|i| m[(i, i)].re).sum();
        m[(0, 0)] = C64::new(-tail, 0.0);
    }
    SelfAdjointOperator::new(variant.field(), m)
}

/// The `m x D` real matrix whose row `k` is the embedding of frame vector `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TildeMatrix {
    variant: TildeVariant,
    dim: usize,
    rows: DMatrix<f64>,
}

impl TildeMatrix {
    pub fn variant(&self) -> TildeVariant {
        self.variant
    }

    pub fn source_dim(&self) -> usize {
        self.dim
    }

    pub fn embed_dim(&self) -> usize {
        self.rows.ncols()
    }

    pub fn num_rows(&self) -> usize {
        self.rows.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.rows
    }

    pub fn row(&self, k: usize) -> TildeVector {
        TildeVector {
            variant: self.variant,
            dim: self.dim,
            entries: self.rows.row(k).iter().copied().collect(),
        }
    }

    /// Column indices whose slots involve only coordinates `< block_dim`.
    /// Restricting to them tests injectivity for operators supported on the
    /// leading `block_dim x block_dim` block.
    pub fn leading_block_columns(&self, block_dim: usize) -> Vec<usize> {
        slots(self.variant, self.dim)
            .expect("slots valid for an existing tilde matrix")
            .iter()
            .enumerate()
            .filter(|(_, s)| s.max_index() < block_dim)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> DMatrix<f64> {
        DMatrix::from_fn(self.rows.nrows(), cols.len(), |r, c| self.rows[(r, cols[c])])
    }
}

/// Embed every frame vector; row `k` of the result is `x_k~`.
pub fn tilde_matrix(frame: &Frame, variant: TildeVariant) -> Result<TildeMatrix> {
    variant.check_field(frame.field(), "frame")?;
    let n = frame.dim();
    let d = variant.embed_dim(n)?;
    let mut rows = DMatrix::zeros(frame.len(), d);
    for (k, x) in frame.vectors().iter().enumerate() {
        let tv = embed_vector(x, variant)?;
        for (c, &v) in tv.entries().iter().enumerate() {
            rows[(k, c)] = v;
        }
    }
    Ok(TildeMatrix { variant, dim: n, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg;
    use crate::sampling;
    use proptest::prelude::*;

    /// Independent oracle: `<T x, x>` by raw double loop over matrix entries,
    /// written against the entries directly so it shares no code with the
    /// embedding path it is used to check.
    fn oracle_form(t: &SelfAdjointOperator, x: &FrameVector) -> f64 {
        let xs = x.entries();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..xs.len() {
            for j in 0..xs.len() {
                acc += t.entry(i, j) * xs[i].conj() * xs[j];
            }
        }
        acc.re
    }

    fn pairing(t: &SelfAdjointOperator, x: &FrameVector, variant: TildeVariant) -> f64 {
        embed_operator(t, variant)
            .unwrap()
            .dot(&embed_vector(x, variant).unwrap())
            .unwrap()
    }

    #[test]
    fn embed_dims() {
        assert_eq!(TildeVariant::RealFull.embed_dim(4).unwrap(), 10);
        assert_eq!(TildeVariant::ComplexFull.embed_dim(4).unwrap(), 16);
        assert_eq!(TildeVariant::RealTraceOne.embed_dim(4).unwrap(), 9);
        assert_eq!(TildeVariant::ComplexTraceOne.embed_dim(4).unwrap(), 15);
        assert!(TildeVariant::RealTraceOne.embed_dim(1).is_err());
        assert!(TildeVariant::ComplexTraceOne.embed_dim(1).is_err());
    }

    #[test]
    fn embed_vector_real_full() {
        let x = FrameVector::real(&[1.0, 0.0]).unwrap();
        assert_eq!(embed_vector(&x, TildeVariant::RealFull).unwrap().entries(), &[1.0, 0.0, 0.0]);

        let x = FrameVector::real(&[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(
            embed_vector(&x, TildeVariant::RealFull).unwrap().entries(),
            &[1.0, 2.0, 3.0, 4.0, 6.0, 9.0]
        );
    }

    #[test]
    fn embed_vector_real_trace_one() {
        let x = FrameVector::real(&[1.0, 0.0]).unwrap();
        assert_eq!(embed_vector(&x, TildeVariant::RealTraceOne).unwrap().entries(), &[0.0, -1.0]);
        let x = FrameVector::real(&[1.0, 1.0]).unwrap();
        assert_eq!(embed_vector(&x, TildeVariant::RealTraceOne).unwrap().entries(), &[1.0, 0.0]);
    }

    #[test]
    fn embed_vector_complex_full() {
        // x = (1, i): slots (|x1|^2, Re(conj(x1) x2), Im(conj(x1) x2), |x2|^2).
        let x = FrameVector::complex(&[(1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert_eq!(
            embed_vector(&x, TildeVariant::ComplexFull).unwrap().entries(),
            &[1.0, 0.0, 1.0, 1.0]
        );
    }

    #[test]
    fn embed_operator_real_full() {
        let t = SelfAdjointOperator::identity(ScalarField::Real, 2);
        assert_eq!(embed_operator(&t, TildeVariant::RealFull).unwrap().entries(), &[1.0, 0.0, 1.0]);

        let t = SelfAdjointOperator::from_real(&[vec![1.0, 2.0], vec![2.0, 3.0]]).unwrap();
        assert_eq!(embed_operator(&t, TildeVariant::RealFull).unwrap().entries(), &[1.0, 4.0, 3.0]);
    }

    #[test]
    fn embed_operator_complex_sign() {
        // T = [[0, i], [-i, 0]]: a_12 = i, so the (Re, Im) slots are (0, -2).
        // The sign is pinned by the oracle: for x = (1, i), <Tx, x> = -2 and
        // x~ = (1, 0, 1, 1), so the Im slot must contribute -2.
        let m = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.0, 0.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 0.0),
        ]);
        let t = SelfAdjointOperator::new(ScalarField::Complex, m).unwrap();
        let tt = embed_operator(&t, TildeVariant::ComplexFull).unwrap();
        assert_eq!(tt.entries(), &[0.0, 0.0, -2.0, 0.0]);

        let x = FrameVector::complex(&[(1.0, 0.0), (0.0, 1.0)]).unwrap();
        assert_eq!(oracle_form(&t, &x), -2.0);
        assert_eq!(pairing(&t, &x, TildeVariant::ComplexFull), -2.0);
    }

    #[test]
    fn operator_from_dual_examples() {
        let a = TildeVector::new(TildeVariant::RealFull, 2, vec![0.0, 0.0, 0.0]).unwrap();
        assert!(operator_from_dual(&a).unwrap().is_zero());

        let a = TildeVector::new(TildeVariant::RealFull, 2, vec![1.0, 4.0, 3.0]).unwrap();
        let t = operator_from_dual(&a).unwrap();
        assert_eq!(t.entry(0, 0).re, 1.0);
        assert_eq!(t.entry(0, 1).re, 2.0);
        assert_eq!(t.entry(1, 1).re, 3.0);

        // Trace-one: a = (1, 0) -> [[0, 1/2], [1/2, 0]], trace zero.
        let a = TildeVector::new(TildeVariant::RealTraceOne, 2, vec![1.0, 0.0]).unwrap();
        let t = operator_from_dual(&a).unwrap();
        assert_eq!(t.entry(0, 0).re, 0.0);
        assert_eq!(t.entry(0, 1).re, 0.5);
        assert_eq!(t.trace(), 0.0);
    }

    #[test]
    fn tilde_matrix_rows_and_rank() {
        let frame = Frame::canonical_basis(ScalarField::Real, 2).unwrap();
        let tm = tilde_matrix(&frame, TildeVariant::RealFull).unwrap();
        assert_eq!(tm.row(0).entries(), &[1.0, 0.0, 0.0]);
        assert_eq!(tm.row(1).entries(), &[0.0, 0.0, 1.0]);

        let frame = crate::construct::sum_pairs(2).unwrap();
        let tm = tilde_matrix(&frame, TildeVariant::RealFull).unwrap();
        assert_eq!(tm.num_rows(), 3);
        assert_eq!(tm.row(2).entries(), &[1.0, 1.0, 1.0]);
        assert_eq!(linalg::numerical_rank(tm.as_matrix()).rank, 3);
    }

    #[test]
    fn pairing_matches_oracle_all_variants() {
        // The fundamental identity <Tx, x> = <T~, x~> on seeded random draws,
        // trace-zero operators for the trace-one variants.
        let mut rng = sampling::rng_from_seed(7);
        for trial in 0..400 {
            let variant = TildeVariant::ALL[trial % 4];
            let n = 2 + trial % 7;
            let field = variant.field();
            let g = sampling::gaussian_matrix(field, n, n, &mut rng);
            let mut t = SelfAdjointOperator::new(field, g).unwrap();
            if variant.is_trace_one() {
                let shift = SelfAdjointOperator::identity(field, n).scale(-t.trace() / n as f64);
                t = t.add(&shift).unwrap();
            }
            let x = FrameVector::new(
                field,
                (0..n).map(|_| sampling::gaussian_scalar(field, &mut rng)).collect(),
            )
            .unwrap();
            let lhs = oracle_form(&t, &x);
            let rhs = pairing(&t, &x, variant);
            assert!(
                (lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()),
                "variant {variant:?} n={n}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn dual_pairing_round_trip() {
        // dot(a, x~) = <operator_from_dual(a) x, x> for arbitrary duals.
        let mut rng = sampling::rng_from_seed(11);
        for trial in 0..200 {
            let variant = TildeVariant::ALL[trial % 4];
            let n = 2 + trial % 6;
            let d = variant.embed_dim(n).unwrap();
            let a = TildeVector::new(
                variant,
                n,
                (0..d).map(|_| sampling::gaussian(&mut rng)).collect(),
            )
            .unwrap();
            let t = operator_from_dual(&a).unwrap();
            if variant.is_trace_one() {
                assert!(t.trace().abs() <= 1e-12);
            }
            let x = FrameVector::new(
                variant.field(),
                (0..n)
                    .map(|_| sampling::gaussian_scalar(variant.field(), &mut rng))
                    .collect(),
            )
            .unwrap();
            let lhs = a.dot(&embed_vector(&x, variant).unwrap()).unwrap();
            let rhs = oracle_form(&t, &x);
            assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + lhs.abs()));
        }
    }

    #[test]
    fn norm_bound() {
        // ||x~|| <= ||x||^2 for the full variants.
        let mut rng = sampling::rng_from_seed(3);
        for trial in 0..200 {
            let field = if trial % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
            let n = 1 + trial % 8;
            let x = FrameVector::new(
                field,
                (0..n).map(|_| sampling::gaussian_scalar(field, &mut rng)).collect(),
            )
            .unwrap();
            let tv = embed_vector(&x, TildeVariant::full(field)).unwrap();
            assert!(tv.norm() <= x.norm().powi(2) + 1e-12);
        }
    }

    proptest! {
        #[test]
        fn scaling_law_real_full(entries in proptest::collection::vec(-10.0f64..10.0, 1..7), c in -4.0f64..4.0) {
            let x = FrameVector::real(&entries).unwrap();
            let cx = x.scale(C64::new(c, 0.0));
            let tx = embed_vector(&x, TildeVariant::RealFull).unwrap();
            let tcx = embed_vector(&cx, TildeVariant::RealFull).unwrap();
            for (a, b) in tx.entries().iter().zip(tcx.entries()) {
                prop_assert!((c * c * a - b).abs() <= 1e-9 * (1.0 + b.abs()));
            }
        }

        #[test]
        fn scaling_law_complex_full(
            entries in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..6),
            cre in -3.0f64..3.0,
            cim in -3.0f64..3.0,
        ) {
            let x = FrameVector::complex(&entries).unwrap();
            let c = C64::new(cre, cim);
            let cx = x.scale(c);
            // |c|^2 law holds for the diagonal slots and the modulus of each
            // off-diagonal (Re, Im) pair; the pair itself rotates by c.
            let tx = embed_vector(&x, TildeVariant::ComplexFull).unwrap();
            let tcx = embed_vector(&cx, TildeVariant::ComplexFull).unwrap();
            let s = c.norm_sqr();
            let slots = super::slots(TildeVariant::ComplexFull, x.len()).unwrap();
            for (idx, slot) in slots.iter().enumerate() {
                match slot {
                    Slot::Diag(_) => {
                        prop_assert!((s * tx.entries()[idx] - tcx.entries()[idx]).abs() <= 1e-9 * (1.0 + s));
                    }
                    Slot::OffRe(..) => {
                        let a = C64::new(tx.entries()[idx], tx.entries()[idx + 1]);
                        let b = C64::new(tcx.entries()[idx], tcx.entries()[idx + 1]);
                        prop_assert!((s * a.norm() - b.norm()).abs() <= 1e-9 * (1.0 + b.norm()));
                    }
                    Slot::OffIm(..) => {}
                }
            }
        }
    }
}
