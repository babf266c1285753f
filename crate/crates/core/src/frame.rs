//! Frames, their vectors, and measurement records.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::linalg::{self, C64};

/// A vector of a frame. Entries are stored as complex pairs; real vectors
/// carry a zero imaginary part, enforced on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameVector {
    field: ScalarField,
    entries: Vec<C64>,
}

impl FrameVector {
    pub fn new(field: ScalarField, entries: Vec<C64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("vector must have length >= 1".into()));
        }
        for (i, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite(format!("vector entry {i} = {z}")));
            }
            if field.is_real() && z.im != 0.0 {
                return Err(Error::FieldMismatch(format!(
                    "real vector has nonzero imaginary part at entry {i}"
                )));
            }
        }
        Ok(FrameVector { field, entries })
    }

    pub fn real(entries: &[f64]) -> Result<Self> {
        Self::new(
            ScalarField::Real,
            entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        )
    }

    pub fn complex(entries: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            ScalarField::Complex,
            entries.iter().map(|&(re, im)| C64::new(re, im)).collect(),
        )
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn as_dvector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.entries)
    }

    /// Canonical basis vector `e_i` (zero-based) of the given field.
    pub fn basis(field: ScalarField, dim: usize, i: usize) -> Self {
        assert!(i < dim, "basis index out of range");
        let mut entries = vec![C64::new(0.0, 0.0); dim];
        entries[i] = C64::new(1.0, 0.0);
        FrameVector { field, entries }
    }

    /// True when this vector equals a canonical basis vector exactly.
    pub fn is_canonical_basis_vector(&self) -> Option<usize> {
        let mut hit = None;
        for (i, z) in self.entries.iter().enumerate() {
            if *z == C64::new(1.0, 0.0) {
                if hit.is_some() {
                    return None;
                }
                hit = Some(i);
            } else if *z != C64::new(0.0, 0.0) {
                return None;
            }
        }
        hit
    }

    /// Largest index carrying a nonzero entry, if any.
    pub fn max_support(&self) -> Option<usize> {
        (0..self.entries.len()).rev().find(|&i| self.entries[i] != C64::new(0.0, 0.0))
    }

    pub fn scale(&self, c: C64) -> Self {
        FrameVector {
            field: self.field,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }
}

/// An ordered family of `m` vectors in an `n`-dimensional space: the
/// measurement apparatus of the detection problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    field: ScalarField,
    dim: usize,
    vectors: Vec<FrameVector>,
}

impl Frame {
    pub fn new(field: ScalarField, vectors: Vec<FrameVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::EmptyFrame);
        }
        let dim = vectors[0].len();
        for (k, v) in vectors.iter().enumerate() {
            if v.field() != field {
                return Err(Error::FieldMismatch(format!("vector {k} has field {}", v.field())));
            }
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "vector {k} has length {}, expected {dim}",
                    v.len()
                )));
            }
        }
        Ok(Frame { field, dim, vectors })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let vectors = rows
            .iter()
            .map(|r| FrameVector::real(r))
            .collect::<Result<Vec<_>>>()?;
        Frame::new(ScalarField::Real, vectors)
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of vectors `m`.
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[FrameVector] {
        &self.vectors
    }

    pub fn vector(&self, k: usize) -> &FrameVector {
        &self.vectors[k]
    }

    /// `n x m` synthesis matrix whose columns are the frame vectors.
    pub fn synthesis_matrix(&self) -> DMatrix<C64> {
        let mut s = DMatrix::zeros(self.dim, self.len());
        for (k, v) in self.vectors.iter().enumerate() {
            for (i, z) in v.entries().iter().enumerate() {
                s[(i, k)] = *z;
            }
        }
        s
    }

    /// Numerical spanning check: true iff the `m x n` matrix of frame vectors
    /// has full column rank under the shared SVD tolerance rule.
    pub fn span_check(&self) -> SpanCheck {
        let info = linalg::numerical_rank_complex(&self.synthesis_matrix());
        SpanCheck {
            spans: info.rank == self.dim,
            rank: info.rank,
        }
    }

    /// Frame with vector `k` removed. Errors when only one vector remains.
    pub fn without_vector(&self, k: usize) -> Result<Frame> {
        if self.len() <= 1 {
            return Err(Error::EmptyFrame);
        }
        let mut vectors = self.vectors.clone();
        vectors.remove(k);
        Frame::new(self.field, vectors)
    }

    pub fn canonical_basis(field: ScalarField, n: usize) -> Result<Frame> {
        if n == 0 {
            return Err(Error::EmptyFrame);
        }
        Frame::new(field, (0..n).map(|i| FrameVector::basis(field, n, i)).collect())
    }
}

/// Result of [`Frame::span_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpanCheck {
    pub spans: bool,
    pub rank: usize,
}

/// One real measurement per frame vector.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementRecord {
    values: Vec<f64>,
}

impl MeasurementRecord {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (k, v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite(format!("measurement {k} = {v}")));
            }
        }
        Ok(MeasurementRecord { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn as_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.values)
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite_entries() {
        assert!(FrameVector::real(&[1.0, f64::NAN]).is_err());
        assert!(FrameVector::real(&[f64::INFINITY]).is_err());
        assert!(MeasurementRecord::new(vec![0.0, f64::NEG_INFINITY]).is_err());
    }

    #[test]
    fn real_vector_rejects_imaginary_part() {
        assert!(FrameVector::new(ScalarField::Real, vec![C64::new(1.0, 0.5)]).is_err());
    }

    #[test]
    fn span_check_canonical_basis() {
        let f = Frame::canonical_basis(ScalarField::Real, 3).unwrap();
        let check = f.span_check();
        assert!(check.spans);
        assert_eq!(check.rank, 3);
    }

    #[test]
    fn span_check_degenerate() {
        // {e_1, e_1, 2e_1} in R^2 spans a line only.
        let f = Frame::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 0.0], vec![2.0, 0.0]]).unwrap();
        let check = f.span_check();
        assert!(!check.spans);
        assert_eq!(check.rank, 1);
    }

    #[test]
    fn span_check_two_vectors_r2() {
        let f = Frame::from_real_rows(&[vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let check = f.span_check();
        assert!(check.spans);
        assert_eq!(check.rank, 2);
    }

    #[test]
    fn empty_frame_rejected() {
        assert!(matches!(Frame::new(ScalarField::Real, vec![]), Err(Error::EmptyFrame)));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let a = FrameVector::real(&[1.0, 0.0]).unwrap();
        let b = FrameVector::real(&[1.0]).unwrap();
        assert!(Frame::new(ScalarField::Real, vec![a, b]).is_err());
    }

    #[test]
    fn basis_detection() {
        let e1 = FrameVector::basis(ScalarField::Real, 3, 1);
        assert_eq!(e1.is_canonical_basis_vector(), Some(1));
        let v = FrameVector::real(&[0.0, 2.0, 0.0]).unwrap();
        assert_eq!(v.is_canonical_basis_vector(), None);
        assert_eq!(v.max_support(), Some(1));
    }
}
