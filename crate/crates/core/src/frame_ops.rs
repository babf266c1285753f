//! Frame-theoretic operators: the frame operator `S = sum x_k x_k*`, frame
//! and Bessel/Riesz bounds, and the canonical Parseval transform
//! `x_k -> S^{-1/2} x_k`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::frame::{Frame, FrameVector};
use crate::linalg::{self, C64};
use crate::operator::SelfAdjointOperator;

/// Lower and upper frame bounds: the extreme eigenvalues of the frame
/// operator. The lower bound is positive iff the frame spans.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
}

impl FrameBounds {
    pub fn is_parseval(&self, tol: f64) -> bool {
        (self.lower - 1.0).abs() <= tol && (self.upper - 1.0).abs() <= tol
    }
}

/// `S = sum_k x_k x_k*`, positive semidefinite and Hermitian.
pub fn frame_operator(frame: &Frame) -> SelfAdjointOperator {
    let x = frame.synthesis_matrix();
    let s = &x * x.adjoint();
    SelfAdjointOperator::new(frame.field(), s).expect("Gram product is Hermitian and finite")
}

/// `(lambda_min(S), lambda_max(S))` of the frame operator.
pub fn frame_bounds(frame: &Frame) -> FrameBounds {
    let s = frame_operator(frame);
    let eig = s.eigenvalues();
    FrameBounds {
        lower: *eig.first().expect("nonempty spectrum"),
        upper: *eig.last().expect("nonempty spectrum"),
    }
}

/// The canonical Parseval frame `{S^{-1/2} x_k}`. Errors when the frame does
/// not span: `S^{-1/2}` is rejected if `lambda_min(S) < 1e-12 lambda_max(S)`,
/// an explicit failure instead of silent amplification.
pub fn canonical_parseval(frame: &Frame) -> Result<Frame> {
    let s = frame_operator(frame);
    let eig = s.eigenvalues();
    let (min, max) = (eig[0], eig[eig.len() - 1]);
    if min < 1e-12 * max || max == 0.0 {
        return Err(Error::RankDeficient(format!(
            "frame operator spectrum [{min:.3e}, {max:.3e}] too close to singular for S^(-1/2)"
        )));
    }
    let inv_sqrt = linalg::hermitian_map(s.entries(), |lambda| 1.0 / lambda.sqrt());
    let vectors = frame
        .vectors()
        .iter()
        .map(|v| {
            let w = &inv_sqrt * v.as_dvector();
            let entries: Vec<C64> = w.iter().copied().collect();
            // S^{-1/2} is real when the frame is; drop eps-level imaginary dust.
            let entries = if frame.field().is_real() {
                entries.into_iter().map(|z| C64::new(z.re, 0.0)).collect()
            } else {
                entries
            };
            FrameVector::new(frame.field(), entries)
        })
        .collect::<Result<Vec<_>>>()?;
    Frame::new(frame.field(), vectors)
}

fn family_synthesis(family: &[FrameVector]) -> Result<DMatrix<C64>> {
    if family.is_empty() {
        return Err(Error::EmptyFrame);
    }
    let dim = family[0].len();
    let field = family[0].field();
    if family.iter().any(|v| v.len() != dim || v.field() != field) {
        return Err(Error::DimensionMismatch("family vectors disagree in shape or field".into()));
    }
    let mut s = DMatrix::zeros(dim, family.len());
    for (k, v) in family.iter().enumerate() {
        for (i, z) in v.entries().iter().enumerate() {
            s[(i, k)] = *z;
        }
    }
    Ok(s)
}

/// Optimal Bessel bound of a finite family: the squared largest singular
/// value of its synthesis matrix.
pub fn bessel_bound(family: &[FrameVector]) -> Result<f64> {
    let s = family_synthesis(family)?;
    let sv = linalg::singular_values_complex(&s);
    Ok(sv.first().copied().unwrap_or(0.0).powi(2))
}

/// Optimal lower Riesz bound of a finite family: the squared smallest
/// singular value of the synthesis map on coefficient space. Zero whenever
/// the family is linearly dependent (in particular when it has more members
/// than the dimension).
pub fn lower_riesz_bound(family: &[FrameVector]) -> Result<f64> {
    let s = family_synthesis(family)?;
    if s.ncols() > s.nrows() {
        return Ok(0.0);
    }
    let sv = linalg::singular_values_complex(&s);
    Ok(sv.last().copied().unwrap_or(0.0).powi(2))
}
