//! Hermitian operators and the quadratic measurement form `<T x, x>`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::frame::FrameVector;
use crate::linalg::{self, C64};

/// An `n x n` Hermitian matrix, the unknown state of the detection problem.
///
/// Construction symmetrizes the input, `T <- (T + T*)/2`, so the stored
/// entries satisfy `entries[j][i] == conj(entries[i][j])` exactly and the
/// diagonal is exactly real. Downstream solvers produce tiny asymmetries;
/// [`SelfAdjointOperator::new_strict`] rejects anything beyond a tolerance
/// instead of silently repairing it.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfAdjointOperator {
    field: ScalarField,
    entries: DMatrix<C64>,
}

impl SelfAdjointOperator {
    pub fn new(field: ScalarField, entries: DMatrix<C64>) -> Result<Self> {
        Self::build(field, entries, None)
    }

    /// Like [`new`](Self::new) but errors when the asymmetry `||T - T*||_F`
    /// exceeds `tolerance * max(1, ||T||_F)`.
    pub fn new_strict(field: ScalarField, entries: DMatrix<C64>, tolerance: f64) -> Result<Self> {
        Self::build(field, entries, Some(tolerance))
    }

    fn build(field: ScalarField, entries: DMatrix<C64>, strict_tol: Option<f64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square and nonempty, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        for i in 0..entries.nrows() {
            for j in 0..entries.ncols() {
                let z = entries[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite(format!("operator entry ({i},{j}) = {z}")));
                }
            }
        }
        if let Some(tol) = strict_tol {
            let asymmetry = (&entries - entries.adjoint()).norm();
            let scale = entries.norm().max(1.0);
            if asymmetry > tol * scale {
                return Err(Error::NotSelfAdjoint {
                    asymmetry,
                    tolerance: tol * scale,
                });
            }
        }
        let sym = (&entries + entries.adjoint()).map(|z| z * C64::new(0.5, 0.0));
        if field.is_real() {
            for i in 0..sym.nrows() {
                for j in 0..sym.ncols() {
                    if sym[(i, j)].im != 0.0 {
                        return Err(Error::FieldMismatch(format!(
                            "real operator has complex entry at ({i},{j})"
                        )));
                    }
                }
            }
        }
        Ok(SelfAdjointOperator { field, entries: sym })
    }

    pub fn from_real(entries: &[Vec<f64>]) -> Result<Self> {
        let n = entries.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch("ragged operator rows".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        Self::new(ScalarField::Real, m)
    }

    pub fn zero(field: ScalarField, n: usize) -> Self {
        SelfAdjointOperator {
            field,
            entries: DMatrix::zeros(n, n),
        }
    }

    pub fn identity(field: ScalarField, n: usize) -> Self {
        SelfAdjointOperator {
            field,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn field(&self) -> ScalarField {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.entries[(i, j)]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.entries[(i, i)].re).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.norm()
    }

    /// Eigenvalues in ascending order (real, since the operator is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::hermitian_eigen(&self.entries).0
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == C64::new(0.0, 0.0))
    }

    pub fn scale(&self, c: f64) -> Self {
        SelfAdjointOperator {
            field: self.field,
            entries: self.entries.map(|z| z * C64::new(c, 0.0)),
        }
    }

    pub fn add(&self, other: &SelfAdjointOperator) -> Result<Self> {
        if self.dim() != other.dim() || self.field != other.field {
            return Err(Error::DimensionMismatch("operator sum shape mismatch".into()));
        }
        Ok(SelfAdjointOperator {
            field: self.field,
            entries: &self.entries + &other.entries,
        })
    }

}

/// The quadratic form `<T x, x> = sum_ij T_ij conj(x_i) x_j`.
///
/// Mathematically real because `T` is Hermitian; the residual imaginary part
/// is asserted to be below `1e-10 * (1 + |value|)` before it is dropped.
pub fn quadratic_form(t: &SelfAdjointOperator, x: &FrameVector) -> Result<f64> {
    if t.dim() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator dim {} vs vector length {}",
            t.dim(),
            x.len()
        )));
    }
    if t.field() != x.field() {
        return Err(Error::FieldMismatch(format!(
            "operator field {} vs vector field {}",
            t.field(),
            x.field()
        )));
    }
    let xs = x.entries();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            acc += t.entry(i, j) * xs[i].conj() * xs[j];
        }
    }
    assert!(
        acc.im.abs() <= 1e-10 * (1.0 + acc.re.abs()),
        "quadratic form of a Hermitian operator came out non-real: {acc}"
    );
    Ok(acc.re)
}
