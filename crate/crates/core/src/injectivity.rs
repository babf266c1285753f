//! Injectivity certification.
//!
//! A family `{x_k}` is injective for a tilde variant exactly when the
//! embedded family `{x_k~}` spans the embedding space, i.e. the tilde matrix
//! has full column rank. Certification therefore reduces to a numerical rank
//! decision; the report carries the margin (smallest retained singular value)
//! so callers can judge borderline cases themselves.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::frame::{Frame, FrameVector};
use crate::linalg::{self, C64};
use crate::operator::SelfAdjointOperator;
use crate::sampling;
use crate::tilde::{self, TildeVariant, TildeVector};

/// Outcome of a rank-based injectivity check.
#[derive(Debug, Clone, Serialize)]
pub struct InjectivityReport {
    pub variant: TildeVariant,
    /// Number of frame vectors.
    pub m: usize,
    /// Column dimension `D` of the tilde matrix.
    pub embed_dim: usize,
    /// Numerical rank of the tilde matrix.
    pub rank: usize,
    /// True iff `rank == embed_dim`.
    pub injective: bool,
    /// Smallest singular value that still counted towards the rank.
    pub smallest_kept_singular_value: Option<f64>,
    /// Tolerance used by the rank rule.
    pub tolerance: f64,
}

pub(crate) fn report_from_matrix(
    variant: TildeVariant,
    m: usize,
    embed_dim: usize,
    a: &DMatrix<f64>,
) -> InjectivityReport {
    let info = linalg::numerical_rank(a);
    InjectivityReport {
        variant,
        m,
        embed_dim,
        rank: info.rank,
        injective: info.rank == embed_dim,
        smallest_kept_singular_value: info.smallest_kept(),
        tolerance: info.tolerance,
    }
}

/// Decide whether the frame solves the injectivity problem for the given
/// variant.
pub fn check_injectivity(frame: &Frame, variant: TildeVariant) -> Result<InjectivityReport> {
    let tm = tilde::tilde_matrix(frame, variant)?;
    Ok(report_from_matrix(variant, frame.len(), tm.embed_dim(), tm.as_matrix()))
}

/// For a non-injective frame, a unit-Frobenius Hermitian operator whose
/// measurements all vanish (trace-zero for the trace-one variants). Returns
/// `None` when the frame is injective.
///
/// The witness is the right-singular direction of the smallest singular value
/// of the tilde matrix, mapped through the dual correspondence: among unit
/// dual vectors it minimizes the measurement residual.
pub fn witness_operator(frame: &Frame, variant: TildeVariant) -> Result<Option<SelfAdjointOperator>> {
    let tm = tilde::tilde_matrix(frame, variant)?;
    let report = report_from_matrix(variant, frame.len(), tm.embed_dim(), tm.as_matrix());
    if report.injective {
        return Ok(None);
    }
    // Smallest eigenvector of A^T A is the right-singular vector of the
    // smallest singular value, and exists even when m < D (thin SVD does not
    // expose the null space in that case).
    let a = tm.as_matrix();
    let gram = a.transpose() * a;
    let eig = gram.symmetric_eigen();
    let mut min_idx = 0;
    for i in 1..eig.eigenvalues.len() {
        if eig.eigenvalues[i] < eig.eigenvalues[min_idx] {
            min_idx = i;
        }
    }
    let dual = TildeVector::new(
        variant,
        frame.dim(),
        eig.eigenvectors.column(min_idx).iter().copied().collect(),
    )?;
    let t = tilde::operator_from_dual(&dual)?;
    let norm = t.frobenius_norm();
    debug_assert!(norm > 0.0, "null direction mapped to the zero operator");
    Ok(Some(t.scale(1.0 / norm)))
}

/// Result of the randomized eigenbasis criterion.
#[derive(Debug, Clone)]
pub struct EigenbasisProbe {
    /// True when no counterexample basis was found. The criterion quantifies
    /// over every orthonormal basis, so `true` is only evidence, while
    /// `false` comes with a certified witness basis.
    pub passed: bool,
    pub trials_run: usize,
    pub failing_basis: Option<Vec<FrameVector>>,
}

/// Rank of the `m x n` matrix of squared moduli `|<x_k, e_j>|^2` for one
/// orthonormal basis; injectivity forces full rank for every basis.
pub(crate) fn squared_moduli_rank(frame: &Frame, basis: &DMatrix<C64>) -> usize {
    let n = frame.dim();
    let mut rows = DMatrix::zeros(frame.len(), n);
    for (k, x) in frame.vectors().iter().enumerate() {
        let xv = x.as_dvector();
        for j in 0..n {
            let ip: C64 = basis.column(j).iter().zip(xv.iter()).map(|(b, x)| x * b.conj()).sum();
            rows[(k, j)] = ip.norm_sqr();
        }
    }
    linalg::numerical_rank(&rows).rank
}

/// Probe the "for every orthonormal basis" necessary condition with
/// Haar-random bases. A failure certifies non-injectivity and returns the
/// failing basis; passing all trials proves nothing beyond the sample.
pub fn eigenbasis_probe(frame: &Frame, trials: usize, seed: u64) -> Result<EigenbasisProbe> {
    if trials == 0 {
        return Err(crate::error::Error::InvalidArgument("trials must be >= 1".into()));
    }
    let n = frame.dim();
    for trial in 0..trials {
        let mut rng = sampling::rng_from_seed(sampling::split_seed(seed, trial as u64));
        let basis = sampling::haar_basis(frame.field(), n, &mut rng);
        if squared_moduli_rank(frame, &basis) < n {
            let vectors = (0..n)
                .map(|j| {
                    FrameVector::new(frame.field(), basis.column(j).iter().copied().collect())
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(EigenbasisProbe {
                passed: false,
                trials_run: trial + 1,
                failing_basis: Some(vectors),
            });
        }
    }
    Ok(EigenbasisProbe {
        passed: true,
        trials_run: trials,
        failing_basis: None,
    })
}
