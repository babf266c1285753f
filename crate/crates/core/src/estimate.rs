//! State estimation: recover a Hermitian operator from the measurement
//! record `a_k = <T x_k, x_k>`, or best-approximate when the record is
//! inconsistent.
//!
//! With `A` the tilde matrix of the frame, the record is solvable exactly
//! when `rank(A) = rank([A | a])`; any solution `t` of `A t = a` in the dual
//! coordinates maps back to an operator through the dual correspondence. The
//! default approximation is global least squares, which minimizes
//! `sum_k |<T x_k, x_k> - a_k|^2` over all Hermitian `T`; the combinatorial
//! subset-basis search is available as an opt-in mode behind a hard guard
//! because it is exponential in general.
//!
//! No positivity or trace constraint is imposed while solving; violations are
//! reported by [`validate_state`] instead of being projected away.

use itertools::Itertools;
use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::frame::{Frame, MeasurementRecord};
use crate::linalg::{self, C64};
use crate::operator::{quadratic_form, SelfAdjointOperator};
use crate::sampling;
use crate::tilde::{self, TildeVariant, TildeVector};

/// Rank comparison of `A` against the augmented `[A | a]`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Solvability {
    pub rank_a: usize,
    pub rank_b: usize,
    pub solvable: bool,
}

/// Estimation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMode {
    /// Minimum-norm solution of `A t = a`; the result reports whether the
    /// record was exactly solvable.
    Exact,
    /// Minimum-norm least-squares minimizer of `||A t - a||` (the default;
    /// coincides with `Exact` on solvable records).
    LeastSquares,
    /// Enumerate full-rank `D`-row subsets, solve each exactly, and keep the
    /// interpolant with the smallest global residual.
    Subset,
}

#[derive(Debug, Clone)]
pub struct EstimateOptions {
    pub mode: EstimateMode,
    /// Subset mode refuses embed dimensions beyond this.
    pub max_subset_dim: usize,
    /// Subset mode refuses when `C(m, D)` exceeds this.
    pub max_subset_combinations: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        EstimateOptions {
            mode: EstimateMode::LeastSquares,
            max_subset_dim: 32,
            max_subset_combinations: 100_000,
        }
    }
}

impl EstimateOptions {
    pub fn mode(mode: EstimateMode) -> Self {
        EstimateOptions {
            mode,
            ..Default::default()
        }
    }
}

/// Recovered operator with solvability and state diagnostics.
#[derive(Debug, Clone)]
pub struct EstimationResult {
    pub operator: SelfAdjointOperator,
    pub solvable: bool,
    pub rank_a: usize,
    pub rank_b: usize,
    /// `||A t - a||_2`, equivalently the l2 misfit of the reproduced
    /// measurements.
    pub residual: f64,
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// PSD within tolerance and trace within `1e-8` of one.
    pub is_state: bool,
}

fn check_record(frame: &Frame, a: &MeasurementRecord) -> Result<()> {
    if a.len() != frame.len() {
        return Err(Error::DimensionMismatch(format!(
            "measurement record has {} values, frame has {} vectors",
            a.len(),
            frame.len()
        )));
    }
    Ok(())
}

fn ranks(a_mat: &DMatrix<f64>, a: &DVector<f64>) -> Solvability {
    let rank_a = linalg::numerical_rank(a_mat).rank;
    let mut augmented = DMatrix::zeros(a_mat.nrows(), a_mat.ncols() + 1);
    augmented.view_mut((0, 0), (a_mat.nrows(), a_mat.ncols())).copy_from(a_mat);
    augmented.set_column(a_mat.ncols(), a);
    let rank_b = linalg::numerical_rank(&augmented).rank;
    Solvability {
        rank_a,
        rank_b,
        solvable: rank_a == rank_b,
    }
}

/// Decide solvability of the record for the given variant: solvable iff
/// `rank(A) = rank([A | a])`.
pub fn solvability(frame: &Frame, a: &MeasurementRecord, variant: TildeVariant) -> Result<Solvability> {
    check_record(frame, a)?;
    let tm = tilde::tilde_matrix(frame, variant)?;
    Ok(ranks(tm.as_matrix(), &a.as_dvector()))
}

fn subset_solve(
    a_mat: &DMatrix<f64>,
    a: &DVector<f64>,
    options: &EstimateOptions,
) -> Result<DVector<f64>> {
    let (m, d) = (a_mat.nrows(), a_mat.ncols());
    if d > options.max_subset_dim {
        return Err(Error::SubsetGuard(format!(
            "embed dimension {d} exceeds max_subset_dim {}",
            options.max_subset_dim
        )));
    }
    if m < d {
        return Err(Error::SubsetGuard(format!(
            "no {d}-row subsets of a {m}-row tilde matrix"
        )));
    }
    let mut combos: u64 = 1;
    for i in 0..d as u64 {
        combos = combos.saturating_mul(m as u64 - i) / (i + 1);
        if combos > options.max_subset_combinations {
            return Err(Error::SubsetGuard(format!(
                "C({m}, {d}) exceeds guard {}",
                options.max_subset_combinations
            )));
        }
    }
    let mut best: Option<(f64, DVector<f64>)> = None;
    for subset in (0..m).combinations(d) {
        let sub = DMatrix::from_fn(d, d, |r, c| a_mat[(subset[r], c)]);
        let info = linalg::numerical_rank(&sub);
        if info.rank < d {
            continue;
        }
        let rhs = DVector::from_fn(d, |r, _| a[subset[r]]);
        let t = linalg::min_norm_lstsq(&sub, &rhs);
        let residual = (a_mat * &t - a).norm();
        if best.as_ref().is_none_or(|(r, _)| residual < *r) {
            best = Some((residual, t));
        }
    }
    best.map(|(_, t)| t)
        .ok_or_else(|| Error::SubsetGuard("no full-rank row subset found".into()))
}

/// Solve or approximate the state estimation problem for the frame's full
/// variant. Exact and least-squares modes return the minimum-norm
/// least-squares solution (they agree on solvable records); subset mode runs
/// the basis enumeration.
pub fn estimate_state(
    frame: &Frame,
    a: &MeasurementRecord,
    options: &EstimateOptions,
) -> Result<EstimationResult> {
    check_record(frame, a)?;
    let variant = TildeVariant::full(frame.field());
    let tm = tilde::tilde_matrix(frame, variant)?;
    let a_vec = a.as_dvector();
    let sol = ranks(tm.as_matrix(), &a_vec);

    let t = match options.mode {
        EstimateMode::Exact | EstimateMode::LeastSquares => {
            linalg::min_norm_lstsq(tm.as_matrix(), &a_vec)
        }
        EstimateMode::Subset => subset_solve(tm.as_matrix(), &a_vec, options)?,
    };
    let residual = (tm.as_matrix() * &t - &a_vec).norm();
    let dual = TildeVector::new(variant, frame.dim(), t.iter().copied().collect())?;
    let operator = tilde::operator_from_dual(&dual)?;
    let validation = validate_state(&operator, 1e-8);
    Ok(EstimationResult {
        operator,
        solvable: sol.solvable,
        rank_a: sol.rank_a,
        rank_b: sol.rank_b,
        residual,
        trace: validation.trace,
        min_eigenvalue: validation.min_eigenvalue,
        is_state: validation.is_psd && (validation.trace - 1.0).abs() <= 1e-8,
    })
}

/// State diagnostics of a Hermitian operator.
#[derive(Debug, Clone, Serialize)]
pub struct StateValidation {
    pub trace: f64,
    pub min_eigenvalue: f64,
    /// `lambda_min >= -tol * max(1, lambda_max)`.
    pub is_psd: bool,
    /// Exhaustive principal-minor check (`2^n - 1` minors), evaluated only
    /// for `n <= 12`; `None` when skipped.
    pub principal_minors_ok: Option<bool>,
}

/// Check positivity and trace of a candidate state. PSD is decided from the
/// spectrum; the principal-minor criterion is evaluated exhaustively for
/// small dimensions as an independent classical test.
pub fn validate_state(t: &SelfAdjointOperator, tol: f64) -> StateValidation {
    let eig = t.eigenvalues();
    let min_eigenvalue = eig[0];
    let max_eigenvalue = eig[eig.len() - 1];
    let is_psd = min_eigenvalue >= -tol * max_eigenvalue.abs().max(1.0);
    let n = t.dim();
    let principal_minors_ok = (n <= 12).then(|| {
        let scale = max_eigenvalue.abs().max(min_eigenvalue.abs()).max(1.0);
        (1u32..(1u32 << n)).all(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            let sub = DMatrix::from_fn(idx.len(), idx.len(), |r, c| t.entry(idx[r], idx[c]));
            let det = sub.determinant();
            debug_assert!(det.im.abs() <= 1e-8 * (1.0 + det.re.abs()));
            det.re >= -tol * scale.powi(idx.len() as i32)
        })
    });
    StateValidation {
        trace: t.trace(),
        min_eigenvalue,
        is_psd,
        principal_minors_ok,
    }
}

/// Forward model: `a_k = <T x_k, x_k> + eps_k` with Gaussian noise of the
/// given standard deviation, deterministic in the seed.
pub fn simulate_measurements(
    frame: &Frame,
    t: &SelfAdjointOperator,
    noise_sigma: f64,
    seed: u64,
) -> Result<MeasurementRecord> {
    if noise_sigma < 0.0 || !noise_sigma.is_finite() {
        return Err(Error::InvalidArgument(format!("noise sigma {noise_sigma} must be >= 0")));
    }
    let mut rng = sampling::rng_from_seed(seed);
    let values = frame
        .vectors()
        .iter()
        .map(|x| {
            let clean = quadratic_form(t, x)?;
            Ok(clean + noise_sigma * sampling::gaussian(&mut rng))
        })
        .collect::<Result<Vec<_>>>()?;
    MeasurementRecord::new(values)
}

/// Random density operator: `G G*` normalized to unit trace. Positive
/// semidefinite with trace one by construction.
pub fn random_state(n: usize, field: ScalarField, seed: u64) -> SelfAdjointOperator {
    let mut rng = sampling::rng_from_seed(seed);
    loop {
        let g = sampling::gaussian_matrix(field, n, n, &mut rng);
        let s = &g * g.adjoint();
        let trace: f64 = (0..n).map(|i| s[(i, i)].re).sum();
        if trace > 1e-10 {
            let normalized = s.map(|z| z / C64::new(trace, 0.0));
            return SelfAdjointOperator::new(field, normalized)
                .expect("Gram matrix is Hermitian and finite");
        }
    }
}

/// Random Hermitian operator `(G + G*)/2` with standard Gaussian entries.
pub fn random_hermitian(n: usize, field: ScalarField, seed: u64) -> SelfAdjointOperator {
    let mut rng = sampling::rng_from_seed(seed);
    let g = sampling::gaussian_matrix(field, n, n, &mut rng);
    SelfAdjointOperator::new(field, g).expect("Gaussian draw is finite")
}

/// Nearest-state projection: clip negative eigenvalues and renormalize the
/// trace to one. This is a post-hoc convenience outside the estimation
/// contract, which deliberately solves without positivity constraints.
pub fn project_to_state(t: &SelfAdjointOperator) -> SelfAdjointOperator {
    let clipped = linalg::hermitian_map(t.entries(), |lambda| lambda.max(0.0));
    let trace: f64 = (0..t.dim()).map(|i| clipped[(i, i)].re).sum();
    let entries = if trace > 1e-14 {
        clipped.map(|z| z / C64::new(trace, 0.0))
    } else {
        DMatrix::identity(t.dim(), t.dim()).map(|z: C64| z / C64::new(t.dim() as f64, 0.0))
    };
    SelfAdjointOperator::new(t.field(), entries).expect("projection preserves Hermitian shape")
}
