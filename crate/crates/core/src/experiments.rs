//! Seeded empirical reproductions of the density/openness theorems and the
//! perturbation inequalities.
//!
//! "Dense" and "open" are reproduced as high-probability statements through
//! the underlying determinant/rank mechanism, never as topology;
//! each summary records singular-value margins so a claim can be audited.
//! Trials derive per-index seeds by a counter split, so a parallel run would
//! aggregate identically to the serial one.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::frame::{Frame, FrameVector};
use crate::frame_ops;
use crate::injectivity::check_injectivity;
use crate::linalg::{self, C64};
use crate::sampling;
use crate::tilde::{self, TildeVariant};

/// Aggregate outcome of a seeded experiment.
#[derive(Debug, Clone, Serialize)]
pub struct TrialSummary {
    pub name: String,
    pub trials: usize,
    pub successes: usize,
    pub fraction: f64,
    pub seed: u64,
    /// Echo of the experiment parameters.
    pub params: BTreeMap<String, String>,
    /// Smallest rank margin (smallest kept singular value of the tilde
    /// matrix) seen across trials.
    pub margin_min: Option<f64>,
    pub margin_median: Option<f64>,
    /// Margins of the failed trials, for auditing marginal rank decisions.
    pub failure_margins: Vec<f64>,
    /// Set when the parameters make success impossible by counting alone
    /// (`m < D`); no trials are run in that case.
    pub structurally_impossible: bool,
}

impl TrialSummary {
    fn new(name: &str, seed: u64) -> Self {
        TrialSummary {
            name: name.to_string(),
            trials: 0,
            successes: 0,
            fraction: 0.0,
            seed,
            params: BTreeMap::new(),
            margin_min: None,
            margin_median: None,
            failure_margins: Vec::new(),
            structurally_impossible: false,
        }
    }

    fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.insert(key.to_string(), value.to_string());
        self
    }

    fn finish(mut self, trials: usize, successes: usize, mut margins: Vec<f64>) -> Self {
        self.trials = trials;
        self.successes = successes;
        self.fraction = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        if !margins.is_empty() {
            margins.sort_by(|a, b| a.partial_cmp(b).unwrap());
            self.margin_min = Some(margins[0]);
            self.margin_median = Some(margins[margins.len() / 2]);
        }
        self
    }
}

/// Fraction of random `m`-vector frames in dimension `n` that certify
/// injective. With `m >= D` the failure set is the zero set of a determinant
/// polynomial, so the observed fraction should be 1. `m < D` is impossible by
/// the counting bound and is reported as such without running trials.
pub fn density_experiment(
    m: usize,
    n: usize,
    field: ScalarField,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    let variant = TildeVariant::full(field);
    let d = variant.embed_dim(n)?;
    let mut summary = TrialSummary::new("density", seed)
        .param("m", m)
        .param("n", n)
        .param("field", field)
        .param("embed_dim", d);
    if m < d {
        summary.structurally_impossible = true;
        summary.trials = trials;
        return Ok(summary);
    }
    let mut successes = 0;
    let mut margins = Vec::with_capacity(trials);
    let mut failures = Vec::new();
    for trial in 0..trials {
        let frame = crate::construct::random_frame(m, n, field, sampling::split_seed(seed, trial as u64))?;
        let tm = tilde::tilde_matrix(&frame, variant)?;
        let sv = linalg::singular_values(tm.as_matrix());
        let info = linalg::rank_from_singular_values(&sv, m, d);
        // The D-th singular value is the margin the rank decision rests on.
        let margin = sv.get(d - 1).copied().unwrap_or(0.0);
        margins.push(margin);
        if info.rank == d {
            successes += 1;
        } else {
            failures.push(margin);
        }
    }
    summary.failure_margins = failures;
    Ok(summary.finish(trials, successes, margins))
}

/// Perturb an injective frame by noise of total squared distance `eps^2` and
/// report how often injectivity survives, together with the unperturbed
/// frame's singular-value margin (a surrogate for the open-ball radius, which
/// the openness statement does not make explicit).
pub fn openness_probe(
    frame: &Frame,
    epsilon: f64,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    let variant = TildeVariant::full(frame.field());
    let base = check_injectivity(frame, variant)?;
    if !base.injective {
        return Err(Error::Precondition("openness probe needs an injective frame".into()));
    }
    let mut successes = 0;
    let mut margins = Vec::with_capacity(trials);
    for trial in 0..trials {
        let mut rng = sampling::rng_from_seed(sampling::split_seed(seed, trial as u64));
        let noise = sampling::gaussian_matrix(frame.field(), frame.dim(), frame.len(), &mut rng);
        let scale = epsilon / noise.norm();
        let vectors = frame
            .vectors()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                let entries: Vec<C64> = v
                    .entries()
                    .iter()
                    .enumerate()
                    .map(|(i, z)| z + noise[(i, k)] * C64::new(scale, 0.0))
                    .collect();
                FrameVector::new(frame.field(), entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let perturbed = Frame::new(frame.field(), vectors)?;
        let report = check_injectivity(&perturbed, variant)?;
        if report.injective {
            successes += 1;
        }
        if let Some(margin) = report.smallest_kept_singular_value {
            margins.push(margin);
        }
    }
    Ok(TrialSummary::new("openness", seed)
        .param("epsilon", epsilon)
        .param("m", frame.len())
        .param("n", frame.dim())
        .param("field", frame.field())
        .param(
            "base_margin",
            base.smallest_kept_singular_value.unwrap_or(0.0),
        )
        .finish(trials, successes, margins))
}

/// Outcome of one Parseval repair.
#[derive(Debug, Clone)]
pub struct ParsevalRepair {
    pub frame: Frame,
    /// `sum_k ||x_k - S_1^{-1/2} y_k||^2`.
    pub squared_distance: f64,
    /// The guaranteed cap `2 m delta^2 + 8 (m delta)^2 m (1 + delta)^2`.
    pub bound: f64,
    pub within_bound: bool,
    pub retries: usize,
}

const REPAIR_RETRY_BUDGET: usize = 100;

/// Repair a (possibly non-injective) Parseval frame into an injective
/// Parseval frame nearby: perturb a `D`-subset of vectors by per-vector
/// distance at most `delta` until the family certifies injective, then return
/// its canonical Parseval frame. Requires `2 m delta < 1`, which keeps the
/// perturbed frame operator invertible and makes the distance cap hold.
pub fn parseval_repair(frame: &Frame, delta: f64, seed: u64) -> Result<ParsevalRepair> {
    let m = frame.len();
    if !frame_ops::frame_bounds(frame).is_parseval(1e-8) {
        return Err(Error::Precondition("input frame is not Parseval within 1e-8".into()));
    }
    if delta <= 0.0 || !delta.is_finite() || 2.0 * m as f64 * delta >= 1.0 {
        return Err(Error::Precondition(format!(
            "need 0 < delta and 2 m delta < 1, got m={m} delta={delta}"
        )));
    }
    let variant = TildeVariant::full(frame.field());
    let d = variant.embed_dim(frame.dim())?;
    if m < d {
        return Err(Error::Precondition(format!(
            "no injective frame with m={m} < D={d} exists to repair towards"
        )));
    }
    for retry in 0..REPAIR_RETRY_BUDGET {
        let mut rng = sampling::rng_from_seed(sampling::split_seed(seed, retry as u64));
        let vectors = frame
            .vectors()
            .iter()
            .enumerate()
            .map(|(k, v)| {
                if k >= d {
                    return Ok(v.clone());
                }
                // Per-vector perturbation of norm exactly delta.
                let mut dir: Vec<C64> = (0..frame.dim())
                    .map(|_| sampling::gaussian_scalar(frame.field(), &mut rng))
                    .collect();
                let norm = dir.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                for z in &mut dir {
                    *z *= C64::new(delta / norm, 0.0);
                }
                let entries = v.entries().iter().zip(&dir).map(|(a, b)| a + b).collect();
                FrameVector::new(frame.field(), entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let perturbed = Frame::new(frame.field(), vectors)?;
        if !check_injectivity(&perturbed, variant)?.injective {
            continue;
        }
        let repaired = frame_ops::canonical_parseval(&perturbed)?;
        let squared_distance: f64 = frame
            .vectors()
            .iter()
            .zip(repaired.vectors())
            .map(|(x, y)| {
                x.entries()
                    .iter()
                    .zip(y.entries())
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
            })
            .sum();
        let md = m as f64 * delta;
        let bound = 2.0 * m as f64 * delta * delta + 8.0 * md * md * m as f64 * (1.0 + delta).powi(2);
        return Ok(ParsevalRepair {
            frame: repaired,
            squared_distance,
            bound,
            within_bound: squared_distance <= bound,
            retries: retry,
        });
    }
    Err(Error::RepairFailed {
        retries: REPAIR_RETRY_BUDGET,
    })
}

/// Outcome of [`riesz_perturbation_check`].
#[derive(Debug, Clone, Copy)]
pub struct RieszCheck {
    pub lower_bound: f64,
    pub threshold: f64,
    pub ok: bool,
}

/// For a family with `sum_i ||e_i - x_i||^2 < eps^2 <= 1` (rows of the input,
/// compared against the canonical basis of the truncation), verify the
/// perturbation bound: the lower Riesz bound is at least `(1 - eps)^2`.
pub fn riesz_perturbation_check(family: &DMatrix<f64>, epsilon: f64) -> Result<RieszCheck> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Precondition(format!("need 0 < eps <= 1, got {epsilon}")));
    }
    let (m, n) = (family.nrows(), family.ncols());
    if m > n {
        return Err(Error::Precondition(format!(
            "family has {m} members in dimension {n}; index against the basis requires m <= n"
        )));
    }
    let distance: f64 = (0..m)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let e = if i == j { 1.0 } else { 0.0 };
                    (e - family[(i, j)]).powi(2)
                })
                .sum::<f64>()
        })
        .sum();
    if distance >= epsilon * epsilon {
        return Err(Error::Precondition(format!(
            "sum ||e_i - x_i||^2 = {distance} is not below eps^2 = {}",
            epsilon * epsilon
        )));
    }
    let vectors = (0..m)
        .map(|i| FrameVector::real(&family.row(i).iter().copied().collect::<Vec<_>>()))
        .collect::<Result<Vec<_>>>()?;
    let lower_bound = frame_ops::lower_riesz_bound(&vectors)?;
    let threshold = (1.0 - epsilon).powi(2);
    Ok(RieszCheck {
        lower_bound,
        threshold,
        ok: lower_bound >= threshold - 1e-12,
    })
}

/// Per-index and aggregate outcome of [`tilde_perturbation_bound_check`].
#[derive(Debug, Clone)]
pub struct TildePerturbationReport {
    /// `(||e_k~ - x_k~||^2, 6 ||e_k - x_k||^2)` per index.
    pub per_index: Vec<(f64, f64)>,
    pub per_index_ok: bool,
    pub aggregate_lhs: f64,
    pub aggregate_rhs: f64,
    pub aggregate_ok: bool,
    /// `sum_k ||e_k - x_k||^2`.
    pub squared_distance: f64,
    /// `sigma_max` of the difference map `e_k~ -> e_k~ - x_k~`, i.e.
    /// `||I - T||` at the truncation; only meaningful (and only checked
    /// against `sqrt(3)/2`) when the squared distance is at most 1/8.
    pub operator_norm: Option<f64>,
    pub operator_norm_ok: Option<bool>,
    /// Lower Riesz bound of the tilde family, checked against the
    /// guaranteed `(1 - sqrt(3)/2)^2` margin.
    pub tilde_lower_riesz: Option<f64>,
    pub tilde_riesz_ok: Option<bool>,
}

/// Verify the perturbation inequality behind the not-dense theorem:
/// `||e_k~ - x_k~||^2 <= 6 ((1 - x_kk)^2 + sum_{i != k} x_ki^2)` per index
/// and in aggregate. When `sum_k ||e_k - x_k||^2 <= 1/8` the tilde family is
/// additionally certified a Riesz sequence via the operator estimate
/// `||I - T|| <= sqrt(3)/2`.
pub fn tilde_perturbation_bound_check(family: &DMatrix<f64>) -> Result<TildePerturbationReport> {
    let (m, n) = (family.nrows(), family.ncols());
    if m == 0 || m > n {
        return Err(Error::Precondition(format!(
            "family must have 1..=n members, got m={m}, n={n}"
        )));
    }
    let variant = TildeVariant::RealFull;
    let d = variant.embed_dim(n)?;
    let mut per_index = Vec::with_capacity(m);
    let mut squared_distance = 0.0;
    let mut aggregate_lhs = 0.0;
    let mut diff = DMatrix::zeros(d, m);
    let mut tilde_rows = Vec::with_capacity(m);
    for k in 0..m {
        let x = FrameVector::real(&family.row(k).iter().copied().collect::<Vec<_>>())?;
        let e = FrameVector::basis(ScalarField::Real, n, k);
        let xt = tilde::embed_vector(&x, variant)?;
        let et = tilde::embed_vector(&e, variant)?;
        let lhs: f64 = xt
            .entries()
            .iter()
            .zip(et.entries())
            .map(|(a, b)| (a - b).powi(2))
            .sum();
        // ||e_k - x_k||^2 expanded: (1 - x_kk)^2 + sum_{i!=k} x_ki^2.
        let rhs_core: f64 = (0..n)
            .map(|i| {
                if i == k {
                    (1.0 - family[(k, i)]).powi(2)
                } else {
                    family[(k, i)].powi(2)
                }
            })
            .sum();
        per_index.push((lhs, 6.0 * rhs_core));
        squared_distance += rhs_core;
        aggregate_lhs += lhs;
        for (r, (xe, ee)) in xt.entries().iter().zip(et.entries()).enumerate() {
            diff[(r, k)] = ee - xe;
        }
        tilde_rows.push(xt);
    }
    let aggregate_rhs = 6.0 * squared_distance;
    let per_index_ok = per_index.iter().all(|(l, r)| *l <= r + 1e-12 * (1.0 + r));
    let aggregate_ok = aggregate_lhs <= aggregate_rhs + 1e-12 * (1.0 + aggregate_rhs);

    let (mut operator_norm, mut operator_norm_ok) = (None, None);
    let (mut tilde_lower_riesz, mut tilde_riesz_ok) = (None, None);
    if squared_distance <= 0.125 + 1e-15 {
        let sv = linalg::singular_values(&diff);
        let norm = sv.first().copied().unwrap_or(0.0);
        operator_norm = Some(norm);
        operator_norm_ok = Some(norm <= 3.0f64.sqrt() / 2.0 + 1e-12);

        let vectors = tilde_rows
            .iter()
            .map(|t| FrameVector::real(t.entries()))
            .collect::<Result<Vec<_>>>()?;
        let lower = frame_ops::lower_riesz_bound(&vectors)?;
        tilde_lower_riesz = Some(lower);
        tilde_riesz_ok = Some(lower >= (1.0 - 3.0f64.sqrt() / 2.0).powi(2) - 1e-12);
    }
    Ok(TildePerturbationReport {
        per_index,
        per_index_ok,
        aggregate_lhs,
        aggregate_rhs,
        aggregate_ok,
        squared_distance,
        operator_norm,
        operator_norm_ok,
        tilde_lower_riesz,
        tilde_riesz_ok,
    })
}

/// Gaussian perturbation of the canonical basis with prescribed total squared
/// distance, as rows of a matrix. Shared by the perturbation experiments.
pub fn perturbed_basis_family(
    m: usize,
    n: usize,
    total_distance: f64,
    seed: u64,
) -> Result<DMatrix<f64>> {
    if m > n {
        return Err(Error::Precondition(format!("need m <= n, got {m} > {n}")));
    }
    let mut rng = sampling::rng_from_seed(seed);
    let mut noise = DMatrix::from_fn(m, n, |_, _| sampling::gaussian(&mut rng));
    let scale = total_distance / noise.norm();
    noise *= scale;
    let mut family = noise;
    for i in 0..m {
        family[(i, i)] += 1.0;
    }
    Ok(family)
}
