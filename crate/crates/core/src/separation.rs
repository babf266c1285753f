//! Truncated infinite-dimensional layer: delta-separation of tilde families,
//! biorthogonal dual functionals, l1 state estimation, and the Bessel-cap /
//! lower-frame-defect diagnostics.
//!
//! Everything here evaluates an l2 statement at a finite truncation `N`, and
//! every report carries that `N`; nothing claims to decide a genuinely
//! infinite-dimensional property.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::estimate::{validate_state, EstimationResult};
use crate::frame::{Frame, MeasurementRecord};
use crate::frame_ops;
use crate::linalg;
use crate::tilde::{self, TildeVariant, TildeVector};

/// Relative threshold below which a gap counts as "not separated".
const SEPARATION_TOL: f64 = 1e-10;

/// Per-index separation gaps of a finite family of real vectors (rows of the
/// input matrix).
#[derive(Debug, Clone)]
pub struct SeparationReport {
    /// `g_j = ||(I - P_j) v_j||`, the distance from `v_j` to the span of the
    /// other members.
    pub gaps: Vec<f64>,
    /// `min_j g_j`.
    pub delta: f64,
    /// `1 / g_j`, the norms of the biorthogonal duals (infinite when the
    /// family is not separated at `j`).
    pub dual_norms: Vec<f64>,
    pub separated: bool,
    /// Ambient (truncation) dimension.
    pub truncation: usize,
}

/// Residuals of each row against the span of the other rows. The projector
/// columns are normalized first; that leaves each span (and hence each
/// residual) unchanged while keeping the least-squares solves well
/// conditioned when member norms differ by orders of magnitude.
fn residuals(family: &DMatrix<f64>) -> Vec<DVector<f64>> {
    let m = family.nrows();
    let dim = family.ncols();
    let mut out = Vec::with_capacity(m);
    for j in 0..m {
        let mut cols: Vec<DVector<f64>> = Vec::with_capacity(m - 1);
        for i in 0..m {
            if i == j {
                continue;
            }
            let v = family.row(i).transpose();
            let norm = v.norm();
            if norm > 0.0 {
                cols.push(v / norm);
            }
        }
        let vj = family.row(j).transpose();
        if cols.is_empty() {
            out.push(vj);
            continue;
        }
        let mut others = DMatrix::zeros(dim, cols.len());
        for (c, col) in cols.iter().enumerate() {
            others.set_column(c, col);
        }
        let coeff = linalg::min_norm_lstsq(&others, &vj);
        out.push(vj - others * coeff);
    }
    out
}

/// Compute the separation gaps `g_j` and the induced dual norms.
pub fn separation_report(family: &DMatrix<f64>) -> Result<SeparationReport> {
    if family.nrows() == 0 || family.ncols() == 0 {
        return Err(Error::EmptyFrame);
    }
    let gaps: Vec<f64> = residuals(family).iter().map(|r| r.norm()).collect();
    let max_norm = (0..family.nrows()).map(|i| family.row(i).norm()).fold(0.0, f64::max);
    let threshold = SEPARATION_TOL * max_norm.max(1.0);
    let separated = gaps.iter().all(|&g| g > threshold);
    let delta = gaps.iter().copied().fold(f64::INFINITY, f64::min);
    let dual_norms = gaps.iter().map(|&g| if g > threshold { 1.0 / g } else { f64::INFINITY }).collect();
    Ok(SeparationReport {
        gaps,
        delta,
        dual_norms,
        separated,
        truncation: family.ncols(),
    })
}

/// Biorthogonal duals `y_j = (I - P_j) v_j / g_j^2`, satisfying
/// `<y_i, v_j> = delta_ij`. Errors when the family is not separated.
pub fn dual_functionals(family: &DMatrix<f64>) -> Result<Vec<DVector<f64>>> {
    if family.nrows() == 0 || family.ncols() == 0 {
        return Err(Error::EmptyFrame);
    }
    let max_norm = (0..family.nrows()).map(|i| family.row(i).norm()).fold(0.0, f64::max);
    let threshold = SEPARATION_TOL * max_norm.max(1.0);
    residuals(family)
        .into_iter()
        .enumerate()
        .map(|(j, r)| {
            let g = r.norm();
            if g <= threshold {
                return Err(Error::NotSeparated { index: j, gap: g });
            }
            Ok(r / (g * g))
        })
        .collect()
}

/// Estimate a Hermitian operator matching every measurement of an l1 record
/// through the separated tilde family: `T~ = sum_k a_k y_k` over the
/// biorthogonal duals, mapped back through the dual correspondence. Errors
/// when the tilde family is not separated at the truncation.
///
/// A finite separated family is linearly independent, so its biorthogonal
/// system is the pseudoinverse dual and `sum_k a_k y_k` is the minimum-norm
/// interpolant `A^+ a`; that is computed from one SVD here instead of `m`
/// per-index projections (the per-index route stays available through
/// [`dual_functionals`] and agrees, see the tests).
pub fn l1_estimate(frame: &Frame, a: &MeasurementRecord) -> Result<EstimationResult> {
    if a.len() != frame.len() {
        return Err(Error::DimensionMismatch(format!(
            "record has {} values, frame has {} vectors",
            a.len(),
            frame.len()
        )));
    }
    let variant = TildeVariant::full(frame.field());
    let tm = tilde::tilde_matrix(frame, variant)?;
    let m = tm.num_rows();
    let a_mat = tm.as_matrix();
    let svd = a_mat.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let rank_tol = m.max(tm.embed_dim()) as f64 * f64::EPSILON * sigma_max;
    let rank = svd.singular_values.iter().filter(|&&s| s > rank_tol).count();
    let max_norm = (0..m).map(|k| a_mat.row(k).norm()).fold(0.0, f64::max);
    let gap_threshold = SEPARATION_TOL * max_norm.max(1.0);
    if rank < m {
        // Dependent family: fall back to per-index gaps for a precise error.
        let report = separation_report(a_mat)?;
        let (index, gap) = report
            .gaps
            .iter()
            .copied()
            .enumerate()
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("nonempty family");
        return Err(Error::NotSeparated { index, gap });
    }
    // Gaps from the dual norms: g_j = 1 / ||y_j||, with
    // ||y_j||^2 = sum_r (U[j,r] / sigma_r)^2 from the same SVD.
    let u = svd.u.as_ref().expect("u computed");
    for j in 0..m {
        let dual_norm_sq: f64 = (0..svd.singular_values.len())
            .map(|r| (u[(j, r)] / svd.singular_values[r]).powi(2))
            .sum();
        let gap = 1.0 / dual_norm_sq.sqrt();
        if gap <= gap_threshold {
            return Err(Error::NotSeparated { index: j, gap });
        }
    }
    let a_vec = a.as_dvector();
    let mut t_dual = svd
        .solve(&a_vec, rank_tol)
        .expect("SVD solve with both factors computed");
    for _ in 0..2 {
        let r = &a_vec - a_mat * &t_dual;
        t_dual += svd.solve(&r, rank_tol).expect("SVD solve with both factors computed");
    }
    let dual = TildeVector::new(variant, frame.dim(), t_dual.iter().copied().collect())?;
    let operator = tilde::operator_from_dual(&dual)?;
    let residual = (a_mat * &t_dual - a.as_dvector()).norm();
    let validation = validate_state(&operator, 1e-8);
    Ok(EstimationResult {
        operator,
        solvable: true,
        rank_a: rank,
        rank_b: rank,
        residual,
        trace: validation.trace,
        min_eigenvalue: validation.min_eigenvalue,
        is_state: validation.is_psd && (validation.trace - 1.0).abs() <= 1e-8,
    })
}

/// Certificate of the failing lower frame bound of a tilde family: an index
/// `m` whose block-1 slot `(1, m)` has small total correlation with the
/// family, `sum_k |<e~_{1m}, x_k~>|^2 < 2 eps`.
#[derive(Debug, Clone)]
pub struct DefectProbe {
    /// First index (1-based, `>= 2`) whose probe sum beat `2 eps`, if any.
    pub found_index: Option<usize>,
    pub achieved_sum: Option<f64>,
    /// All probe sums, indexed `(m, sum)` for `m = 2..=N`.
    pub sums: Vec<(usize, f64)>,
    pub epsilon: f64,
    pub truncation: usize,
}

/// Scan the block-1 slots `(1, m)` for `m = 2..N` and report the first index
/// whose probe sum falls below `2 eps`. For a complex frame the slot is a
/// `(Re, Im)` pair; the reported sum `sum_k |x_{k1}|^2 |x_{km}|^2` bounds
/// either single slot from above, so the certificate stays valid.
pub fn lower_frame_defect_probe(frame: &Frame, epsilon: f64) -> DefectProbe {
    let n = frame.dim();
    let mut sums = Vec::new();
    let mut found_index = None;
    let mut achieved_sum = None;
    for m in 2..=n {
        let sum: f64 = frame
            .vectors()
            .iter()
            .map(|x| {
                let e = x.entries();
                e[0].norm_sqr() * e[m - 1].norm_sqr()
            })
            .sum();
        sums.push((m, sum));
        if found_index.is_none() && sum < 2.0 * epsilon {
            found_index = Some(m);
            achieved_sum = Some(sum);
        }
    }
    DefectProbe {
        found_index,
        achieved_sum,
        sums,
        epsilon,
        truncation: n,
    }
}

/// Bessel bound of the tilde family against the cap the original family
/// forces: `B` in the real case, `2B` in the complex case.
#[derive(Debug, Clone, Copy)]
pub struct TildeBesselReport {
    pub base_bessel_bound: f64,
    pub tilde_bessel_bound: f64,
    pub cap: f64,
    pub truncation: usize,
}

/// For a family with `||x_k|| <= 1`, compute the exact Bessel bound of the
/// tilde family at the truncation and check it against the cap (`B` real,
/// `2B` complex). The cap is a theorem; exceeding it beyond `1e-10` indicates
/// a broken embedding, so it is asserted.
pub fn tilde_bessel_check(frame: &Frame) -> Result<TildeBesselReport> {
    for (k, v) in frame.vectors().iter().enumerate() {
        let norm = v.norm();
        if norm > 1.0 + 1e-12 {
            return Err(Error::NormPrecondition { index: k, norm });
        }
    }
    let base = frame_ops::bessel_bound(frame.vectors())?;
    let variant = TildeVariant::full(frame.field());
    let tm = tilde::tilde_matrix(frame, variant)?;
    let sv = linalg::singular_values(tm.as_matrix());
    let tilde_bound = sv.first().copied().unwrap_or(0.0).powi(2);
    let cap = if frame.field().is_real() { base } else { 2.0 * base };
    assert!(
        tilde_bound <= cap + 1e-10,
        "tilde Bessel bound {tilde_bound} exceeds cap {cap}"
    );
    Ok(TildeBesselReport {
        base_bessel_bound: base,
        tilde_bessel_bound: tilde_bound,
        cap,
        truncation: frame.dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{self, ShiftFrameConfig};
    use crate::field::ScalarField;
    use crate::frame::FrameVector;
    use crate::operator::quadratic_form;
    use crate::sampling;

    #[test]
    fn orthonormal_family_gaps() {
        let family = DMatrix::<f64>::identity(4, 4);
        let report = separation_report(&family).unwrap();
        assert!(report.separated);
        for g in &report.gaps {
            assert!((g - 1.0).abs() < 1e-12);
        }
        assert!((report.delta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn repeated_vector_not_separated() {
        let mut family = DMatrix::zeros(3, 4);
        family[(0, 0)] = 1.0;
        family[(1, 0)] = 1.0;
        family[(2, 1)] = 1.0;
        let report = separation_report(&family).unwrap();
        assert!(!report.separated);
        assert!(report.delta < 1e-10);
        assert!(dual_functionals(&family).is_err());
    }

    #[test]
    fn sum_with_basis_family_is_one_separated() {
        // x_i = e_1 + e_{i+1}: gap at least 1 for every member.
        let n = 6;
        let mut family = DMatrix::zeros(n - 1, n);
        for i in 0..(n - 1) {
            family[(i, 0)] = 1.0;
            family[(i, i + 1)] = 1.0;
        }
        let report = separation_report(&family).unwrap();
        assert!(report.separated);
        assert!(report.delta >= 1.0 - 1e-10);
    }

    #[test]
    fn duals_are_biorthogonal() {
        let mut rng = sampling::rng_from_seed(4);
        let family = DMatrix::from_fn(5, 9, |_, _| sampling::gaussian(&mut rng));
        let duals = dual_functionals(&family).unwrap();
        let report = separation_report(&family).unwrap();
        for (i, y) in duals.iter().enumerate() {
            assert!((y.norm() - report.dual_norms[i]).abs() <= 1e-8 * report.dual_norms[i]);
            for j in 0..family.nrows() {
                let ip = y.dot(&family.row(j).transpose());
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() <= 1e-8, "({i},{j}): {ip}");
            }
        }
    }

    #[test]
    fn duals_of_orthonormal_family_are_the_family() {
        let family = DMatrix::<f64>::identity(3, 3);
        let duals = dual_functionals(&family).unwrap();
        for (j, y) in duals.iter().enumerate() {
            assert!((y - family.row(j).transpose()).norm() < 1e-12);
        }
    }

    #[test]
    fn l1_estimate_single_measurement() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(4)).unwrap();
        let mut values = vec![0.0; frame.len()];
        values[0] = 1.0;
        let a = MeasurementRecord::new(values).unwrap();
        let result = l1_estimate(&frame, &a).unwrap();
        for (k, x) in frame.vectors().iter().enumerate() {
            let expect = if k == 0 { 1.0 } else { 0.0 };
            assert!((quadratic_form(&result.operator, x).unwrap() - expect).abs() <= 1e-8);
        }
    }

    #[test]
    fn l1_estimate_geometric_record() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(4)).unwrap();
        let values: Vec<f64> = (0..frame.len()).map(|k| 0.5f64.powi(k as i32)).collect();
        let a = MeasurementRecord::new(values).unwrap();
        let result = l1_estimate(&frame, &a).unwrap();
        for (k, x) in frame.vectors().iter().enumerate() {
            let got = quadratic_form(&result.operator, x).unwrap();
            assert!((got - a.values()[k]).abs() <= 1e-8, "k={k}");
        }
        assert!(result.residual <= 1e-8);
    }

    #[test]
    fn l1_estimate_zero_record() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(3)).unwrap();
        let a = MeasurementRecord::new(vec![0.0; frame.len()]).unwrap();
        let result = l1_estimate(&frame, &a).unwrap();
        assert!(result.operator.is_zero());
    }

    #[test]
    fn l1_dual_matches_per_index_duals() {
        // The pseudoinverse path inside l1_estimate and the per-index
        // projection formula of dual_functionals build the same operator.
        let frame = construct::shift_frame(&ShiftFrameConfig::real(5)).unwrap();
        let tm = tilde::tilde_matrix(&frame, TildeVariant::RealFull).unwrap();
        let duals = dual_functionals(tm.as_matrix()).unwrap();
        let mut rng = sampling::rng_from_seed(6);
        let values: Vec<f64> = (0..frame.len()).map(|_| sampling::gaussian(&mut rng)).collect();
        let a = MeasurementRecord::new(values.clone()).unwrap();
        let fast = l1_estimate(&frame, &a).unwrap();
        let mut t_dual = DVector::zeros(tm.embed_dim());
        for (k, y) in duals.iter().enumerate() {
            t_dual += y * values[k];
        }
        let slow = tilde::operator_from_dual(
            &TildeVector::new(TildeVariant::RealFull, frame.dim(), t_dual.iter().copied().collect())
                .unwrap(),
        )
        .unwrap();
        assert!((fast.operator.entries() - slow.entries()).norm() <= 1e-8);
    }

    #[test]
    fn l1_estimate_rejects_unseparated() {
        // Duplicated vector makes the tilde family unseparated.
        let mut rows = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        rows.push(rows[2].clone());
        let frame = Frame::from_real_rows(&rows).unwrap();
        let a = MeasurementRecord::new(vec![0.0; 4]).unwrap();
        assert!(matches!(l1_estimate(&frame, &a), Err(Error::NotSeparated { .. })));
    }

    #[test]
    fn defect_probe_canonical_basis() {
        let frame = Frame::canonical_basis(ScalarField::Real, 5).unwrap();
        let probe = lower_frame_defect_probe(&frame, 1e-6);
        assert_eq!(probe.found_index, Some(2));
        assert_eq!(probe.achieved_sum, Some(0.0));
    }

    #[test]
    fn defect_probe_shift_frame_decreasing() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(8)).unwrap();
        let probe = lower_frame_defect_probe(&frame, f64::INFINITY);
        assert_eq!(probe.found_index, Some(2));
        for w in probe.sums.windows(2) {
            assert!(w[1].1 < w[0].1, "sums must decrease within the truncation");
        }
    }

    #[test]
    fn defect_probe_thresholds() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(8)).unwrap();
        // Contributions are a_{m-1}^4 = 2^{-4(m-1)}: first below 2e-2 is m=3,
        // first below 2e-4 is m=5.
        let probe = lower_frame_defect_probe(&frame, 1e-2);
        assert_eq!(probe.found_index, Some(3));
        let probe = lower_frame_defect_probe(&frame, 1e-4);
        assert_eq!(probe.found_index, Some(5));
    }

    #[test]
    fn defect_probe_none_found() {
        let frame = construct::shift_frame(&ShiftFrameConfig::real(3)).unwrap();
        let probe = lower_frame_defect_probe(&frame, 1e-30);
        assert_eq!(probe.found_index, None);
        assert_eq!(probe.sums.len(), 2);
    }

    #[test]
    fn bessel_check_orthonormal() {
        let frame = Frame::canonical_basis(ScalarField::Real, 4).unwrap();
        let report = tilde_bessel_check(&frame).unwrap();
        assert!((report.base_bessel_bound - 1.0).abs() < 1e-12);
        assert!(report.tilde_bessel_bound <= report.cap + 1e-10);
    }

    #[test]
    fn bessel_check_random_normalized() {
        for seed in 0..20 {
            let field = if seed % 2 == 0 { ScalarField::Real } else { ScalarField::Complex };
            let raw = construct::random_frame(10, 6, field, seed).unwrap();
            let vectors: Vec<FrameVector> = raw
                .vectors()
                .iter()
                .map(|v| v.scale(crate::linalg::C64::new(1.0 / v.norm(), 0.0)))
                .collect();
            let frame = Frame::new(field, vectors).unwrap();
            let report = tilde_bessel_check(&frame).unwrap();
            assert!(report.tilde_bessel_bound <= report.cap + 1e-10);
        }
    }

    #[test]
    fn bessel_check_rejects_large_vectors() {
        let frame = Frame::from_real_rows(&[vec![2.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            tilde_bessel_check(&frame),
            Err(Error::NormPrecondition { .. })
        ));
    }

    #[test]
    fn shift_frame_duals_norm_diagnostic() {
        // sup ||y_k|| grows with the truncation; observational only.
        let mut previous = 0.0;
        for n in [3, 5, 7] {
            let frame = construct::shift_frame(&ShiftFrameConfig::real(n)).unwrap();
            let tm = tilde::tilde_matrix(&frame, TildeVariant::RealFull).unwrap();
            let report = separation_report(tm.as_matrix()).unwrap();
            assert!(report.separated, "n={n}");
            let sup = report.dual_norms.iter().copied().fold(0.0, f64::max);
            assert!(sup > previous);
            previous = sup;
        }
    }
}
