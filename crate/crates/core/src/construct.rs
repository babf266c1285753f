//! Generators for the injective frame families, plus random frames for
//! experiments.
//!
//! The staircase families stack blocks of linearly independent vectors whose
//! support starts at coordinate `i` with a nonzero leading entry; block sizes
//! `n, n-1, ..., 1` (real) or `2n-1, 2n-3, ..., 1` (complex) give exactly the
//! minimal injective counts `n(n+1)/2` and `n^2`. With `seed = None` the
//! blocks are the deterministic "identity plus leading-one" bases; a seed
//! switches to random blocks for stress testing.

use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::ScalarField;
use crate::frame::{Frame, FrameVector};
use crate::injectivity::{self, InjectivityReport};
use crate::linalg::{self, C64};
use crate::sampling;
use crate::tilde::{self, TildeVariant};

/// `{e_i} U {e_i + e_j : i < j}`: the simplest minimal injective family in
/// `R^n`, with `m = n(n+1)/2` vectors.
pub fn sum_pairs(n: usize) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let mut vectors: Vec<FrameVector> =
        (0..n).map(|i| FrameVector::basis(ScalarField::Real, n, i)).collect();
    for i in 0..n {
        for j in (i + 1)..n {
            let mut entries = vec![C64::new(0.0, 0.0); n];
            entries[i] = C64::new(1.0, 0.0);
            entries[j] = C64::new(1.0, 0.0);
            vectors.push(FrameVector::new(ScalarField::Real, entries)?);
        }
    }
    Frame::new(ScalarField::Real, vectors)
}

/// Random invertible block with robustly nonzero leading column, used by the
/// seeded staircase variants. Rows are the block vectors.
fn random_block(d: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    loop {
        let g = DMatrix::from_fn(d, d, |_, _| sampling::gaussian(rng));
        let leading_ok = (0..d).all(|r| {
            let row_norm = g.row(r).norm();
            g[(r, 0)].abs() > 0.1 * row_norm
        });
        if !leading_ok {
            continue;
        }
        let sv = linalg::singular_values(&g);
        if sv.last().copied().unwrap_or(0.0) > 1e-6 * sv[0] {
            return g;
        }
    }
}

/// Deterministic block: identity plus leading-one, rows `e_1` and
/// `e_1 + e_r` for `r = 2..d`.
fn deterministic_block(d: usize) -> DMatrix<f64> {
    let mut g = DMatrix::identity(d, d);
    for r in 1..d {
        g[(r, 0)] = 1.0;
    }
    g
}

/// Real staircase frame: block `i` holds `n - i` independent vectors
/// supported on coordinates `i..n` with nonzero `i`-th coordinate;
/// `m = n(n+1)/2` in total.
pub fn staircase_real(n: usize, seed: Option<u64>) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let mut rng = seed.map(sampling::rng_from_seed);
    let mut vectors = Vec::with_capacity(n * (n + 1) / 2);
    for block in 0..n {
        let d = n - block;
        let b = match rng.as_mut() {
            Some(r) => random_block(d, r),
            None => deterministic_block(d),
        };
        for r in 0..d {
            let mut entries = vec![C64::new(0.0, 0.0); n];
            for c in 0..d {
                entries[block + c] = C64::new(b[(r, c)], 0.0);
            }
            vectors.push(FrameVector::new(ScalarField::Real, entries)?);
        }
    }
    Frame::new(ScalarField::Real, vectors)
}

/// Complex staircase frame: block `i` is built from a basis of `R^{2(n-i)-1}`
/// with nonzero leading coordinate, mapped to `C^n` as
/// `(0,...,0, u_i, u_{i+1} + I v_{i+1}, ..., u_n + I v_n)`; `m = n^2`.
pub fn staircase_complex(n: usize, seed: Option<u64>) -> Result<Frame> {
    if n == 0 {
        return Err(Error::InvalidArgument("dimension must be >= 1".into()));
    }
    let mut rng = seed.map(sampling::rng_from_seed);
    let mut vectors = Vec::with_capacity(n * n);
    for block in 0..n {
        let d = 2 * (n - block) - 1;
        let b = match rng.as_mut() {
            Some(r) => random_block(d, r),
            None => deterministic_block(d),
        };
        for r in 0..d {
            let mut entries = vec![C64::new(0.0, 0.0); n];
            entries[block] = C64::new(b[(r, 0)], 0.0);
            for (offset, j) in ((block + 1)..n).enumerate() {
                entries[j] = C64::new(b[(r, 1 + 2 * offset)], b[(r, 2 + 2 * offset)]);
            }
            vectors.push(FrameVector::new(ScalarField::Complex, entries)?);
        }
    }
    Frame::new(ScalarField::Complex, vectors)
}

/// Eigenvalue prescription for the Parseval staircase: `lambda[i][j]` is the
/// `j`-th eigenvalue of block `i`'s frame operator. Admissibility:
/// `lambda[i][j] = 0` iff `j < i`, and each column sums to 1.
#[derive(Debug, Clone)]
pub struct EigenvalueSchedule {
    n: usize,
    lambda: DMatrix<f64>,
}

impl EigenvalueSchedule {
    pub fn new(lambda: DMatrix<f64>) -> Result<Self> {
        let n = lambda.nrows();
        if n == 0 || lambda.ncols() != n {
            return Err(Error::InvalidSchedule("schedule must be a nonempty square grid".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = lambda[(i, j)];
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidSchedule(format!(
                        "lambda[{i}][{j}] = {v} must be finite and nonnegative"
                    )));
                }
                if j < i && v != 0.0 {
                    return Err(Error::InvalidSchedule(format!(
                        "lambda[{i}][{j}] must be zero below the staircase"
                    )));
                }
                if j >= i && v == 0.0 {
                    return Err(Error::InvalidSchedule(format!(
                        "lambda[{i}][{j}] must be positive on the staircase"
                    )));
                }
            }
        }
        for j in 0..n {
            let col_sum: f64 = (0..n).map(|i| lambda[(i, j)]).sum();
            if (col_sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidSchedule(format!(
                    "column {j} sums to {col_sum}, expected 1"
                )));
            }
        }
        Ok(EigenvalueSchedule { n, lambda })
    }

    /// Uniform admissible schedule: `lambda[i][j] = 1/(j+1)` for `i <= j`.
    pub fn uniform(n: usize) -> Result<Self> {
        let lambda = DMatrix::from_fn(n, n, |i, j| if i <= j { 1.0 / (j + 1) as f64 } else { 0.0 });
        Self::new(lambda)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.lambda[(i, j)]
    }
}

/// Orthogonal `d x d` matrix all of whose columns have nonzero first entry:
/// the reflection exchanging `e_1` with the normalized all-ones vector.
fn leading_nonzero_orthonormal(d: usize) -> DMatrix<f64> {
    if d == 1 {
        return DMatrix::identity(1, 1);
    }
    let ones = DMatrix::from_element(d, 1, 1.0 / (d as f64).sqrt());
    let mut w = -ones;
    w[(0, 0)] += 1.0;
    let norm = w.norm();
    let w = w / norm;
    DMatrix::identity(d, d) - &w * w.transpose() * 2.0
}

/// Optionally rotate the orthonormal block by a Haar-random orthogonal matrix
/// while keeping every leading entry away from zero.
fn orthonormal_block(d: usize, rng: &mut Option<ChaCha8Rng>) -> DMatrix<f64> {
    let base = leading_nonzero_orthonormal(d);
    let Some(rng) = rng.as_mut() else {
        return base;
    };
    loop {
        let q = sampling::haar_basis(ScalarField::Real, d, rng).map(|z| z.re);
        let candidate = &base * q;
        if (0..d).all(|k| candidate[(0, k)].abs() > 1e-3 / (d as f64)) {
            return candidate;
        }
    }
}

/// Staircase frame that is exactly Parseval: block `i` realizes the frame
/// operator `diag(lambda[i][.])` as `{D_i^{1/2} u_k}` over an orthonormal
/// basis `{u_k}` of the block's coordinate subspace with nonzero leading
/// coordinates. Column sums of the schedule make the total frame operator the
/// identity.
pub fn parseval_staircase(
    schedule: &EigenvalueSchedule,
    field: ScalarField,
    seed: Option<u64>,
) -> Result<Frame> {
    let n = schedule.n();
    let mut rng = seed.map(sampling::rng_from_seed);
    let mut vectors = Vec::new();
    match field {
        ScalarField::Real => {
            for block in 0..n {
                let d = n - block;
                let u = orthonormal_block(d, &mut rng);
                for k in 0..d {
                    let mut entries = vec![C64::new(0.0, 0.0); n];
                    for c in 0..d {
                        let j = block + c;
                        entries[j] = C64::new(schedule.value(block, j).sqrt() * u[(c, k)], 0.0);
                    }
                    vectors.push(FrameVector::new(ScalarField::Real, entries)?);
                }
            }
        }
        ScalarField::Complex => {
            // The real-to-complex folding sends an orthonormal basis of
            // R^{2d-1} to a family with block frame operator diag(1, 2, ..., 2),
            // so the diagonal weights are lambda on the leading slot and
            // lambda/2 on the rest.
            for block in 0..n {
                let d = 2 * (n - block) - 1;
                let u = orthonormal_block(d, &mut rng);
                for k in 0..d {
                    let mut entries = vec![C64::new(0.0, 0.0); n];
                    entries[block] =
                        C64::new(schedule.value(block, block).sqrt() * u[(0, k)], 0.0);
                    for (offset, j) in ((block + 1)..n).enumerate() {
                        let w = (schedule.value(block, j) / 2.0).sqrt();
                        entries[j] =
                            C64::new(w * u[(1 + 2 * offset, k)], w * u[(2 + 2 * offset, k)]);
                    }
                    vectors.push(FrameVector::new(ScalarField::Complex, entries)?);
                }
            }
        }
    }
    Frame::new(field, vectors)
}

/// Truncation of the shift-generated injective frame for `l2`.
#[derive(Debug, Clone)]
pub struct ShiftFrameConfig {
    /// Truncation dimension `N >= 2`.
    pub truncation: usize,
    pub field: ScalarField,
    /// Nonzero square-summable coefficients `a_k`; defaults to `2^{-k}`.
    pub coefficients: Option<Vec<f64>>,
    /// Second coefficient sequence `b_k` for the complex branch; defaults to
    /// the `a_k` sequence.
    pub complex_coefficients: Option<Vec<f64>>,
}

impl ShiftFrameConfig {
    pub fn real(truncation: usize) -> Self {
        ShiftFrameConfig {
            truncation,
            field: ScalarField::Real,
            coefficients: None,
            complex_coefficients: None,
        }
    }

    pub fn complex(truncation: usize) -> Self {
        ShiftFrameConfig {
            truncation,
            field: ScalarField::Complex,
            coefficients: None,
            complex_coefficients: None,
        }
    }

    fn coefficient(&self, k: usize) -> Result<f64> {
        coefficient_at(&self.coefficients, k)
    }

    fn complex_coefficient(&self, k: usize) -> Result<f64> {
        match &self.complex_coefficients {
            Some(_) => coefficient_at(&self.complex_coefficients, k),
            None => self.coefficient(k),
        }
    }
}

fn coefficient_at(seq: &Option<Vec<f64>>, k: usize) -> Result<f64> {
    match seq {
        Some(v) => {
            let c = *v.get(k - 1).ok_or_else(|| {
                Error::InvalidArgument(format!("coefficient sequence too short for k={k}"))
            })?;
            if c == 0.0 || !c.is_finite() {
                return Err(Error::InvalidArgument(format!("coefficient a_{k} = {c} invalid")));
            }
            Ok(c)
        }
        None => Ok(0.5f64.powi(k as i32)),
    }
}

/// Truncated shift frame: the `N` canonical basis vectors together with
/// `2^{-i} a_k (e_{1+i} + e_{1+i+k})` for all `i >= 0`, `k >= 1` with
/// `1 + i + k <= N` (complex mode adds the `e_{1+i} + I e_{1+i+k}` branch).
/// Real mode yields exactly `N(N+1)/2` vectors, the minimal injective count
/// at the truncation; complex mode yields `N^2`.
pub fn shift_frame(config: &ShiftFrameConfig) -> Result<Frame> {
    let n = config.truncation;
    if n < 2 {
        return Err(Error::InvalidArgument("shift frame needs truncation >= 2".into()));
    }
    let mut vectors: Vec<FrameVector> =
        (0..n).map(|i| FrameVector::basis(config.field, n, i)).collect();
    for i in 0..=(n - 2) {
        for k in 1..=(n - 1 - i) {
            let damp = 0.5f64.powi(i as i32);
            let c = damp * config.coefficient(k)?;
            let mut entries = vec![C64::new(0.0, 0.0); n];
            entries[i] = C64::new(c, 0.0);
            entries[i + k] = C64::new(c, 0.0);
            vectors.push(FrameVector::new(config.field, entries)?);
            if config.field == ScalarField::Complex {
                let b = damp * config.complex_coefficient(k)?;
                let mut entries = vec![C64::new(0.0, 0.0); n];
                entries[i] = C64::new(b, 0.0);
                entries[i + k] = C64::new(0.0, b);
                vectors.push(FrameVector::new(config.field, entries)?);
            }
        }
    }
    Frame::new(config.field, vectors)
}

/// Bounded frame induced from an injective frame of finitely supported
/// vectors: each non-basis vector `x_k` is replaced by the pair
/// `x_k + e_{n_k}`, `x_k - e_{n_k}` with fresh increasing indices `n_k` past
/// the family's total support, and the canonical basis part is extended to
/// the new truncation. All output vectors have norm at least 1.
#[derive(Debug, Clone)]
pub struct Boundedized {
    pub frame: Frame,
    /// Dimension of the input frame. Injectivity is preserved for operators
    /// supported on this leading block; see [`Boundedized::certify`].
    pub original_dim: usize,
    /// Fresh index paired with each replaced vector, in input order.
    pub fresh_indices: Vec<usize>,
}

impl Boundedized {
    /// Certify that the boundedized family still determines every Hermitian
    /// operator supported on the original `original_dim` block: the tilde
    /// rows restricted to that block's coordinate slots must have full rank.
    /// (Pairs recombine as `y+~ + y-~ = 2 x~ + 2 e_{n_k}~`, and the fresh
    /// slots lie outside the block, so the original spanning survives.)
    pub fn certify(&self, variant: TildeVariant) -> Result<InjectivityReport> {
        let tm = tilde::tilde_matrix(&self.frame, variant)?;
        let cols = tm.leading_block_columns(self.original_dim);
        let restricted = tm.select_columns(&cols);
        Ok(injectivity::report_from_matrix(
            variant,
            self.frame.len(),
            cols.len(),
            &restricted,
        ))
    }
}

pub fn boundedize(frame: &Frame, truncation: usize) -> Result<Boundedized> {
    let original_dim = frame.dim();
    let mut basis_indices = Vec::new();
    let mut others = Vec::new();
    for v in frame.vectors() {
        match v.is_canonical_basis_vector() {
            Some(i) => basis_indices.push(i),
            None => others.push(v.clone()),
        }
    }
    let total_support = frame
        .vectors()
        .iter()
        .filter_map(|v| v.max_support())
        .max()
        .map(|i| i + 1)
        .unwrap_or(0);
    let needed = total_support + others.len();
    if truncation < needed.max(original_dim) {
        return Err(Error::InsufficientTruncation {
            needed: needed.max(original_dim),
            got: truncation,
        });
    }
    let mut vectors: Vec<FrameVector> = (0..truncation)
        .map(|i| FrameVector::basis(frame.field(), truncation, i))
        .collect();
    let mut fresh_indices = Vec::with_capacity(others.len());
    for (k, x) in others.iter().enumerate() {
        let fresh = total_support + k;
        fresh_indices.push(fresh);
        for sign in [1.0, -1.0] {
            let mut entries = vec![C64::new(0.0, 0.0); truncation];
            for (i, z) in x.entries().iter().enumerate() {
                entries[i] = *z;
            }
            entries[fresh] += C64::new(sign, 0.0);
            vectors.push(FrameVector::new(frame.field(), entries)?);
        }
    }
    Ok(Boundedized {
        frame: Frame::new(frame.field(), vectors)?,
        original_dim,
        fresh_indices,
    })
}

/// Frame of i.i.d. standard Gaussian vectors (independent re/im parts in the
/// complex case), deterministic in the seed.
pub fn random_frame(m: usize, n: usize, field: ScalarField, seed: u64) -> Result<Frame> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidArgument("random frame needs m >= 1 and n >= 1".into()));
    }
    let mut rng = sampling::rng_from_seed(seed);
    let g = sampling::gaussian_matrix(field, n, m, &mut rng);
    let vectors = (0..m)
        .map(|k| FrameVector::new(field, g.column(k).iter().copied().collect()))
        .collect::<Result<Vec<_>>>()?;
    Frame::new(field, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame_ops;
    use crate::injectivity::check_injectivity;
    use crate::operator::{quadratic_form, SelfAdjointOperator};

    #[test]
    fn sum_pairs_examples() {
        let f = sum_pairs(2).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.vector(0).entries(), &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert_eq!(f.vector(1).entries(), &[C64::new(0.0, 0.0), C64::new(1.0, 0.0)]);
        assert_eq!(f.vector(2).entries(), &[C64::new(1.0, 0.0), C64::new(1.0, 0.0)]);

        let f1 = sum_pairs(1).unwrap();
        assert_eq!(f1.len(), 1);

        let f5 = sum_pairs(5).unwrap();
        assert_eq!(f5.len(), 15);
        assert!(check_injectivity(&f5, TildeVariant::RealFull).unwrap().injective);
    }

    #[test]
    fn staircase_real_deterministic() {
        let f = staircase_real(2, None).unwrap();
        let rows: Vec<Vec<f64>> = f
            .vectors()
            .iter()
            .map(|v| v.entries().iter().map(|z| z.re).collect())
            .collect();
        assert_eq!(rows, vec![vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]);
    }

    #[test]
    fn staircase_real_injective_any_seed() {
        for n in 1..=6 {
            for seed in [None, Some(1), Some(99)] {
                let f = staircase_real(n, seed).unwrap();
                assert_eq!(f.len(), n * (n + 1) / 2);
                assert!(
                    check_injectivity(&f, TildeVariant::RealFull).unwrap().injective,
                    "n={n} seed={seed:?}"
                );
            }
        }
    }

    #[test]
    fn staircase_complex_counts_and_certificates() {
        let f1 = staircase_complex(1, None).unwrap();
        assert_eq!(f1.len(), 1);
        for (n, seed) in [(2, None), (4, None), (3, Some(7)), (4, Some(2))] {
            let f = staircase_complex(n, seed).unwrap();
            assert_eq!(f.len(), n * n);
            assert!(
                check_injectivity(&f, TildeVariant::ComplexFull).unwrap().injective,
                "n={n} seed={seed:?}"
            );
        }
    }

    #[test]
    fn schedule_validation() {
        assert!(EigenvalueSchedule::uniform(4).is_ok());
        // Zero on the staircase.
        let mut bad = DMatrix::zeros(2, 2);
        bad[(0, 0)] = 1.0;
        bad[(0, 1)] = 1.0;
        assert!(EigenvalueSchedule::new(bad).is_err());
        // Column sums off.
        let mut bad = DMatrix::zeros(2, 2);
        bad[(0, 0)] = 1.0;
        bad[(0, 1)] = 0.6;
        bad[(1, 1)] = 0.3;
        assert!(EigenvalueSchedule::new(bad).is_err());
    }

    #[test]
    fn parseval_staircase_trivial_and_small() {
        let s1 = EigenvalueSchedule::uniform(1).unwrap();
        let f = parseval_staircase(&s1, ScalarField::Real, None).unwrap();
        assert_eq!(f.len(), 1);
        assert!((f.vector(0).entries()[0].re.abs() - 1.0).abs() < 1e-12);

        // n=2: column sums force lambda[0][0] = 1; split coordinate 2 evenly.
        let mut lambda = DMatrix::zeros(2, 2);
        lambda[(0, 0)] = 1.0;
        lambda[(0, 1)] = 0.5;
        lambda[(1, 1)] = 0.5;
        let s = EigenvalueSchedule::new(lambda).unwrap();
        let f = parseval_staircase(&s, ScalarField::Real, None).unwrap();
        assert_eq!(f.len(), 3);
        assert!(frame_ops::frame_bounds(&f).is_parseval(1e-10));
        assert!(check_injectivity(&f, TildeVariant::RealFull).unwrap().injective);
    }

    #[test]
    fn parseval_staircase_uniform_schedules() {
        for field in [ScalarField::Real, ScalarField::Complex] {
            for n in 1..=5 {
                let s = EigenvalueSchedule::uniform(n).unwrap();
                for seed in [None, Some(11)] {
                    let f = parseval_staircase(&s, field, seed).unwrap();
                    let expect_m = match field {
                        ScalarField::Real => n * (n + 1) / 2,
                        ScalarField::Complex => n * n,
                    };
                    assert_eq!(f.len(), expect_m);
                    assert!(frame_ops::frame_bounds(&f).is_parseval(1e-10), "{field} n={n}");
                    if n >= 2 || field.is_real() {
                        assert!(
                            check_injectivity(&f, TildeVariant::full(field)).unwrap().injective,
                            "{field} n={n} seed={seed:?}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn parseval_staircase_block_operators() {
        // Block i's frame operator equals diag(lambda[i][.]) exactly.
        let n = 4;
        let s = EigenvalueSchedule::uniform(n).unwrap();
        let f = parseval_staircase(&s, ScalarField::Real, None).unwrap();
        let mut offset = 0;
        for block in 0..n {
            let d = n - block;
            let block_frame =
                Frame::new(ScalarField::Real, f.vectors()[offset..offset + d].to_vec()).unwrap();
            let op = frame_ops::frame_operator(&block_frame);
            for i in 0..n {
                for j in 0..n {
                    let expect = if i == j { s.value(block, i) } else { 0.0 };
                    assert!(
                        (op.entry(i, j).re - expect).abs() < 1e-10,
                        "block {block} entry ({i},{j})"
                    );
                }
            }
            offset += d;
        }
    }

    #[test]
    fn shift_frame_small() {
        // N=2: {e_1, e_2, 1/2 (e_1 + e_2)}; m = 3 = D; injective.
        let f = shift_frame(&ShiftFrameConfig::real(2)).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.vector(2).entries(), &[C64::new(0.5, 0.0), C64::new(0.5, 0.0)]);
        let report = check_injectivity(&f, TildeVariant::RealFull).unwrap();
        assert!(report.injective);
        assert_eq!(report.m, report.embed_dim);
    }

    #[test]
    fn shift_frame_counts() {
        for n in 2..=8 {
            let f = shift_frame(&ShiftFrameConfig::real(n)).unwrap();
            assert_eq!(f.len(), n * (n + 1) / 2);
            assert!(check_injectivity(&f, TildeVariant::RealFull).unwrap().injective);

            let fc = shift_frame(&ShiftFrameConfig::complex(n)).unwrap();
            assert_eq!(fc.len(), n * n);
            assert!(check_injectivity(&fc, TildeVariant::ComplexFull).unwrap().injective);
        }
        assert!(shift_frame(&ShiftFrameConfig::real(1)).is_err());
    }

    #[test]
    fn shift_frame_minimal_deletion_breaks_injectivity() {
        let f = shift_frame(&ShiftFrameConfig::real(4)).unwrap();
        for k in 0..f.len() {
            let smaller = f.without_vector(k).unwrap();
            assert!(!check_injectivity(&smaller, TildeVariant::RealFull).unwrap().injective);
        }
    }

    #[test]
    fn shift_proof_identity() {
        // For T with zero diagonal entries, <T(L^i x_k), L^i x_k> =
        // 2 a_k^2 <T e_{1+i}, e_{1+i+k}> (real, 1-based); check numerically.
        let n = 6;
        let mut rng = sampling::rng_from_seed(8);
        let g = sampling::gaussian_matrix(ScalarField::Real, n, n, &mut rng);
        let mut t = SelfAdjointOperator::new(ScalarField::Real, g).unwrap();
        let mut entries = t.entries().clone();
        for i in 0..n {
            entries[(i, i)] = C64::new(0.0, 0.0);
        }
        t = SelfAdjointOperator::new(ScalarField::Real, entries).unwrap();
        for i in 0..=(n - 2) {
            for k in 1..=(n - 1 - i) {
                let a_k = 0.5f64.powi(k as i32);
                let c = 0.5f64.powi(i as i32) * a_k;
                let mut v = vec![C64::new(0.0, 0.0); n];
                v[i] = C64::new(c, 0.0);
                v[i + k] = C64::new(c, 0.0);
                let x = FrameVector::new(ScalarField::Real, v).unwrap();
                let lhs = quadratic_form(&t, &x).unwrap();
                let damp = 0.5f64.powi(i as i32);
                let rhs = 2.0 * (damp * a_k).powi(2) * t.entry(i, i + k).re;
                assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
            }
        }
    }

    #[test]
    fn boundedize_pairs_and_norms() {
        // x = 1/2 e_1 paired with fresh index: {1/2 e_1 + e_2, 1/2 e_1 - e_2}.
        let f = Frame::from_real_rows(&[vec![0.5]]).unwrap();
        let b = boundedize(&f, 2).unwrap();
        assert_eq!(b.fresh_indices, vec![1]);
        let rows: Vec<Vec<f64>> = b
            .frame
            .vectors()
            .iter()
            .map(|v| v.entries().iter().map(|z| z.re).collect())
            .collect();
        assert!(rows.contains(&vec![0.5, 1.0]));
        assert!(rows.contains(&vec![0.5, -1.0]));
        for v in b.frame.vectors() {
            assert!(v.norm() >= 1.0 - 1e-12);
        }
    }

    #[test]
    fn boundedize_identity_blocks_unchanged() {
        let f = Frame::canonical_basis(ScalarField::Real, 3).unwrap();
        let b = boundedize(&f, 3).unwrap();
        assert_eq!(b.frame.len(), 3);
        assert!(b.fresh_indices.is_empty());
    }

    #[test]
    fn boundedize_shift_frame_certifies() {
        for n in 2..=5 {
            let f = shift_frame(&ShiftFrameConfig::real(n)).unwrap();
            let pairs = f.len() - n;
            let b = boundedize(&f, n + pairs).unwrap();
            assert_eq!(b.original_dim, n);
            for v in b.frame.vectors() {
                assert!(v.norm() >= 1.0 - 1e-12);
            }
            let report = b.certify(TildeVariant::RealFull).unwrap();
            assert!(report.injective, "n={n}");
            assert_eq!(report.embed_dim, n * (n + 1) / 2);
        }
    }

    #[test]
    fn boundedize_headroom_error() {
        let f = shift_frame(&ShiftFrameConfig::real(3)).unwrap();
        assert!(matches!(
            boundedize(&f, 3),
            Err(Error::InsufficientTruncation { .. })
        ));
    }

    #[test]
    fn seeded_constructors_always_certify() {
        for seed in 0..20u64 {
            let f = staircase_real(4, Some(seed)).unwrap();
            assert!(check_injectivity(&f, TildeVariant::RealFull).unwrap().injective);
            let f = staircase_complex(3, Some(seed)).unwrap();
            assert!(check_injectivity(&f, TildeVariant::ComplexFull).unwrap().injective);
            let s = EigenvalueSchedule::uniform(4).unwrap();
            for field in [ScalarField::Real, ScalarField::Complex] {
                let f = parseval_staircase(&s, field, Some(seed)).unwrap();
                assert!(frame_ops::frame_bounds(&f).is_parseval(1e-10));
                assert!(check_injectivity(&f, TildeVariant::full(field)).unwrap().injective);
            }
        }
    }

    #[test]
    fn injective_constructions_span() {
        for f in [
            sum_pairs(4).unwrap(),
            staircase_complex(3, None).unwrap(),
            shift_frame(&ShiftFrameConfig::real(5)).unwrap(),
        ] {
            assert!(f.span_check().spans);
        }
    }

    #[test]
    fn random_frame_reproducible_and_spanning() {
        let a = random_frame(5, 3, ScalarField::Complex, 42).unwrap();
        let b = random_frame(5, 3, ScalarField::Complex, 42).unwrap();
        assert_eq!(a, b);
        let c = random_frame(5, 3, ScalarField::Complex, 43).unwrap();
        assert_ne!(a, c);

        for seed in 0..1000 {
            let f = random_frame(4, 3, ScalarField::Real, seed).unwrap();
            assert!(f.span_check().spans, "seed={seed}");
        }
    }
}
