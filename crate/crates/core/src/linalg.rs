//! Internal numerical kernels shared across modules. All rank decisions in
//! the crate go through [`RankInfo`] so that one tolerance rule applies
//! everywhere.

use nalgebra::{Complex, DMatrix, DVector};

pub(crate) type C64 = Complex<f64>;

/// Numerical rank of a matrix from its SVD:
/// `rank = #{sigma > tol}`, `tol = max(rows, cols) * eps * sigma_max`.
#[derive(Debug, Clone)]
pub(crate) struct RankInfo {
    pub rank: usize,
    pub tolerance: f64,
    pub singular_values: Vec<f64>,
}

impl RankInfo {
    /// Smallest singular value that still counted towards the rank.
    pub fn smallest_kept(&self) -> Option<f64> {
        if self.rank == 0 {
            None
        } else {
            Some(self.singular_values[self.rank - 1])
        }
    }
}

pub(crate) fn singular_values(a: &DMatrix<f64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

pub(crate) fn singular_values_complex(a: &DMatrix<C64>) -> Vec<f64> {
    let mut sv: Vec<f64> = a.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|x, y| y.partial_cmp(x).unwrap());
    sv
}

pub(crate) fn rank_from_singular_values(sv: &[f64], rows: usize, cols: usize) -> RankInfo {
    let sigma_max = sv.first().copied().unwrap_or(0.0);
    let tolerance = rows.max(cols) as f64 * f64::EPSILON * sigma_max;
    let rank = sv.iter().filter(|&&s| s > tolerance).count();
    RankInfo {
        rank,
        tolerance,
        singular_values: sv.to_vec(),
    }
}

pub(crate) fn numerical_rank(a: &DMatrix<f64>) -> RankInfo {
    rank_from_singular_values(&singular_values(a), a.nrows(), a.ncols())
}

pub(crate) fn numerical_rank_complex(a: &DMatrix<C64>) -> RankInfo {
    rank_from_singular_values(&singular_values_complex(a), a.nrows(), a.ncols())
}

/// Minimum-norm least-squares solution of `A t ~ b` via the SVD
/// pseudoinverse, truncated at the shared rank tolerance. Two steps of
/// iterative refinement on the same factorization keep the residual near
/// machine level on ill-conditioned systems; the update stays in the row
/// space, so the minimum-norm property survives.
pub(crate) fn min_norm_lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let svd = a.clone().svd(true, true);
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let tol = a.nrows().max(a.ncols()) as f64 * f64::EPSILON * sigma_max;
    let mut t = svd.solve(b, tol).expect("SVD solve with both factors computed");
    for _ in 0..2 {
        let r = b - a * &t;
        t += svd.solve(&r, tol).expect("SVD solve with both factors computed");
    }
    t
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending.
pub(crate) fn hermitian_eigen(h: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = h.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].partial_cmp(&eig.eigenvalues[j]).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let n = h.nrows();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Apply a real function to the spectrum of a Hermitian matrix.
pub(crate) fn hermitian_map(h: &DMatrix<C64>, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(h);
    let n = h.nrows();
    let mut scaled = vectors.clone();
    for (j, &lambda) in values.iter().enumerate() {
        let factor = C64::new(f(lambda), 0.0);
        for i in 0..n {
            scaled[(i, j)] *= factor;
        }
    }
    &scaled * vectors.adjoint()
}
