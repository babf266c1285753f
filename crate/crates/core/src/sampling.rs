//! Seeded random sampling helpers. Every randomized operation in the crate
//! derives its generator from a `u64` seed through these functions, so runs
//! are reproducible and per-trial streams can be split by counter.

use nalgebra::DMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::field::ScalarField;
use crate::linalg::C64;

pub(crate) fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Counter-based seed split (splitmix64 step). Trial `i` of a seeded
/// experiment uses `split_seed(seed, i)`, so parallel and serial execution
/// see identical streams.
pub(crate) fn split_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub(crate) fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Standard Gaussian scalar in the given field (independent re/im parts).
pub(crate) fn gaussian_scalar(field: ScalarField, rng: &mut ChaCha8Rng) -> C64 {
    match field {
        ScalarField::Real => C64::new(gaussian(rng), 0.0),
        ScalarField::Complex => C64::new(gaussian(rng), gaussian(rng)),
    }
}

pub(crate) fn gaussian_matrix(
    field: ScalarField,
    rows: usize,
    cols: usize,
    rng: &mut ChaCha8Rng,
) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| gaussian_scalar(field, rng))
}

/// Orthonormal basis drawn from the Haar measure, obtained by orthonormalizing
/// a standard Gaussian matrix. Degenerate draws are redrawn.
pub(crate) fn haar_basis(field: ScalarField, n: usize, rng: &mut ChaCha8Rng) -> DMatrix<C64> {
    loop {
        let g = gaussian_matrix(field, n, n, rng);
        let qr = g.qr();
        let r = qr.r();
        if (0..n).all(|i| r[(i, i)].norm() > 1e-8) {
            return qr.q();
        }
    }
}
