//! Seeded random exact data for identity checks.

use hs_exact::linalg::Matrix;
use hs_exact::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut SampleRng, bound: i64) -> Scalar {
    Scalar::ratio(rng.random_range(-bound..=bound), rng.random_range(1..=bound.max(1)))
}

pub fn integer(rng: &mut SampleRng, bound: i64) -> Scalar {
    Scalar::from_int(rng.random_range(-bound..=bound))
}

pub fn gaussian(rng: &mut SampleRng, bound: i64) -> Scalar {
    let den = rng.random_range(1..=bound.max(1));
    let re = rng.random_range(-bound..=bound);
    let im = rng.random_range(-bound..=bound);
    Scalar::gauss((re, den), (im, den))
}

pub fn vector(rng: &mut SampleRng, len: usize, bound: i64) -> Vec<Scalar> {
    (0..len).map(|_| gaussian(rng, bound)).collect()
}

pub fn matrix(rng: &mut SampleRng, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| gaussian(rng, bound))
}

/// `B†B + I`, positive definite.
pub fn positive_hermitian(rng: &mut SampleRng, n: usize, bound: i64) -> Matrix {
    let b = matrix(rng, n, n, bound);
    b.conj_transpose().mul(&b).add(&Matrix::identity(n))
}

/// Upper unitriangular with random entries above the diagonal.
pub fn unitriangular(rng: &mut SampleRng, n: usize, bound: i64) -> Matrix {
    let mut m = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            m.set(i, j, gaussian(rng, bound));
        }
    }
    m
}
