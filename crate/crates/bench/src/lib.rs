//! Shared inputs for the benchmarks.

use entbundle::{BitVector, Gf2Matrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A dense random GF(2) matrix, reproducible from `seed`.
pub fn random_matrix(rows: usize, cols: usize, seed: u64) -> Gf2Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows =
        (0..rows).map(|_| BitVector::from_bools(&(0..cols).map(|_| rng.random()).collect::<Vec<bool>>())).collect();
    Gf2Matrix::from_rows(cols, rows).expect("consistent widths")
}
