//! Inputs shared by the criterion benchmarks in `benches/`.

use num_bigint::BigInt;
use pdcalc::exactalg::Matrix;

/// A dense `n x n` integer matrix with entries from a fixed linear
/// congruential sequence, so every run times the same input.
pub fn lcg_matrix(n: usize, seed: u64) -> Matrix<BigInt> {
    let mut state = seed;
    let rows = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    BigInt::from((state >> 33) as i64 % 41 - 20)
                })
                .collect()
        })
        .collect();
    Matrix::from_rows(rows, n)
}

/// Witt components `(seed, seed + 1, ...)` of length `len`.
pub fn witt_components(len: usize, seed: i64) -> Vec<BigInt> {
    (0..len as i64).map(|i| BigInt::from(seed + i)).collect()
}
