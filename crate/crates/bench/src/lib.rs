//! Seeded instance generators shared by the benchmarks.

use hoffman_core::{dikin_bounds, IndexSet, Matrix, SplitMix64};

/// An `m × n` matrix of independent standard normals from stream `t` of `seed`.
pub fn gaussian_matrix(m: usize, n: usize, seed: u64, t: u64) -> Matrix {
    let mut rng = SplitMix64::for_stream(seed, t);
    Matrix::from_row_major(m, n, rng.normal_vec(m * n)).expect("length matches")
}

/// The first Gaussian pair `(A, C)` from `seed` for which the Dikin bounds
/// of the full `C` block exist.
pub fn ellipsoid_instance(m: usize, p: usize, n: usize, seed: u64) -> (Matrix, Matrix) {
    (0..)
        .map(|t| {
            let mut rng = SplitMix64::for_stream(seed, t);
            let a = Matrix::from_row_major(m, n, rng.normal_vec(m * n)).expect("length matches");
            let c = Matrix::from_row_major(p, n, rng.normal_vec(p * n)).expect("length matches");
            (a, c)
        })
        .find(|(a, c)| dikin_bounds(a, c, &IndexSet::full(p)).is_ok())
        .expect("some stream qualifies")
}
