#![allow(dead_code)]

use hoffman_core::{Matrix, SplitMix64};

pub fn gaussian(rng: &mut SplitMix64, rows: usize, cols: usize) -> Matrix {
    Matrix::from_row_major(rows, cols, rng.normal_vec(rows * cols)).unwrap()
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
