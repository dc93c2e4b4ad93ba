//! Dense linear algebra used by the LP subproblems and the barrier estimator.
//!
//! Everything here is sized for desk-scale instances (tens of rows and
//! columns). Matrices are row-major `f64` buffers; vectors are plain slices.

mod ball;
mod lu;
mod svd;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::certkit::IndexSet;
use crate::error::{Error, Result};

pub use ball::{unit_ball_vertices, MAX_BALL_AMBIENT};
pub use lu::Lu;
pub use svd::Svd;

/// Relative threshold below which singular values count as zero.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from explicit rows. `cols` fixes the width when
    /// `rows` is empty.
    pub fn from_rows_with_cols<R: AsRef<[f64]>>(rows: &[R], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(rows.len(), cols, data)
    }

    /// Panics on ragged or empty input; meant for literals in tests and examples.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols).expect("rectangular matrix literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matmul dimension mismatch");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        out
    }

    /// `self * x`
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(self.cols, x.len(), "mul_vec dimension mismatch");
        self.row_iter().map(|r| dot(r, x)).collect()
    }

    /// `selfᵀ * y`
    pub fn tr_mul_vec(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(self.rows, y.len(), "tr_mul_vec dimension mismatch");
        let mut out = vec![0.0; self.cols];
        for (r, &yi) in self.row_iter().zip(y) {
            if yi != 0.0 {
                axpy(yi, r, &mut out);
            }
        }
        out
    }

    pub fn scaled(&self, alpha: f64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| alpha * x).collect(),
        }
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot stack {} columns on {} columns",
                other.cols, self.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Rows listed in `set`, in ascending index order.
    pub fn submatrix_rows(&self, set: &IndexSet) -> Result<Matrix> {
        if set.universe() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "index set over {} rows applied to a matrix with {} rows",
                set.universe(),
                self.rows
            )));
        }
        let mut data = Vec::with_capacity(set.len() * self.cols);
        for i in set.iter() {
            data.extend_from_slice(self.row(i));
        }
        Ok(Matrix {
            rows: set.len(),
            cols: self.cols,
            data,
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Largest dual norm over the rows; 0 for an empty matrix.
    pub fn max_row_norm(&self, tag: NormTag) -> f64 {
        self.row_iter().map(|r| norm(r, tag)).fold(0.0, f64::max)
    }

    /// Frobenius norm.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Selects one of the three supported vector norms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormTag {
    L1,
    L2,
    #[serde(rename = "linf")]
    LInf,
}

impl NormTag {
    pub fn dual(self) -> NormTag {
        match self {
            NormTag::L1 => NormTag::LInf,
            NormTag::L2 => NormTag::L2,
            NormTag::LInf => NormTag::L1,
        }
    }

    /// Whether LP subproblems can express this norm exactly.
    pub fn is_polyhedral(self) -> bool {
        !matches!(self, NormTag::L2)
    }
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormTag::L1 => "l1",
            NormTag::L2 => "l2",
            NormTag::LInf => "linf",
        })
    }
}

impl std::str::FromStr for NormTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" => Ok(NormTag::L1),
            "l2" => Ok(NormTag::L2),
            "linf" | "inf" => Ok(NormTag::LInf),
            other => Err(Error::InvalidInput(format!("unknown norm `{other}`"))),
        }
    }
}

pub fn norm(v: &[f64], tag: NormTag) -> f64 {
    match tag {
        NormTag::L1 => v.iter().map(|x| x.abs()).sum(),
        NormTag::L2 => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
        NormTag::LInf => v.iter().fold(0.0, |m, x| m.max(x.abs())),
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `y += alpha * x`
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Componentwise `max(0, v)`.
pub fn positive_part(v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| x.max(0.0)).collect()
}

/// An orthonormal basis of a subspace of `R^ambient_dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            vectors: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let vectors = (0..ambient_dim)
            .map(|i| {
                let mut e = vec![0.0; ambient_dim];
                e[i] = 1.0;
                e
            })
            .collect();
        Self {
            ambient_dim,
            vectors,
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vec<f64>] {
        &self.vectors
    }

    /// The basis as an `ambient_dim x dim` matrix with orthonormal columns.
    pub fn to_matrix(&self) -> Matrix {
        let mut q = Matrix::zeros(self.ambient_dim, self.vectors.len());
        for (j, v) in self.vectors.iter().enumerate() {
            for (i, &x) in v.iter().enumerate() {
                q[(i, j)] = x;
            }
        }
        q
    }

    /// Orthogonal projection of `v` onto the span.
    pub fn project(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.ambient_dim, "project dimension mismatch");
        let mut out = vec![0.0; self.ambient_dim];
        for q in &self.vectors {
            axpy(dot(q, v), q, &mut out);
        }
        out
    }

    /// Projection matrix `Q Qᵀ`.
    pub fn projector(&self) -> Matrix {
        let mut p = Matrix::zeros(self.ambient_dim, self.ambient_dim);
        for q in &self.vectors {
            for i in 0..self.ambient_dim {
                for j in 0..self.ambient_dim {
                    p[(i, j)] += q[i] * q[j];
                }
            }
        }
        p
    }
}

/// Orthonormal basis of the column space of `m`.
pub fn colspace_basis(m: &Matrix, rank_tol: f64) -> SubspaceBasis {
    if m.is_empty() {
        return SubspaceBasis::zero(m.rows());
    }
    let svd = Svd::new(m);
    let cutoff = rank_tol * svd.largest();
    let vectors = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > cutoff && s > 0.0)
        .map(|(j, _)| svd.u.col(j))
        .collect();
    SubspaceBasis {
        ambient_dim: m.rows(),
        vectors,
    }
}

/// Orthonormal basis of `{x : m x = 0}`.
pub fn nullspace_basis(m: &Matrix, rank_tol: f64) -> SubspaceBasis {
    let n = m.cols();
    if m.rows() == 0 || m.max_abs() == 0.0 {
        return SubspaceBasis::full(n);
    }
    let svd = Svd::new(m);
    let cutoff = rank_tol * svd.largest();
    let vectors = svd
        .sigma
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cutoff)
        .map(|(j, _)| svd.v.col(j))
        .collect();
    SubspaceBasis {
        ambient_dim: n,
        vectors,
    }
}

/// Smallest singular value of `m` above `rank_tol` times the largest; 0 when
/// `m` is zero or empty.
pub fn smallest_positive_singular_value(m: &Matrix, rank_tol: f64) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let svd = Svd::new(m);
    let largest = svd.largest();
    if largest == 0.0 {
        return 0.0;
    }
    let cutoff = rank_tol * largest;
    svd.sigma
        .iter()
        .copied()
        .filter(|&s| s > cutoff)
        .fold(largest, f64::min)
}

/// Smallest positive singular value of `M^{1/2}` for symmetric positive
/// semidefinite `M`, i.e. the square root of its smallest positive eigenvalue.
pub fn psd_sqrt_smallest_positive(m: &Matrix, rank_tol: f64) -> f64 {
    smallest_positive_singular_value(m, rank_tol).sqrt()
}

/// Symmetric square root of a positive semidefinite matrix.
pub fn psd_sqrt(m: &Matrix) -> Matrix {
    assert_eq!(m.rows(), m.cols(), "psd_sqrt needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return Matrix::zeros(0, 0);
    }
    // For symmetric PSD input the right singular vectors are eigenvectors.
    let svd = Svd::new(m);
    let mut out = Matrix::zeros(n, n);
    for (k, &s) in svd.sigma.iter().enumerate() {
        let r = s.sqrt();
        if r == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = svd.v[(i, k)] * r;
            for j in 0..n {
                out[(i, j)] += vik * svd.v[(j, k)];
            }
        }
    }
    out
}

/// Minimum-ℓ2-norm least-squares solution of `m x = b` via the pseudo-inverse.
pub fn least_squares_min_norm(m: &Matrix, b: &[f64], rank_tol: f64) -> Vec<f64> {
    assert_eq!(m.rows(), b.len(), "least squares dimension mismatch");
    let n = m.cols();
    if m.is_empty() {
        return vec![0.0; n];
    }
    let svd = Svd::new(m);
    let cutoff = rank_tol * svd.largest();
    let mut x = vec![0.0; n];
    for (k, &s) in svd.sigma.iter().enumerate() {
        if s <= cutoff || s == 0.0 {
            continue;
        }
        let coef = dot(&svd.u.col(k), b) / s;
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += coef * svd.v[(i, k)];
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn norm_examples() {
        assert_eq!(norm(&[1.0, -2.0, 3.0], NormTag::LInf), 3.0);
        assert_eq!(norm(&[0.0, 0.0], NormTag::L1), 0.0);
        assert_eq!(norm(&[3.0, 4.0], NormTag::L2), 5.0);
    }

    #[test]
    fn dual_is_an_involution() {
        for t in [NormTag::L1, NormTag::L2, NormTag::LInf] {
            assert_eq!(t.dual().dual(), t);
        }
        assert_eq!(NormTag::L1.dual(), NormTag::LInf);
    }

    #[test]
    fn colspace_examples() {
        assert_eq!(colspace_basis(&Matrix::identity(2), DEFAULT_RANK_TOL).dim(), 2);

        let b = colspace_basis(&Matrix::from_rows(&[[1.0], [1.0]]), DEFAULT_RANK_TOL);
        assert_eq!(b.dim(), 1);
        let v = &b.vectors()[0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(close(v[0].abs(), s, 1e-14) && close(v[1].abs(), s, 1e-14));
        assert_eq!(v[0].signum(), v[1].signum());

        // det [[1,2],[2,4]] = 0 while the matrix is nonzero: rank 1.
        let b = colspace_basis(&Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]), DEFAULT_RANK_TOL);
        assert_eq!(b.dim(), 1);

        assert_eq!(colspace_basis(&Matrix::zeros(0, 3), DEFAULT_RANK_TOL).dim(), 0);
        assert_eq!(colspace_basis(&Matrix::zeros(2, 2), DEFAULT_RANK_TOL).dim(), 0);
    }

    #[test]
    fn project_examples() {
        let x_axis = colspace_basis(&Matrix::from_rows(&[[1.0], [0.0]]), DEFAULT_RANK_TOL);
        assert_eq!(x_axis.project(&[1.0, 1.0]), vec![1.0, 0.0]);
        assert_eq!(x_axis.project(&[3.0, 0.0]), vec![3.0, 0.0]);

        let diag = colspace_basis(&Matrix::from_rows(&[[1.0], [1.0]]), DEFAULT_RANK_TOL);
        let p = diag.project(&[1.0, -1.0]);
        assert!(p.iter().all(|x| x.abs() < 1e-15));
    }

    #[test]
    fn smallest_singular_value_examples() {
        let m = Matrix::from_diagonal(&[0.0, 4.0]);
        assert!(close(psd_sqrt_smallest_positive(&m, DEFAULT_RANK_TOL), 2.0, 1e-14));
        // On the square root itself the plain routine gives the same number.
        let r = Matrix::from_diagonal(&[0.0, 2.0]);
        assert!(close(smallest_positive_singular_value(&r, DEFAULT_RANK_TOL), 2.0, 1e-14));

        let half = Matrix::from_rows(&[[0.5]]);
        assert!(close(
            psd_sqrt_smallest_positive(&half, DEFAULT_RANK_TOL),
            std::f64::consts::FRAC_1_SQRT_2,
            1e-14
        ));
        assert!(close(
            smallest_positive_singular_value(&Matrix::identity(3), DEFAULT_RANK_TOL),
            1.0,
            1e-14
        ));
        assert_eq!(smallest_positive_singular_value(&Matrix::zeros(2, 2), DEFAULT_RANK_TOL), 0.0);
    }

    #[test]
    fn submatrix_rows_examples() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]);
        let j = IndexSet::new(3, vec![0, 2]).unwrap();
        assert_eq!(m.submatrix_rows(&j).unwrap(), Matrix::from_rows(&[[1.0, 2.0], [5.0, 6.0]]));
        let empty = m.submatrix_rows(&IndexSet::empty(3)).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 2));
        assert_eq!(m.submatrix_rows(&IndexSet::full(3)).unwrap(), m);
        assert!(m.submatrix_rows(&IndexSet::full(2)).is_err());
        assert!(IndexSet::new(3, vec![3]).is_err());
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let m = Matrix::from_rows(&[[2.0, 1.0], [1.0, 2.0]]);
        let r = psd_sqrt(&m);
        let back = r.matmul(&r);
        for i in 0..2 {
            for j in 0..2 {
                assert!(close(back[(i, j)], m[(i, j)], 1e-13));
            }
        }
    }

    #[test]
    fn nullspace_of_wide_matrix() {
        let m = Matrix::from_rows(&[[1.0, 1.0, 0.0]]);
        let n = nullspace_basis(&m, DEFAULT_RANK_TOL);
        assert_eq!(n.dim(), 2);
        for v in n.vectors() {
            assert!(dot(m.row(0), v).abs() < 1e-14);
        }
    }
}
