use super::Matrix;

const MAX_SWEEPS: usize = 80;

/// Thin singular value decomposition `M = U diag(sigma) Vᵀ` by one-sided
/// (Hestenes) Jacobi rotations on the columns of `M`.
///
/// `u` is `rows x cols`, `v` is `cols x cols`, and `sigma` has `cols` entries
/// sorted in decreasing order. Columns of `u` belonging to zero singular
/// values are left at zero.
#[derive(Clone, Debug)]
pub struct Svd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

impl Svd {
    pub fn new(m: &Matrix) -> Self {
        let (rows, cols) = (m.rows(), m.cols());
        // Column-major working copy so rotations touch contiguous memory.
        let mut w: Vec<Vec<f64>> = (0..cols).map(|j| m.col(j)).collect();
        let mut v: Vec<Vec<f64>> = (0..cols)
            .map(|j| {
                let mut e = vec![0.0; cols];
                e[j] = 1.0;
                e
            })
            .collect();

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..cols {
                for q in p + 1..cols {
                    let (alpha, beta, gamma) = column_products(&w[p], &w[q]);
                    if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    rotate(&mut w, p, q, c, s);
                    rotate(&mut v, p, q, c, s);
                }
            }
            if !rotated {
                break;
            }
        }

        let mut order: Vec<usize> = (0..cols).collect();
        let norms: Vec<f64> = w
            .iter()
            .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
            .collect();
        order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]).then(a.cmp(&b)));

        let mut u = Matrix::zeros(rows, cols);
        let mut vm = Matrix::zeros(cols, cols);
        let mut sigma = Vec::with_capacity(cols);
        for (k, &j) in order.iter().enumerate() {
            let s = norms[j];
            sigma.push(s);
            if s > 0.0 {
                for i in 0..rows {
                    u[(i, k)] = w[j][i] / s;
                }
            }
            for i in 0..cols {
                vm[(i, k)] = v[j][i];
            }
        }
        Svd { u, sigma, v: vm }
    }

    pub fn largest(&self) -> f64 {
        self.sigma.first().copied().unwrap_or(0.0)
    }
}

fn column_products(a: &[f64], b: &[f64]) -> (f64, f64, f64) {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = 0.0;
    for (x, y) in a.iter().zip(b) {
        alpha += x * x;
        beta += y * y;
        gamma += x * y;
    }
    (alpha, beta, gamma)
}

fn rotate(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(q);
    let (cp, cq) = (&mut left[p], &mut right[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = c * a - s * b;
        *y = s * a + c * b;
    }
}
