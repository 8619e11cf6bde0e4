//! Dense square matrices and a cyclic Jacobi eigensolver for symmetric input.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    /// Builds a matrix from nested rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Ok(Self { n, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n.max(1))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.rows().map(<[f64]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Row vector times matrix: `x M`.
    pub fn left_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for (xi, row) in x.iter().zip(self.rows()) {
            if *xi == 0.0 {
                continue;
            }
            for (o, m) in out.iter_mut().zip(row) {
                *o += xi * m;
            }
        }
        out
    }

    /// Matrix times column vector: `M x`.
    pub fn right_mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows().map(|row| dot(row, x)).collect()
    }

    pub fn max_abs_diff(&self, other: &SquareMatrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Compensated (Neumaier) accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl std::iter::FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = NeumaierSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Eigenpairs of a real symmetric matrix, eigenvalues sorted in descending order.
/// `vectors[i]` is the unit-norm eigenvector for `values[i]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

const MAX_SWEEPS: usize = 100;
pub const EIGEN_RESIDUAL_TOL: f64 = 1e-10;

/// Cyclic Jacobi rotations with the threshold strategy of the first sweeps and
/// underflow-based zeroing of negligible off-diagonal entries afterwards.
///
/// Only the upper triangle of `a` is read. The result is checked by its
/// residual `max_i ‖A v_i − λ_i v_i‖_∞`; anything above `EIGEN_RESIDUAL_TOL`
/// (scaled by the matrix magnitude when it exceeds one) is a failure.
pub fn symmetric_eigen(a: &SquareMatrix) -> Result<SymmetricEigen> {
    let n = a.dim();
    let mut w = a.clone();
    // vt holds eigenvectors as rows so rotations touch contiguous memory.
    let mut vt = SquareMatrix::identity(n);
    let mut d: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    let mut b = d.clone();
    let mut z = vec![0.0; n];

    let mut converged = n < 2;
    for sweep in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += w[(p, q)].abs();
            }
        }
        if off == 0.0 {
            converged = true;
            break;
        }
        let thresh = if sweep < 3 { 0.2 * off / (n * n) as f64 } else { 0.0 };

        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = w[(p, q)];
                let g = 100.0 * apq.abs();
                if sweep > 3 && d[p].abs() + g == d[p].abs() && d[q].abs() + g == d[q].abs() {
                    w[(p, q)] = 0.0;
                    continue;
                }
                if apq.abs() <= thresh {
                    continue;
                }
                let h = d[q] - d[p];
                let t = if h.abs() + g == h.abs() {
                    apq / h
                } else {
                    let theta = 0.5 * h / apq;
                    let t = 1.0 / (theta.abs() + (1.0 + theta * theta).sqrt());
                    if theta < 0.0 {
                        -t
                    } else {
                        t
                    }
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                let h = t * apq;
                z[p] -= h;
                z[q] += h;
                d[p] -= h;
                d[q] += h;
                w[(p, q)] = 0.0;

                let rot = |m: &mut SquareMatrix, i: usize, j: usize, k: usize, l: usize| {
                    let g = m[(i, j)];
                    let h = m[(k, l)];
                    m[(i, j)] = g - s * (h + g * tau);
                    m[(k, l)] = h + s * (g - h * tau);
                };
                for j in 0..p {
                    rot(&mut w, j, p, j, q);
                }
                for j in p + 1..q {
                    rot(&mut w, p, j, j, q);
                }
                for j in q + 1..n {
                    rot(&mut w, p, j, q, j);
                }
                for j in 0..n {
                    rot(&mut vt, p, j, q, j);
                }
            }
        }
        for i in 0..n {
            b[i] += z[i];
            d[i] = b[i];
            z[i] = 0.0;
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[j].total_cmp(&d[i]).then(i.cmp(&j)));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let vectors: Vec<Vec<f64>> = order.iter().map(|&i| vt.row(i).to_vec()).collect();

    let residual = eigen_residual(a, &values, &vectors);
    let scale = a.as_slice().iter().fold(1.0f64, |m, x| m.max(x.abs()));
    if !converged || !(residual <= EIGEN_RESIDUAL_TOL * scale) {
        return Err(Error::EigensolverFailure { residual });
    }
    Ok(SymmetricEigen { values, vectors })
}

/// `max_i ‖A v_i − λ_i v_i‖_∞` using the full symmetric matrix built from the upper triangle.
fn eigen_residual(a: &SquareMatrix, values: &[f64], vectors: &[Vec<f64>]) -> f64 {
    let n = a.dim();
    let sym = SquareMatrix::from_fn(n, |i, j| if i <= j { a[(i, j)] } else { a[(j, i)] });
    values
        .iter()
        .zip(vectors)
        .map(|(lambda, v)| {
            sym.right_mul(v)
                .iter()
                .zip(v)
                .map(|(av, vi)| (av - lambda * vi).abs())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}
