//! Finite Markov chains: transition matrices, distributions and the basic
//! operations on them (stationarity, detailed balance, laziness, evolution).

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, SquareMatrix};

/// Tolerance on row sums of a transition matrix and on the total mass of a distribution.
pub const MASS_TOL: f64 = 1e-12;
/// Default detailed-balance tolerance.
pub const REVERSIBILITY_TOL: f64 = 1e-8;
/// Required accuracy of `π P = π`.
pub const STATIONARY_RESIDUAL_TOL: f64 = 1e-10;

/// A probability vector on `d` states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Distribution {
    mass: Vec<f64>,
}

impl Distribution {
    pub fn new(mass: Vec<f64>) -> Result<Self> {
        if mass.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        if let Some((i, x)) = mass.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidDistribution(format!("entry {i} is {x}")));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidDistribution(format!("mass sums to {total}")));
        }
        Ok(Self { mass })
    }

    /// Skips validation. Used for vectors produced by mass-preserving
    /// operations whose rounding drift may exceed `MASS_TOL` on long runs.
    pub(crate) fn from_vec_unchecked(mass: Vec<f64>) -> Self {
        Self { mass }
    }

    pub fn uniform(d: usize) -> Self {
        Self { mass: vec![1.0 / d as f64; d] }
    }

    pub fn point_mass(d: usize, state: usize) -> Result<Self> {
        if state >= d {
            return Err(Error::param(format!("state {state} out of range for d = {d}")));
        }
        let mut mass = vec![0.0; d];
        mass[state] = 1.0;
        Ok(Self { mass })
    }

    pub fn dim(&self) -> usize {
        self.mass.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.mass
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.mass
    }
}

impl std::ops::Deref for Distribution {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.mass
    }
}

impl TryFrom<Vec<f64>> for Distribution {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Distribution::new(v)
    }
}

impl From<Distribution> for Vec<f64> {
    fn from(d: Distribution) -> Vec<f64> {
        d.mass
    }
}

/// Row-stochastic matrix of a finite chain. Entry `(i, j)` is the probability
/// of moving from `i` to `j`.
///
/// Irreducibility is recorded rather than enforced: the identity chain (the
/// fully lazy limit) is a legitimate transition matrix, but operations that
/// need a unique stationary distribution reject it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct TransitionMatrix {
    matrix: SquareMatrix,
    irreducible: bool,
}

impl TransitionMatrix {
    pub fn new(matrix: SquareMatrix) -> Result<Self> {
        let d = matrix.dim();
        if d < 2 {
            return Err(Error::InvalidMatrix(format!("need at least 2 states, got {d}")));
        }
        for (i, row) in matrix.rows().enumerate() {
            if let Some((j, x)) = row.iter().enumerate().find(|(_, x)| !x.is_finite() || **x < 0.0) {
                return Err(Error::InvalidMatrix(format!("entry ({i}, {j}) is {x}")));
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > MASS_TOL {
                return Err(Error::InvalidMatrix(format!("row {i} sums to {total}")));
            }
        }
        let irreducible = strongly_connected(&matrix);
        Ok(Self { matrix, irreducible })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(SquareMatrix::from_rows(rows)?)
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &SquareMatrix {
        &self.matrix
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    pub fn is_irreducible(&self) -> bool {
        self.irreducible
    }

    pub fn require_irreducible(&self) -> Result<()> {
        if self.irreducible {
            Ok(())
        } else {
            Err(Error::NotIrreducible)
        }
    }

    /// One step of the chain applied to a row vector: `x P`.
    pub fn step(&self, x: &[f64]) -> Vec<f64> {
        self.matrix.left_mul(x)
    }
}

impl TryFrom<Vec<Vec<f64>>> for TransitionMatrix {
    type Error = Error;
    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        TransitionMatrix::from_rows(&rows)
    }
}

impl From<TransitionMatrix> for Vec<Vec<f64>> {
    fn from(p: TransitionMatrix) -> Self {
        p.matrix.to_rows()
    }
}

/// Breadth-first reachability from state 0 on the support graph and its reverse.
fn strongly_connected(m: &SquareMatrix) -> bool {
    let n = m.dim();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                let w = if forward { m[(i, j)] } else { m[(j, i)] };
                if w > 0.0 && !seen[j] {
                    seen[j] = true;
                    count += 1;
                    queue.push_back(j);
                }
            }
        }
        count == n
    };
    reach(true) && reach(false)
}

/// Symmetric matrix with entries `sqrt(P_ij P_ji)`. For a reversible chain
/// this equals `Π^{1/2} P Π^{-1/2}` without needing π first.
pub(crate) fn geometric_symmetrization(p: &TransitionMatrix) -> SquareMatrix {
    let m = p.matrix();
    SquareMatrix::from_fn(p.dim(), |i, j| (m[(i, j)] * m[(j, i)]).sqrt())
}

/// Stationary distribution read off the principal eigenvector `ν₁` of the
/// symmetrized matrix as `π = ν₁²`.
pub(crate) fn stationary_from_principal(nu1: &[f64]) -> Distribution {
    let sq: Vec<f64> = nu1.iter().map(|x| x * x).collect();
    let total: f64 = sq.iter().sum();
    Distribution::from_vec_unchecked(sq.into_iter().map(|x| x / total).collect())
}

pub fn stationary_residual(p: &TransitionMatrix, pi: &[f64]) -> f64 {
    p.step(pi)
        .iter()
        .zip(pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

/// Stationary distribution of an irreducible chain.
///
/// Reversible chains go through the symmetric eigensolver. When the resulting
/// vector fails the `π P = π` residual (non-reversible input) the balance
/// equations are solved directly instead.
pub fn stationary_distribution(p: &TransitionMatrix) -> Result<Distribution> {
    p.require_irreducible()?;
    let q = geometric_symmetrization(p);
    if let Ok(eig) = linalg::symmetric_eigen(&q) {
        let pi = stationary_from_principal(&eig.vectors[0]);
        if pi.iter().all(|&x| x > 0.0) && stationary_residual(p, &pi) <= STATIONARY_RESIDUAL_TOL {
            return Ok(pi);
        }
    }
    let pi = solve_balance_equations(p)?;
    let residual = stationary_residual(p, &pi);
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::Undefined(format!(
            "stationary solve left residual {residual:.3e}"
        )));
    }
    Ok(pi)
}

/// Solves `π (P − I) = 0`, `Σ π = 1` by Gaussian elimination with partial pivoting.
fn solve_balance_equations(p: &TransitionMatrix) -> Result<Distribution> {
    let n = p.dim();
    // Row i of the system is column i of (P − I)ᵀ; the last equation is replaced by normalization.
    let mut a = SquareMatrix::from_fn(n, |i, j| {
        if i == n - 1 {
            1.0
        } else {
            p.get(j, i) - if i == j { 1.0 } else { 0.0 }
        }
    });
    let mut b = vec![0.0; n];
    b[n - 1] = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[(r, col)].abs().total_cmp(&a[(s, col)].abs()))
            .unwrap_or(col);
        if a[(pivot, col)].abs() < 1e-300 {
            return Err(Error::NotIrreducible);
        }
        if pivot != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(pivot, j)];
                a[(pivot, j)] = tmp;
            }
            b.swap(col, pivot);
        }
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|j| a[(i, j)] * x[j]).sum();
        x[i] = (b[i] - s) / a[(i, i)];
    }
    let total: f64 = x.iter().map(|v| v.max(0.0)).sum();
    Ok(Distribution::from_vec_unchecked(
        x.into_iter().map(|v| v.max(0.0) / total).collect(),
    ))
}

/// `max_{i,j} |π_i P_ij − π_j P_ji|`.
pub fn reversibility_deviation(p: &TransitionMatrix, pi: &[f64]) -> Result<f64> {
    Error::check_dim(p.dim(), pi.len())?;
    let d = p.dim();
    let mut worst = 0.0f64;
    for i in 0..d {
        for j in i + 1..d {
            worst = worst.max((pi[i] * p.get(i, j) - pi[j] * p.get(j, i)).abs());
        }
    }
    Ok(worst)
}

/// Detailed balance `π_i P_ij = π_j P_ji` for all pairs, up to `tol`.
pub fn check_reversible(p: &TransitionMatrix, pi: &Distribution, tol: f64) -> Result<bool> {
    Ok(reversibility_deviation(p, pi)? <= tol)
}

/// `Q = Π^{1/2} P Π^{-1/2}`, symmetric when `P` is reversible with respect to `π`.
pub fn symmetrize(p: &TransitionMatrix, pi: &Distribution) -> Result<SquareMatrix> {
    Error::check_dim(p.dim(), pi.dim())?;
    if let Some(x) = pi.iter().position(|&x| x <= 0.0) {
        return Err(Error::ZeroStationaryMass(x));
    }
    let sqrt_pi: Vec<f64> = pi.iter().map(|x| x.sqrt()).collect();
    let q = SquareMatrix::from_fn(p.dim(), |i, j| sqrt_pi[i] / sqrt_pi[j] * p.get(i, j));
    let deviation = q.max_asymmetry();
    if deviation > REVERSIBILITY_TOL {
        return Err(Error::NotReversible { deviation });
    }
    Ok(q)
}

/// `(1 − q) P + q I`.
pub fn lazy(p: &TransitionMatrix, q: f64) -> Result<TransitionMatrix> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("laziness {q} outside [0, 1]")));
    }
    let m = SquareMatrix::from_fn(p.dim(), |i, j| {
        (1.0 - q) * p.get(i, j) + if i == j { q } else { 0.0 }
    });
    TransitionMatrix::new(m)
}

/// `μ Pᵗ` by `t` vector-matrix products.
pub fn evolve(mu: &Distribution, p: &TransitionMatrix, t: u64) -> Result<Distribution> {
    Error::check_dim(p.dim(), mu.dim())?;
    let mut x = mu.as_slice().to_vec();
    for _ in 0..t {
        x = p.step(&x);
    }
    Ok(Distribution::from_vec_unchecked(x))
}
