//! Spectral decomposition of reversible chains.
//!
//! A reversible `P` is similar to the symmetric `Q = Π^{1/2} P Π^{-1/2}`. With
//! `Q ν_i = λ_i ν_i` and orthonormal `ν_i`, the left eigenvectors of `P` are
//! `u_i = Π^{1/2} ν_i` and the right eigenvectors `v_i = Π^{-1/2} ν_i`, so that
//! `⟨u_i, u_j⟩_π = δ_ij`, `u_1 = π` and `v_1 = 1`.

use std::cmp::Ordering;

use crate::chain::{self, Distribution, TransitionMatrix, REVERSIBILITY_TOL, STATIONARY_RESIDUAL_TOL};
use crate::error::{Error, Result};
use crate::geometry::pi_norm;
use crate::linalg::{self, SquareMatrix};

/// Eigenvalues within this distance of ±1 are reported as exactly ±1.
pub const UNIT_SNAP_TOL: f64 = 1e-12;
/// Resolution used when ordering by |λ|; closer values count as ties.
const ORDER_RESOLUTION: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    left: Vec<Vec<f64>>,
    right: Vec<Vec<f64>>,
    abs_order: Vec<usize>,
    stationary: Distribution,
}

impl SpectralDecomposition {
    /// Assembles a decomposition from eigenvalues (any order) and their left
    /// eigenvectors. Vectors are rescaled to unit π-norm and sign-normalized;
    /// eigenpairs are re-sorted by descending eigenvalue.
    pub fn from_parts(eigenvalues: Vec<f64>, left: Vec<Vec<f64>>, stationary: Distribution) -> Result<Self> {
        let d = stationary.dim();
        Error::check_dim(d, eigenvalues.len())?;
        Error::check_dim(d, left.len())?;
        for u in &left {
            Error::check_dim(d, u.len())?;
        }
        if let Some(x) = stationary.iter().position(|&x| x <= 0.0) {
            return Err(Error::ZeroStationaryMass(x));
        }

        let mut pairs: Vec<(f64, Vec<f64>)> = eigenvalues.into_iter().zip(left).collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));

        let mut values = Vec::with_capacity(d);
        let mut lefts = Vec::with_capacity(d);
        let mut rights = Vec::with_capacity(d);
        for (k, (lambda, mut u)) in pairs.into_iter().enumerate() {
            if k == 0 {
                u = stationary.as_slice().to_vec();
            } else {
                let norm = pi_norm(&u, &stationary)?;
                if norm == 0.0 {
                    return Err(Error::param("zero eigenvector"));
                }
                u.iter_mut().for_each(|x| *x /= norm);
                fix_sign(&mut u);
            }
            let v: Vec<f64> = u.iter().zip(stationary.iter()).map(|(a, p)| a / p).collect();
            values.push(snap_eigenvalue(lambda, k == 0));
            lefts.push(u);
            rights.push(v);
        }
        let abs_order = abs_order(&values);
        Ok(Self { eigenvalues: values, left: lefts, right: rights, abs_order, stationary })
    }

    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in descending order; `eigenvalues()[0] == 1`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn eigenvalue(&self, i: usize) -> f64 {
        self.eigenvalues[i]
    }

    /// Left eigenvector `u_i`, unit π-norm.
    pub fn left(&self, i: usize) -> &[f64] {
        &self.left[i]
    }

    pub fn lefts(&self) -> &[Vec<f64>] {
        &self.left
    }

    /// Right eigenvector `v_i = Π^{-1} u_i`.
    pub fn right(&self, i: usize) -> &[f64] {
        &self.right[i]
    }

    /// Indices into `eigenvalues()` sorted by |λ| descending, then by signed
    /// value descending, then by index. Position 0 is always the eigenvalue 1.
    pub fn abs_order(&self) -> &[usize] {
        &self.abs_order
    }

    /// Index of `λ_[rank]` with the 1-based rank used in the literature.
    pub fn ranked(&self, rank: usize) -> usize {
        self.abs_order[rank - 1]
    }

    /// Index of the eigenvalue of second-largest modulus.
    pub fn second(&self) -> usize {
        self.abs_order[1]
    }

    /// Index of the eigenvalue of smallest modulus.
    pub fn last(&self) -> usize {
        self.abs_order[self.dim() - 1]
    }

    pub fn stationary(&self) -> &Distribution {
        &self.stationary
    }

    /// Number of eigenvalues within `tol` of eigenvalue `i`.
    pub fn multiplicity(&self, i: usize, tol: f64) -> usize {
        let lambda = self.eigenvalues[i];
        self.eigenvalues.iter().filter(|x| (*x - lambda).abs() <= tol).count()
    }

    /// Groups of indices whose eigenvalues agree within `tol`.
    pub fn eigenspaces(&self, tol: f64) -> Vec<Vec<usize>> {
        let mut groups: Vec<Vec<usize>> = Vec::new();
        for (i, &lambda) in self.eigenvalues.iter().enumerate() {
            match groups.last_mut() {
                Some(g) if (self.eigenvalues[g[0]] - lambda).abs() <= tol => g.push(i),
                _ => groups.push(vec![i]),
            }
        }
        groups
    }

    /// `Σ_i λ_i v_i u_iᵀ`.
    pub fn reconstruct(&self) -> SquareMatrix {
        let d = self.dim();
        let mut m = SquareMatrix::zeros(d);
        for i in 0..d {
            let (lambda, u, v) = (self.eigenvalues[i], &self.left[i], &self.right[i]);
            for x in 0..d {
                let s = lambda * v[x];
                for y in 0..d {
                    m[(x, y)] += s * u[y];
                }
            }
        }
        m
    }
}

fn snap_eigenvalue(lambda: f64, principal: bool) -> f64 {
    if principal || (lambda - 1.0).abs() <= UNIT_SNAP_TOL {
        1.0
    } else if (lambda + 1.0).abs() <= UNIT_SNAP_TOL {
        -1.0
    } else {
        lambda
    }
}

/// Makes the first non-negligible coordinate positive.
fn fix_sign(u: &mut [f64]) {
    let scale = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = u.iter().find(|x| x.abs() > 1e-10 * scale) {
        if *first < 0.0 {
            u.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

fn abs_order(values: &[f64]) -> Vec<usize> {
    let key = |x: f64| (x / ORDER_RESOLUTION).round() as i64;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (values[i], values[j]);
        key(b.abs())
            .cmp(&key(a.abs()))
            .then_with(|| key(b).cmp(&key(a)))
            .then_with(|| i.cmp(&j))
    });
    // The principal eigenvalue leads even when −1 is present.
    if let Some(pos) = order.iter().position(|&i| i == 0) {
        if pos != 0 {
            let first = order.remove(pos);
            order.insert(0, first);
        }
    }
    order
}

/// Full spectral decomposition of an irreducible reversible chain.
pub fn spectral_decomposition(p: &TransitionMatrix) -> Result<SpectralDecomposition> {
    p.require_irreducible()?;
    let q = chain::geometric_symmetrization(p);
    let eig = linalg::symmetric_eigen(&q)?;
    let mut nu1 = eig.vectors[0].clone();
    if nu1.iter().sum::<f64>() < 0.0 {
        nu1.iter_mut().for_each(|x| *x = -*x);
    }
    let pi = chain::stationary_from_principal(&nu1);
    let deviation = chain::reversibility_deviation(p, &pi)?;
    if deviation > REVERSIBILITY_TOL || pi.iter().any(|&x| x <= 0.0) {
        return Err(Error::NotReversible { deviation });
    }
    let residual = chain::stationary_residual(p, &pi);
    if residual > STATIONARY_RESIDUAL_TOL {
        return Err(Error::NotReversible { deviation: residual });
    }
    let sqrt_pi: Vec<f64> = pi.iter().map(|x| x.sqrt()).collect();
    let left: Vec<Vec<f64>> = eig
        .vectors
        .iter()
        .map(|nu| nu.iter().zip(&sqrt_pi).map(|(a, s)| a * s).collect())
        .collect();
    SpectralDecomposition::from_parts(eig.values, left, pi)
}

/// Sorts a multiset of eigenvalues descending, for comparisons against closed forms.
pub fn sorted_desc(mut values: Vec<f64>) -> Vec<f64> {
    values.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    values
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::pi_inner;
    use crate::zoo;

    #[test]
    fn cycle4_spectrum_and_order() {
        let s = spectral_decomposition(&zoo::cycle(4).unwrap()).unwrap();
        let ev = s.eigenvalues();
        assert!((ev[0] - 1.0).abs() < 1e-12);
        assert!(ev[1].abs() < 1e-12 && ev[2].abs() < 1e-12);
        assert_eq!(ev[3], -1.0);
        // |λ| order: 1, −1, then the two zeros by index.
        assert_eq!(s.abs_order(), &[0, 3, 1, 2]);
    }

    #[test]
    fn bipartite_clique_spectrum() {
        let s = spectral_decomposition(&zoo::bipartite_clique(6).unwrap()).unwrap();
        let ev = s.eigenvalues();
        assert_eq!(ev[0], 1.0);
        assert_eq!(ev[5], -1.0);
        assert!(ev[1..5].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn hypercube2_spectrum() {
        let s = spectral_decomposition(&zoo::hypercube(2).unwrap()).unwrap();
        let want = [1.0, 0.0, 0.0, -1.0];
        for (a, b) in s.eigenvalues().iter().zip(want) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn pi_orthonormal_and_sign_convention() {
        let p = zoo::random_chain(12, 5, zoo::WeightLaw::Uniform01).unwrap();
        let s = spectral_decomposition(&p).unwrap();
        let pi = s.stationary();
        for i in 0..12 {
            for j in 0..12 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((pi_inner(s.left(i), s.left(j), pi).unwrap() - want).abs() < 1e-8);
            }
            let first = s.left(i).iter().find(|x| x.abs() > 1e-10).unwrap();
            assert!(*first > 0.0);
            if i > 0 {
                assert!(s.left(i).iter().sum::<f64>().abs() < 1e-8);
            }
            let up = p.step(s.left(i));
            for (a, b) in up.iter().zip(s.left(i)) {
                assert!((a - s.eigenvalue(i) * b).abs() < 1e-8);
            }
            for ((u, v), pix) in s.left(i).iter().zip(s.right(i)).zip(pi.iter()) {
                assert!((u - pix * v).abs() < 1e-14);
            }
        }
        assert!(s.right(0).iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert_eq!(s.left(0), pi.as_slice());
    }

    #[test]
    fn rejects_non_reversible() {
        // Biased walk around a 3-cycle: irreducible, not reversible.
        let p = TransitionMatrix::from_rows(&[
            vec![0.0, 0.7, 0.3],
            vec![0.3, 0.0, 0.7],
            vec![0.7, 0.3, 0.0],
        ])
        .unwrap();
        assert!(matches!(spectral_decomposition(&p), Err(Error::NotReversible { .. })));
    }

    #[test]
    fn abs_order_tie_breaking() {
        let order = abs_order(&[1.0, 0.5, 0.0, -0.5, -1.0]);
        assert_eq!(order, vec![0, 4, 1, 3, 2]);
    }
}
