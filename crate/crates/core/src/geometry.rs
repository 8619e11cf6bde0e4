//! π-weighted inner-product geometry and the closed-form decay of the
//! π-distance between two evolving distributions.

use crate::chain::Distribution;
use crate::error::{Error, Result};
use crate::spectral::SpectralDecomposition;

/// Eigenvalues below this modulus are dead modes for every `t ≥ 1`.
pub const DEAD_MODE_TOL: f64 = 1e-13;

/// `⟨u, w⟩_π = Σ_x u_x w_x / π_x`.
pub fn pi_inner(u: &[f64], w: &[f64], pi: &Distribution) -> Result<f64> {
    Error::check_dim(pi.dim(), u.len())?;
    Error::check_dim(pi.dim(), w.len())?;
    let mut acc = 0.0;
    for (x, ((a, b), p)) in u.iter().zip(w).zip(pi.iter()).enumerate() {
        if *p <= 0.0 {
            return Err(Error::ZeroStationaryMass(x));
        }
        acc += a * b / p;
    }
    Ok(acc)
}

pub fn pi_norm(u: &[f64], pi: &Distribution) -> Result<f64> {
    Ok(pi_inner(u, u, pi)?.max(0.0).sqrt())
}

/// Coordinates `α_i = ⟨u_i, μ⟩_π` of a distribution in the left eigenbasis.
#[derive(Debug, Clone)]
pub struct SpectralCoefficients<'a> {
    pub alphas: Vec<f64>,
    decomposition: &'a SpectralDecomposition,
}

impl SpectralCoefficients<'_> {
    /// `Σ_i α_i u_i`, which reproduces the expanded vector.
    pub fn reconstruct(&self) -> Vec<f64> {
        let d = self.alphas.len();
        let mut out = vec![0.0; d];
        for (alpha, u) in self.alphas.iter().zip(self.decomposition.lefts()) {
            for (o, x) in out.iter_mut().zip(u) {
                *o += alpha * x;
            }
        }
        out
    }
}

pub fn spectral_coefficients<'a>(mu: &[f64], s: &'a SpectralDecomposition) -> Result<SpectralCoefficients<'a>> {
    let alphas = s
        .lefts()
        .iter()
        .map(|u| pi_inner(u, mu, s.stationary()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SpectralCoefficients { alphas, decomposition: s })
}

/// `λ^{2t}` with dead modes cut to zero for `t ≥ 1`.
pub fn mode_power(lambda: f64, t: u64) -> f64 {
    if t == 0 {
        return 1.0;
    }
    let a = lambda.abs();
    if a < DEAD_MODE_TOL {
        return 0.0;
    }
    match i32::try_from(t.saturating_mul(2)) {
        Ok(e) => a.powi(e),
        Err(_) => (2.0 * t as f64 * a.ln()).exp(),
    }
}

/// Relative size below which a spectral coefficient of `μ − μ′` is treated as
/// roundoff from the eigensolver rather than signal.
pub const COEFFICIENT_NOISE: f64 = 1e-12;

/// Squared coefficient differences `(α_i − α′_i)²` for `i ≥ 2`, paired with `λ_i`.
/// Coefficients at roundoff level relative to `‖μ − μ′‖_π` are set to zero.
pub fn mode_weights(mu: &[f64], mu_prime: &[f64], s: &SpectralDecomposition) -> Result<Vec<(f64, f64)>> {
    Error::check_dim(s.dim(), mu.len())?;
    Error::check_dim(s.dim(), mu_prime.len())?;
    let diff: Vec<f64> = mu.iter().zip(mu_prime).map(|(a, b)| a - b).collect();
    let floor = COEFFICIENT_NOISE * COEFFICIENT_NOISE * pi_inner(&diff, &diff, s.stationary())?;
    (1..s.dim())
        .map(|i| {
            let c = pi_inner(s.left(i), &diff, s.stationary())?;
            Ok((s.eigenvalue(i), if c * c <= floor { 0.0 } else { c * c }))
        })
        .collect()
}

/// `Δ(t) = ‖μPᵗ − μ′Pᵗ‖²_π = Σ_{i≥2} λ_i^{2t} (α_i − α′_i)²`.
pub fn decay_distance_sq(mu: &[f64], mu_prime: &[f64], s: &SpectralDecomposition, t: u64) -> Result<f64> {
    Ok(decay_from_weights(&mode_weights(mu, mu_prime, s)?, t))
}

pub fn decay_from_weights(weights: &[(f64, f64)], t: u64) -> f64 {
    weights.iter().map(|&(lambda, w)| mode_power(lambda, t) * w).sum()
}
