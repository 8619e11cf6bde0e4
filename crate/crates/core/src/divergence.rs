//! Divergences between distributions on a finite set, plus exact oracles over
//! n-fold product distributions by full enumeration.
//!
//! All logarithms are natural.

use crate::error::{Error, Result};
use crate::linalg::NeumaierSum;

/// Maximum number of outcomes `dⁿ` the product oracles will enumerate.
pub const ENUMERATION_BUDGET: u64 = 10_000_000;

fn same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    Error::check_dim(a.len(), b.len())
}

/// `½ Σ |μ_x − μ′_x|`.
pub fn total_variation(mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    same_dim(mu, mu_prime)?;
    let s: NeumaierSum = mu.iter().zip(mu_prime).map(|(a, b)| (a - b).abs()).collect();
    Ok(0.5 * s.value())
}

/// `Σ μ_x ln(μ_x / μ′_x)`, `+∞` when `μ` puts mass where `μ′` has none.
pub fn kl_divergence(mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    same_dim(mu, mu_prime)?;
    let mut s = NeumaierSum::default();
    for (&a, &b) in mu.iter().zip(mu_prime) {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Ok(f64::INFINITY);
        }
        s.add(a * (a / b).ln());
    }
    Ok(s.value().max(0.0))
}

/// `Σ μ′_x (μ_x/μ′_x − 1)²`.
pub fn chi_square(mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    same_dim(mu, mu_prime)?;
    let mut s = NeumaierSum::default();
    for (&a, &b) in mu.iter().zip(mu_prime) {
        if b == 0.0 {
            if a > 0.0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        s.add((a - b) * (a - b) / b);
    }
    Ok(s.value())
}

/// Squared Hellinger distance `Σ (√μ_x − √μ′_x)²`, in `[0, 2]`.
pub fn hellinger_sq(mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    same_dim(mu, mu_prime)?;
    let s: NeumaierSum = mu
        .iter()
        .zip(mu_prime)
        .map(|(a, b)| {
            let r = a.sqrt() - b.sqrt();
            r * r
        })
        .collect();
    Ok(s.value())
}

fn check_budget(d: usize, n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::param("product order n must be at least 1"));
    }
    let outcomes = (d as f64).powi(n as i32);
    if outcomes > ENUMERATION_BUDGET as f64 {
        return Err(Error::BudgetExceeded { outcomes, budget: ENUMERATION_BUDGET });
    }
    Ok(())
}

/// Visits every outcome of `{0..d}ⁿ` in lexicographic order with its
/// probability under both product laws and its log-likelihood ratio.
/// Subtrees impossible under both laws are skipped.
fn for_each_outcome(mu: &[f64], mu_prime: &[f64], n: u32, mut f: impl FnMut(f64, f64, f64)) -> Result<()> {
    same_dim(mu, mu_prime)?;
    check_budget(mu.len(), n)?;
    let llr: Vec<f64> = mu.iter().zip(mu_prime).map(|(a, b)| (a / b).ln()).collect();

    fn walk(level: u32, p: f64, q: f64, l: f64, mu: &[f64], mu_prime: &[f64], llr: &[f64], f: &mut impl FnMut(f64, f64, f64)) {
        if level == 0 {
            f(p, q, l);
            return;
        }
        for x in 0..mu.len() {
            let (px, qx) = (p * mu[x], q * mu_prime[x]);
            if px == 0.0 && qx == 0.0 {
                continue;
            }
            walk(level - 1, px, qx, l + llr[x], mu, mu_prime, llr, f);
        }
    }
    walk(n, 1.0, 1.0, 0.0, mu, mu_prime, &llr, &mut f);
    Ok(())
}

/// Exact `d_TV(μ^{⊗n}, μ′^{⊗n})` by enumeration.
pub fn exact_product_tv(mu: &[f64], mu_prime: &[f64], n: u32) -> Result<f64> {
    let mut s = NeumaierSum::default();
    for_each_outcome(mu, mu_prime, n, |p, q, _| s.add((p - q).abs()))?;
    Ok(0.5 * s.value())
}

/// Exact `H²(μ^{⊗n}, μ′^{⊗n})` by enumeration.
pub fn exact_product_hellinger_sq(mu: &[f64], mu_prime: &[f64], n: u32) -> Result<f64> {
    let mut s = NeumaierSum::default();
    for_each_outcome(mu, mu_prime, n, |p, q, _| {
        let r = p.sqrt() - q.sqrt();
        s.add(r * r)
    })?;
    Ok(s.value())
}

/// Exact error probabilities of the likelihood-ratio test on `n` draws.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactLrErrors {
    /// Probability of answering `μ′` when the draws come from `μ`.
    pub err_mu: f64,
    /// Probability of answering `μ` when the draws come from `μ′`.
    pub err_mu_prime: f64,
}

impl ExactLrErrors {
    pub fn max(&self) -> f64 {
        self.err_mu.max(self.err_mu_prime)
    }

    pub fn sum(&self) -> f64 {
        self.err_mu + self.err_mu_prime
    }
}

/// Both error probabilities of the test that answers `μ` iff `L_n > 0`.
/// Outcomes with an undefined statistic (`+∞ − ∞`) have zero probability
/// under both laws and follow the tie rule.
pub fn exact_lr_errors(mu: &[f64], mu_prime: &[f64], n: u32) -> Result<ExactLrErrors> {
    let mut err_mu = NeumaierSum::default();
    let mut err_mu_prime = NeumaierSum::default();
    for_each_outcome(mu, mu_prime, n, |p, q, l| {
        if l > 0.0 {
            err_mu_prime.add(q);
        } else {
            err_mu.add(p);
        }
    })?;
    Ok(ExactLrErrors { err_mu: err_mu.value(), err_mu_prime: err_mu_prime.value() })
}

/// Maximum error probability of the likelihood-ratio test on `n` draws.
pub fn exact_lr_error(mu: &[f64], mu_prime: &[f64], n: u32) -> Result<f64> {
    Ok(exact_lr_errors(mu, mu_prime, n)?.max())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn total_variation_examples() {
        assert_eq!(total_variation(&[0.3, 0.7], &[0.3, 0.7]).unwrap(), 0.0);
        assert_eq!(total_variation(&[1.0, 0.0], &[0.0, 1.0]).unwrap(), 1.0);
        assert!((total_variation(&[0.5, 0.5], &[0.8, 0.2]).unwrap() - 0.3).abs() < 1e-15);
        assert!(matches!(total_variation(&[1.0], &[0.5, 0.5]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert!((kl_divergence(&[1.0, 0.0], &[0.5, 0.5]).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(kl_divergence(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), f64::INFINITY);
    }

    #[test]
    fn chi_square_and_hellinger_examples() {
        assert_eq!(chi_square(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert_eq!(hellinger_sq(&[0.2, 0.8], &[0.2, 0.8]).unwrap(), 0.0);
        assert!((hellinger_sq(&[1.0, 0.0], &[0.5, 0.5]).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-15);
        assert_eq!(chi_square(&[0.5, 0.5], &[1.0, 0.0]).unwrap(), f64::INFINITY);
        assert!((hellinger_sq(&[1.0, 0.0], &[0.0, 1.0]).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn product_tv_small_cases() {
        let (mu, nu) = ([0.5, 0.5], [0.8, 0.2]);
        assert!((exact_product_tv(&mu, &nu, 1).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(exact_product_tv(&mu, &mu, 4).unwrap(), 0.0);
        assert!(exact_product_tv(&mu, &nu, 2).unwrap() >= exact_product_tv(&mu, &nu, 1).unwrap());
    }

    #[test]
    fn lr_error_small_cases() {
        // Identical laws: L_n = 0 everywhere, so the test always answers μ′.
        let e = exact_lr_errors(&[0.3, 0.7], &[0.3, 0.7], 3).unwrap();
        assert!((e.err_mu - 1.0).abs() < 1e-15);
        assert_eq!(e.err_mu_prime, 0.0);
        assert_eq!(exact_lr_error(&[1.0, 0.0], &[0.0, 1.0], 1).unwrap(), 0.0);
    }

    #[test]
    fn lr_error_three_draws_by_hand() {
        // μ = (½, ½), μ′ = (0.8, 0.2); ℓ = (ln 0.625, ln 2.5).
        // With k draws of state 1, L ∝ (3−k) ln 0.625 + k ln 2.5, positive iff k ≥ 2
        // (k = 1 gives ln 0.9765625 < 0).
        let e = exact_lr_errors(&[0.5, 0.5], &[0.8, 0.2], 3).unwrap();
        // err under μ: P(k ≤ 1) with k ~ Bin(3, ½) = 4/8.
        assert!((e.err_mu - 0.5).abs() < 1e-15);
        // err under μ′: P(k ≥ 2) with k ~ Bin(3, 0.2) = 3·0.04·0.8 + 0.008 = 0.104.
        assert!((e.err_mu_prime - 0.104).abs() < 1e-15);
        assert!((e.max() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(exact_product_tv(&[0.1; 10], &[0.1; 10], 8), Err(Error::BudgetExceeded { .. })));
        assert!(exact_product_tv(&[0.1; 10], &[0.1; 10], 7).is_ok());
        assert!(matches!(exact_product_tv(&[0.5, 0.5], &[0.5, 0.5], 0), Err(Error::InvalidParameter(_))));
    }
}
