//! Sample-complexity bounds for testing `μPᵗ` against `μ′Pᵗ`, the statistical
//! window between two pairs, and the statistical time for a fixed sample size.
//!
//! Everything is driven by the decay `Δ(t) = ‖μPᵗ − μ′Pᵗ‖²_π`:
//!
//! ```text
//! upper (LR test errs < δ):        n ≥ 16 ε^{-5/2} ln(1/δ) / Δ(t)
//! lower (every test errs ≥ ½ − δ): n ≤ 8 ε δ² / Δ(t)
//! without likelihood-ratio bounds: n ≥ 16 (η/3)^{-5/2} (1−η)^{-1} ln(1/δ) / Δ(t)
//! ```
//!
//! `ε` is the pairwise bounded-likelihood-ratio constant of `(μ, μ′, π)`.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::chain::{Distribution, TransitionMatrix};
use crate::error::{Error, Result};
use crate::geometry::{self, decay_from_weights, mode_power};
use crate::spectral::{spectral_decomposition, SpectralDecomposition};

/// Default centering weight for the bound without likelihood-ratio assumptions.
pub const DEFAULT_ETA: f64 = 0.75;
/// Safety factor applied to the largest admissible perturbation size.
pub const EXTREME_ALPHA_SAFETY: f64 = 0.999;
/// Tolerance for grouping eigenvalues into eigenspaces in reports.
pub const MULTIPLICITY_TOL: f64 = 1e-9;

/// A non-negative integer or `+∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    fn ceil_of(x: f64) -> Count {
        if x.is_finite() {
            Count::Finite(x.ceil() as u64)
        } else {
            Count::Infinite
        }
    }

    fn floor_of(x: f64) -> Count {
        if x.is_finite() {
            Count::Finite(x.floor() as u64)
        } else {
            Count::Infinite
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            Count::Finite(n) => Some(n),
            Count::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Count::Infinite
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "{n}"),
            Count::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Count {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Count::Finite(n) => s.serialize_u64(*n),
            Count::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Serializes non-finite reals as the strings `"inf"`, `"-inf"` or `"nan"`.
pub(crate) fn serialize_extended<S: Serializer>(x: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

/// Two hypotheses for the initial distribution of a known reversible chain,
/// observed after `t` steps.
#[derive(Debug, Clone)]
pub struct TestingInstance {
    chain: TransitionMatrix,
    spectrum: SpectralDecomposition,
    mu: Distribution,
    mu_prime: Distribution,
    t: u64,
    weights: Vec<(f64, f64)>,
}

impl TestingInstance {
    pub fn new(chain: TransitionMatrix, mu: Distribution, mu_prime: Distribution, t: u64) -> Result<Self> {
        let spectrum = spectral_decomposition(&chain)?;
        Self::with_spectrum(chain, spectrum, mu, mu_prime, t)
    }

    /// Reuses an existing decomposition of `chain`.
    pub fn with_spectrum(
        chain: TransitionMatrix,
        spectrum: SpectralDecomposition,
        mu: Distribution,
        mu_prime: Distribution,
        t: u64,
    ) -> Result<Self> {
        Error::check_dim(chain.dim(), spectrum.dim())?;
        let weights = geometry::mode_weights(&mu, &mu_prime, &spectrum)?;
        Ok(Self { chain, spectrum, mu, mu_prime, t, weights })
    }

    pub fn at_time(&self, t: u64) -> Self {
        Self { t, ..self.clone() }
    }

    pub fn chain(&self) -> &TransitionMatrix {
        &self.chain
    }

    pub fn spectrum(&self) -> &SpectralDecomposition {
        &self.spectrum
    }

    pub fn mu(&self) -> &Distribution {
        &self.mu
    }

    pub fn mu_prime(&self) -> &Distribution {
        &self.mu_prime
    }

    pub fn stationary(&self) -> &Distribution {
        self.spectrum.stationary()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// `Δ(t)` at the instance's own time.
    pub fn delta(&self) -> f64 {
        self.delta_at(self.t)
    }

    pub fn delta_at(&self, t: u64) -> f64 {
        decay_from_weights(&self.weights, t)
    }

    /// `(μPᵗ, μ′Pᵗ)`.
    pub fn evolved(&self) -> Result<(Distribution, Distribution)> {
        Ok((
            crate::chain::evolve(&self.mu, &self.chain, self.t)?,
            crate::chain::evolve(&self.mu_prime, &self.chain, self.t)?,
        ))
    }

    /// Pairwise likelihood-ratio constant of the initial triple `(μ, μ′, π)`.
    pub fn epsilon(&self) -> f64 {
        pairwise_epsilon(&self.mu, &self.mu_prime, self.stationary()).unwrap_or(0.0)
    }
}

/// Largest `ε` with `ε ≤ μ_x/μ′_x ≤ 1/ε` everywhere; 0 when the supports differ.
pub fn bounded_lr_epsilon(mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    Error::check_dim(mu.len(), mu_prime.len())?;
    let mut eps = 1.0f64;
    for (&a, &b) in mu.iter().zip(mu_prime) {
        if a == 0.0 && b == 0.0 {
            continue;
        }
        if a == 0.0 || b == 0.0 {
            return Ok(0.0);
        }
        eps = eps.min((a / b).min(b / a));
    }
    Ok(eps)
}

/// Minimum of [`bounded_lr_epsilon`] over the three pairs of `(μ, μ′, π)`.
pub fn pairwise_epsilon(mu: &[f64], mu_prime: &[f64], pi: &[f64]) -> Result<f64> {
    Ok(bounded_lr_epsilon(mu, mu_prime)?
        .min(bounded_lr_epsilon(mu, pi)?)
        .min(bounded_lr_epsilon(mu_prime, pi)?))
}

fn check_unit_open(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x < 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} = {x} must lie in (0, 1)")))
    }
}

fn check_epsilon(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::param(format!("epsilon = {eps} must lie in (0, 1]")))
    }
}

/// `C(ε, δ) = 16 ε^{-5/2} ln(1/δ)`.
pub fn upper_constant(eps: f64, delta: f64) -> f64 {
    16.0 * eps.powf(-2.5) * (1.0 / delta).ln()
}

/// `c(ε, δ) = 8 ε δ²`.
pub fn lower_constant(eps: f64, delta: f64) -> f64 {
    8.0 * eps * delta * delta
}

/// `16 (η/3)^{-5/2} / (1 − η)`, the per-`ln(1/δ)` constant of the centred bound.
pub fn general_constant(eta: f64) -> f64 {
    16.0 * (eta / 3.0).powf(-2.5) / (1.0 - eta)
}

/// `⌈C(ε, δ) / Δ⌉`, `+∞` when `Δ = 0`.
pub fn upper_bound_from_delta(delta_t: f64, eps: f64, delta: f64) -> Result<Count> {
    check_epsilon(eps)?;
    check_unit_open("delta", delta)?;
    Ok(Count::ceil_of(upper_constant(eps, delta) / delta_t))
}

/// `⌊c(ε, δ) / Δ⌋`, `+∞` when `Δ = 0`.
pub fn lower_bound_from_delta(delta_t: f64, eps: f64, delta: f64) -> Result<Count> {
    check_epsilon(eps)?;
    check_unit_open("delta", delta)?;
    Ok(Count::floor_of(lower_constant(eps, delta) / delta_t))
}

/// Samples after which the likelihood-ratio test errs with probability below `δ`.
/// The caller vouches that `(μ, μ′, π)` are pairwise `ε`-bounded.
pub fn sample_upper_bound(inst: &TestingInstance, eps: f64, delta: f64) -> Result<Count> {
    upper_bound_from_delta(inst.delta(), eps, delta)
}

/// Samples below which every test errs with probability at least `½ − δ`.
pub fn sample_lower_bound(inst: &TestingInstance, eps: f64, delta: f64) -> Result<Count> {
    lower_bound_from_delta(inst.delta(), eps, delta)
}

/// Upper bound with no likelihood-ratio hypothesis, obtained through the
/// centred pair with weight `η`.
pub fn general_upper_bound(inst: &TestingInstance, delta: f64, eta: f64) -> Result<Count> {
    check_unit_open("delta", delta)?;
    check_unit_open("eta", eta)?;
    Ok(Count::ceil_of(general_constant(eta) * (1.0 / delta).ln() / inst.delta()))
}

/// Mixes both hypotheses towards `β = (μ + μ′ + π)/3`:
/// `μ̃ = (1−η)μ + ηβ`, `μ̃′ = (1−η)μ′ + ηβ`.
pub fn center_pair(
    mu: &Distribution,
    mu_prime: &Distribution,
    pi: &Distribution,
    eta: f64,
) -> Result<(Distribution, Distribution)> {
    Error::check_dim(mu.dim(), mu_prime.dim())?;
    Error::check_dim(mu.dim(), pi.dim())?;
    check_unit_open("eta", eta)?;
    let beta: Vec<f64> = (0..mu.dim()).map(|x| (mu[x] + mu_prime[x] + pi[x]) / 3.0).collect();
    let mix = |v: &Distribution| {
        Distribution::from_vec_unchecked(v.iter().zip(&beta).map(|(a, b)| (1.0 - eta) * a + eta * b).collect())
    };
    Ok((mix(mu), mix(mu_prime)))
}

/// `(π + α u_k, π − α u_k)`.
pub fn aligned_pair(s: &SpectralDecomposition, index: usize, alpha: f64) -> Result<(Distribution, Distribution)> {
    if index == 0 || index >= s.dim() {
        return Err(Error::param(format!("eigenvector index {index} must lie in 1..{}", s.dim())));
    }
    let pi = s.stationary();
    let u = s.left(index);
    let plus = pi.iter().zip(u).map(|(p, x)| p + alpha * x).collect();
    let minus = pi.iter().zip(u).map(|(p, x)| p - alpha * x).collect();
    Ok((Distribution::new(plus)?, Distribution::new(minus)?))
}

/// Largest `α` for which `(π + αu_k, π − αu_k, π)` are pairwise `ε`-bounded,
/// before the safety factor. With `r = α max_x |u_k(x)/π_x|` the binding
/// constraint is `(1 + r)/(1 − r) ≤ 1/ε`, i.e. `r ≤ (1 − ε)/(1 + ε)`.
pub fn max_aligned_alpha(s: &SpectralDecomposition, index: usize, eps_target: f64) -> Result<f64> {
    if !(eps_target > 0.0 && eps_target < 1.0) {
        return Err(Error::Infeasible(format!("epsilon target {eps_target} must lie in (0, 1)")));
    }
    let ratio = s.right(index).iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if ratio == 0.0 {
        return Err(Error::Infeasible("zero eigenvector".into()));
    }
    Ok((1.0 - eps_target) / (1.0 + eps_target) / ratio)
}

/// The pairs aligned with the slowest and the fastest eigenvectors.
#[derive(Debug, Clone)]
pub struct ExtremePairs {
    /// `π ± α u_[2]`: the pair that stays distinguishable longest.
    pub slow: (Distribution, Distribution),
    /// `π ± α u_[d]`: the pair that becomes indistinguishable fastest.
    pub fast: (Distribution, Distribution),
    pub alpha: f64,
    pub slow_index: usize,
    pub fast_index: usize,
    pub slow_multiplicity: usize,
    pub fast_multiplicity: usize,
}

/// Builds both extreme pairs with one shared `α`, the largest keeping every
/// vector a distribution and both triples pairwise `ε_target`-bounded, times
/// [`EXTREME_ALPHA_SAFETY`]. Both pairs then have `Δ(0) = 4α²`.
pub fn extreme_pairs(s: &SpectralDecomposition, eps_target: f64) -> Result<ExtremePairs> {
    if s.dim() < 3 {
        return Err(Error::param("extreme pairs need at least 3 states"));
    }
    let (slow_index, fast_index) = (s.second(), s.last());
    let alpha = EXTREME_ALPHA_SAFETY
        * max_aligned_alpha(s, slow_index, eps_target)?.min(max_aligned_alpha(s, fast_index, eps_target)?);
    Ok(ExtremePairs {
        slow: aligned_pair(s, slow_index, alpha)?,
        fast: aligned_pair(s, fast_index, alpha)?,
        alpha,
        slow_index,
        fast_index,
        slow_multiplicity: s.multiplicity(slow_index, MULTIPLICITY_TOL),
        fast_multiplicity: s.multiplicity(fast_index, MULTIPLICITY_TOL),
    })
}

pub fn extreme_pairs_for_chain(p: &TransitionMatrix, eps_target: f64) -> Result<ExtremePairs> {
    extreme_pairs(&spectral_decomposition(p)?, eps_target)
}

/// Ratio of the sample complexities of pair B and pair A at time `t`,
/// normalized by the same ratio at `t = 0`:
/// `(Δ_A(t)/Δ_B(t)) · (Δ_B(0)/Δ_A(0))`. Infinite when pair B has become
/// indistinguishable while pair A has not.
pub fn statistical_window(
    s: &SpectralDecomposition,
    pair_a: (&[f64], &[f64]),
    pair_b: (&[f64], &[f64]),
    t: u64,
) -> Result<f64> {
    let wa = geometry::mode_weights(pair_a.0, pair_a.1, s)?;
    let wb = geometry::mode_weights(pair_b.0, pair_b.1, s)?;
    window_from_weights(&wa, &wb, t)
}

pub(crate) fn window_from_weights(wa: &[(f64, f64)], wb: &[(f64, f64)], t: u64) -> Result<f64> {
    let (a0, b0) = (decay_from_weights(wa, 0), decay_from_weights(wb, 0));
    if a0 == 0.0 || b0 == 0.0 {
        return Err(Error::Undefined("a pair is identical at t = 0".into()));
    }
    if t == 0 {
        return Ok(1.0);
    }
    let (at, bt) = (decay_from_weights(wa, t), decay_from_weights(wb, t));
    match (at == 0.0, bt == 0.0) {
        (true, true) => Err(Error::Undefined(format!("both pairs are indistinguishable at t = {t}"))),
        (false, true) => Ok(f64::INFINITY),
        _ => Ok((at / bt) * (b0 / a0)),
    }
}

/// Smallest `t` with `n · Δ(t) ≤ threshold`, or `+∞` if the decay never gets there.
/// `Δ(t)` is non-increasing, so the crossing is located by doubling then bisection.
pub fn statistical_time(
    s: &SpectralDecomposition,
    mu: &[f64],
    mu_prime: &[f64],
    n: u64,
    threshold: f64,
) -> Result<Count> {
    let weights = geometry::mode_weights(mu, mu_prime, s)?;
    time_from_weights(&weights, n, threshold)
}

pub(crate) fn time_from_weights(weights: &[(f64, f64)], n: u64, threshold: f64) -> Result<Count> {
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    if !(threshold > 0.0) || !threshold.is_finite() {
        return Err(Error::param(format!("threshold {threshold} must be positive")));
    }
    if decay_from_weights(weights, 0) == 0.0 {
        return Err(Error::param("the pair is identical at t = 0"));
    }
    let crossed = |t: u64| n as f64 * decay_from_weights(weights, t) <= threshold;
    if crossed(0) {
        return Ok(Count::Finite(0));
    }
    let (mut lo, mut hi) = (0u64, 1u64);
    while !crossed(hi) {
        if hi >= 1 << 62 {
            return Ok(Count::Infinite);
        }
        lo = hi;
        hi *= 2;
    }
    // Invariant: !crossed(lo), crossed(hi).
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if crossed(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Count::Finite(hi))
}

/// Closed form of [`statistical_time`] for a pair aligned with one eigenvector
/// of modulus `lambda_abs`: `⌈½ ln(n Δ(0)/threshold) / ln(1/|λ|)⌉`.
pub fn aligned_statistical_time(lambda_abs: f64, n: u64, delta0: f64, threshold: f64) -> Count {
    let crossed = |t: u64| n as f64 * (mode_power(lambda_abs, t) * delta0) <= threshold;
    if crossed(0) {
        return Count::Finite(0);
    }
    if lambda_abs >= 1.0 {
        return Count::Infinite;
    }
    let ratio = n as f64 * delta0 / threshold;
    let t = (0.5 * ratio.ln() / (1.0 / lambda_abs).ln()).ceil();
    if !t.is_finite() || t >= (1u64 << 62) as f64 {
        return Count::Infinite;
    }
    // The logarithms can land one step either side of the crossing.
    let mut t = (t as u64).max(1);
    while t > 1 && crossed(t - 1) {
        t -= 1;
    }
    while !crossed(t) {
        t += 1;
    }
    Count::Finite(t)
}

/// Slowest and fastest non-trivial eigenvalues of a chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSummary {
    pub lambda_2: f64,
    pub lambda_d: f64,
    pub multiplicity_2: usize,
    pub multiplicity_d: usize,
}

impl EigenSummary {
    pub fn of(s: &SpectralDecomposition) -> Self {
        Self {
            lambda_2: s.eigenvalue(s.second()),
            lambda_d: s.eigenvalue(s.last()),
            multiplicity_2: s.multiplicity(s.second(), MULTIPLICITY_TOL),
            multiplicity_d: s.multiplicity(s.last(), MULTIPLICITY_TOL),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComplexityReport {
    pub delta_t: f64,
    pub epsilon: Option<f64>,
    pub n_upper: Count,
    pub n_lower: Count,
    #[serde(serialize_with = "serialize_extended")]
    pub n_star_scale: f64,
    pub t: u64,
    pub eigen_summary: EigenSummary,
}

/// All three readings of the sample complexity at the instance's time.
///
/// With a positive `eps` the bounded-likelihood-ratio bounds are used;
/// otherwise the upper bound falls back to the centred bound with
/// [`DEFAULT_ETA`] and the lower bound is vacuous (0).
pub fn complexity_report(inst: &TestingInstance, eps: Option<f64>, delta: f64) -> Result<ComplexityReport> {
    let delta_t = inst.delta();
    let eps = eps.filter(|e| *e > 0.0);
    let (n_upper, n_lower) = match eps {
        Some(e) => (sample_upper_bound(inst, e, delta)?, sample_lower_bound(inst, e, delta)?),
        None => {
            let upper = general_upper_bound(inst, delta, DEFAULT_ETA)?;
            let lower = if delta_t == 0.0 { Count::Infinite } else { Count::Finite(0) };
            (upper, lower)
        }
    };
    Ok(ComplexityReport {
        delta_t,
        epsilon: eps,
        n_upper,
        n_lower,
        n_star_scale: 1.0 / delta_t,
        t: inst.t(),
        eigen_summary: EigenSummary::of(inst.spectrum()),
    })
}
