//! Sampling from evolved distributions, the likelihood-ratio test, and
//! Monte Carlo estimates of its error probabilities.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution as _};
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::Distribution;
use crate::complexity::{lower_bound_from_delta, Count, TestingInstance};
use crate::divergence::{self, ENUMERATION_BUDGET};
use crate::error::{Error, Result};

/// Caps the number of worker threads; unset or 0 means one per core.
pub const THREADS_ENV: &str = "MW_THREADS";
pub const MIN_TRIALS: u64 = 100;
/// Above this many draws, [`Sampler::counts`] switches from one inverse-CDF
/// lookup per draw to conditional binomials.
pub const BINOMIAL_SWITCH: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    Mu,
    MuPrime,
}

impl Decision {
    pub fn flipped(self) -> Self {
        match self {
            Decision::Mu => Decision::MuPrime,
            Decision::MuPrime => Decision::Mu,
        }
    }
}

/// Histogram of `n` i.i.d. draws.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    counts: Vec<u64>,
    n: u64,
}

impl Sample {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let n = counts.iter().sum();
        if n == 0 {
            return Err(Error::param("empty sample"));
        }
        Ok(Self { counts, n })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn empirical(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.n as f64).collect()
    }
}

/// Sampler over a fixed distribution.
#[derive(Debug, Clone)]
pub struct Sampler {
    mass: Vec<f64>,
    cdf: Vec<f64>,
    /// `tail[x] = Σ_{y ≥ x} μ_y`.
    tail: Vec<f64>,
    last_positive: usize,
}

impl Sampler {
    pub fn new(mu: &Distribution) -> Self {
        let mut acc = 0.0;
        let cdf = mu
            .iter()
            .map(|p| {
                acc += p;
                acc
            })
            .collect();
        let mut tail = vec![0.0; mu.dim()];
        let mut acc = 0.0;
        for x in (0..mu.dim()).rev() {
            acc += mu[x];
            tail[x] = acc;
        }
        let last_positive = mu.iter().rposition(|&p| p > 0.0).unwrap_or(0);
        Self { mass: mu.as_slice().to_vec(), cdf, tail, last_positive }
    }

    /// One draw by inverse CDF.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = self.cdf[self.cdf.len() - 1];
        let u = rng.random::<f64>() * total;
        self.cdf.partition_point(|&c| c <= u).min(self.last_positive)
    }

    /// `n` draws, one inverse-CDF lookup each.
    pub fn sample<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Sample {
        let mut counts = vec![0u64; self.cdf.len()];
        for _ in 0..n {
            counts[self.draw(rng)] += 1;
        }
        Sample { counts, n }
    }

    /// Multinomial counts of `n` draws by conditional binomials, `O(d)` per call.
    pub fn sample_binomial<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Sample {
        let mut counts = vec![0u64; self.mass.len()];
        let mut left = n;
        for x in 0..self.last_positive {
            if left == 0 {
                break;
            }
            if self.mass[x] == 0.0 {
                continue;
            }
            let p = (self.mass[x] / self.tail[x]).clamp(0.0, 1.0);
            let c = Binomial::new(left, p).map(|b| b.sample(rng)).unwrap_or(0);
            counts[x] = c;
            left -= c;
        }
        counts[self.last_positive] += left;
        Sample { counts, n }
    }

    /// Histogram of `n` draws, by whichever method is cheaper.
    pub fn counts<R: Rng + ?Sized>(&self, n: u64, rng: &mut R) -> Sample {
        if n > BINOMIAL_SWITCH {
            self.sample_binomial(n, rng)
        } else {
            self.sample(n, rng)
        }
    }
}

/// `n` i.i.d. draws from `mu`, deterministic in `seed`.
pub fn draw_sample(mu: &Distribution, n: u64, seed: u64) -> Result<Sample> {
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    Ok(Sampler::new(mu).sample(n, &mut ChaCha8Rng::seed_from_u64(seed)))
}

/// `L_n = Σ_x (counts_x / n) ln(μ_x / μ′_x)`.
///
/// A counted state outside either support yields `SupportViolation` carrying
/// the decision forced by the sign of the infinite statistic. When both signs
/// occur, or both likelihoods vanish, the statistic is undefined and the tie
/// rule forces `μ′`.
pub fn lr_statistic(s: &Sample, mu: &[f64], mu_prime: &[f64]) -> Result<f64> {
    Error::check_dim(mu.len(), s.counts.len())?;
    Error::check_dim(mu.len(), mu_prime.len())?;
    let mut violation: Option<usize> = None;
    let (mut plus_inf, mut minus_inf) = (false, false);
    let mut acc = 0.0;
    for (x, &c) in s.counts.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let (a, b) = (mu[x], mu_prime[x]);
        if a > 0.0 && b > 0.0 {
            acc += c as f64 * (a / b).ln();
            continue;
        }
        violation.get_or_insert(x);
        if a > 0.0 {
            plus_inf = true;
        } else {
            minus_inf = true;
        }
    }
    match violation {
        None => Ok(acc / s.n as f64),
        Some(state) => {
            let decision = if plus_inf && !minus_inf { Decision::Mu } else { Decision::MuPrime };
            Err(Error::SupportViolation { state, decision })
        }
    }
}

/// `μ` iff `L_n > 0`.
pub fn lr_test(s: &Sample, mu: &[f64], mu_prime: &[f64]) -> Result<Decision> {
    match lr_statistic(s, mu, mu_prime) {
        Ok(l) if l > 0.0 => Ok(Decision::Mu),
        Ok(_) => Ok(Decision::MuPrime),
        Err(Error::SupportViolation { decision, .. }) => Ok(decision),
        Err(e) => Err(e),
    }
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the RNG used by one trial, independent of scheduling.
pub fn trial_seed(seed: u64, hypothesis: Decision, trial: u64) -> u64 {
    let h = match hypothesis {
        Decision::Mu => 0u64,
        Decision::MuPrime => 1,
    };
    mix64(mix64(seed ^ 0x9e37_79b9_7f4a_7c15).wrapping_add(h.wrapping_mul(0xd1b5_4a32_d192_ed03)) ^ trial)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorEstimate {
    pub err_mu: f64,
    pub err_mu_prime: f64,
    pub err_max: f64,
    pub trials: u64,
    pub ci_halfwidth: f64,
}

impl ErrorEstimate {
    pub fn from_counts(errors_mu: u64, errors_mu_prime: u64, trials: u64) -> Self {
        let err_mu = errors_mu as f64 / trials as f64;
        let err_mu_prime = errors_mu_prime as f64 / trials as f64;
        let err_max = err_mu.max(err_mu_prime);
        Self {
            err_mu,
            err_mu_prime,
            err_max,
            trials,
            ci_halfwidth: 1.96 * (err_max * (1.0 - err_max) / trials as f64).sqrt(),
        }
    }
}

/// Runs `f` on a pool capped by `MW_THREADS` when set.
pub fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).unwrap_or(0);
    if cap == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(cap).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

fn count_errors(
    truth: Decision,
    sampler: &Sampler,
    mu_t: &[f64],
    mu_prime_t: &[f64],
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<u64> {
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, truth, trial));
            let s = sampler.counts(n, &mut rng);
            Ok(u64::from(lr_test(&s, mu_t, mu_prime_t)? != truth))
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Error probabilities of the likelihood-ratio test on `n` draws of the
/// evolved distributions, estimated from `trials` runs under each hypothesis.
pub fn estimate_error(inst: &TestingInstance, n: u64, trials: u64, seed: u64) -> Result<ErrorEstimate> {
    let (mu_t, mu_prime_t) = inst.evolved()?;
    estimate_error_evolved(&mu_t, &mu_prime_t, n, trials, seed)
}

/// As [`estimate_error`] on already evolved distributions.
pub fn estimate_error_evolved(
    mu_t: &Distribution,
    mu_prime_t: &Distribution,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<ErrorEstimate> {
    Error::check_dim(mu_t.dim(), mu_prime_t.dim())?;
    if n == 0 {
        return Err(Error::param("sample size must be at least 1"));
    }
    if trials < MIN_TRIALS {
        return Err(Error::param(format!("at least {MIN_TRIALS} trials are required, got {trials}")));
    }
    let (sa, sb) = (Sampler::new(mu_t), Sampler::new(mu_prime_t));
    let (ea, eb) = with_thread_cap(|| {
        rayon::join(
            || count_errors(Decision::Mu, &sa, mu_t, mu_prime_t, n, trials, seed),
            || count_errors(Decision::MuPrime, &sb, mu_t, mu_prime_t, n, trials, seed),
        )
    });
    Ok(ErrorEstimate::from_counts(ea?, eb?, trials))
}

/// Serialized result of a simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    #[serde(flatten)]
    pub estimate: ErrorEstimate,
    pub n: u64,
    pub t: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// The lower bound is 0 samples at this scale.
    Vacuous,
    /// `Δ(t) = 0`: the evolved laws coincide and no number of samples helps.
    Indistinguishable,
    /// Exact enumeration over all `dⁿ` outcomes.
    Exact { tv: f64, lr_error: f64, tv_holds: bool, lr_holds: bool },
    /// `dⁿ` over budget: Pinsker with tensorization, `TV ≤ √(n·KL/2)`.
    Pinsker { tv_upper: f64, holds: bool },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub n: Count,
    pub epsilon: f64,
    pub delta: f64,
    pub outcome: WitnessOutcome,
}

impl WitnessReport {
    /// Whether every computed check confirms an error of at least `½ − δ`.
    pub fn holds(&self) -> bool {
        match self.outcome {
            WitnessOutcome::Vacuous | WitnessOutcome::Indistinguishable => true,
            WitnessOutcome::Exact { tv_holds, lr_holds, .. } => tv_holds && lr_holds,
            WitnessOutcome::Pinsker { holds, .. } => holds,
        }
    }
}

/// Checks at `n = ⌊8εδ²/Δ(t)⌋` that every test errs with probability at least
/// `½ − δ`, using the pairwise `ε` measured on the initial triple.
pub fn lower_bound_witness(inst: &TestingInstance, delta: f64) -> Result<WitnessReport> {
    lower_bound_witness_at(inst, inst.epsilon(), delta)
}

pub fn lower_bound_witness_at(inst: &TestingInstance, eps: f64, delta: f64) -> Result<WitnessReport> {
    let n = if eps > 0.0 { lower_bound_from_delta(inst.delta(), eps, delta)? } else { Count::Finite(0) };
    let target = 0.5 - delta;
    let outcome = match n {
        Count::Finite(0) => WitnessOutcome::Vacuous,
        Count::Infinite => WitnessOutcome::Indistinguishable,
        Count::Finite(k) => {
            let (mu_t, mu_prime_t) = inst.evolved()?;
            let d = mu_t.dim() as f64;
            let enumerable = k <= u32::MAX as u64 && d.powf(k as f64) <= ENUMERATION_BUDGET as f64;
            if enumerable {
                let k = k as u32;
                let tv = divergence::exact_product_tv(&mu_t, &mu_prime_t, k)?;
                let lr_error = divergence::exact_lr_error(&mu_t, &mu_prime_t, k)?;
                WitnessOutcome::Exact {
                    tv,
                    lr_error,
                    tv_holds: (1.0 - tv) / 2.0 >= target - 1e-12,
                    lr_holds: lr_error >= target - 1e-12,
                }
            } else {
                let kl = divergence::kl_divergence(&mu_t, &mu_prime_t)?;
                let tv_upper = (k as f64 * kl / 2.0).sqrt().min(1.0);
                WitnessOutcome::Pinsker { tv_upper, holds: (1.0 - tv_upper) / 2.0 >= target - 1e-12 }
            }
        }
    };
    Ok(WitnessReport { n, epsilon: eps, delta, outcome })
}
