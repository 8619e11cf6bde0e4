//! Chain families with known spectra: cycle, line, bipartite clique, hypercube
//! and its weighted product version, two-block regular graphs, the Pachinko
//! tree walk, and random reversible chains.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::chain::TransitionMatrix;
use crate::error::{Error, Result};
use crate::linalg::SquareMatrix;

/// Largest state count the dense constructors will build.
pub const MAX_STATES: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum WeightLaw {
    /// Uniform on (0, 1].
    #[default]
    #[serde(rename = "uniform01")]
    Uniform01,
    /// Exponential with unit mean.
    #[serde(rename = "exponential1")]
    Exponential1,
}

impl WeightLaw {
    fn sample(self, rng: &mut impl Rng) -> f64 {
        // 1 − U lies in (0, 1], so weights are strictly positive.
        let u = 1.0 - rng.random::<f64>();
        match self {
            WeightLaw::Uniform01 => u,
            WeightLaw::Exponential1 => -u.ln() + f64::MIN_POSITIVE,
        }
    }
}

/// A named chain family with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ZooSpec {
    Cycle { d: usize },
    Line { d: usize },
    BipartiteClique { d: usize },
    Hypercube { k: u32 },
    HypercubeProduct { k: u32, weights: Vec<f64>, p: Vec<f64>, q: Vec<f64> },
    Blockmodel2 { d: usize, intra_degree: usize, inter_degree: usize },
    Pachinko { r: u32, betas: Vec<f64> },
    RandomChain {
        d: usize,
        seed: u64,
        #[serde(default)]
        weight_law: WeightLaw,
    },
}

impl ZooSpec {
    pub fn build(&self) -> Result<TransitionMatrix> {
        match self {
            ZooSpec::Cycle { d } => cycle(*d),
            ZooSpec::Line { d } => line(*d),
            ZooSpec::BipartiteClique { d } => bipartite_clique(*d),
            ZooSpec::Hypercube { k } => hypercube(*k),
            ZooSpec::HypercubeProduct { k, weights, p, q } => hypercube_product(*k, weights, p, q),
            ZooSpec::Blockmodel2 { d, intra_degree, inter_degree } => blockmodel2(*d, *intra_degree, *inter_degree),
            ZooSpec::Pachinko { r, betas } => pachinko(*r, betas),
            ZooSpec::RandomChain { d, seed, weight_law } => random_chain(*d, *seed, *weight_law),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            ZooSpec::Cycle { .. } => "cycle",
            ZooSpec::Line { .. } => "line",
            ZooSpec::BipartiteClique { .. } => "bipartite_clique",
            ZooSpec::Hypercube { .. } => "hypercube",
            ZooSpec::HypercubeProduct { .. } => "hypercube_product",
            ZooSpec::Blockmodel2 { .. } => "blockmodel2",
            ZooSpec::Pachinko { .. } => "pachinko",
            ZooSpec::RandomChain { .. } => "random_chain",
        }
    }

    /// Closed-form eigenvalue multiset, where one is known.
    pub fn closed_form_spectrum(&self) -> Option<Vec<f64>> {
        match self {
            ZooSpec::Cycle { d } => Some(cycle_spectrum(*d)),
            ZooSpec::Line { d } => Some(line_spectrum(*d)),
            ZooSpec::BipartiteClique { d } => Some(bipartite_clique_spectrum(*d)),
            ZooSpec::Hypercube { k } => Some(hypercube_spectrum(*k)),
            ZooSpec::HypercubeProduct { weights, p, q, .. } => Some(product_spectrum(weights, p, q)),
            ZooSpec::Pachinko { betas, .. } => Some(pachinko_spectrum(betas)),
            ZooSpec::Blockmodel2 { .. } | ZooSpec::RandomChain { .. } => None,
        }
    }

    /// One representative spec per family, for listings and round-trip checks.
    pub fn examples() -> Vec<ZooSpec> {
        vec![
            ZooSpec::Cycle { d: 8 },
            ZooSpec::Line { d: 6 },
            ZooSpec::BipartiteClique { d: 6 },
            ZooSpec::Hypercube { k: 3 },
            ZooSpec::HypercubeProduct { k: 2, weights: vec![0.5, 0.5], p: vec![0.3, 1.0], q: vec![0.1, 1.0] },
            ZooSpec::Blockmodel2 { d: 16, intra_degree: 6, inter_degree: 2 },
            ZooSpec::Pachinko { r: 3, betas: vec![0.4, 0.3, 0.2, 0.1] },
            ZooSpec::RandomChain { d: 10, seed: 42, weight_law: WeightLaw::Uniform01 },
        ]
    }
}

fn check_size(d: usize) -> Result<()> {
    if d > MAX_STATES {
        return Err(Error::param(format!("{d} states exceeds the dense limit {MAX_STATES}")));
    }
    Ok(())
}

fn from_adjacency(d: usize, neighbours: impl Fn(usize) -> Vec<usize>) -> Result<TransitionMatrix> {
    let mut m = SquareMatrix::zeros(d);
    for i in 0..d {
        let nb = neighbours(i);
        let w = 1.0 / nb.len() as f64;
        for j in nb {
            m[(i, j)] += w;
        }
    }
    TransitionMatrix::new(m)
}

/// Simple random walk on the `d`-cycle.
pub fn cycle(d: usize) -> Result<TransitionMatrix> {
    if d < 3 {
        return Err(Error::param(format!("cycle needs d >= 3, got {d}")));
    }
    check_size(d)?;
    from_adjacency(d, |i| vec![(i + d - 1) % d, (i + 1) % d])
}

/// `cos(2πi/d)`, `i = 0..d`.
pub fn cycle_spectrum(d: usize) -> Vec<f64> {
    (0..d).map(|i| (2.0 * std::f64::consts::PI * i as f64 / d as f64).cos()).collect()
}

/// Walk on the path `0 − 1 − … − (d−1)`; the endpoints always step inward.
pub fn line(d: usize) -> Result<TransitionMatrix> {
    if d < 3 {
        return Err(Error::param(format!("line needs d >= 3, got {d}")));
    }
    check_size(d)?;
    from_adjacency(d, |i| match i {
        0 => vec![1],
        i if i == d - 1 => vec![d - 2],
        i => vec![i - 1, i + 1],
    })
}

/// `cos(πi/(d−1))`, `i = 0..d`.
pub fn line_spectrum(d: usize) -> Vec<f64> {
    (0..d).map(|i| (std::f64::consts::PI * i as f64 / (d - 1) as f64).cos()).collect()
}

/// Walk on the complete bipartite graph between `{0..d/2}` and `{d/2..d}`.
pub fn bipartite_clique(d: usize) -> Result<TransitionMatrix> {
    if d < 4 || d % 2 != 0 {
        return Err(Error::param(format!("bipartite clique needs even d >= 4, got {d}")));
    }
    check_size(d)?;
    let half = d / 2;
    from_adjacency(d, |i| if i < half { (half..d).collect() } else { (0..half).collect() })
}

pub fn bipartite_clique_spectrum(d: usize) -> Vec<f64> {
    let mut v = vec![1.0, -1.0];
    v.resize(d, 0.0);
    v
}

/// Standard walk on `{−1, 1}^k`: flip one uniformly chosen coordinate.
/// State `x` encodes coordinate `j` in bit `j` (0 ↔ −1, 1 ↔ +1).
pub fn hypercube(k: u32) -> Result<TransitionMatrix> {
    if k == 0 {
        return Err(Error::param("hypercube needs k >= 1"));
    }
    let w = vec![1.0 / k as f64; k as usize];
    let ones = vec![1.0; k as usize];
    hypercube_product(k, &w, &ones, &ones)
}

/// `1 − 2j/k` with multiplicity `C(k, j)`.
pub fn hypercube_spectrum(k: u32) -> Vec<f64> {
    (0u32..1 << k).map(|s| 1.0 - 2.0 * s.count_ones() as f64 / k as f64).collect()
}

/// Product of two-state chains on `{−1, 1}^k`: coordinate `j` is picked with
/// probability `w_j` and updated by its own chain, which moves −1 → +1 with
/// probability `p_j` and +1 → −1 with probability `q_j`. The diagonal carries
/// the probability that the picked coordinate stays put.
pub fn hypercube_product(k: u32, weights: &[f64], p: &[f64], q: &[f64]) -> Result<TransitionMatrix> {
    let kk = k as usize;
    if k == 0 || weights.len() != kk || p.len() != kk || q.len() != kk {
        return Err(Error::param(format!(
            "product chain needs k >= 1 and k = {k} weights, p and q values"
        )));
    }
    if k > MAX_STATES.trailing_zeros() {
        return Err(Error::param(format!("k = {k} exceeds the dense limit")));
    }
    if weights.iter().any(|w| !(*w > 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::param("weights must be positive and sum to 1"));
    }
    if p.iter().chain(q).any(|x| !(*x > 0.0 && *x <= 1.0)) {
        return Err(Error::param("p and q must lie in (0, 1]"));
    }
    let d = 1usize << k;
    let mut m = SquareMatrix::zeros(d);
    for x in 0..d {
        for j in 0..kk {
            let up = x >> j & 1 == 1;
            let leave = if up { q[j] } else { p[j] };
            m[(x, x ^ (1 << j))] += weights[j] * leave;
            m[(x, x)] += weights[j] * (1.0 - leave);
        }
    }
    TransitionMatrix::new(m)
}

/// `1 − Σ_{i∈S} w_i (p_i + q_i)` over all subsets `S`.
pub fn product_spectrum(weights: &[f64], p: &[f64], q: &[f64]) -> Vec<f64> {
    let k = weights.len();
    (0usize..1 << k)
        .map(|s| 1.0 - (0..k).filter(|i| s >> i & 1 == 1).map(|i| weights[i] * (p[i] + q[i])).sum::<f64>())
        .collect()
}

/// Two equal blocks of `d/2` nodes; each node has `intra_degree` neighbours in
/// its own block and `inter_degree` in the other.
///
/// Within a block, node `i` connects to `i ± 1, …, i ± ⌊intra/2⌋` (mod `d/2`)
/// plus the antipode `i + d/4` when `intra` is odd. Across blocks, `i` connects
/// to `j` when `(j − i) mod d/2 < inter`.
pub fn blockmodel2(d: usize, intra_degree: usize, inter_degree: usize) -> Result<TransitionMatrix> {
    if d < 4 || d % 2 != 0 {
        return Err(Error::param(format!("blockmodel needs even d >= 4, got {d}")));
    }
    check_size(d)?;
    let m = d / 2;
    if intra_degree >= m {
        return Err(Error::param(format!("intra degree {intra_degree} must be below block size {m}")));
    }
    if intra_degree % 2 == 1 && m % 2 == 1 {
        return Err(Error::param("odd intra degree needs an even block size"));
    }
    if inter_degree == 0 || inter_degree > m {
        return Err(Error::param(format!("inter degree must lie in 1..={m}")));
    }
    let half = intra_degree / 2;
    let neighbours = |i: usize| {
        let (block, local) = (i / m, i % m);
        let mut nb = Vec::with_capacity(intra_degree + inter_degree);
        for off in 1..=half {
            nb.push(block * m + (local + off) % m);
            nb.push(block * m + (local + m - off) % m);
        }
        if intra_degree % 2 == 1 {
            nb.push(block * m + (local + m / 2) % m);
        }
        let other = 1 - block;
        for off in 0..inter_degree {
            // Node a in block 0 meets b in block 1 when (b − a) mod m < inter.
            let j = if block == 0 { (local + off) % m } else { (local + m - off) % m };
            nb.push(other * m + j);
        }
        nb
    };
    let degree = intra_degree + inter_degree;
    for i in 0..d {
        let mut nb = neighbours(i);
        nb.sort_unstable();
        nb.dedup();
        if nb.len() != degree || nb.contains(&i) {
            return Err(Error::param(format!("construction is not {degree}-regular at node {i}")));
        }
    }
    from_adjacency(d, neighbours)
}

/// Random walk on the `2^r` leaves of a dyadic tree: stay with probability
/// `β₀`, otherwise jump to a leaf whose first common ancestor is at height
/// `ℓ` with total probability `β_ℓ`, uniformly among those `2^{ℓ−1}` leaves.
///
/// Leaves are in heap order: the most significant of the `r` index bits
/// selects the subtree at the top level.
pub fn pachinko(r: u32, betas: &[f64]) -> Result<TransitionMatrix> {
    if r == 0 || betas.len() != r as usize + 1 {
        return Err(Error::param(format!("pachinko needs r >= 1 and r + 1 = {} betas", r + 1)));
    }
    if r > MAX_STATES.trailing_zeros() {
        return Err(Error::param(format!("r = {r} exceeds the dense limit")));
    }
    if betas.iter().any(|b| !(*b > 0.0)) || betas.windows(2).any(|w| w[0] <= w[1]) {
        return Err(Error::param("betas must be positive and strictly decreasing"));
    }
    if (betas.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
        return Err(Error::param("betas must sum to 1"));
    }
    let d = 1usize << r;
    let m = SquareMatrix::from_fn(d, |i, j| {
        if i == j {
            betas[0]
        } else {
            let height = (usize::BITS - (i ^ j).leading_zeros()) as i32;
            betas[height as usize] / 2f64.powi(height - 1)
        }
    });
    TransitionMatrix::new(m)
}

/// `γ₁ = 1` and, for `2 ≤ k ≤ r+1`, `γ_k = β₀ + … + β_{r+1−k} − β_{r+2−k}` with
/// multiplicity `2^{k−2}`.
pub fn pachinko_spectrum(betas: &[f64]) -> Vec<f64> {
    let r = betas.len() - 1;
    let mut v = vec![1.0];
    for k in 2..=r + 1 {
        let gamma = betas[..=r + 1 - k].iter().sum::<f64>() - betas[r + 2 - k];
        v.extend(std::iter::repeat_n(gamma, 1 << (k - 2)));
    }
    v
}

/// Random reversible chain on the complete graph with self-loops: symmetric
/// i.i.d. weights `U_ij` per unordered pair, `P_ij = U_ij / Σ_x U_ix`.
pub fn random_chain(d: usize, seed: u64, law: WeightLaw) -> Result<TransitionMatrix> {
    if d < 2 {
        return Err(Error::param(format!("random chain needs d >= 2, got {d}")));
    }
    check_size(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = SquareMatrix::zeros(d);
    for i in 0..d {
        for j in i..d {
            let w = law.sample(&mut rng);
            u[(i, j)] = w;
            u[(j, i)] = w;
        }
    }
    let m = SquareMatrix::from_fn(d, |i, j| u[(i, j)] / u.row(i).iter().sum::<f64>());
    TransitionMatrix::new(m)
}

/// Two-state chain: −1 → +1 with probability `p`, +1 → −1 with probability `q`.
pub fn two_state(p: f64, q: f64) -> Result<TransitionMatrix> {
    if !(p > 0.0 && p <= 1.0 && q > 0.0 && q <= 1.0) {
        return Err(Error::param("p and q must lie in (0, 1]"));
    }
    TransitionMatrix::from_rows(&[vec![1.0 - p, p], vec![q, 1.0 - q]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{check_reversible, stationary_distribution, REVERSIBILITY_TOL};
    use crate::spectral::{sorted_desc, spectral_decomposition};

    fn assert_spectrum(p: &TransitionMatrix, want: Vec<f64>, tol: f64) {
        let s = spectral_decomposition(p).unwrap();
        let got = s.eigenvalues().to_vec();
        let want = sorted_desc(want);
        assert_eq!(got.len(), want.len());
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < tol, "got {got:?}, want {want:?}");
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(cycle(2).is_err());
        assert!(line(2).is_err());
        assert!(bipartite_clique(5).is_err());
        assert!(hypercube(0).is_err());
        assert!(hypercube_product(2, &[0.6, 0.6], &[1.0, 1.0], &[1.0, 1.0]).is_err());
        assert!(hypercube_product(1, &[1.0], &[0.0], &[0.5]).is_err());
        assert!(pachinko(2, &[0.5, 0.3, 0.3]).is_err());
        assert!(pachinko(2, &[0.3, 0.5, 0.2]).is_err());
        assert!(blockmodel2(16, 8, 1).is_err());
        assert!(blockmodel2(16, 3, 0).is_err());
        assert!(blockmodel2(10, 3, 1).is_err());
        assert!(two_state(0.0, 0.5).is_err());
    }

    #[test]
    fn small_closed_forms() {
        assert_spectrum(&cycle(3).unwrap(), vec![1.0, -0.5, -0.5], 1e-12);
        assert_spectrum(&line(3).unwrap(), vec![1.0, 0.0, -1.0], 1e-12);
        assert_spectrum(&hypercube(3).unwrap(), hypercube_spectrum(3), 1e-12);
        let s = spectral_decomposition(&line(5).unwrap()).unwrap();
        assert!(s.eigenvalues().iter().any(|x| (x - 0.5f64.sqrt()).abs() < 1e-12));
    }

    #[test]
    fn cycle8_extreme_moduli() {
        let s = spectral_decomposition(&cycle(8).unwrap()).unwrap();
        assert_eq!(s.eigenvalue(s.second()), -1.0);
        assert!(s.eigenvalue(s.last()).abs() < 1e-12);
    }

    #[test]
    fn line_is_reversible_with_degree_weights() {
        let p = line(7).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        // deg = 1 at the ends and 2 inside, total 2(d − 1).
        for (x, m) in pi.iter().enumerate() {
            let deg = if x == 0 || x == 6 { 1.0 } else { 2.0 };
            assert!((m - deg / 12.0).abs() < 1e-12);
        }
        assert!(check_reversible(&p, &pi, 1e-14).unwrap());
    }

    #[test]
    fn product_chain_recovers_standard_walk() {
        let std = hypercube(2).unwrap();
        let prod = hypercube_product(2, &[0.5, 0.5], &[1.0, 1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(std, prod);
        assert_spectrum(&prod, vec![1.0, 0.0, 0.0, -1.0], 1e-12);
    }

    #[test]
    fn one_coordinate_product_is_the_two_state_chain() {
        let p = hypercube_product(1, &[1.0], &[0.3], &[0.1]).unwrap();
        assert_eq!(p, two_state(0.3, 0.1).unwrap());
        let s = spectral_decomposition(&p).unwrap();
        assert!((s.eigenvalue(1) - 0.6).abs() < 1e-12);
        let pi = s.stationary();
        assert!((pi[0] - 0.25).abs() < 1e-12 && (pi[1] - 0.75).abs() < 1e-12);
    }

    #[test]
    fn pachinko_rows_and_uniform_stationary() {
        let betas = [0.4, 0.3, 0.2, 0.1];
        let p = pachinko(3, &betas).unwrap();
        let pi = stationary_distribution(&p).unwrap();
        assert!(pi.iter().all(|x| (x - 0.125).abs() < 1e-12));
        // Leaves 0 and 4 first meet at the root (height 3): β₃ / 4.
        assert!((p.get(0, 4) - 0.025).abs() < 1e-15);
        assert!((p.get(0, 1) - 0.3).abs() < 1e-15);
        assert!((p.get(0, 2) - 0.1).abs() < 1e-15);
        assert_spectrum(&p, pachinko_spectrum(&betas), 1e-12);
    }

    #[test]
    fn pachinko_top_split_is_an_eigenvector() {
        let betas = [0.4, 0.3, 0.2, 0.1];
        let p = pachinko(3, &betas).unwrap();
        let v = [1.0, 1.0, 1.0, 1.0, -1.0, -1.0, -1.0, -1.0];
        let gamma2 = 0.4 + 0.3 + 0.2 - 0.1;
        for (a, b) in p.step(&v).iter().zip(v) {
            assert!((a - gamma2 * b).abs() < 1e-14);
        }
        let spec = pachinko_spectrum(&betas);
        // γ_k − γ_{k+1} = 2β_{r+1−k} − β_{r+2−k}.
        assert!((spec[1] - spec[2] - (2.0 * 0.2 - 0.1)).abs() < 1e-15);
        assert!((spec[2] - spec[4] - (2.0 * 0.3 - 0.2)).abs() < 1e-15);
    }

    #[test]
    fn blockmodel_block_vector() {
        for (d, a, b) in [(16, 6, 2), (16, 5, 3), (20, 4, 4), (32, 15, 1)] {
            let p = blockmodel2(d, a, b).unwrap();
            let m = d / 2;
            let v: Vec<f64> = (0..d).map(|i| if i < m { 1.0 } else { -1.0 }).collect();
            let lambda = (a as f64 - b as f64) / (a + b) as f64;
            for (x, y) in p.matrix().right_mul(&v).iter().zip(&v) {
                assert!((x - lambda * y).abs() < 1e-14);
            }
            assert!(check_reversible(&p, &crate::chain::Distribution::uniform(d), 1e-15).unwrap());
        }
        let s = spectral_decomposition(&blockmodel2(16, 4, 4).unwrap()).unwrap();
        assert!(s.eigenvalues().iter().any(|x| x.abs() < 1e-12));
    }

    #[test]
    fn random_chain_is_deterministic_and_reversible() {
        let a = random_chain(15, 7, WeightLaw::Uniform01).unwrap();
        let b = random_chain(15, 7, WeightLaw::Uniform01).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, random_chain(15, 8, WeightLaw::Uniform01).unwrap());
        let pi = stationary_distribution(&a).unwrap();
        assert!(check_reversible(&a, &pi, REVERSIBILITY_TOL).unwrap());
        let e = random_chain(15, 7, WeightLaw::Exponential1).unwrap();
        assert!(spectral_decomposition(&e).is_ok());
    }

    #[test]
    fn zoo_spec_json_shape() {
        let s: ZooSpec = serde_json::from_str(r#"{"type":"cycle","d":8}"#).unwrap();
        assert_eq!(s, ZooSpec::Cycle { d: 8 });
        let s: ZooSpec = serde_json::from_str(r#"{"type":"random_chain","d":100,"seed":42,"weight_law":"uniform01"}"#).unwrap();
        assert_eq!(s, ZooSpec::RandomChain { d: 100, seed: 42, weight_law: WeightLaw::Uniform01 });
        let s: ZooSpec = serde_json::from_str(r#"{"type":"pachinko","r":2,"betas":[0.5,0.3,0.2]}"#).unwrap();
        assert_eq!(s.family(), "pachinko");
        assert!(serde_json::from_str::<ZooSpec>(r#"{"type":"cycle","d":8,"x":1}"#).is_err());
    }
}
