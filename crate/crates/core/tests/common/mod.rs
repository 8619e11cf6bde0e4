#![allow(dead_code)]

use mixwindow::zoo::{self, WeightLaw, ZooSpec};
use mixwindow::{Distribution, TransitionMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Strictly positive random distribution.
pub fn positive_distribution(rng: &mut impl Rng, d: usize) -> Distribution {
    let w: Vec<f64> = (0..d).map(|_| 1.0 - rng.random::<f64>()).collect();
    normalize(w)
}

/// Random distribution with each state empty with probability 1/4 (never all).
pub fn sparse_distribution(rng: &mut impl Rng, d: usize) -> Distribution {
    let mut w: Vec<f64> =
        (0..d).map(|_| if rng.random::<f64>() < 0.25 { 0.0 } else { 1.0 - rng.random::<f64>() }).collect();
    if w.iter().all(|x| *x == 0.0) {
        w[rng.random_range(0..d)] = 1.0;
    }
    normalize(w)
}

pub fn normalize(w: Vec<f64>) -> Distribution {
    let s: f64 = w.iter().sum();
    Distribution::new(w.into_iter().map(|x| x / s).collect()).unwrap()
}

/// `Σ (a − b)² / π`, computed without the library's geometry.
pub fn pi_dist_sq(a: &[f64], b: &[f64], pi: &[f64]) -> f64 {
    a.iter().zip(b).zip(pi).map(|((x, y), p)| (x - y) * (x - y) / p).sum()
}

/// Largest gap between two multisets after sorting both.
pub fn multiset_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    a.iter().zip(&b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn random_product_spec(rng: &mut impl Rng, k: u32) -> ZooSpec {
    let w: Vec<f64> = (0..k).map(|_| 1.0 - rng.random::<f64>()).collect();
    let s: f64 = w.iter().sum();
    ZooSpec::HypercubeProduct {
        k,
        weights: w.into_iter().map(|x| x / s).collect(),
        p: (0..k).map(|_| 1.0 - rng.random::<f64>()).collect(),
        q: (0..k).map(|_| 1.0 - rng.random::<f64>()).collect(),
    }
}

/// Positive, strictly decreasing betas summing to 1.
pub fn random_betas(rng: &mut impl Rng, r: u32) -> Vec<f64> {
    loop {
        let mut b: Vec<f64> = (0..=r).map(|_| 1.0 - rng.random::<f64>()).collect();
        b.sort_by(|x, y| y.total_cmp(x));
        if b.windows(2).all(|w| w[0] > w[1] * (1.0 + 1e-9)) {
            let s: f64 = b.iter().sum();
            return b.into_iter().map(|x| x / s).collect();
        }
    }
}

/// A spread of zoo chains with at most `max_d` states.
pub fn zoo_specs(max_d: usize) -> Vec<ZooSpec> {
    let mut r = rng(17);
    let mut specs = Vec::new();
    for d in [3, 4, 5, 8, 12, 16, 32] {
        specs.push(ZooSpec::Cycle { d });
        specs.push(ZooSpec::Line { d });
        specs.push(ZooSpec::RandomChain { d, seed: d as u64, weight_law: WeightLaw::Uniform01 });
    }
    for d in [4, 6, 10, 16, 32] {
        specs.push(ZooSpec::BipartiteClique { d });
    }
    for k in 1..=5 {
        specs.push(ZooSpec::Hypercube { k });
        specs.push(random_product_spec(&mut r, k));
    }
    for rr in 1..=5 {
        specs.push(ZooSpec::Pachinko { r: rr, betas: random_betas(&mut r, rr) });
    }
    specs.push(ZooSpec::Blockmodel2 { d: 16, intra_degree: 6, inter_degree: 2 });
    specs.push(ZooSpec::Blockmodel2 { d: 32, intra_degree: 5, inter_degree: 3 });
    specs.push(ZooSpec::RandomChain { d: 9, seed: 3, weight_law: WeightLaw::Exponential1 });
    specs.into_iter().filter(|s| s.build().unwrap().dim() <= max_d).collect()
}

pub fn build(spec: &ZooSpec) -> TransitionMatrix {
    spec.build().unwrap()
}

pub fn random_chain(d: usize, seed: u64) -> TransitionMatrix {
    zoo::random_chain(d, seed, WeightLaw::Uniform01).unwrap()
}
