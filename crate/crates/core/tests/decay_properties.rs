mod common;

use common::*;
use mixwindow::complexity::{extreme_pairs, pairwise_epsilon, statistical_window, TestingInstance};
use mixwindow::geometry::decay_distance_sq;
use mixwindow::zoo::{self, ZooSpec};
use mixwindow::{evolve, spectral_decomposition, SpectralDecomposition};
use proptest::prelude::*;
use rand::Rng;

fn specs() -> Vec<ZooSpec> {
    zoo_specs(32)
}

/// Random orthogonal `k × k` matrix by Gram–Schmidt.
fn random_orthogonal(r: &mut impl Rng, k: usize) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < k {
        let mut v: Vec<f64> = (0..k).map(|_| r.random::<f64>() - 0.5).collect();
        for w in &q {
            let c: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(w).for_each(|(a, b)| *a -= c * b);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            q.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    q
}

/// The same decomposition with every degenerate eigenspace rotated at random.
fn rotate_eigenspaces(s: &SpectralDecomposition, seed: u64) -> SpectralDecomposition {
    let mut r = rng(seed);
    let mut left: Vec<Vec<f64>> = s.lefts().to_vec();
    for group in s.eigenspaces(1e-9) {
        if group.len() < 2 || group.contains(&0) {
            continue;
        }
        let q = random_orthogonal(&mut r, group.len());
        for (a, &i) in group.iter().enumerate() {
            left[i] = (0..s.dim())
                .map(|x| group.iter().enumerate().map(|(b, &j)| q[a][b] * s.left(j)[x]).sum())
                .collect();
        }
    }
    SpectralDecomposition::from_parts(s.eigenvalues().to_vec(), left, s.stationary().clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn decay_matches_direct_evolution(idx in any::<prop::sample::Index>(), seed in any::<u64>(), t in 0u64..=50) {
        let specs = specs();
        let p = build(&specs[idx.index(specs.len())]);
        let s = spectral_decomposition(&p).unwrap();
        let mut r = rng(seed);
        let (mu, nu) = (sparse_distribution(&mut r, p.dim()), sparse_distribution(&mut r, p.dim()));
        let direct = pi_dist_sq(&evolve(&mu, &p, t).unwrap(), &evolve(&nu, &p, t).unwrap(), s.stationary());
        let delta0 = pi_dist_sq(&mu, &nu, s.stationary());
        let spectral = decay_distance_sq(&mu, &nu, &s, t).unwrap();
        prop_assert!((spectral - direct).abs() <= 1e-10 * delta0.max(1.0), "{spectral:e} vs {direct:e}");
    }

    #[test]
    fn decay_sits_in_the_spectral_envelope(idx in any::<prop::sample::Index>(), seed in any::<u64>(), t in 0u64..=40) {
        let specs = specs();
        let p = build(&specs[idx.index(specs.len())]);
        let s = spectral_decomposition(&p).unwrap();
        let mut r = rng(seed);
        let (mu, nu) = (positive_distribution(&mut r, p.dim()), positive_distribution(&mut r, p.dim()));
        let d0 = decay_distance_sq(&mu, &nu, &s, 0).unwrap();
        let dt = decay_distance_sq(&mu, &nu, &s, t).unwrap();
        let hi = s.eigenvalue(s.second()).abs().powi(2 * t as i32) * d0;
        let lo = s.eigenvalue(s.last()).abs().powi(2 * t as i32) * d0;
        prop_assert!(dt <= hi * (1.0 + 1e-9) + 1e-300);
        prop_assert!(dt >= lo * (1.0 - 1e-9) - 1e-15 * d0);
    }

    #[test]
    fn decay_ignores_the_choice_of_eigenbasis(idx in any::<prop::sample::Index>(), seed in any::<u64>(), t in 0u64..=20) {
        let degenerate = [
            ZooSpec::Cycle { d: 8 },
            ZooSpec::Cycle { d: 12 },
            ZooSpec::BipartiteClique { d: 10 },
            ZooSpec::Hypercube { k: 4 },
            ZooSpec::Pachinko { r: 3, betas: vec![0.4, 0.3, 0.2, 0.1] },
        ];
        let p = build(&degenerate[idx.index(degenerate.len())]);
        let s = spectral_decomposition(&p).unwrap();
        let rotated = rotate_eigenspaces(&s, seed);
        let mut r = rng(seed ^ 7);
        let (mu, nu) = (sparse_distribution(&mut r, p.dim()), sparse_distribution(&mut r, p.dim()));
        let a = decay_distance_sq(&mu, &nu, &s, t).unwrap();
        let b = decay_distance_sq(&mu, &nu, &rotated, t).unwrap();
        prop_assert!((a - b).abs() <= 1e-10, "{a:e} vs {b:e}");
    }

    #[test]
    fn epsilon_is_inherited_by_evolution(idx in any::<prop::sample::Index>(), seed in any::<u64>(), t in 0u64..=50) {
        let specs = specs();
        let p = build(&specs[idx.index(specs.len())]);
        let s = spectral_decomposition(&p).unwrap();
        let pi = s.stationary();
        let mut r = rng(seed);
        let (mu, nu) = (positive_distribution(&mut r, p.dim()), positive_distribution(&mut r, p.dim()));
        let before = pairwise_epsilon(&mu, &nu, pi).unwrap();
        let after = pairwise_epsilon(&evolve(&mu, &p, t).unwrap(), &evolve(&nu, &p, t).unwrap(), pi).unwrap();
        prop_assert!(after >= before * (1.0 - 1e-12));
    }
}

#[test]
fn extreme_pairs_decay_along_one_eigenvalue() {
    for spec in specs() {
        let p = build(&spec);
        if p.dim() < 3 {
            continue;
        }
        let s = spectral_decomposition(&p).unwrap();
        let e = extreme_pairs(&s, 0.3).unwrap();
        let (la, lb) = (s.eigenvalue(e.slow_index), s.eigenvalue(e.fast_index));
        let a0 = decay_distance_sq(&e.slow.0, &e.slow.1, &s, 0).unwrap();
        let b0 = decay_distance_sq(&e.fast.0, &e.fast.1, &s, 0).unwrap();
        assert!((a0 - 4.0 * e.alpha * e.alpha).abs() < 1e-12 && (b0 - a0).abs() < 1e-12);
        for t in 0..=30u64 {
            let a = decay_distance_sq(&e.slow.0, &e.slow.1, &s, t).unwrap();
            let b = decay_distance_sq(&e.fast.0, &e.fast.1, &s, t).unwrap();
            assert!((a - a0 * la.powi(2 * t as i32)).abs() <= 1e-10, "{spec:?} t = {t}");
            assert!((b - b0 * lb.powi(2 * t as i32)).abs() <= 1e-10, "{spec:?} t = {t}");
        }
        for pair in [&e.slow, &e.fast] {
            assert!(pairwise_epsilon(&pair.0, &pair.1, s.stationary()).unwrap() >= 0.3);
        }
        let a = (e.slow.0.as_slice(), e.slow.1.as_slice());
        let b = (e.fast.0.as_slice(), e.fast.1.as_slice());
        assert_eq!(statistical_window(&s, a, b, 0).unwrap(), 1.0);
    }
}

#[test]
fn window_witnesses_on_cycles_and_cliques() {
    let mut chains: Vec<_> = [4usize, 8, 12, 16, 20, 32].iter().map(|&d| zoo::cycle(d).unwrap()).collect();
    chains.extend([4usize, 6, 8, 16].iter().map(|&d| zoo::bipartite_clique(d).unwrap()));
    for p in chains {
        let s = spectral_decomposition(&p).unwrap();
        let e = extreme_pairs(&s, 0.2).unwrap();
        let a = TestingInstance::with_spectrum(p.clone(), s.clone(), e.slow.0.clone(), e.slow.1.clone(), 0).unwrap();
        let b = TestingInstance::with_spectrum(p.clone(), s.clone(), e.fast.0.clone(), e.fast.1.clone(), 0).unwrap();
        for t in 1..=20 {
            assert_eq!(b.delta_at(t), 0.0, "d = {}", p.dim());
            assert!((a.delta_at(t) - a.delta_at(0)).abs() <= 1e-14 * a.delta_at(0));
            let w = statistical_window(&s, (&e.slow.0, &e.slow.1), (&e.fast.0, &e.fast.1), t).unwrap();
            assert_eq!(w, f64::INFINITY);
        }
    }
}
