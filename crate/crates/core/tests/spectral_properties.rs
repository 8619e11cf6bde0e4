mod common;

use common::*;
use mixwindow::chain::{check_reversible, lazy, stationary_distribution, REVERSIBILITY_TOL};
use mixwindow::divergence::total_variation;
use mixwindow::geometry::pi_inner;
use mixwindow::zoo::{self, ZooSpec};
use mixwindow::{evolve, spectral_decomposition, Distribution};
use nalgebra::DMatrix;
use proptest::prelude::*;

/// `π` as the left null vector of `P − I`, from nalgebra's SVD.
fn nalgebra_stationary(p: &mixwindow::TransitionMatrix) -> Vec<f64> {
    let d = p.dim();
    let a = DMatrix::from_fn(d, d, |i, j| p.get(j, i) - if i == j { 1.0 } else { 0.0 });
    let svd = a.svd(false, true);
    let v_t = svd.v_t.unwrap();
    let k = svd.singular_values.imin();
    let mut v: Vec<f64> = v_t.row(k).iter().copied().collect();
    let sum: f64 = v.iter().sum();
    v.iter_mut().for_each(|x| *x /= sum);
    v
}

/// Eigenvalues of `D^{1/2} P D^{-1/2}` (`D = diag π`) from nalgebra's symmetric solver.
fn nalgebra_eigenvalues(p: &mixwindow::TransitionMatrix) -> Vec<f64> {
    let d = p.dim();
    let pi = nalgebra_stationary(p);
    let m = DMatrix::from_fn(d, d, |i, j| (pi[i] / pi[j]).sqrt() * p.get(i, j));
    let sym = (&m + m.transpose()) * 0.5;
    sym.symmetric_eigenvalues().iter().copied().collect()
}

#[test]
fn eigenvalues_agree_with_independent_solver() {
    for spec in zoo_specs(64) {
        let p = build(&spec);
        let s = spectral_decomposition(&p).unwrap();
        let gap = multiset_distance(s.eigenvalues(), &nalgebra_eigenvalues(&p));
        assert!(gap < 1e-9, "{spec:?}: {gap:e}");
    }
}

#[test]
fn stationary_agrees_with_independent_solver() {
    for spec in zoo_specs(32) {
        let p = build(&spec);
        let v = nalgebra_stationary(&p);
        let pi = stationary_distribution(&p).unwrap();
        for (a, b) in pi.iter().zip(&v) {
            assert!((a - b).abs() < 1e-10, "{spec:?}");
        }
    }
}

#[test]
fn zoo_chains_are_valid_and_reversible() {
    for spec in zoo_specs(usize::MAX) {
        let p = build(&spec);
        for row in p.matrix().rows() {
            assert!(row.iter().all(|x| *x >= 0.0));
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
        assert!(p.is_irreducible(), "{spec:?}");
        let pi = stationary_distribution(&p).unwrap();
        assert!(check_reversible(&p, &pi, REVERSIBILITY_TOL).unwrap(), "{spec:?}");
    }
}

#[test]
fn closed_forms_hold_on_the_zoo() {
    for spec in zoo_specs(usize::MAX) {
        if let Some(want) = spec.closed_form_spectrum() {
            let s = spectral_decomposition(&build(&spec)).unwrap();
            assert!(multiset_distance(s.eigenvalues(), &want) <= 1e-9, "{spec:?}");
        }
    }
}

#[test]
fn cycle_extremes_scale_with_d() {
    for d in [3usize, 4, 5, 7, 8, 16, 31, 64, 100, 128, 255, 256] {
        let s = spectral_decomposition(&zoo::cycle(d).unwrap()).unwrap();
        let l2 = s.eigenvalue(s.second()).abs();
        let ld = s.eigenvalue(s.last()).abs();
        let df = d as f64;
        assert!(l2 >= 1.0 - 5.0 / (df * df), "d = {d}: |λ_[2]| = {l2}");
        assert!(ld <= 4.0 / df, "d = {d}: |λ_[d]| = {ld}");
    }
}

#[test]
fn aperiodic_chains_approach_stationarity_monotonically() {
    let mut r = rng(5);
    for spec in zoo_specs(32) {
        let p = build(&spec);
        let s = spectral_decomposition(&p).unwrap();
        if s.eigenvalues().last().unwrap() <= &(-1.0 + 1e-9) {
            continue;
        }
        let pi = s.stationary();
        let mut mu = sparse_distribution(&mut r, p.dim());
        let mut prev = total_variation(&mu, pi).unwrap();
        for _ in 0..200 {
            mu = evolve(&mu, &p, 1).unwrap();
            let tv = total_variation(&mu, pi).unwrap();
            assert!(tv <= prev + 1e-15, "{spec:?}");
            prev = tv;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn reconstruction(d in 2usize..=64, seed in any::<u64>()) {
        let p = random_chain(d, seed);
        let s = spectral_decomposition(&p).unwrap();
        prop_assert!(s.reconstruct().max_abs_diff(p.matrix()) <= 1e-8);
    }

    #[test]
    fn pi_orthonormal_eigenbasis(d in 2usize..=40, seed in any::<u64>()) {
        let s = spectral_decomposition(&random_chain(d, seed)).unwrap();
        for i in 0..d {
            for j in 0..d {
                let want = if i == j { 1.0 } else { 0.0 };
                prop_assert!((pi_inner(s.left(i), s.left(j), s.stationary()).unwrap() - want).abs() < 1e-9);
            }
        }
        prop_assert_eq!(s.left(0), s.stationary().as_slice());
        prop_assert_eq!(s.eigenvalue(0), 1.0);
    }

    #[test]
    fn coefficients_evolve_as_powers(d in 2usize..=24, seed in any::<u64>(), t in 0u64..30) {
        let p = random_chain(d, seed);
        let s = spectral_decomposition(&p).unwrap();
        let mu = positive_distribution(&mut rng(seed ^ 1), d);
        let mu_t = evolve(&mu, &p, t).unwrap();
        for i in 0..d {
            let before = pi_inner(s.left(i), &mu, s.stationary()).unwrap();
            let after = pi_inner(s.left(i), &mu_t, s.stationary()).unwrap();
            prop_assert!((after - s.eigenvalue(i).powi(t as i32) * before).abs() <= 1e-8);
        }
    }

    #[test]
    fn lazy_spectrum_is_affine(d in 2usize..=24, seed in any::<u64>(), q in 0.0f64..1.0) {
        let p = random_chain(d, seed);
        let s = spectral_decomposition(&p).unwrap();
        let l = spectral_decomposition(&lazy(&p, q).unwrap()).unwrap();
        let want: Vec<f64> = s.eigenvalues().iter().map(|x| (1.0 - q) * x + q).collect();
        prop_assert!(multiset_distance(l.eigenvalues(), &want) <= 1e-8);
    }

    #[test]
    fn random_chain_is_deterministic(d in 2usize..=16, seed in any::<u64>()) {
        prop_assert_eq!(random_chain(d, seed), random_chain(d, seed));
    }

    #[test]
    fn product_chain_closed_form(k in 1u32..=5, seed in any::<u64>()) {
        let spec = random_product_spec(&mut rng(seed), k);
        let s = spectral_decomposition(&build(&spec)).unwrap();
        prop_assert!(multiset_distance(s.eigenvalues(), &spec.closed_form_spectrum().unwrap()) <= 1e-9);
        prop_assert!(s.stationary().iter().all(|x| *x > 0.0));
    }

    #[test]
    fn pachinko_closed_form(r in 1u32..=5, seed in any::<u64>()) {
        let betas = random_betas(&mut rng(seed), r);
        let spec = ZooSpec::Pachinko { r, betas };
        let s = spectral_decomposition(&build(&spec)).unwrap();
        prop_assert!(multiset_distance(s.eigenvalues(), &spec.closed_form_spectrum().unwrap()) <= 1e-9);
        let u = Distribution::uniform(1 << r);
        for (a, b) in s.stationary().iter().zip(u.iter()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
