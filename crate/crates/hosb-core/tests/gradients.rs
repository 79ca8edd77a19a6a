//! Gradient kernels checked against independent oracles: central finite
//! differences, the direct exclusion-product gradient, and full
//! re-evaluation for single-flip deltas.

mod common;

use common::*;
use hosb_core::model::{PolyProblem, SpinConfig, Term};
use hosb_core::xorsat::generate_3r3x;
use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Central finite differences of -E(x), the textbook gradient oracle.
fn finite_difference_gradient(problem: &PolyProblem, x: &[f64], h: f64) -> Vec<f64> {
    (0..x.len())
        .map(|i| {
            let mut plus = x.to_vec();
            plus[i] += h;
            let mut minus = x.to_vec();
            minus[i] -= h;
            let ep = problem.evaluate_real(&plus).unwrap();
            let em = problem.evaluate_real(&minus).unwrap();
            -(ep - em) / (2.0 * h)
        })
        .collect()
}

#[test]
fn direct_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for _ in 0..20 {
        let problem = random_cubic(10, 12, &mut rng, |r| r.random_range(-2.0..2.0));
        let x: Vec<f64> = (0..10).map(|_| rng.random_range(-1.0..1.0)).collect();
        let direct = problem.gradient_direct(&x).unwrap();
        let fd = finite_difference_gradient(&problem, &x, 1e-6);
        let err = max_rel_err(&direct, &fd);
        assert!(err <= 1e-5, "finite-difference mismatch: {err}");
    }
}

#[test]
fn fast_gradient_matches_direct_on_3r3x() {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    for trial in 0..100 {
        let inst = generate_3r3x(100, &mut rng).unwrap();
        let problem = inst.to_polynomial();
        let x: Vec<f64> = (0..100)
            .map(|_| loop {
                let v: f64 = rng.random_range(-1.0..1.0);
                if v.abs() > 1e-3 {
                    break v;
                }
            })
            .collect();
        let fast = problem.gradient_fast(&x, 1e-14).unwrap();
        let direct = problem.gradient_direct(&x).unwrap();
        let err = max_rel_err(&fast, &direct);
        assert!(err <= 1e-9, "trial {trial}: deviation {err}");
    }
}

#[test]
fn fast_gradient_matches_direct_on_mixed_problems() {
    let mut rng = ChaCha8Rng::seed_from_u64(203);
    for _ in 0..50 {
        let n = rng.random_range(5..=200usize);
        let m = rng.random_range(1..=n);
        let problem = random_mixed(n, m, &mut rng);
        let x: Vec<f64> = (0..n)
            .map(|_| loop {
                let v: f64 = rng.random_range(-1.0..1.0);
                if v.abs() > 1e-3 {
                    break v;
                }
            })
            .collect();
        let fast = problem.gradient_fast(&x, 1e-14).unwrap();
        let direct = problem.gradient_direct(&x).unwrap();
        let err = max_rel_err(&fast, &direct);
        assert!(err <= 1e-9, "deviation {err}");
    }
}

#[test]
fn discrete_gradient_equals_direct_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for n in [4usize, 8, 12] {
        let problem = random_cubic(n, n, &mut rng, pm_one);
        for mask in 0u64..(1u64 << n) {
            let spins =
                SpinConfig::new((0..n).map(|i| if (mask >> i) & 1 == 1 { -1 } else { 1 }).collect())
                    .unwrap();
            let x: Vec<f64> = spins.as_slice().iter().map(|&s| s as f64).collect();
            let discrete = problem.gradient_discrete(&spins).unwrap();
            let direct = problem.gradient_direct(&x).unwrap();
            assert_eq!(discrete, direct, "n = {n}, mask = {mask}");
        }
    }
}

#[test]
fn discrete_gradient_equals_direct_on_large_random() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..20 {
        let inst = generate_3r3x(150, &mut rng).unwrap();
        let problem = inst.to_polynomial();
        let spins = SpinConfig::new(
            (0..150).map(|_| if rng.random() { 1 } else { -1 }).collect(),
        )
        .unwrap();
        let x: Vec<f64> = spins.as_slice().iter().map(|&s| s as f64).collect();
        assert_eq!(
            problem.gradient_discrete(&spins).unwrap(),
            problem.gradient_direct(&x).unwrap()
        );
    }
}

#[test]
fn delta_energy_matches_reevaluation_exhaustively() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    for trial in 0..20 {
        let n = 4 + (trial % 9); // 4..=12
        let problem = random_cubic(n, n, &mut rng, pm_one);
        enumerate_configs(&problem, |s, e| {
            for i in 0..n {
                let delta = problem.delta_energy(s, i).unwrap();
                let mut flipped = s.clone();
                flipped.flip(i);
                let e_flip = problem.evaluate(&flipped).unwrap();
                assert_eq!(delta, e_flip - e, "trial {trial}, i = {i}");
            }
        });
    }
}

#[test]
fn delta_energy_matches_reevaluation_general_coefficients() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    for _ in 0..30 {
        let n = rng.random_range(4..=40usize);
        let problem = random_mixed(n, n, &mut rng);
        let spins = SpinConfig::new(
            (0..n).map(|_| if rng.random() { 1 } else { -1 }).collect(),
        )
        .unwrap();
        let e = problem.evaluate(&spins).unwrap();
        for i in 0..n {
            let delta = problem.delta_energy(&spins, i).unwrap();
            let mut flipped = spins.clone();
            flipped.flip(i);
            let e_flip = problem.evaluate(&flipped).unwrap();
            assert!((delta - (e_flip - e)).abs() <= 1e-9, "i = {i}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The real extension is affine in every coordinate.
    #[test]
    fn evaluate_real_affine_in_each_coordinate(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=12usize);
        let problem = random_mixed(n, n, &mut rng);
        let base: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        for i in 0..n {
            let at = |t: f64| {
                let mut x = base.clone();
                x[i] = t;
                problem.evaluate_real(&x).unwrap()
            };
            let (e0, e1, e2) = (at(-1.0), at(0.0), at(1.0));
            prop_assert!((e1 - 0.5 * (e0 + e2)).abs() < 1e-9);
        }
    }

    /// Folding terms at construction never changes the energy.
    #[test]
    fn term_folding_preserves_energy(seed in 0u64..5000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(3..=10usize);
        let problem = random_mixed(n, n, &mut rng);
        // Split every term into two halves; construction must fold them
        // back into the same polynomial.
        let split: Vec<Term> = problem
            .terms()
            .iter()
            .flat_map(|t| {
                [
                    Term::new(t.coefficient * 0.25, t.indices.clone()),
                    Term::new(t.coefficient * 0.75, t.indices.clone()),
                ]
            })
            .collect();
        let refolded = PolyProblem::new(n, split).unwrap();
        prop_assert_eq!(refolded.num_terms(), problem.num_terms());
        let spins = SpinConfig::new(
            (0..n).map(|_| if rng.random() { 1 } else { -1 }).collect(),
        ).unwrap();
        let a = problem.evaluate(&spins).unwrap();
        let b = refolded.evaluate(&spins).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }
}
