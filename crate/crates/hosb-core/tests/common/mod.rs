//! Shared helpers for the oracle-based integration tests.
#![allow(dead_code)] // each test target uses a different subset

use hosb_core::model::{PolyProblem, SpinConfig, Term};
use rand::seq::index::sample;
use rand::Rng;

/// Random cubic problem with `m` distinct degree-3 index sets and
/// coefficients drawn from the given closure.
pub fn random_cubic<R: Rng, C: FnMut(&mut R) -> f64>(
    n: usize,
    m: usize,
    rng: &mut R,
    mut coeff: C,
) -> PolyProblem {
    assert!(n >= 3);
    let mut seen: Vec<[u32; 3]> = Vec::new();
    let mut terms = Vec::with_capacity(m);
    while terms.len() < m {
        let picked = sample(rng, n, 3);
        let mut idx = [picked.index(0) as u32, picked.index(1) as u32, picked.index(2) as u32];
        idx.sort_unstable();
        if seen.contains(&idx) {
            continue;
        }
        seen.push(idx);
        terms.push(Term::new(coeff(rng), idx.to_vec()));
    }
    PolyProblem::new(n, terms).unwrap()
}

/// Random problem with mixed degrees 1..=3, distinct index sets.
pub fn random_mixed<R: Rng>(n: usize, m: usize, rng: &mut R) -> PolyProblem {
    assert!(n >= 3);
    let mut seen: Vec<Vec<u32>> = Vec::new();
    let mut terms = Vec::with_capacity(m);
    while terms.len() < m {
        let degree = rng.random_range(1..=3usize);
        let picked = sample(rng, n, degree);
        let mut idx: Vec<u32> = picked.iter().map(|v| v as u32).collect();
        idx.sort_unstable();
        if seen.contains(&idx) {
            continue;
        }
        seen.push(idx.clone());
        terms.push(Term::new(rng.random_range(-2.0..2.0), idx));
    }
    PolyProblem::new(n, terms).unwrap()
}

/// Coefficient drawn uniformly from {-1, +1}.
pub fn pm_one<R: Rng>(rng: &mut R) -> f64 {
    if rng.random() {
        1.0
    } else {
        -1.0
    }
}

/// All spin configurations of `n` variables in Gray-code order, with the
/// running exact energy. Calls `visit(spins, energy)` for every one of
/// the `2^n` configurations.
pub fn enumerate_configs<F: FnMut(&SpinConfig, f64)>(problem: &PolyProblem, mut visit: F) {
    let n = problem.num_vars();
    assert!(n <= 26, "enumeration limited to small n");
    let mut spins = SpinConfig::new(vec![1; n]).unwrap();
    let mut energy = problem.evaluate(&spins).unwrap();
    visit(&spins, energy);
    for t in 1u64..(1u64 << n) {
        let bit = t.trailing_zeros() as usize;
        energy += problem.delta_energy(&spins, bit).unwrap();
        spins.flip(bit);
        visit(&spins, energy);
    }
}

/// Exhaustive minimum energy and the full set of minimizers.
pub fn brute_force_min(problem: &PolyProblem) -> (f64, Vec<SpinConfig>) {
    let mut best = f64::INFINITY;
    let mut argmin: Vec<SpinConfig> = Vec::new();
    enumerate_configs(problem, |s, e| {
        if e < best {
            best = e;
            argmin.clear();
            argmin.push(s.clone());
        } else if e == best {
            argmin.push(s.clone());
        }
    });
    (best, argmin)
}

/// Max relative deviation between two vectors, scaled by the larger
/// magnitude at each slot (absolute where both are tiny).
pub fn max_rel_err(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(&x, &y)| {
            let scale = x.abs().max(y.abs()).max(1e-300);
            ((x - y).abs() / scale).min((x - y).abs())
        })
        .fold(0.0, f64::max)
}
