//! Sparse multilinear spin cost functions.
//!
//! A problem is a sum of multilinear terms over spin variables
//! `s_i = ±1`, with the energy convention
//!
//! ```text
//! E(s) = - sum_m  c_m * prod_{i in indices(m)} s_i
//! ```
//!
//! (the global minus sign is part of the model). Terms are canonical:
//! indices strictly increasing within a term, at most one term per index
//! set. Arbitrary degrees >= 1 are supported; multilinearity makes every
//! formula below exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;
use crate::Error;

/// One multilinear monomial: a coefficient times a product of distinct
/// spin variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    /// Dimensionless energy weight.
    pub coefficient: f64,
    /// Strictly increasing variable indices; the term's degree is the
    /// length of this list.
    pub indices: Vec<u32>,
}

impl Term {
    pub fn new(coefficient: f64, indices: Vec<u32>) -> Self {
        Term {
            coefficient,
            indices,
        }
    }

    pub fn degree(&self) -> usize {
        self.indices.len()
    }
}

/// A spin configuration; every entry is exactly +1 or -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig {
    spins: Vec<i8>,
}

impl SpinConfig {
    /// Validates that every entry is ±1.
    pub fn new(spins: Vec<i8>) -> Result<Self, Error> {
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::InvalidArgument("spins must be +1 or -1"));
        }
        Ok(SpinConfig { spins })
    }

    /// Reads spins off a real vector as signs, with `sign(0) = +1`.
    pub fn from_signs(x: &[f64]) -> Self {
        SpinConfig {
            spins: x.iter().map(|&v| math::sign_i8(v)).collect(),
        }
    }

    /// Spin vector from bits, `0 -> +1` and `1 -> -1` (i.e. `s = (-1)^bit`).
    pub fn from_bits(bits: &[bool]) -> Self {
        SpinConfig {
            spins: bits.iter().map(|&b| if b { -1 } else { 1 }).collect(),
        }
    }

    /// Inverse of [`SpinConfig::from_bits`]: `+1 -> 0`, `-1 -> 1`.
    pub fn to_bits(&self) -> Vec<bool> {
        self.spins.iter().map(|&s| s < 0).collect()
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.spins
    }

    pub fn get(&self, i: usize) -> i8 {
        self.spins[i]
    }

    pub fn flip(&mut self, i: usize) {
        self.spins[i] = -self.spins[i];
    }

    /// Keeps the first `n` spins, dropping the rest.
    pub fn truncated(&self, n: usize) -> Self {
        SpinConfig {
            spins: self.spins[..n].to_vec(),
        }
    }
}

/// A sparse multilinear spin cost function with per-variable term
/// adjacency.
///
/// Immutable after construction; all operations are pure functions of
/// their inputs, so a problem can be shared freely across workers.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyProblem {
    num_vars: usize,
    terms: Vec<Term>,
    max_degree: usize,
    // Flat layouts for the hot kernels.
    term_starts: Vec<u32>,
    term_vars: Vec<u32>,
    coeffs: Vec<f64>,
    adj_starts: Vec<u32>,
    adj_terms: Vec<u32>,
}

impl PolyProblem {
    /// Builds a problem from raw terms.
    ///
    /// Indices are sorted into canonical order; terms with equal index
    /// sets are folded into one by summing coefficients (this is how any
    /// symmetric/asymmetric input convention is absorbed), and terms
    /// whose folded coefficient is exactly zero are dropped. A repeated
    /// index inside a single term is rejected: multilinearity assumes
    /// distinct variables per monomial.
    pub fn new(num_vars: usize, terms: Vec<Term>) -> Result<Self, Error> {
        let mut canonical: Vec<Term> = Vec::with_capacity(terms.len());
        for mut term in terms {
            if term.indices.is_empty() {
                return Err(Error::InvalidArgument("term with empty index list"));
            }
            term.indices.sort_unstable();
            for w in term.indices.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::InvalidArgument("repeated index within a term"));
                }
            }
            if let Some(&max) = term.indices.last() {
                if max as usize >= num_vars {
                    return Err(Error::IndexOutOfRange {
                        index: max as usize,
                        len: num_vars,
                    });
                }
            }
            // Fold into an existing term with the same index set, keeping
            // first-occurrence order.
            match canonical.iter_mut().find(|t| t.indices == term.indices) {
                Some(existing) => existing.coefficient += term.coefficient,
                None => canonical.push(term),
            }
        }
        canonical.retain(|t| t.coefficient != 0.0);
        Ok(Self::from_canonical(num_vars, canonical))
    }

    fn from_canonical(num_vars: usize, terms: Vec<Term>) -> Self {
        let max_degree = terms.iter().map(Term::degree).max().unwrap_or(0);

        let mut term_starts = Vec::with_capacity(terms.len() + 1);
        let mut term_vars = Vec::new();
        let mut coeffs = Vec::with_capacity(terms.len());
        term_starts.push(0u32);
        for t in &terms {
            term_vars.extend_from_slice(&t.indices);
            term_starts.push(term_vars.len() as u32);
            coeffs.push(t.coefficient);
        }

        let mut counts = vec![0u32; num_vars];
        for &v in &term_vars {
            counts[v as usize] += 1;
        }
        let mut adj_starts = Vec::with_capacity(num_vars + 1);
        adj_starts.push(0u32);
        for i in 0..num_vars {
            adj_starts.push(adj_starts[i] + counts[i]);
        }
        let mut cursor: Vec<u32> = adj_starts[..num_vars].to_vec();
        let mut adj_terms = vec![0u32; term_vars.len()];
        for (m, t) in terms.iter().enumerate() {
            for &v in &t.indices {
                adj_terms[cursor[v as usize] as usize] = m as u32;
                cursor[v as usize] += 1;
            }
        }

        PolyProblem {
            num_vars,
            terms,
            max_degree,
            term_starts,
            term_vars,
            coeffs,
            adj_starts,
            adj_terms,
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Indices of the terms containing variable `i`.
    pub fn adjacency(&self, i: usize) -> &[u32] {
        let lo = self.adj_starts[i] as usize;
        let hi = self.adj_starts[i + 1] as usize;
        &self.adj_terms[lo..hi]
    }

    #[inline]
    fn term_indices(&self, m: usize) -> &[u32] {
        let lo = self.term_starts[m] as usize;
        let hi = self.term_starts[m + 1] as usize;
        &self.term_vars[lo..hi]
    }

    fn check_len(&self, got: usize) -> Result<(), Error> {
        if got != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got,
            });
        }
        Ok(())
    }

    /// Exact energy `E(s) = -sum_m c_m prod_{i in m} s_i`.
    pub fn evaluate(&self, s: &SpinConfig) -> Result<f64, Error> {
        self.check_len(s.len())?;
        let spins = s.as_slice();
        let mut total = 0.0;
        for (m, &c) in self.coeffs.iter().enumerate() {
            let mut prod: i32 = 1;
            for &v in self.term_indices(m) {
                prod *= spins[v as usize] as i32;
            }
            total += c * prod as f64;
        }
        Ok(-total)
    }

    /// The multilinear extension of [`PolyProblem::evaluate`] to real
    /// arguments.
    pub fn evaluate_real(&self, x: &[f64]) -> Result<f64, Error> {
        self.check_len(x.len())?;
        let mut total = 0.0;
        for (m, &c) in self.coeffs.iter().enumerate() {
            let mut prod = c;
            for &v in self.term_indices(m) {
                prod *= x[v as usize];
            }
            total += prod;
        }
        Ok(-total)
    }

    /// Reference gradient `G_i(x) = -dE/dx_i`, computed per term by the
    /// product over the other member variables. Slow but unconditionally
    /// exact; this is the oracle for [`PolyProblem::gradient_fast`].
    pub fn gradient_direct(&self, x: &[f64]) -> Result<Vec<f64>, Error> {
        self.check_len(x.len())?;
        let mut g = vec![0.0; self.num_vars];
        for (m, &c) in self.coeffs.iter().enumerate() {
            let idx = self.term_indices(m);
            for (slot, &i) in idx.iter().enumerate() {
                let mut prod = c;
                for (other, &j) in idx.iter().enumerate() {
                    if other != slot {
                        prod *= x[j as usize];
                    }
                }
                g[i as usize] += prod;
            }
        }
        Ok(g)
    }

    /// Division-trick gradient: each term's full product is accumulated
    /// once into every member variable's slot, then slot `i` is divided
    /// by `x_i + eps`. Equals [`PolyProblem::gradient_direct`] wherever
    /// `x_i` is not so small that cancellation dominates.
    pub fn gradient_fast(&self, x: &[f64], eps: f64) -> Result<Vec<f64>, Error> {
        let mut g = vec![0.0; self.num_vars];
        self.gradient_fast_into(x, eps, &mut g)?;
        Ok(g)
    }

    pub(crate) fn gradient_fast_into(
        &self,
        x: &[f64],
        eps: f64,
        out: &mut [f64],
    ) -> Result<(), Error> {
        self.check_len(x.len())?;
        debug_assert_eq!(out.len(), self.num_vars);
        if !(eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive"));
        }
        out.fill(0.0);
        for (m, &c) in self.coeffs.iter().enumerate() {
            let idx = self.term_indices(m);
            let mut prod = c;
            for &v in idx {
                prod *= x[v as usize];
            }
            for &v in idx {
                out[v as usize] += prod;
            }
        }
        for (gi, &xi) in out.iter_mut().zip(x) {
            *gi /= xi + eps;
        }
        Ok(())
    }

    /// Exact discrete gradient on a spin vector, per
    /// `G_i(s) = s_i * sum_{m : i in m} c_m prod_{n in m} s_n`
    /// (the outer `s_i` cancels the `s_i` inside the product).
    pub fn gradient_discrete(&self, s: &SpinConfig) -> Result<Vec<f64>, Error> {
        let mut g = vec![0.0; self.num_vars];
        self.gradient_discrete_into(s.as_slice(), &mut g)?;
        Ok(g)
    }

    pub(crate) fn gradient_discrete_into(&self, spins: &[i8], out: &mut [f64]) -> Result<(), Error> {
        self.check_len(spins.len())?;
        debug_assert_eq!(out.len(), self.num_vars);
        out.fill(0.0);
        for (m, &c) in self.coeffs.iter().enumerate() {
            let idx = self.term_indices(m);
            let mut sign: i32 = 1;
            for &v in idx {
                sign *= spins[v as usize] as i32;
            }
            let prod = c * sign as f64;
            for &v in idx {
                out[v as usize] += prod;
            }
        }
        for (gi, &si) in out.iter_mut().zip(spins) {
            *gi *= si as f64;
        }
        Ok(())
    }

    /// Single-flip energy change `E(flip_i(s)) - E(s)`, computed from the
    /// adjacency of `i` in time proportional to its degree:
    /// `delta = 2 sum_{m : i in m} c_m prod_{n in m} s_n = 2 s_i G_i(s)`.
    pub fn delta_energy(&self, s: &SpinConfig, i: usize) -> Result<f64, Error> {
        self.check_len(s.len())?;
        if i >= self.num_vars {
            return Err(Error::IndexOutOfRange {
                index: i,
                len: self.num_vars,
            });
        }
        Ok(self.delta_energy_unchecked(s.as_slice(), i))
    }

    #[inline]
    pub(crate) fn delta_energy_unchecked(&self, spins: &[i8], i: usize) -> f64 {
        let mut sum = 0.0;
        for &m in self.adjacency(i) {
            let mut sign: i32 = 1;
            for &v in self.term_indices(m as usize) {
                sign *= spins[v as usize] as i32;
            }
            sum += self.coeffs[m as usize] * sign as f64;
        }
        2.0 * sum
    }
}

/// Result of [`exhaustive_minimum`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExhaustiveMinimum {
    pub energy: f64,
    /// Number of configurations attaining the minimum.
    pub count: u64,
    /// Minimizers, capped at [`exhaustive_minimum`]'s `keep` limit.
    pub minimizers: Vec<SpinConfig>,
    /// Set when more minimizers exist than were kept.
    pub truncated: bool,
}

/// Enumerates all `2^n` spin configurations (Gray-code order, energies
/// maintained by single-flip deltas) and returns the global minimum.
/// Exact for integer-valued energies such as parity polynomials; limited
/// to `n <= 30`.
pub fn exhaustive_minimum(problem: &PolyProblem, keep: usize) -> Result<ExhaustiveMinimum, Error> {
    let n = problem.num_vars();
    if n == 0 || n > 30 {
        return Err(Error::InvalidArgument(
            "exhaustive search needs 1 <= n <= 30",
        ));
    }
    let mut spins = SpinConfig {
        spins: vec![1; n],
    };
    let mut energy = problem.evaluate(&spins)?;
    let mut best = energy;
    let mut count: u64 = 1;
    let mut minimizers = vec![spins.clone()];
    let mut truncated = false;
    for t in 1u64..(1u64 << n) {
        let bit = t.trailing_zeros() as usize;
        energy += problem.delta_energy_unchecked(spins.as_slice(), bit);
        spins.flip(bit);
        if energy < best {
            best = energy;
            count = 1;
            minimizers.clear();
            minimizers.push(spins.clone());
            truncated = false;
        } else if energy == best {
            count += 1;
            if minimizers.len() < keep {
                minimizers.push(spins.clone());
            } else {
                truncated = true;
            }
        }
    }
    Ok(ExhaustiveMinimum {
        energy: best,
        count,
        minimizers,
        truncated,
    })
}
