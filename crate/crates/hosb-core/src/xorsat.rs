//! Planted three-regular 3-XORSAT (3R3X) instances.
//!
//! An instance has N variables and N parity clauses. Each clause picks
//! three distinct variables; across clauses, each of the three column
//! positions is a permutation of the variables, so every variable sits in
//! exactly three clauses. Parities are planted: a random assignment `xi`
//! is drawn first and the clause parities are set so `xi` satisfies all
//! of them, which certifies the polynomial optimum `E = -N`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gf2::{self, Gf2Matrix};
use crate::model::{PolyProblem, SpinConfig, Term};
use crate::Error;

/// Default retry budget for [`generate_3r3x`].
pub const DEFAULT_MAX_ATTEMPTS: usize = 100_000;

/// A three-regular 3-XORSAT instance, optionally carrying its planted
/// solution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Xorsat3Instance {
    n: usize,
    clauses: Vec<[u32; 3]>,
    parities: Vec<bool>,
    planted: Option<Vec<bool>>,
}

impl Xorsat3Instance {
    /// Assembles an instance from parts and validates every structural
    /// invariant (see [`Xorsat3Instance::validate`]).
    pub fn new(
        n: usize,
        clauses: Vec<[u32; 3]>,
        parities: Vec<bool>,
        planted: Option<Vec<bool>>,
    ) -> Result<Self, Error> {
        let inst = Xorsat3Instance {
            n,
            clauses,
            parities,
            planted,
        };
        inst.validate()?;
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Clause rows `(v_m1, v_m2, v_m3)`.
    pub fn clauses(&self) -> &[[u32; 3]] {
        &self.clauses
    }

    /// Parity bits, one per clause.
    pub fn parities(&self) -> &[bool] {
        &self.parities
    }

    pub fn planted(&self) -> Option<&[bool]> {
        self.planted.as_deref()
    }

    /// Checks every structural invariant:
    /// each column position is a permutation of the variables, indices
    /// within a clause are distinct, clause index sets are pairwise
    /// distinct, and a planted assignment (when present) satisfies every
    /// parity.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.n;
        if self.clauses.len() != n {
            return Err(Error::InvalidArgument("clause count must equal n"));
        }
        if self.parities.len() != n {
            return Err(Error::InvalidArgument("parity count must equal n"));
        }
        for col in 0..3 {
            let mut seen = vec![false; n];
            for clause in &self.clauses {
                let v = clause[col] as usize;
                if v >= n || seen[v] {
                    return Err(Error::InvalidArgument(
                        "clause column is not a permutation of the variables",
                    ));
                }
                seen[v] = true;
            }
        }
        if !clauses_valid(&self.clauses) {
            return Err(Error::InvalidArgument(
                "clause indices must be distinct within and across clauses",
            ));
        }
        if let Some(xi) = &self.planted {
            if xi.len() != n {
                return Err(Error::InvalidArgument("planted length must equal n"));
            }
            let b = self.incidence_matrix().mul_vec(xi)?;
            if b != self.parities {
                return Err(Error::InvalidArgument(
                    "planted assignment does not satisfy the parities",
                ));
            }
        }
        Ok(())
    }

    /// The M x N incidence matrix A of the parity system `A xi = b`.
    pub fn incidence_matrix(&self) -> Gf2Matrix {
        let mut a = Gf2Matrix::zero(self.n, self.n);
        for (m, clause) in self.clauses.iter().enumerate() {
            for &v in clause {
                a.set(m, v as usize, true);
            }
        }
        a
    }

    /// Maps the instance to its cost polynomial: one degree-3 term per
    /// clause with coefficient `(-1)^{b_m}`. The energy then satisfies
    /// `E(s) >= -n`, with equality exactly on satisfying assignments.
    pub fn to_polynomial(&self) -> PolyProblem {
        let terms = self
            .clauses
            .iter()
            .zip(&self.parities)
            .map(|(clause, &b)| {
                let coeff = if b { -1.0 } else { 1.0 };
                Term::new(coeff, clause.to_vec())
            })
            .collect();
        PolyProblem::new(self.n, terms).expect("validated instance maps to a valid polynomial")
    }

    /// The planted ground state as spins, `s_i = (-1)^{xi_i}`.
    pub fn planted_spins(&self) -> Option<SpinConfig> {
        self.planted.as_deref().map(SpinConfig::from_bits)
    }

    /// Solves the parity system exactly; for a planted instance this is
    /// the ground-state oracle.
    pub fn solve_exact(&self) -> gf2::Gf2Solution {
        gf2::solve(&self.incidence_matrix(), &self.parities)
            .expect("incidence matrix dimensions match parities")
    }
}

fn clauses_valid(clauses: &[[u32; 3]]) -> bool {
    let mut sets: Vec<[u32; 3]> = Vec::with_capacity(clauses.len());
    for clause in clauses {
        let mut sorted = *clause;
        sorted.sort_unstable();
        if sorted[0] == sorted[1] || sorted[1] == sorted[2] {
            return false;
        }
        sets.push(sorted);
    }
    sets.sort_unstable();
    sets.windows(2).all(|w| w[0] != w[1])
}

/// Generates a planted 3R3X instance.
///
/// Draws three independent uniform random permutations as the clause
/// columns and retries wholesale until indices are distinct within every
/// clause and clause index sets are pairwise distinct. The planted
/// assignment is drawn uniformly and the parities are derived from it, so
/// the system is satisfiable by construction.
pub fn generate_3r3x<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Xorsat3Instance, Error> {
    generate_3r3x_bounded(n, rng, DEFAULT_MAX_ATTEMPTS)
}

/// [`generate_3r3x`] with an explicit retry budget.
pub fn generate_3r3x_bounded<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    max_attempts: usize,
) -> Result<Xorsat3Instance, Error> {
    if n < 4 {
        return Err(Error::InvalidArgument("3R3X generation requires n >= 4"));
    }
    let mut perm: [Vec<u32>; 3] = core::array::from_fn(|_| (0..n as u32).collect());
    for _ in 0..max_attempts {
        for p in perm.iter_mut() {
            p.shuffle(rng);
        }
        let clauses: Vec<[u32; 3]> = (0..n)
            .map(|m| [perm[0][m], perm[1][m], perm[2][m]])
            .collect();
        if !clauses_valid(&clauses) {
            continue;
        }
        let planted: Vec<bool> = (0..n).map(|_| rng.random()).collect();
        let parities: Vec<bool> = clauses
            .iter()
            .map(|c| c.iter().fold(false, |acc, &v| acc ^ planted[v as usize]))
            .collect();
        return Ok(Xorsat3Instance {
            n,
            clauses,
            parities,
            planted: Some(planted),
        });
    }
    Err(Error::GenerationFailure {
        n,
        attempts: max_attempts,
    })
}

/// Decomposes cubic terms into quadratic/linear ones with one ancillary
/// spin per cubic term.
///
/// A cubic energy contribution `-(-1)^b s1 s2 s3` (model coefficient
/// `K = (-1)^b`) is replaced by the eight-term block
///
/// ```text
/// h (s1 + s2 + s3) + h~ s~ + J (s1 s2 + s2 s3 + s3 s1) + J~ (s1 + s2 + s3) s~
/// ```
///
/// with `J = 1/4`, `J~ = K/2`, `h = -K/4`, `h~ = -1/2`, whose minimum
/// over the ancilla `s~` is -1 exactly when `s1 s2 s3 = K` and -1/2
/// otherwise. Degree-1 and degree-2 terms pass through unchanged. The
/// ancilla for the j-th cubic term (in term order) gets index
/// `num_vars + j`, so a gadgetized 3R3X instance has 2N variables.
pub fn gadgetize(problem: &PolyProblem) -> Result<PolyProblem, Error> {
    let n = problem.num_vars();
    let n_cubic = problem.terms().iter().filter(|t| t.degree() == 3).count();
    let mut terms: Vec<Term> = Vec::with_capacity(problem.num_terms() * 8);
    let mut next_ancilla = n as u32;
    for term in problem.terms() {
        match term.degree() {
            1 | 2 => terms.push(term.clone()),
            3 => {
                let k = term.coefficient;
                if k != 1.0 && k != -1.0 {
                    return Err(Error::UnsupportedReduction(
                        "cubic coefficient must be +1 or -1",
                    ));
                }
                let anc = next_ancilla;
                next_ancilla += 1;
                let [v1, v2, v3] = [term.indices[0], term.indices[1], term.indices[2]];
                // Model coefficients are the negated gadget coefficients
                // because evaluate() carries the global minus sign.
                for v in [v1, v2, v3] {
                    terms.push(Term::new(k / 4.0, vec![v])); // -h
                    terms.push(Term::new(-k / 2.0, vec![v, anc])); // -J~
                }
                terms.push(Term::new(0.5, vec![anc])); // -h~
                terms.push(Term::new(-0.25, vec![v1, v2])); // -J
                terms.push(Term::new(-0.25, vec![v2, v3]));
                terms.push(Term::new(-0.25, vec![v1, v3]));
            }
            _ => {
                return Err(Error::UnsupportedReduction(
                    "gadget reduction requires degree <= 3",
                ));
            }
        }
    }
    PolyProblem::new(n + n_cubic, terms)
}

/// Drops ancillary spins from a gadget-problem solution, keeping the
/// first `n_original` spins.
pub fn project_solution(gadget_solution: &SpinConfig, n_original: usize) -> Result<SpinConfig, Error> {
    if gadget_solution.len() < n_original {
        return Err(Error::DimensionMismatch {
            expected: n_original,
            got: gadget_solution.len(),
        });
    }
    Ok(gadget_solution.truncated(n_original))
}
