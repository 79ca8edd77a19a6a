//! Simulated annealing applied directly to higher-order cost functions.
//!
//! One step is one full sequential sweep over the spins in ascending
//! index order. The inverse temperature rises linearly from zero to
//! `beta_final` across the sweeps, and a flip of spin `i` is accepted
//! when `beta * delta_E_i < -ln R` with `R` uniform on (0, 1). Accepted
//! flips take effect immediately, before the next variable is visited.

use rand::Rng;

use crate::math;
use crate::model::{PolyProblem, SpinConfig};
use crate::sb::RunResult;
use crate::Error;

/// Parameters of one SA run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaParams {
    /// Final inverse temperature of the linear ramp.
    pub beta_final: f64,
    /// Number of sweeps.
    pub n_steps: usize,
}

impl SaParams {
    pub fn new(beta_final: f64, n_steps: usize) -> Self {
        SaParams {
            beta_final,
            n_steps,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.beta_final > 0.0) {
            return Err(Error::InvalidArgument("beta_final must be positive"));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidArgument("n_steps must be at least 1"));
        }
        Ok(())
    }
}

impl Default for SaParams {
    fn default() -> Self {
        SaParams {
            beta_final: 2.0,
            n_steps: 1000,
        }
    }
}

/// The Metropolis-style acceptance rule `beta * delta_e < -ln r`.
///
/// Downhill moves (`delta_e < 0`) are always accepted since `-ln r > 0`;
/// at `beta = 0` every move is accepted.
#[inline]
pub fn accepts(beta: f64, delta_e: f64, r: f64) -> bool {
    beta * delta_e < -math::ln(r)
}

/// Per-sweep observations passed to the observer of
/// [`run_sa_observed`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepStats {
    /// 1-based sweep index.
    pub sweep: usize,
    /// Inverse temperature used during this sweep.
    pub beta: f64,
    /// Proposals with `delta_E > 0`.
    pub uphill_proposed: usize,
    /// Accepted proposals with `delta_E > 0`.
    pub uphill_accepted: usize,
    /// Total accepted flips in this sweep.
    pub accepted: usize,
    /// Energy after the sweep, maintained incrementally from accepted
    /// deltas.
    pub energy: f64,
}

/// Runs SA end to end. See [`run_sa_observed`] for the instrumented
/// variant.
pub fn run_sa<R: Rng + ?Sized>(
    problem: &PolyProblem,
    params: &SaParams,
    rng: &mut R,
    known_optimum: Option<f64>,
) -> Result<RunResult, Error> {
    run_sa_observed(problem, params, rng, known_optimum, |_| {})
}

/// Runs SA, invoking `observe` after every sweep.
///
/// Spins start uniformly random. Sweep `k` of `n_steps` uses
/// `beta = beta_final * k / n_steps` and visits the variables in fixed
/// ascending order; each proposal draws a fresh `R` on the open unit
/// interval.
pub fn run_sa_observed<R: Rng + ?Sized, F: FnMut(&SweepStats)>(
    problem: &PolyProblem,
    params: &SaParams,
    rng: &mut R,
    known_optimum: Option<f64>,
    mut observe: F,
) -> Result<RunResult, Error> {
    params.validate()?;
    let n = problem.num_vars();
    if n == 0 {
        return Err(Error::InvalidArgument("problem must have variables"));
    }
    let mut spins = SpinConfig::new((0..n).map(|_| if rng.random() { 1 } else { -1 }).collect())
        .expect("generated spins are unit");
    let mut energy = problem.evaluate(&spins)?;
    for sweep in 1..=params.n_steps {
        let beta = params.beta_final * sweep as f64 / params.n_steps as f64;
        let mut stats = SweepStats {
            sweep,
            beta,
            uphill_proposed: 0,
            uphill_accepted: 0,
            accepted: 0,
            energy,
        };
        for i in 0..n {
            let delta = problem.delta_energy_unchecked(spins.as_slice(), i);
            let r = draw_open_unit(rng);
            let uphill = delta > 0.0;
            if uphill {
                stats.uphill_proposed += 1;
            }
            if accepts(beta, delta, r) {
                spins.flip(i);
                energy += delta;
                stats.accepted += 1;
                if uphill {
                    stats.uphill_accepted += 1;
                }
            }
        }
        stats.energy = energy;
        observe(&stats);
    }
    RunResult::from_spins(problem, spins, params.n_steps, known_optimum)
}

/// Uniform draw on the open interval (0, 1), so `-ln R` is finite.
#[inline]
fn draw_open_unit<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    loop {
        let r: f64 = rng.random();
        if r > 0.0 {
            return r;
        }
    }
}
