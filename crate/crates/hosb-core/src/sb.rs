//! Ballistic and discrete simulated bifurcation for higher-order costs.
//!
//! Oscillator positions and momenta evolve under
//!
//! ```text
//! y_i <- y_i + [-(a0 - a(t)) x_i + c f_i] dt
//! x_i <- x_i + a0 y_i dt
//! ```
//!
//! integrated with the symplectic Euler method (momentum first, then
//! position with the new momentum), with perfectly inelastic walls at
//! `x_i = ±1`. Forces come from the continuous gradient for the
//! ballistic variant and from the discrete gradient of the position
//! signs for the discrete variant; `c` rescales the force term against
//! its root-mean-square. The bifurcation parameter `a(t)` ramps linearly
//! from 0 to `a0`, and the signs of the final positions are the
//! solution.

use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::math;
use crate::model::{PolyProblem, SpinConfig};
use crate::Error;

/// Force variant: continuous positions (ballistic) or their signs
/// (discrete).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SbVariant {
    Ballistic,
    Discrete,
}

/// How often the force normalization `c` is recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CSchedule {
    /// Recompute from the current forces at every step.
    #[default]
    PerStep,
    /// Compute once from the forces of the first step and keep it.
    FirstStep,
}

/// Parameters of one SB run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SbParams {
    /// Detuning constant; also the final value of the bifurcation ramp.
    pub a0: f64,
    /// Time step.
    pub dt: f64,
    /// Prefactor of the force normalization.
    pub c1: f64,
    /// Number of integration steps.
    pub n_steps: usize,
    pub variant: SbVariant,
    /// Regularizer of the division-trick gradient (ballistic only).
    pub eps: f64,
    pub c_schedule: CSchedule,
}

impl SbParams {
    pub fn ballistic(dt: f64, c1: f64, n_steps: usize) -> Self {
        SbParams {
            dt,
            c1,
            n_steps,
            variant: SbVariant::Ballistic,
            ..SbParams::default()
        }
    }

    pub fn discrete(dt: f64, c1: f64, n_steps: usize) -> Self {
        SbParams {
            dt,
            c1,
            n_steps,
            variant: SbVariant::Discrete,
            ..SbParams::default()
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if !(self.a0 > 0.0) {
            return Err(Error::InvalidArgument("a0 must be positive"));
        }
        if !(self.dt > 0.0) {
            return Err(Error::InvalidArgument("dt must be positive"));
        }
        if !(self.c1 > 0.0) {
            return Err(Error::InvalidArgument("c1 must be positive"));
        }
        if self.n_steps == 0 {
            return Err(Error::InvalidArgument("n_steps must be at least 1"));
        }
        if !(self.eps > 0.0) {
            return Err(Error::InvalidArgument("eps must be positive"));
        }
        Ok(())
    }
}

impl Default for SbParams {
    fn default() -> Self {
        SbParams {
            a0: 1.0,
            dt: 1.0,
            c1: 0.5,
            n_steps: 1000,
            variant: SbVariant::Ballistic,
            eps: 1e-14,
            c_schedule: CSchedule::PerStep,
        }
    }
}

/// Oscillator positions and momenta. After every step `|x_i| <= 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatorState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

impl OscillatorState {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.x.iter().chain(&self.y).all(|v| v.is_finite())
    }

    /// Current spins: signs of the positions with `sign(0) = +1`.
    pub fn spins(&self) -> SpinConfig {
        SpinConfig::from_signs(&self.x)
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub spins: SpinConfig,
    /// Energy of `spins` on the problem the run reports against.
    pub energy: f64,
    pub steps_used: usize,
    /// Whether `energy` matches the known optimum (within 1e-9), when
    /// one was provided.
    pub success: bool,
}

/// Energy slack accepted when comparing against a known optimum.
pub const SUCCESS_TOLERANCE: f64 = 1e-9;

impl RunResult {
    pub(crate) fn from_spins(
        problem: &PolyProblem,
        spins: SpinConfig,
        steps_used: usize,
        known_optimum: Option<f64>,
    ) -> Result<Self, Error> {
        let energy = problem.evaluate(&spins)?;
        let success = known_optimum.is_some_and(|opt| energy <= opt + SUCCESS_TOLERANCE);
        Ok(RunResult {
            spins,
            energy,
            steps_used,
            success,
        })
    }
}

/// Initial state: positions and momenta i.i.d. uniform on (-1, 1).
pub fn init_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<OscillatorState, Error> {
    if n == 0 {
        return Err(Error::InvalidArgument("state size must be at least 1"));
    }
    let mut draw = || loop {
        let v: f64 = rng.random_range(-1.0..1.0);
        // random_range samples the half-open [-1, 1); keep the interval open.
        if v != -1.0 {
            return v;
        }
    };
    let x = (0..n).map(|_| draw()).collect();
    let y = (0..n).map(|_| draw()).collect();
    Ok(OscillatorState { x, y })
}

/// Linear bifurcation ramp `a(k) = a0 * k / n_steps`, so `a(0) = 0` and
/// `a(n_steps) = a0`.
pub fn bifurcation_value(step: usize, params: &SbParams) -> f64 {
    params.a0 * step as f64 / params.n_steps as f64
}

/// Force normalization `c = c1 * ((1/nu) sum f_i^2)^{-1/2}`.
///
/// `nu` is the number of spin variables of the problem being solved and
/// must equal the force length. A mean square below 1e-30 returns the
/// capped value `c1 * 1e15` instead of dividing by zero.
pub fn normalization_factor(f: &[f64], c1: f64, nu: usize) -> Result<f64, Error> {
    if f.is_empty() {
        return Err(Error::InvalidArgument("force vector must be nonempty"));
    }
    if nu != f.len() {
        return Err(Error::InvalidArgument(
            "nu must equal the force vector length",
        ));
    }
    let mean_sq = f.iter().map(|&v| v * v).sum::<f64>() / nu as f64;
    if mean_sq < 1e-30 {
        return Ok(c1 * 1e15);
    }
    Ok(c1 / math::sqrt(mean_sq))
}

pub(crate) struct StepScratch {
    forces: Vec<f64>,
    spins: Vec<i8>,
    c_fixed: Option<f64>,
}

impl StepScratch {
    pub(crate) fn new(n: usize) -> Self {
        StepScratch {
            forces: vec![0.0; n],
            spins: vec![1; n],
            c_fixed: None,
        }
    }
}

pub(crate) fn sb_step_with(
    state: &mut OscillatorState,
    problem: &PolyProblem,
    params: &SbParams,
    a: f64,
    scratch: &mut StepScratch,
) -> Result<(), Error> {
    let n = problem.num_vars();
    match params.variant {
        SbVariant::Ballistic => {
            problem.gradient_fast_into(&state.x, params.eps, &mut scratch.forces)?;
        }
        SbVariant::Discrete => {
            for (s, &xi) in scratch.spins.iter_mut().zip(&state.x) {
                *s = math::sign_i8(xi);
            }
            problem.gradient_discrete_into(&scratch.spins, &mut scratch.forces)?;
        }
    }
    let c = match (params.c_schedule, scratch.c_fixed) {
        (CSchedule::FirstStep, Some(c)) => c,
        _ => {
            let c = normalization_factor(&scratch.forces, params.c1, n)?;
            if params.c_schedule == CSchedule::FirstStep {
                scratch.c_fixed = Some(c);
            }
            c
        }
    };
    let detune = params.a0 - a;
    for i in 0..n {
        state.y[i] += (-detune * state.x[i] + c * scratch.forces[i]) * params.dt;
        state.x[i] += params.a0 * state.y[i] * params.dt;
        if math::abs(state.x[i]) > 1.0 {
            state.x[i] = math::sign_i8(state.x[i]) as f64;
            state.y[i] = 0.0;
        }
    }
    Ok(())
}

/// One symplectic Euler step at bifurcation value `a`: forces, momentum,
/// position, then the inelastic walls. `step` only labels a numeric
/// failure; it does not affect the update.
pub fn sb_step(
    state: &mut OscillatorState,
    problem: &PolyProblem,
    params: &SbParams,
    a: f64,
    step: usize,
) -> Result<(), Error> {
    if state.len() != problem.num_vars() || state.y.len() != problem.num_vars() {
        return Err(Error::DimensionMismatch {
            expected: problem.num_vars(),
            got: state.len(),
        });
    }
    let mut scratch = StepScratch::new(problem.num_vars());
    sb_step_with(state, problem, params, a, &mut scratch)?;
    if !state.is_finite() {
        return Err(Error::NumericFailure { step });
    }
    Ok(())
}

/// Runs SB end to end: random initial state, `n_steps` integration steps
/// along the linear ramp, then the sign readout. Success is judged
/// against `known_optimum` when given.
pub fn run_sb<R: Rng + ?Sized>(
    problem: &PolyProblem,
    params: &SbParams,
    rng: &mut R,
    known_optimum: Option<f64>,
) -> Result<RunResult, Error> {
    params.validate()?;
    if problem.num_vars() == 0 {
        return Err(Error::InvalidArgument("problem must have variables"));
    }
    let mut state = init_state(problem.num_vars(), rng)?;
    let mut scratch = StepScratch::new(problem.num_vars());
    for k in 1..=params.n_steps {
        let a = bifurcation_value(k, params);
        sb_step_with(&mut state, problem, params, a, &mut scratch)?;
        if !state.is_finite() {
            return Err(Error::NumericFailure { step: k });
        }
    }
    RunResult::from_spins(problem, state.spins(), params.n_steps, known_optimum)
}
