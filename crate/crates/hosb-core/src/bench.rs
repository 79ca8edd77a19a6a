//! Benchmarking: success probabilities, step-to-solution, grid search,
//! and scaling fits.
//!
//! A benchmark run estimates the per-instance probability `P` of hitting
//! the known optimum within one run of `n_steps` steps, converts it to
//! the step-to-solution
//!
//! ```text
//! S = n_steps * log 0.01 / log(1 - P)
//! ```
//!
//! (the expected step count to reach the optimum with 99% probability),
//! aggregates per-instance values into medians with bootstrap error
//! bands, and fits `log10 S` against the variable count to obtain
//! scaling exponents.
//!
//! Seeds are derived as a pure function of (base seed, instance key, run
//! index), so results do not depend on worker count or scheduling.

use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error as ThisError;

use crate::math;
use crate::model::PolyProblem;
use crate::sa::{run_sa, SaParams};
use crate::sb::{run_sb, RunResult, SbParams, SbVariant};
use crate::xorsat::project_solution;
use crate::Error;

/// Solver tags: third-order SB/SA act on the cubic problem directly, the
/// `2*` tags act on its gadgetized quadratic form and project back.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Bsb3,
    Dsb3,
    Sa3,
    Bsb2,
    Dsb2,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Bsb3,
        Algorithm::Dsb3,
        Algorithm::Sa3,
        Algorithm::Bsb2,
        Algorithm::Dsb2,
    ];

    /// Canonical lowercase tag used on the command line and in CSV rows.
    pub fn tag(&self) -> &'static str {
        match self {
            Algorithm::Bsb3 => "3bsb",
            Algorithm::Dsb3 => "3dsb",
            Algorithm::Sa3 => "3sa",
            Algorithm::Bsb2 => "2bsb",
            Algorithm::Dsb2 => "2dsb",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Algorithm> {
        Algorithm::ALL.iter().copied().find(|a| a.tag() == tag)
    }

    /// Whether runs happen on the gadgetized quadratic problem.
    pub fn uses_gadget(&self) -> bool {
        matches!(self, Algorithm::Bsb2 | Algorithm::Dsb2)
    }

    pub fn is_sa(&self) -> bool {
        matches!(self, Algorithm::Sa3)
    }

    fn sb_variant(&self) -> Option<SbVariant> {
        match self {
            Algorithm::Bsb3 | Algorithm::Bsb2 => Some(SbVariant::Ballistic),
            Algorithm::Dsb3 | Algorithm::Dsb2 => Some(SbVariant::Discrete),
            Algorithm::Sa3 => None,
        }
    }
}

/// One point in parameter space. SB runs read `dt`/`c1`, SA runs read
/// `beta1`; both read `n_steps`. `a0` and `eps` keep their defaults
/// unless explicitly overridden.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    pub dt: f64,
    pub c1: f64,
    pub beta1: f64,
    pub n_steps: usize,
    pub a0: f64,
    pub eps: f64,
}

impl Default for ParamSet {
    fn default() -> Self {
        ParamSet {
            dt: 1.0,
            c1: 0.5,
            beta1: 2.0,
            n_steps: 1000,
            a0: 1.0,
            eps: 1e-14,
        }
    }
}

impl ParamSet {
    /// The tuned values reported with the reference results:
    /// `(dt, c1) = (1.1, 0.7)` for 3bSB, `(0.7, 1.1)` for 3dSB,
    /// `(0.8, 0.9)` for 2bSB, `(0.7, 1.6)` for 2dSB, and `beta1 = 2`
    /// for 3SA.
    pub fn paper_defaults(algo: Algorithm) -> ParamSet {
        let mut p = ParamSet::default();
        match algo {
            Algorithm::Bsb3 => {
                p.dt = 1.1;
                p.c1 = 0.7;
            }
            Algorithm::Dsb3 => {
                p.dt = 0.7;
                p.c1 = 1.1;
            }
            Algorithm::Bsb2 => {
                p.dt = 0.8;
                p.c1 = 0.9;
            }
            Algorithm::Dsb2 => {
                p.dt = 0.7;
                p.c1 = 1.6;
            }
            Algorithm::Sa3 => {
                p.beta1 = 2.0;
            }
        }
        p
    }

    pub fn with_steps(mut self, n_steps: usize) -> Self {
        self.n_steps = n_steps;
        self
    }

    fn to_sb(self, variant: SbVariant) -> SbParams {
        SbParams {
            a0: self.a0,
            dt: self.dt,
            c1: self.c1,
            n_steps: self.n_steps,
            variant,
            eps: self.eps,
            ..SbParams::default()
        }
    }

    fn to_sa(self) -> SaParams {
        SaParams::new(self.beta1, self.n_steps)
    }
}

/// Shipped `(dt, c1)` grid per SB algorithm; the tuned reference pair is
/// always a member.
pub fn default_pair_grid(algo: Algorithm) -> Vec<(f64, f64)> {
    match algo {
        Algorithm::Bsb3 => [(1.1, 0.7), (0.9, 0.5), (1.3, 0.9)].to_vec(),
        Algorithm::Dsb3 => [(0.7, 1.1), (0.5, 0.9), (0.9, 1.3)].to_vec(),
        Algorithm::Bsb2 => [(0.8, 0.9), (0.6, 0.7), (1.0, 1.1)].to_vec(),
        Algorithm::Dsb2 => [(0.7, 1.6), (0.5, 1.2), (0.9, 2.0)].to_vec(),
        Algorithm::Sa3 => Vec::new(),
    }
}

/// Shipped `beta1` grid for 3SA; contains the reference value 2.
pub fn default_beta_grid() -> Vec<f64> {
    [1.0, 2.0, 4.0].to_vec()
}

/// Everything needed to run one instance under any algorithm tag.
#[derive(Debug, Clone, Copy)]
pub struct BenchTask<'a> {
    /// Stable identifier reported in records.
    pub instance_id: &'a str,
    /// Key for seed derivation; use [`instance_key`] of the id.
    pub instance_key: u64,
    /// The cubic problem; energies and success are reported against it.
    pub problem: &'a PolyProblem,
    /// Gadgetized form, required for the `2*` algorithms.
    pub gadget: Option<&'a PolyProblem>,
    /// Certified optimum (planted instances: `-N`).
    pub known_optimum: f64,
}

/// Per-(instance, parameter) benchmark outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub instance_id: String,
    pub algorithm: Algorithm,
    /// Variable count of the original problem.
    pub n: usize,
    pub dt: Option<f64>,
    pub c1: Option<f64>,
    pub beta1: Option<f64>,
    pub n_steps: usize,
    pub runs: usize,
    pub successes: usize,
    /// Estimated success probability `successes / runs`.
    pub p: f64,
    /// Step-to-solution; infinite when no run succeeded.
    pub s: f64,
    /// Set when `runs * p < 10`, flagging unreliable statistics.
    pub nr_p_warning: bool,
}

const SPLITMIX_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(SPLITMIX_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Pure seed derivation: `(base seed, instance key, run index)` fully
/// determine a run's RNG stream, making distributed execution
/// reproducible.
pub fn derive_seed(base_seed: u64, instance_key: u64, run_index: u64) -> u64 {
    let mut s = splitmix64(base_seed);
    s = splitmix64(s ^ instance_key);
    splitmix64(s ^ run_index)
}

/// FNV-1a hash of an instance identifier, the canonical instance key.
pub fn instance_key(id: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &byte in id.as_bytes() {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Executes one run of `algo` with the given derived seed.
pub fn run_once(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    seed: u64,
) -> Result<RunResult, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match algo {
        Algorithm::Sa3 => run_sa(
            task.problem,
            &params.to_sa(),
            &mut rng,
            Some(task.known_optimum),
        ),
        _ => {
            let variant = algo.sb_variant().expect("SB tags carry a variant");
            if algo.uses_gadget() {
                let gadget = task.gadget.ok_or(Error::InvalidArgument(
                    "2* algorithms need the gadgetized problem",
                ))?;
                let raw = run_sb(gadget, &params.to_sb(variant), &mut rng, None)?;
                let projected = project_solution(&raw.spins, task.problem.num_vars())?;
                RunResult::from_spins(
                    task.problem,
                    projected,
                    raw.steps_used,
                    Some(task.known_optimum),
                )
            } else {
                run_sb(
                    task.problem,
                    &params.to_sb(variant),
                    &mut rng,
                    Some(task.known_optimum),
                )
            }
        }
    }
}

/// Whether the run with the given index succeeds. Its seed is derived
/// from `(base_seed, task.instance_key, run_index)`, so any partition of
/// the run indices across workers reproduces the same outcomes.
pub fn success_of_run(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    base_seed: u64,
    run_index: u64,
) -> Result<bool, Error> {
    let seed = derive_seed(base_seed, task.instance_key, run_index);
    Ok(run_once(task, algo, params, seed)?.success)
}

/// Assembles a record from an externally aggregated success count.
pub fn record_from_successes(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    n_runs: usize,
    successes: usize,
) -> BenchRecord {
    debug_assert!(successes <= n_runs);
    let p = successes as f64 / n_runs as f64;
    let s = step_to_solution(params.n_steps, p).expect("p is a valid probability");
    BenchRecord {
        instance_id: String::from(task.instance_id),
        algorithm: algo,
        n: task.problem.num_vars(),
        dt: (!algo.is_sa()).then_some(params.dt),
        c1: (!algo.is_sa()).then_some(params.c1),
        beta1: algo.is_sa().then_some(params.beta1),
        n_steps: params.n_steps,
        runs: n_runs,
        successes,
        p,
        s,
        nr_p_warning: (n_runs as f64) * p < 10.0,
    }
}

/// Runs `n_runs` independent runs with derived seeds and estimates the
/// success probability. Flags records with `runs * p < 10` as
/// statistically unreliable.
pub fn estimate_p(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    n_runs: usize,
    base_seed: u64,
) -> Result<BenchRecord, Error> {
    if n_runs == 0 {
        return Err(Error::InvalidArgument("n_runs must be at least 1"));
    }
    let mut successes = 0;
    for run_index in 0..n_runs as u64 {
        if success_of_run(task, algo, params, base_seed, run_index)? {
            successes += 1;
        }
    }
    Ok(record_from_successes(task, algo, params, n_runs, successes))
}

/// Step-to-solution `S = n_steps * log 0.01 / log(1 - p)`.
///
/// `p = 0` yields infinity; the repetition factor is floored at 1, so
/// `p >= 0.99` (including `p = 1`) yields exactly `n_steps`.
pub fn step_to_solution(n_steps: usize, p: f64) -> Result<f64, Error> {
    if n_steps == 0 {
        return Err(Error::InvalidArgument("n_steps must be at least 1"));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument("p must lie in [0, 1]"));
    }
    if p == 0.0 {
        return Ok(f64::INFINITY);
    }
    if p == 1.0 {
        return Ok(n_steps as f64);
    }
    let repetitions = math::ln(0.01) / math::ln(1.0 - p);
    Ok(n_steps as f64 * repetitions.max(1.0))
}

/// Lower median with infinities sorting above all finite values.
///
/// The lower median makes the aggregate infinite exactly when more than
/// half of the instances have `p = 0`.
pub fn median_s(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty set");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("step-to-solution is never NaN"));
    sorted[(sorted.len() - 1) / 2]
}

/// Median with a bootstrap band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianWithBand {
    pub median: f64,
    /// 16th percentile of the bootstrap medians.
    pub lo: f64,
    /// 84th percentile of the bootstrap medians.
    pub hi: f64,
}

/// Median of per-instance step-to-solution with bootstrap error bars:
/// each instance's success count is resampled binomially from
/// `(runs, p)` and the median recomputed, `n_boot` times; the band is
/// the 16th-84th percentile range of the resampled medians.
pub fn median_s_with_band(records: &[BenchRecord], n_boot: usize, seed: u64) -> MedianWithBand {
    assert!(!records.is_empty(), "median of an empty record set");
    let observed: Vec<f64> = records.iter().map(|r| r.s).collect();
    let median = median_s(&observed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut medians = Vec::with_capacity(n_boot);
    let mut resampled = Vec::with_capacity(records.len());
    for _ in 0..n_boot {
        resampled.clear();
        for r in records {
            let hits = binomial_draw(&mut rng, r.runs, r.p);
            let p = hits as f64 / r.runs as f64;
            resampled.push(step_to_solution(r.n_steps, p).expect("valid probability"));
        }
        medians.push(median_s(&resampled));
    }
    medians.sort_by(|a, b| a.partial_cmp(b).expect("never NaN"));
    MedianWithBand {
        median,
        lo: percentile_sorted(&medians, 0.16),
        hi: percentile_sorted(&medians, 0.84),
    }
}

fn binomial_draw<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> usize {
    (0..n).filter(|_| rng.random::<f64>() < p).count()
}

fn percentile_sorted(sorted: &[f64], q: f64) -> f64 {
    let idx = math::round((sorted.len() - 1) as f64 * q) as usize;
    sorted[idx.min(sorted.len() - 1)]
}

/// One evaluated grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPoint {
    pub params: ParamSet,
    /// Median over instances of the per-instance step-to-solution.
    pub median_s: f64,
    pub records: Vec<BenchRecord>,
}

/// Result of a grid search; `table` preserves grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    pub best_index: usize,
    pub table: Vec<GridPoint>,
}

impl GridOutcome {
    pub fn best(&self) -> &GridPoint {
        &self.table[self.best_index]
    }
}

#[derive(Debug, ThisError)]
pub enum GridSearchError {
    #[error("parameter grid is empty")]
    EmptyGrid,
    #[error("every grid point has infinite median step-to-solution")]
    AllInfinite { table: Vec<GridPoint> },
    #[error(transparent)]
    Run(#[from] Error),
}

/// Evaluates the median step-to-solution at every grid point and returns
/// the argmin together with the full table. Ties break toward smaller
/// `n_steps`, then smaller `dt` (`beta1` for SA), then smaller `c1`.
pub fn grid_search(
    tasks: &[BenchTask],
    algo: Algorithm,
    grid: &[ParamSet],
    n_runs: usize,
    base_seed: u64,
) -> Result<GridOutcome, GridSearchError> {
    if tasks.is_empty() {
        return Err(GridSearchError::Run(Error::InvalidArgument(
            "no instances to benchmark",
        )));
    }
    grid_search_by(grid, |params| {
        let mut records = Vec::with_capacity(tasks.len());
        for task in tasks {
            records.push(estimate_p(task, algo, params, n_runs, base_seed)?);
        }
        Ok(records)
    })
}

/// Grid search over an arbitrary evaluator; the backbone of
/// [`grid_search`] and directly testable against synthetic landscapes.
pub fn grid_search_by<F>(grid: &[ParamSet], mut eval: F) -> Result<GridOutcome, GridSearchError>
where
    F: FnMut(&ParamSet) -> Result<Vec<BenchRecord>, Error>,
{
    if grid.is_empty() {
        return Err(GridSearchError::EmptyGrid);
    }
    let mut table = Vec::with_capacity(grid.len());
    for params in grid {
        let records = eval(params)?;
        let values: Vec<f64> = records.iter().map(|r| r.s).collect();
        table.push(GridPoint {
            params: *params,
            median_s: median_s(&values),
            records,
        });
    }
    let mut best_index = 0;
    for i in 1..table.len() {
        if point_key(&table[i]) < point_key(&table[best_index]) {
            best_index = i;
        }
    }
    if table[best_index].median_s.is_infinite() {
        return Err(GridSearchError::AllInfinite { table });
    }
    Ok(GridOutcome { best_index, table })
}

fn point_key(point: &GridPoint) -> (f64, usize, f64, f64, f64) {
    let p = &point.params;
    (point.median_s, p.n_steps, p.dt, p.beta1, p.c1)
}

/// Least-squares fit of `log10 S = alpha * N + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingFit {
    /// Slope per spin variable.
    pub alpha: f64,
    /// Intercept in log10 steps.
    pub intercept: f64,
    pub alpha_sd: f64,
    pub intercept_sd: f64,
    /// Range of N actually used.
    pub n_min: f64,
    pub n_max: f64,
    pub n_points: usize,
}

impl ScalingFit {
    /// `alpha` in the value(sd-digit) convention, e.g. `0.0355(2)`.
    pub fn alpha_report(&self) -> String {
        format_value_sd(self.alpha, self.alpha_sd)
    }

    pub fn intercept_report(&self) -> String {
        format_value_sd(self.intercept, self.intercept_sd)
    }
}

/// Ordinary least squares of `log10 S` against `N` over the finite
/// points. Standard deviations come from the usual regression variance
/// formulas; at least 3 finite points are required.
pub fn fit_scaling(points: &[(f64, f64)]) -> Result<ScalingFit, Error> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|(_, s)| s.is_finite() && *s > 0.0)
        .map(|&(n, s)| (n, math::log10(s)))
        .collect();
    let k = usable.len();
    if k < 3 {
        return Err(Error::InsufficientData { needed: 3, got: k });
    }
    let kf = k as f64;
    let mean_x = usable.iter().map(|(x, _)| x).sum::<f64>() / kf;
    let mean_y = usable.iter().map(|(_, y)| y).sum::<f64>() / kf;
    let sxx: f64 = usable.iter().map(|(x, _)| (x - mean_x) * (x - mean_x)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidArgument(
            "fit requires at least two distinct N values",
        ));
    }
    let sxy: f64 = usable
        .iter()
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let alpha = sxy / sxx;
    let intercept = mean_y - alpha * mean_x;
    let sse: f64 = usable
        .iter()
        .map(|(x, y)| {
            let r = y - (alpha * x + intercept);
            r * r
        })
        .sum();
    let variance = (sse / (kf - 2.0)).max(0.0);
    let alpha_sd = math::sqrt(variance / sxx);
    let intercept_sd = math::sqrt(variance * (1.0 / kf + mean_x * mean_x / sxx));
    let n_min = usable.iter().map(|(x, _)| *x).fold(f64::INFINITY, f64::min);
    let n_max = usable
        .iter()
        .map(|(x, _)| *x)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ScalingFit {
        alpha,
        intercept,
        alpha_sd,
        intercept_sd,
        n_min,
        n_max,
        n_points: k,
    })
}

/// Formats `value(sd)` with the standard deviation compressed to one
/// significant digit in parentheses, e.g. `(0.0355, 0.0002)` to
/// `"0.0355(2)"`. A vanishing sd (relative to the value) prints the
/// plain value.
pub fn format_value_sd(value: f64, sd: f64) -> String {
    use core::fmt::Write;

    let mut out = String::new();
    if !(sd > math::abs(value) * 1e-12 + f64::MIN_POSITIVE) || !sd.is_finite() {
        let _ = write!(out, "{value}");
        return out;
    }
    let mut exp = math::floor(math::log10(sd)) as i32;
    let mut digit = math::round(sd / math::powi(10.0, exp)) as i64;
    if digit == 10 {
        digit = 1;
        exp += 1;
    }
    if exp <= 0 {
        let decimals = (-exp) as usize;
        let _ = write!(out, "{value:.decimals$}({digit})");
    } else {
        // sd >= 10: round the value to the sd's leading decade.
        let scale = math::powi(10.0, exp);
        let rounded = math::round(value / scale) * scale;
        let paren = digit * math::powi(10.0, exp) as i64;
        let _ = write!(out, "{rounded:.0}({paren})");
    }
    out
}

/// One-sided sign test: p-value of seeing at least `wins` successes in
/// `trials` fair coin flips.
pub fn sign_test_p(wins: usize, trials: usize) -> f64 {
    assert!(wins <= trials, "wins cannot exceed trials");
    // P(X >= wins) = sum_{i >= wins} C(n, i) / 2^n, accumulated in
    // log-free f64 arithmetic (n is small here).
    let n = trials as f64;
    let mut coeff = 1.0; // C(n, 0)
    let mut total = 0.0;
    for i in 0..=trials {
        if i >= wins {
            total += coeff;
        }
        coeff *= (n - i as f64) / (i as f64 + 1.0);
    }
    (total * math::powi(0.5, trials as i32)).min(1.0)
}

/// Paired one-sided sign test that `a` is stochastically smaller than
/// `b`; ties (including both infinite) are dropped. Returns `None` when
/// every pair is tied.
pub fn paired_sign_test(a: &[f64], b: &[f64]) -> Option<f64> {
    assert_eq!(a.len(), b.len(), "paired test needs equal-length samples");
    let mut wins = 0;
    let mut trials = 0;
    for (&x, &y) in a.iter().zip(b) {
        if x == y {
            continue;
        }
        trials += 1;
        if x < y {
            wins += 1;
        }
    }
    (trials > 0).then(|| sign_test_p(wins, trials))
}
