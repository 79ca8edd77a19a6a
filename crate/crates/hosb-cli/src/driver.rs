//! Instance loading and the worker pool for benchmark runs.
//!
//! Parallelism never changes results: run seeds are a pure function of
//! (base seed, instance key, run index) and success counting is
//! order-independent, so any partition of the run indices across workers
//! aggregates to the identical record.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hosb_core::bench::{
    instance_key, record_from_successes, success_of_run, Algorithm, BenchRecord, BenchTask,
    ParamSet,
};
use hosb_core::model::PolyProblem;
use hosb_core::xorsat::{gadgetize, Xorsat3Instance};

use crate::formats::{read_pubo, read_xorsat3, sniff_kind, FileKind};

/// A solvable instance loaded from disk.
pub struct LoadedInstance {
    /// File stem; doubles as the instance id in records and seeds.
    pub id: String,
    pub path: PathBuf,
    pub problem: PolyProblem,
    /// Present for `xorsat3` files (and synthesized on demand for the
    /// `2*` algorithms).
    pub instance: Option<Xorsat3Instance>,
    /// `-N` for planted files; otherwise supplied externally.
    pub known_optimum: Option<f64>,
    pub gadget: Option<PolyProblem>,
}

impl LoadedInstance {
    pub fn task(&self) -> Result<BenchTask<'_>> {
        let Some(opt) = self.known_optimum else {
            bail!(
                "{}: no certified optimum (planted xorsat3 file or --target required)",
                self.path.display()
            );
        };
        Ok(BenchTask {
            instance_id: &self.id,
            instance_key: instance_key(&self.id),
            problem: &self.problem,
            gadget: self.gadget.as_ref(),
            known_optimum: opt,
        })
    }
}

/// Reads a `pubo` or `xorsat3` file and prepares it for `algo` (building
/// the gadget form when needed).
pub fn load_instance(path: &Path, algo: Option<Algorithm>, target: Option<f64>) -> Result<LoadedInstance> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let kind = sniff_kind(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".to_string());
    if id.contains(',') {
        bail!("{}: instance ids may not contain commas", path.display());
    }
    let (problem, instance, known_optimum) = match kind {
        FileKind::Xorsat3 => {
            let inst =
                read_xorsat3(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            let problem = inst.to_polynomial();
            // A planted instance certifies E = -N; an unplanted but
            // consistent parity system certifies it too.
            let optimum = if inst.planted().is_some() || inst.solve_exact().solution.is_some() {
                Some(-(inst.n() as f64))
            } else {
                target
            };
            (problem, Some(inst), optimum)
        }
        FileKind::Pubo => {
            let problem =
                read_pubo(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
            (problem, None, target)
        }
    };
    let gadget = match algo {
        Some(a) if a.uses_gadget() => Some(
            gadgetize(&problem)
                .with_context(|| format!("{}: gadget reduction failed", path.display()))?,
        ),
        _ => None,
    };
    Ok(LoadedInstance {
        id,
        path: path.to_path_buf(),
        problem,
        instance,
        known_optimum,
        gadget,
    })
}

/// Collects instance paths from explicit files plus an optional
/// directory scan, sorted by file name for deterministic ordering.
pub fn collect_instance_paths(files: &[PathBuf], dir: Option<&Path>) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = files.to_vec();
    if let Some(dir) = dir {
        for entry in std::fs::read_dir(dir)
            .with_context(|| format!("cannot read directory {}", dir.display()))?
        {
            let path = entry?.path();
            let ext = path.extension().and_then(|e| e.to_str());
            if matches!(ext, Some("xorsat") | Some("pubo")) {
                paths.push(path);
            }
        }
    }
    paths.sort();
    paths.dedup();
    if paths.is_empty() {
        bail!("no instance files given (pass files or --dir)");
    }
    Ok(paths)
}

/// Counts successful runs, fanning the run indices out across `workers`
/// threads. Identical to the serial loop for every worker count.
pub fn count_successes_parallel(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    n_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<usize> {
    let workers = workers.max(1).min(n_runs.max(1));
    if workers == 1 {
        let mut successes = 0;
        for run in 0..n_runs as u64 {
            if success_of_run(task, algo, params, base_seed, run)? {
                successes += 1;
            }
        }
        return Ok(successes);
    }
    let chunk = n_runs.div_ceil(workers);
    let totals = std::thread::scope(|scope| {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let lo = w * chunk;
            let hi = ((w + 1) * chunk).min(n_runs);
            handles.push(scope.spawn(move || -> Result<usize, hosb_core::Error> {
                let mut successes = 0;
                for run in lo..hi {
                    if success_of_run(task, algo, params, base_seed, run as u64)? {
                        successes += 1;
                    }
                }
                Ok(successes)
            }));
        }
        handles
            .into_iter()
            .map(|h| h.join().expect("bench worker panicked"))
            .collect::<Result<Vec<usize>, _>>()
    })?;
    Ok(totals.into_iter().sum())
}

/// Parallel version of `estimate_p`: same record, any worker count.
pub fn estimate_p_parallel(
    task: &BenchTask,
    algo: Algorithm,
    params: &ParamSet,
    n_runs: usize,
    base_seed: u64,
    workers: usize,
) -> Result<BenchRecord> {
    if n_runs == 0 {
        bail!("--runs must be at least 1");
    }
    let successes = count_successes_parallel(task, algo, params, n_runs, base_seed, workers)?;
    Ok(record_from_successes(task, algo, params, n_runs, successes))
}

/// Cross product of parameter values and step counts, in deterministic
/// grid order (steps vary fastest).
pub fn expand_grid(
    algo: Algorithm,
    pairs: &[(f64, f64)],
    betas: &[f64],
    steps: &[usize],
    base: ParamSet,
) -> Vec<ParamSet> {
    let mut grid = Vec::new();
    if algo.is_sa() {
        for &beta1 in betas {
            for &n_steps in steps {
                grid.push(ParamSet {
                    beta1,
                    n_steps,
                    ..base
                });
            }
        }
    } else {
        for &(dt, c1) in pairs {
            for &n_steps in steps {
                grid.push(ParamSet {
                    dt,
                    c1,
                    n_steps,
                    ..base
                });
            }
        }
    }
    grid
}
