//! Subcommand implementations. Each returns the process exit code.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use hosb_core::bench::{
    self, grid_search_by, instance_key, median_s, Algorithm, BenchRecord, GridSearchError,
    ParamSet,
};
use hosb_core::model::exhaustive_minimum;
use hosb_core::xorsat::{gadgetize, generate_3r3x};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::cli::{BenchArgs, FitArgs, GenerateArgs, OracleArgs, ReduceArgs, SolveArgs};
use crate::driver::{
    collect_instance_paths, estimate_p_parallel, expand_grid, load_instance, LoadedInstance,
};
use crate::formats::{
    fmt_f64_17, read_pubo, record_from_csv, record_to_csv, sniff_kind, write_pubo, write_xorsat3,
    FileKind, CSV_HEADER,
};

pub fn cmd_generate(args: &GenerateArgs) -> Result<i32> {
    if args.count == 0 {
        bail!("--count must be at least 1");
    }
    fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    for i in 0..args.count {
        let inst = generate_3r3x(args.n, &mut rng)?;
        let name = format!("inst_n{}_i{:03}.xorsat", args.n, i);
        let path = args.out.join(&name);
        fs::write(&path, write_xorsat3(&inst))
            .with_context(|| format!("cannot write {}", path.display()))?;
        let sol = inst.solve_exact();
        println!(
            "{} nullity={} ground_states=2^{}",
            path.display(),
            sol.nullity,
            sol.nullity
        );
    }
    Ok(0)
}

pub fn cmd_reduce(args: &ReduceArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let kind = sniff_kind(&text).map_err(|e| anyhow::anyhow!("{}: {e}", args.input.display()))?;
    let problem = match kind {
        FileKind::Xorsat3 => crate::formats::read_xorsat3(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", args.input.display()))?
            .to_polynomial(),
        FileKind::Pubo => read_pubo(&text)
            .map_err(|e| anyhow::anyhow!("{}: {e}", args.input.display()))?,
    };
    let gadget = gadgetize(&problem)?;
    let out_text = write_pubo(&gadget);
    match &args.out {
        Some(path) => fs::write(path, out_text)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{out_text}"),
    }
    eprintln!(
        "reduced {} vars / {} terms -> {} vars / {} terms",
        problem.num_vars(),
        problem.num_terms(),
        gadget.num_vars(),
        gadget.num_terms()
    );
    Ok(0)
}

fn apply_overrides(mut params: ParamSet, args: &SolveArgs) -> ParamSet {
    if let Some(dt) = args.dt {
        params.dt = dt;
    }
    if let Some(c1) = args.c1 {
        params.c1 = c1;
    }
    if let Some(beta1) = args.beta1 {
        params.beta1 = beta1;
    }
    if let Some(steps) = args.steps {
        params.n_steps = steps;
    }
    if let Some(a0) = args.a0 {
        params.a0 = a0;
    }
    if let Some(eps) = args.eps {
        params.eps = eps;
    }
    params
}

pub fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let algo = args.algo;
    let loaded = load_instance(&args.instance, Some(algo), args.target)?;
    let params = apply_overrides(ParamSet::paper_defaults(algo), args);
    let task = hosb_core::bench::BenchTask {
        instance_id: &loaded.id,
        instance_key: instance_key(&loaded.id),
        problem: &loaded.problem,
        gadget: loaded.gadget.as_ref(),
        // Without a certified optimum the success flag stays false.
        known_optimum: loaded.known_optimum.unwrap_or(f64::NEG_INFINITY),
    };
    let result = bench::run_once(&task, algo, &params, args.seed)?;

    let effective = if algo.is_sa() {
        json!({
            "beta1": params.beta1,
            "n_steps": params.n_steps,
            "seed": args.seed,
        })
    } else {
        json!({
            "dt": params.dt,
            "c1": params.c1,
            "a0": params.a0,
            "eps": params.eps,
            "n_steps": params.n_steps,
            "seed": args.seed,
        })
    };
    let mut payload = json!({
        "instance": args.instance.display().to_string(),
        "algorithm": algo.tag(),
        "n": loaded.problem.num_vars(),
        "energy": result.energy,
        "success": result.success,
        "steps": result.steps_used,
        "known_optimum": loaded.known_optimum,
        "params": effective,
        "spins": result.spins.as_slice(),
    });
    if let Some(gadget) = &loaded.gadget {
        payload["gadget_vars"] = json!(gadget.num_vars());
    }
    println!("{payload}");
    Ok(if result.success { 0 } else { 2 })
}

pub fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let algo = args.algo;
    let paths = collect_instance_paths(&args.instances, args.dir.as_deref())?;
    let mut loaded: Vec<LoadedInstance> = Vec::with_capacity(paths.len());
    for path in &paths {
        loaded.push(load_instance(path, Some(algo), None)?);
    }

    let defaults = ParamSet::paper_defaults(algo);
    let base = ParamSet {
        a0: args.a0.unwrap_or(defaults.a0),
        eps: args.eps.unwrap_or(defaults.eps),
        ..defaults
    };
    let pairs: Vec<(f64, f64)> = {
        let dts = args.dt.clone().unwrap_or_else(|| vec![defaults.dt]);
        let c1s = args.c1.clone().unwrap_or_else(|| vec![defaults.c1]);
        dts.iter()
            .flat_map(|&dt| c1s.iter().map(move |&c1| (dt, c1)))
            .collect()
    };
    let betas = args.beta1.clone().unwrap_or_else(|| vec![defaults.beta1]);
    let steps = args.steps.clone().unwrap_or_else(|| vec![1000]);
    let grid = expand_grid(algo, &pairs, &betas, &steps, base);

    let workers = args.workers.unwrap_or_else(default_workers);
    eprintln!(
        "bench algo={} instances={} grid_points={} runs={} seed={} workers={workers}",
        algo.tag(),
        loaded.len(),
        grid.len(),
        args.runs,
        args.seed
    );

    let mut sink = open_csv_sink(args.out.as_deref(), args.append)?;
    let mut per_point: Vec<Vec<BenchRecord>> = Vec::with_capacity(grid.len());
    for params in &grid {
        let mut records = Vec::with_capacity(loaded.len());
        for inst in &loaded {
            let task = inst.task()?;
            let record =
                estimate_p_parallel(&task, algo, params, args.runs, args.seed, workers)?;
            sink.write_row(&record_to_csv(&record))?;
            records.push(record);
        }
        per_point.push(records);
    }

    if grid.len() > 1 {
        let mut it = per_point.into_iter();
        match grid_search_by(&grid, |_| Ok(it.next().expect("one record set per point"))) {
            Ok(outcome) => {
                let best = outcome.best();
                let p = &best.params;
                let tuple = if algo.is_sa() {
                    format!("beta1={} n_steps={}", p.beta1, p.n_steps)
                } else {
                    format!("dt={} c1={} n_steps={}", p.dt, p.c1, p.n_steps)
                };
                eprintln!("best grid point: {tuple} median_s={}", best.median_s);
            }
            Err(GridSearchError::AllInfinite { .. }) => {
                eprintln!("grid search: every grid point has infinite median step-to-solution");
            }
            Err(other) => return Err(other.into()),
        }
    } else {
        let values: Vec<f64> = it_median(&per_point);
        if !values.is_empty() {
            eprintln!("median_s={}", median_s(&values));
        }
    }
    Ok(0)
}

fn it_median(per_point: &[Vec<BenchRecord>]) -> Vec<f64> {
    per_point
        .first()
        .map(|records| records.iter().map(|r| r.s).collect())
        .unwrap_or_default()
}

fn default_workers() -> usize {
    std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1)
}

struct CsvSink {
    out: Box<dyn Write>,
}

impl CsvSink {
    fn write_row(&mut self, row: &str) -> Result<()> {
        writeln!(self.out, "{row}")?;
        self.out.flush()?; // crash-safe per-row flush
        Ok(())
    }
}

fn open_csv_sink(path: Option<&Path>, append: bool) -> Result<CsvSink> {
    match path {
        None => {
            let mut sink = CsvSink {
                out: Box::new(std::io::stdout()),
            };
            if !append {
                sink.write_row(CSV_HEADER)?;
            }
            Ok(sink)
        }
        Some(path) => {
            let existing = append && path.exists() && fs::metadata(path)?.len() > 0;
            let file = fs::OpenOptions::new()
                .create(true)
                .append(append)
                .write(true)
                .truncate(!append)
                .open(path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            let mut sink = CsvSink {
                out: Box::new(file),
            };
            if !existing {
                sink.write_row(CSV_HEADER)?;
            }
            Ok(sink)
        }
    }
}

pub fn cmd_fit(args: &FitArgs) -> Result<i32> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("cannot read {}", args.input.display()))?;
    let mut records: Vec<BenchRecord> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with("instance_id,") {
            continue;
        }
        records.push(
            record_from_csv(line, idx + 1)
                .map_err(|e| anyhow::anyhow!("{}: {e}", args.input.display()))?,
        );
    }
    if let Some(algo) = args.algo {
        records.retain(|r| r.algorithm == algo);
    } else {
        let mut algos: Vec<Algorithm> = records.iter().map(|r| r.algorithm).collect();
        algos.dedup();
        algos.sort_by_key(|a| a.tag());
        algos.dedup();
        if algos.len() > 1 {
            bail!("CSV contains multiple algorithms; pass --algo to pick one");
        }
    }
    if records.is_empty() {
        bail!("no usable records in {}", args.input.display());
    }
    let algo_tag = records[0].algorithm.tag();

    // Per N: median S over instances for each parameter tuple, then the
    // tuned (minimum) median, reproducing the per-size optimization.
    let mut by_n: std::collections::BTreeMap<usize, std::collections::BTreeMap<String, Vec<f64>>> =
        Default::default();
    for r in &records {
        let tuple_key = format!("{:?}|{:?}|{:?}|{}", r.dt, r.c1, r.beta1, r.n_steps);
        by_n
            .entry(r.n)
            .or_default()
            .entry(tuple_key)
            .or_default()
            .push(r.s);
    }
    let mut points: Vec<(f64, f64)> = by_n
        .iter()
        .map(|(&n, tuples)| {
            let tuned = tuples
                .values()
                .map(|ss| median_s(ss))
                .fold(f64::INFINITY, f64::min);
            (n as f64, tuned)
        })
        .collect();

    // Fit window: explicit bounds win; otherwise drop the smallest and
    // largest N when the sweep is wide enough to afford it.
    if args.fit_min.is_some() || args.fit_max.is_some() {
        let lo = args.fit_min.unwrap_or(0) as f64;
        let hi = args.fit_max.unwrap_or(usize::MAX) as f64;
        points.retain(|&(n, _)| n >= lo && n <= hi);
    } else if points.len() >= 5 {
        points.remove(0);
        points.pop();
    }

    let fit = bench::fit_scaling(&points)?;
    let points_json: Vec<String> = points
        .iter()
        .map(|&(n, s)| format!("[{}, {}]", n as usize, fmt_f64_17(s)))
        .collect();
    let payload = format!(
        "{{\n  \"algorithm\": \"{algo_tag}\",\n  \"alpha\": {},\n  \"alpha_sd\": {},\n  \"alpha_report\": \"{}\",\n  \"intercept\": {},\n  \"intercept_sd\": {},\n  \"intercept_report\": \"{}\",\n  \"fit_n_min\": {},\n  \"fit_n_max\": {},\n  \"n_points\": {},\n  \"points\": [{}]\n}}\n",
        fmt_f64_17(fit.alpha),
        fmt_f64_17(fit.alpha_sd),
        fit.alpha_report(),
        fmt_f64_17(fit.intercept),
        fmt_f64_17(fit.intercept_sd),
        fit.intercept_report(),
        fit.n_min as usize,
        fit.n_max as usize,
        fit.n_points,
        points_json.join(", ")
    );
    match &args.out {
        Some(path) => fs::write(path, &payload)
            .with_context(|| format!("cannot write {}", path.display()))?,
        None => print!("{payload}"),
    }
    Ok(0)
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<i32> {
    let loaded = load_instance(&args.instance, None, None)?;
    let mut payload = json!({
        "instance": args.instance.display().to_string(),
        "n": loaded.problem.num_vars(),
    });
    let mut gf2_optimum: Option<f64> = None;
    let mut gf2_count: Option<u64> = None;
    if let Some(inst) = &loaded.instance {
        let sol = inst.solve_exact();
        let consistent = sol.solution.is_some();
        payload["rank"] = json!(sol.rank);
        payload["nullity"] = json!(sol.nullity);
        payload["consistent"] = json!(consistent);
        if consistent {
            gf2_optimum = Some(-(inst.n() as f64));
            if sol.nullity < 64 {
                gf2_count = Some(1u64 << sol.nullity);
            }
        }
        payload["optimum_energy"] = json!(gf2_optimum);
        payload["solution_count"] = json!(gf2_count);
    }
    if args.exhaustive {
        let n = loaded.problem.num_vars();
        if n > 24 {
            bail!("--exhaustive is limited to n <= 24 (got {n})");
        }
        let out = exhaustive_minimum(&loaded.problem, 1 << 20)?;
        payload["exhaustive_optimum"] = json!(out.energy);
        payload["exhaustive_count"] = json!(out.count);
        if let (Some(e), Some(c)) = (gf2_optimum, gf2_count) {
            payload["agrees"] = json!(out.energy == e && out.count == c);
        }
    } else if loaded.instance.is_none() {
        bail!("polynomial files need --exhaustive (no parity oracle available)");
    }
    println!("{payload}");
    Ok(0)
}
