//! End-to-end tests driving the `hosb` binary.

use std::path::Path;
use std::process::{Command, Output};

fn hosb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hosb"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr_str(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn generate(dir: &Path, n: usize, count: usize, seed: u64) {
    let out = hosb(&[
        "generate",
        "--n",
        &n.to_string(),
        "--count",
        &count.to_string(),
        "--seed",
        &seed.to_string(),
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
}

#[test]
fn generate_is_deterministic_and_prints_nullity() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    generate(&a, 16, 3, 99);
    generate(&b, 16, 3, 99);
    for i in 0..3 {
        let name = format!("inst_n16_i{i:03}.xorsat");
        let fa = std::fs::read(a.join(&name)).unwrap();
        let fb = std::fs::read(b.join(&name)).unwrap();
        assert_eq!(fa, fb, "{name} differs between equal-seed runs");
    }
    let out = hosb(&["generate", "--n", "16", "--count", "1", "--seed", "1", "--out", tmp.path().join("c").to_str().unwrap()]);
    assert!(stdout_str(&out).contains("nullity="));
}

#[test]
fn generate_rejects_small_n() {
    let tmp = tempfile::tempdir().unwrap();
    let out = hosb(&["generate", "--n", "3", "--count", "1", "--seed", "1", "--out", tmp.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("n >= 4"), "{}", stderr_str(&out));
}

#[test]
fn solve_reaches_planted_optimum_with_lucky_seed() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 1, 7);
    let inst = tmp.path().join("inst_n16_i000.xorsat");
    let out = hosb(&[
        "solve",
        inst.to_str().unwrap(),
        "--algo",
        "3bsb",
        "--steps",
        "1000",
        "--seed",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["energy"], -16.0);
    assert_eq!(json["success"], true);
    assert_eq!(json["n"], 16);
    assert_eq!(json["params"]["dt"], 1.1);
    assert_eq!(json["spins"].as_array().unwrap().len(), 16);
}

#[test]
fn solve_exit_code_two_when_optimum_missed() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 1, 7);
    let inst = tmp.path().join("inst_n16_i000.xorsat");
    // Seed 3 misses at these settings (energy -14).
    let out = hosb(&["solve", inst.to_str().unwrap(), "--algo", "3bsb", "--steps", "1000", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["success"], false);
}

#[test]
fn solve_reports_parse_errors_with_line_numbers() {
    let tmp = tempfile::tempdir().unwrap();
    let bad = tmp.path().join("bad.xorsat");
    std::fs::write(&bad, "p xorsat 16\n").unwrap();
    let out = hosb(&["solve", bad.to_str().unwrap(), "--algo", "3bsb"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr_str(&out).contains("line 1"), "{}", stderr_str(&out));
}

#[test]
fn gadgetized_solve_runs_on_doubled_variables() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 12, 1, 5);
    let inst = tmp.path().join("inst_n12_i000.xorsat");
    let out = hosb(&["solve", inst.to_str().unwrap(), "--algo", "2bsb", "--steps", "500", "--seed", "1"]);
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["gadget_vars"], 24);
    assert_eq!(json["n"], 12);
    assert_eq!(json["spins"].as_array().unwrap().len(), 12);
    // The reported energy is the projected N-spin energy, so it is an
    // integer >= -12 for a parity polynomial.
    let e = json["energy"].as_f64().unwrap();
    assert!(e >= -12.0 && e.fract() == 0.0);
}

#[test]
fn bench_is_identical_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 3, 21);
    let csv1 = tmp.path().join("w1.csv");
    let csv2 = tmp.path().join("w2.csv");
    for (csv, workers) in [(&csv1, "1"), (&csv2, "4")] {
        let out = hosb(&[
            "bench",
            "--dir",
            tmp.path().to_str().unwrap(),
            "--algo",
            "3bsb",
            "--steps",
            "200,400",
            "--runs",
            "30",
            "--seed",
            "13",
            "--workers",
            workers,
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", stderr_str(&out));
    }
    let a = std::fs::read_to_string(&csv1).unwrap();
    let b = std::fs::read_to_string(&csv2).unwrap();
    assert_eq!(a, b, "CSV differs between worker counts");
    assert!(a.starts_with("instance_id,algorithm,N,dt,c1,beta1,n_steps,runs,successes,p,s,nr_p_warning\n"));
    // 3 instances x 2 grid points.
    assert_eq!(a.lines().count(), 1 + 6);
}

#[test]
fn bench_append_skips_header() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 1, 2);
    let csv = tmp.path().join("b.csv");
    let base = [
        "bench",
        "--dir",
        tmp.path().to_str().unwrap(),
        "--algo",
        "3sa",
        "--steps",
        "100",
        "--runs",
        "10",
        "--seed",
        "3",
        "--out",
        csv.to_str().unwrap(),
    ];
    assert!(hosb(&base).status.success());
    let mut with_append = base.to_vec();
    with_append.push("--append");
    assert!(hosb(&with_append).status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("instance_id,"));
    assert_eq!(lines[1], lines[2], "appended row repeats the same record");
    // SA rows leave dt/c1 empty and carry beta1.
    assert!(lines[1].contains(",3sa,16,,,"));
}

#[test]
fn fit_recovers_exact_exponent_from_synthetic_csv() {
    use hosb_core::bench::{Algorithm, BenchRecord};
    let tmp = tempfile::tempdir().unwrap();
    let csv = tmp.path().join("synthetic.csv");
    let mut text = String::from(hosb_cli::formats::CSV_HEADER);
    text.push('\n');
    for k in 1..=5usize {
        let n = 25 * k;
        let s = 10f64.powf(0.04 * n as f64 + 3.0);
        for inst in 0..3 {
            let rec = BenchRecord {
                instance_id: format!("i{inst}"),
                algorithm: Algorithm::Bsb3,
                n,
                dt: Some(1.1),
                c1: Some(0.7),
                beta1: None,
                n_steps: 1000,
                runs: 100,
                successes: 50,
                p: 0.5,
                s,
                nr_p_warning: false,
            };
            text.push_str(&hosb_cli::formats::record_to_csv(&rec));
            text.push('\n');
        }
    }
    std::fs::write(&csv, text).unwrap();
    let out = hosb(&[
        "fit",
        "--input",
        csv.to_str().unwrap(),
        "--algo",
        "3bsb",
        "--fit-min",
        "25",
        "--fit-max",
        "125",
    ]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let alpha = json["alpha"].as_f64().unwrap();
    assert!((alpha - 0.04).abs() < 1e-10, "alpha {alpha}");
    let intercept = json["intercept"].as_f64().unwrap();
    assert!((intercept - 3.0).abs() < 1e-10);
    assert_eq!(json["n_points"], 5);
}

#[test]
fn reduce_produces_equivalent_quadratic_file() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 8, 1, 31);
    let inst = tmp.path().join("inst_n8_i000.xorsat");
    let pubo = tmp.path().join("reduced.pubo");
    let out = hosb(&["reduce", inst.to_str().unwrap(), "--out", pubo.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr_str(&out));
    let gadget = hosb_cli::formats::read_pubo(&std::fs::read_to_string(&pubo).unwrap()).unwrap();
    assert_eq!(gadget.num_vars(), 16);
    assert_eq!(gadget.max_degree(), 2);
    let min = hosb_core::model::exhaustive_minimum(&gadget, 4).unwrap();
    assert_eq!(min.energy, -8.0, "gadget preserves the planted optimum");
}

#[test]
fn oracle_matches_exhaustive_search() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 2, 44);
    for i in 0..2 {
        let inst = tmp.path().join(format!("inst_n16_i{i:03}.xorsat"));
        let out = hosb(&["oracle", inst.to_str().unwrap(), "--exhaustive"]);
        assert!(out.status.success(), "{}", stderr_str(&out));
        let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
        assert_eq!(json["consistent"], true);
        assert_eq!(json["optimum_energy"], -16.0);
        assert_eq!(json["agrees"], true);
        let nullity = json["nullity"].as_u64().unwrap();
        assert_eq!(json["solution_count"], (1u64 << nullity));
    }
}

#[test]
fn solve_oracle_roundtrip_agree_on_the_optimum() {
    // generate -> oracle certifies -N; a successful solve reports the
    // same energy and exit code 0.
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 1, 7);
    let inst = tmp.path().join("inst_n16_i000.xorsat");
    let oracle: serde_json::Value =
        serde_json::from_str(&stdout_str(&hosb(&["oracle", inst.to_str().unwrap()]))).unwrap();
    assert_eq!(oracle["optimum_energy"], -16.0);
    let solve: serde_json::Value = serde_json::from_str(&stdout_str(&hosb(&[
        "solve",
        inst.to_str().unwrap(),
        "--algo",
        "3bsb",
        "--steps",
        "1000",
        "--seed",
        "0",
    ])))
    .unwrap();
    assert_eq!(solve["energy"], oracle["optimum_energy"]);
}

#[test]
fn unknown_flags_are_rejected() {
    let out = hosb(&["solve", "whatever.xorsat", "--algo", "3bsb", "--bogus-flag"]);
    assert!(!out.status.success());
    assert!(stderr_str(&out).contains("bogus-flag"));
}

#[test]
fn env_variables_mirror_flags() {
    let tmp = tempfile::tempdir().unwrap();
    generate(tmp.path(), 16, 1, 7);
    let inst = tmp.path().join("inst_n16_i000.xorsat");
    let out = Command::new(env!("CARGO_BIN_EXE_hosb"))
        .args(["solve", inst.to_str().unwrap(), "--algo", "3bsb"])
        .env("HOSB_STEPS", "1000")
        .env("HOSB_SEED", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", stderr_str(&out));
    let json: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(json["params"]["n_steps"], 1000);
    assert_eq!(json["params"]["seed"], 0);
}
