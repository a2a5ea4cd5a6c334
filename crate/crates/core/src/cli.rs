//! Single-binary command line.
//!
//! Exit codes: 0 success, 1 input validation failure, 2 violated bound or
//! internal-consistency assertion (a defect signal), 3 I/O error, 64 usage
//! error. Every command that writes an experiment output embeds a run
//! manifest, and all randomness is seeded, so reruns reproduce output files
//! byte for byte. `--threads K` opts into deterministic parallel scans.

use crate::certificate::{build_certificate, TOL_M_ENTRY};
use crate::extremal::{random_rotation, tetrahedron_config};
use crate::hopf::{config_from_matrix, matrix_from_config, RowConfig};
use crate::io::{
    sha256_hex, CertificateDump, ConfigFile, InputDigest, MatrixFile, PolygonFile, RunManifest,
    FORMAT_VERSION,
};
use crate::linalg::pair_lambda2;
use crate::optimize::{estimate_a_n, tightness_sweep, Budget, SweepRow, TightnessEstimate};
use crate::oracle::brute_force_best_pair;
use crate::selection::{select_certified, verify_bound, Selection, BOUND_SLACK};
use crate::{alpha, Error, OrthoMatrix, TOL_ORTH};
use clap::{ArgGroup, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_DEFECT: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_USAGE: i32 = 64;

fn version_string() -> String {
    format!("{} (format v{FORMAT_VERSION})", env!("CARGO_PKG_VERSION"))
}

#[derive(Parser)]
#[command(
    name = "subinv",
    version = version_string(),
    about = "Certified 2x2 submatrix selection in complex n-by-2 orthonormal-column matrices"
)]
struct Cli {
    /// Emit machine-readable JSON on stdout instead of the human summary.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for pair scans and optimizer restarts (default: the
    /// SUBINV_THREADS variable, else 1). Results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Select a certified row pair from a matrix file.
    Select {
        /// Matrix JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Also print the recursion trace.
        #[arg(long)]
        trace: bool,
    },
    /// Brute-force the best pair over all row pairs.
    Oracle {
        /// Matrix JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the full (i, j, lambda2) table as CSV.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Stress-test certificate nonpositivity on random configurations.
    LemmaScan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
    },
    /// Generate an equality configuration and its matrix.
    Extremal {
        /// Number of rows; must be divisible by 4.
        #[arg(long)]
        n: usize,
        /// Apply a seeded random rotation to the tetrahedron.
        #[arg(long)]
        rotate_seed: Option<u64>,
        /// Output path for the matrix JSON.
        #[arg(long)]
        out: PathBuf,
        /// Optional output path for the configuration JSON.
        #[arg(long)]
        config_out: Option<PathBuf>,
    },
    /// Estimate how tight the bound is at one n, or sweep n = 3..=NMAX.
    #[command(group(ArgGroup::new("target").required(true).args(["n", "sweep"])))]
    Estimate {
        #[arg(long)]
        n: Option<usize>,
        /// Sweep n = 3..=NMAX and write a CSV table.
        #[arg(long, value_name = "NMAX")]
        sweep: Option<usize>,
        #[arg(long, default_value_t = 8)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        iters: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Start one restart from the tetrahedral configuration when 4 | n.
        #[arg(long)]
        warm_extremal: bool,
        /// Output path (JSON for --n, CSV for --sweep).
        #[arg(long)]
        out: PathBuf,
    },
    /// Check the edge-pair gap bound 2*alpha/n for a closed polygon.
    PolygonCheck {
        /// Polygon JSON file (edges or vertices).
        #[arg(long = "in")]
        input: PathBuf,
        /// Rescale the perimeter to 2 before checking.
        #[arg(long)]
        normalize: bool,
    },
    /// Re-check a published selection against its matrix.
    Verify {
        /// Matrix JSON file.
        #[arg(long = "in")]
        input: PathBuf,
        /// Selection JSON file.
        #[arg(long)]
        selection: PathBuf,
    },
    /// Check serialization bit-stability and transfer invariance of a matrix file.
    Roundtrip {
        /// Matrix JSON file.
        #[arg(long = "in")]
        input: PathBuf,
    },
}

enum CmdError {
    Validation(String),
    Defect(String),
    Io(String),
}

impl CmdError {
    fn exit_code(&self) -> i32 {
        match self {
            CmdError::Validation(_) => EXIT_VALIDATION,
            CmdError::Defect(_) => EXIT_DEFECT,
            CmdError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Validation(m) | CmdError::Defect(m) | CmdError::Io(m) => m,
        }
    }
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        match e {
            Error::NoNonpositiveEntry { .. } => CmdError::Defect(e.to_string()),
            _ => CmdError::Validation(e.to_string()),
        }
    }
}

/// Parses `argv` and runs the selected command, returning the process exit
/// code. Library-level so integration tests can drive it in-process.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<String> = argv
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return code;
        }
    };
    init_threads(cli.threads);
    match run(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn init_threads(requested: Option<usize>) {
    let threads = requested
        .or_else(|| {
            std::env::var("SUBINV_THREADS")
                .ok()
                .and_then(|v| v.parse().ok())
        })
        .unwrap_or(1)
        .max(1);
    // Only the first initialization takes effect; later calls in the same
    // process (tests) keep the existing pool.
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
}

fn run(cli: &Cli, argv: &[String]) -> Result<i32, CmdError> {
    match &cli.cmd {
        Cmd::Select { input, trace } => cmd_select(cli, input, *trace),
        Cmd::Oracle { input, table } => cmd_oracle(cli, argv, input, table.as_deref()),
        Cmd::LemmaScan { n, trials, seed } => cmd_lemma_scan(cli, argv, *n, *trials, *seed),
        Cmd::Extremal {
            n,
            rotate_seed,
            out,
            config_out,
        } => cmd_extremal(cli, argv, *n, *rotate_seed, out, config_out.as_deref()),
        Cmd::Estimate {
            n,
            sweep,
            restarts,
            iters,
            seed,
            warm_extremal,
            out,
        } => {
            let budget = Budget {
                restarts: *restarts,
                iters: *iters,
            };
            match (n, sweep) {
                (Some(n), None) => {
                    cmd_estimate_single(cli, argv, *n, budget, *seed, *warm_extremal, out)
                }
                (None, Some(n_max)) => {
                    cmd_estimate_sweep(cli, argv, *n_max, budget, *seed, *warm_extremal, out)
                }
                _ => unreachable!("clap group enforces exactly one target"),
            }
        }
        Cmd::PolygonCheck { input, normalize } => cmd_polygon_check(cli, input, *normalize),
        Cmd::Verify { input, selection } => cmd_verify(cli, input, selection),
        Cmd::Roundtrip { input } => cmd_roundtrip(cli, input),
    }
}

// ---------- helpers ----------

fn read_text(path: &Path) -> Result<String, CmdError> {
    std::fs::read_to_string(path).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

fn parse_json<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CmdError> {
    serde_json::from_str(text).map_err(|e| CmdError::Validation(format!("{}: {e}", path.display())))
}

fn write_text(path: &Path, content: &str) -> Result<(), CmdError> {
    std::fs::write(path, content).map_err(|e| CmdError::Io(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<(OrthoMatrix, String), CmdError> {
    let text = read_text(path)?;
    let file: MatrixFile = parse_json(path, &text)?;
    Ok((file.into_matrix(TOL_ORTH)?, text))
}

fn make_manifest(
    command: &str,
    argv: &[String],
    seeds: Vec<u64>,
    inputs: &[(&Path, &str)],
    outputs: &[&Path],
) -> RunManifest {
    RunManifest {
        command: command.to_string(),
        argv: argv.to_vec(),
        seeds,
        version: version_string(),
        format_version: FORMAT_VERSION,
        inputs: inputs
            .iter()
            .map(|(p, text)| InputDigest {
                path: p.display().to_string(),
                sha256: sha256_hex(text.as_bytes()),
            })
            .collect(),
        outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
    }
}

fn print_json(value: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("serializable"));
}

// ---------- select ----------

fn cmd_select(cli: &Cli, input: &Path, trace: bool) -> Result<i32, CmdError> {
    let (u, _) = read_matrix(input)?;
    let sel = select_certified(&u)?;
    let allowed = sel.bound * (1.0 + BOUND_SLACK);
    if cli.json {
        print_json(&serde_json::to_value(&sel).expect("selection serializes"));
    } else {
        println!("n: {}", u.n());
        println!("pair: ({}, {})", sel.i, sel.j);
        println!("sigma2: {}", sel.sigma2);
        println!("invNorm: {}", sel.inv_norm);
        println!("bound: {}", sel.bound);
        println!("slack used: {}", sel.inv_norm / sel.bound);
        if trace {
            println!("path:");
            for (k, step) in sel.path.iter().enumerate() {
                match step {
                    crate::selection::PathStep::CaseA { removed_row, v, t } => {
                        println!("  {}. removed row {removed_row} (v = {v}, t = {t})", k + 1)
                    }
                    crate::selection::PathStep::CaseB { m_entry } => {
                        println!("  {}. direct pick at certificate entry {m_entry}", k + 1)
                    }
                    crate::selection::PathStep::BaseCase { n } => {
                        println!("  {}. exhaustive base case at n = {n}", k + 1)
                    }
                }
            }
        }
    }
    if sel.inv_norm > allowed {
        eprintln!(
            "error: certified bound violated: invNorm {} > allowed {allowed}",
            sel.inv_norm
        );
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- oracle ----------

fn cmd_oracle(
    cli: &Cli,
    argv: &[String],
    input: &Path,
    table_out: Option<&Path>,
) -> Result<i32, CmdError> {
    let (u, text) = read_matrix(input)?;
    let res = brute_force_best_pair(&u, table_out.is_some());
    let floor = alpha() / u.n() as f64;
    if let Some(path) = table_out {
        let manifest = make_manifest("oracle", argv, vec![], &[(input, &text)], &[path]);
        let mut csv = format!(
            "# manifest: {}\ni,j,lambda2\n",
            serde_json::to_string(&manifest).expect("manifest serializes")
        );
        for (i, j, l2) in res.table.as_deref().unwrap_or(&[]) {
            csv.push_str(&format!("{i},{j},{l2}\n"));
        }
        write_text(path, &csv)?;
    }
    if cli.json {
        let mut value = serde_json::to_value(&res).expect("oracle serializes");
        value["floor"] = floor.into();
        // The full table goes to the CSV, not stdout.
        value.as_object_mut().map(|o| o.remove("table"));
        print_json(&value);
    } else {
        println!("n: {}", u.n());
        println!("best pair: ({}, {})", res.best_i, res.best_j);
        println!("lambda2Max: {}", res.lambda2_max);
        println!("invNormMin: {}", res.inv_norm_min);
        println!("floor alpha/n: {floor}");
        if let Some(path) = table_out {
            println!(
                "table: {} ({} pairs)",
                path.display(),
                res.table.as_deref().map_or(0, |t| t.len())
            );
        }
    }
    if res.lambda2_max < floor - 1e-12 {
        eprintln!(
            "error: oracle value {} fell below alpha/n = {floor}",
            res.lambda2_max
        );
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- lemma-scan ----------

fn cmd_lemma_scan(
    cli: &Cli,
    argv: &[String],
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<i32, CmdError> {
    use rayon::prelude::*;
    if trials == 0 {
        return Err(CmdError::Validation("need at least one trial".into()));
    }
    let scan_one = |t: usize| -> Result<(f64, bool, bool), Error> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(t as u64 + 1);
        let cfg = RowConfig::random_from_rng(n, &mut rng)?;
        let cert = build_certificate(&cfg);
        let nf = n as f64;
        let lower_raw_ok = cert.f >= 8.0 * cert.r2 / nf - 32.0 / (3.0 * nf * nf) - 1e-10;
        let r2_ok = cert.r2 >= 4.0 / nf - 1e-12;
        Ok((cert.min_entry.value, lower_raw_ok, r2_ok))
    };
    let results: Vec<(f64, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(scan_one)
        .collect::<Result<_, _>>()
        .map_err(CmdError::from)?;

    let violations = results.iter().filter(|r| r.0 > TOL_M_ENTRY).count();
    let lower_raw_violations = results.iter().filter(|r| !r.1).count();
    let r2_floor_violations = results.iter().filter(|r| !r.2).count();
    let min_of_min = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let max_of_min = results
        .iter()
        .map(|r| r.0)
        .fold(f64::NEG_INFINITY, f64::max);
    // The trial whose certificate came closest to positivity.
    let worst_trial = results
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
        .map(|(t, _)| t)
        .expect("at least one trial");
    let worst_dump = {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(worst_trial as u64 + 1);
        let cfg = RowConfig::random_from_rng(n, &mut rng).map_err(CmdError::from)?;
        CertificateDump::from_certificate(&build_certificate(&cfg))
    };

    // Fixed 10-bin histogram of min entries.
    let bins = 10usize;
    let width = ((max_of_min - min_of_min) / bins as f64).max(f64::MIN_POSITIVE);
    let mut histogram = vec![0usize; bins];
    for r in &results {
        let k = (((r.0 - min_of_min) / width) as usize).min(bins - 1);
        histogram[k] += 1;
    }

    let manifest = make_manifest("lemma-scan", argv, vec![seed], &[], &[]);
    if cli.json {
        print_json(&serde_json::json!({
            "manifest": manifest,
            "n": n,
            "trials": trials,
            "seed": seed,
            "violations": violations,
            "lowerRawViolations": lower_raw_violations,
            "r2FloorViolations": r2_floor_violations,
            "minEntryMin": min_of_min,
            "minEntryMax": max_of_min,
            "histogram": histogram.iter().enumerate().map(|(k, &count)| {
                serde_json::json!({
                    "lo": min_of_min + k as f64 * width,
                    "hi": min_of_min + (k + 1) as f64 * width,
                    "count": count,
                })
            }).collect::<Vec<_>>(),
            "worst": worst_dump,
        }));
    } else {
        println!("n: {n}, trials: {trials}, seed: {seed}");
        println!("min-entry range: [{min_of_min}, {max_of_min}]");
        println!("nonpositivity violations: {violations}");
        println!("lower-bound violations: {lower_raw_violations}");
        println!("R2-floor violations: {r2_floor_violations}");
        println!("histogram of min entries:");
        for (k, &count) in histogram.iter().enumerate() {
            println!(
                "  [{:+.6e}, {:+.6e}): {count}",
                min_of_min + k as f64 * width,
                min_of_min + (k + 1) as f64 * width
            );
        }
    }
    if violations + lower_raw_violations + r2_floor_violations > 0 {
        eprintln!("error: scan found certificate violations");
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- extremal ----------

fn cmd_extremal(
    cli: &Cli,
    argv: &[String],
    n: usize,
    rotate_seed: Option<u64>,
    out: &Path,
    config_out: Option<&Path>,
) -> Result<i32, CmdError> {
    let rotation = rotate_seed.map(random_rotation);
    let cfg = tetrahedron_config(n, rotation)?;
    let u = matrix_from_config(&cfg)?;

    let mut outputs: Vec<&Path> = vec![out];
    if let Some(c) = config_out {
        outputs.push(c);
    }
    let seeds = rotate_seed.into_iter().collect();
    let manifest = make_manifest("extremal", argv, seeds, &[], &outputs);

    let matrix_file = MatrixFile::from_matrix(&u, Some(manifest.clone()));
    write_text(
        out,
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&matrix_file).expect("matrix serializes")
        ),
    )?;
    if let Some(c) = config_out {
        let config_file = ConfigFile::from_config(&cfg, Some(manifest.clone()));
        write_text(
            c,
            &format!(
                "{}\n",
                serde_json::to_string_pretty(&config_file).expect("config serializes")
            ),
        )?;
    }

    let oracle = brute_force_best_pair(&u, false);
    let floor = alpha() / n as f64;
    let deviation = (oracle.lambda2_max - floor).abs();
    if cli.json {
        print_json(&serde_json::json!({
            "manifest": manifest,
            "n": n,
            "rotateSeed": rotate_seed,
            "lambda2Max": oracle.lambda2_max,
            "floor": floor,
            "deviation": deviation,
            "out": out.display().to_string(),
            "configOut": config_out.map(|c| c.display().to_string()),
        }));
    } else {
        println!("n: {n}");
        println!("wrote matrix: {}", out.display());
        if let Some(c) = config_out {
            println!("wrote configuration: {}", c.display());
        }
        println!("lambda2Max: {}", oracle.lambda2_max);
        println!("alpha/n: {floor}");
        println!("deviation: {deviation:.3e}");
    }
    if deviation > 1e-10 {
        eprintln!("error: generated matrix misses alpha/n by {deviation:.3e}");
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- estimate ----------

fn restart_summaries(est: &TightnessEstimate) -> Vec<serde_json::Value> {
    est.log
        .iter()
        .map(|l| {
            serde_json::json!({
                "restart": l.restart,
                "warmStart": l.warm_start,
                "initial": l.initial,
                "finalValue": l.final_value,
                "acceptedMoves": l.accepted.len(),
            })
        })
        .collect()
}

fn cmd_estimate_single(
    cli: &Cli,
    argv: &[String],
    n: usize,
    budget: Budget,
    seed: u64,
    warm_extremal: bool,
    out: &Path,
) -> Result<i32, CmdError> {
    let est = estimate_a_n(n, budget, seed, warm_extremal)?;
    let manifest = make_manifest("estimate", argv, vec![seed], &[], &[out]);
    let doc = serde_json::json!({
        "manifest": manifest,
        "n": est.n,
        "aEstimate": est.a_estimate,
        "bEstimate": est.b_estimate,
        "bound": est.bound,
        "ratio": est.ratio,
        "restarts": est.restarts,
        "iters": est.iters,
        "seed": est.seed,
        "warmExtremal": est.warm_extremal,
        "bestMatrix": MatrixFile::from_matrix(&est.best_matrix, None),
        "restartSummary": restart_summaries(&est),
    });
    write_text(
        out,
        &format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable")),
    )?;
    if cli.json {
        print_json(&doc);
    } else {
        println!("n: {}", est.n);
        println!("aEstimate: {}", est.a_estimate);
        println!("bEstimate: {}", est.b_estimate);
        println!("bound: {}", est.bound);
        println!("ratio: {}", est.ratio);
        println!(
            "restarts: {} (iters {}, seed {}, warm: {})",
            est.restarts, est.iters, est.seed, est.warm_extremal
        );
        println!("wrote estimate: {}", out.display());
    }
    if est.a_estimate < alpha() / n as f64 - 1e-9 {
        eprintln!(
            "error: aEstimate {} fell below alpha/n; the floor is proven",
            est.a_estimate
        );
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

fn cmd_estimate_sweep(
    cli: &Cli,
    argv: &[String],
    n_max: usize,
    budget: Budget,
    seed: u64,
    warm_extremal: bool,
    out: &Path,
) -> Result<i32, CmdError> {
    let rows = tightness_sweep(n_max, budget, seed, warm_extremal)?;
    let manifest = make_manifest("estimate", argv, vec![seed], &[], &[out]);
    let mut csv = format!(
        "# manifest: {}\nn,a_est,b_est,bound,ratio\n",
        serde_json::to_string(&manifest).expect("manifest serializes")
    );
    for (row, _) in &rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            row.n, row.a_estimate, row.b_estimate, row.bound, row.ratio
        ));
    }
    write_text(out, &csv)?;

    let table: Vec<&SweepRow> = rows.iter().map(|(r, _)| r).collect();
    if cli.json {
        print_json(&serde_json::json!({
            "manifest": manifest,
            "rows": table,
        }));
    } else {
        println!("n  a_est  b_est  bound  ratio  nondecreasing");
        for row in &table {
            println!(
                "{}  {}  {}  {}  {}  {}",
                row.n, row.a_estimate, row.b_estimate, row.bound, row.ratio, row.nondecreasing
            );
        }
        println!("wrote table: {}", out.display());
    }
    let floor_violated = rows
        .iter()
        .any(|(r, _)| r.a_estimate < alpha() / r.n as f64 - 1e-9);
    if floor_violated {
        eprintln!("error: a sweep row fell below the proven alpha/n floor");
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- polygon-check ----------

fn cmd_polygon_check(cli: &Cli, input: &Path, normalize: bool) -> Result<i32, CmdError> {
    let text = read_text(input)?;
    let file: PolygonFile = parse_json(input, &text)?;
    let poly = file.into_polygon(normalize)?;
    let rep = crate::polygon::check_corollary(&poly);
    if cli.json {
        print_json(&serde_json::to_value(&rep).expect("report serializes"));
    } else {
        println!("n: {}", rep.n);
        println!("maxGap: {} at pair ({}, {})", rep.max_gap, rep.max_i, rep.max_j);
        println!("bound 2*alpha/n: {}", rep.bound);
        println!("ratio: {}", rep.ratio);
        println!("verdict: {}", rep.equality.verdict);
        for f in &rep.equality.failures {
            println!("  {f}");
        }
    }
    if rep.max_gap < rep.bound - 1e-10 {
        eprintln!(
            "error: max gap {} fell below the guaranteed {}",
            rep.max_gap, rep.bound
        );
        return Ok(EXIT_DEFECT);
    }
    Ok(EXIT_OK)
}

// ---------- verify ----------

fn cmd_verify(cli: &Cli, input: &Path, selection: &Path) -> Result<i32, CmdError> {
    let (u, _) = read_matrix(input)?;
    let sel_text = read_text(selection)?;
    let sel: Selection = parse_json(selection, &sel_text)?;
    let rep = verify_bound(&u, &sel);
    if cli.json {
        print_json(&serde_json::to_value(&rep).expect("report serializes"));
    } else {
        println!("pass: {}", rep.pass);
        println!("recomputed sigma2: {}", rep.recomputed_sigma2);
        println!("sigma2 residual: {:.3e}", rep.sigma2_residual);
        println!("bound ratio: {}", rep.bound_ratio);
        for issue in &rep.issues {
            println!("  issue: {issue}");
        }
    }
    Ok(if rep.pass { EXIT_OK } else { EXIT_DEFECT })
}

// ---------- roundtrip ----------

fn cmd_roundtrip(cli: &Cli, input: &Path) -> Result<i32, CmdError> {
    let text = read_text(input)?;
    let value: serde_json::Value = parse_json(input, &text)?;
    let floats = crate::io::roundtrip_bit_check(&value)?;
    let file: MatrixFile = parse_json(input, &text)?;
    let u = file.into_matrix(TOL_ORTH)?;
    let cfg = config_from_matrix(&u)?;
    let lifted = matrix_from_config(&cfg)?;
    let n = u.n();
    let mut max_residual = 0.0_f64;
    for i in 0..n {
        for j in (i + 1)..n {
            let a = pair_lambda2(u.rows(), i, j);
            let b = pair_lambda2(lifted.rows(), i, j);
            max_residual = max_residual.max((a - b).abs());
        }
    }
    let pass = max_residual <= 1e-10;
    if cli.json {
        print_json(&serde_json::json!({
            "floatsChecked": floats,
            "serializationBitExact": true,
            "maxLambda2Residual": max_residual,
            "pass": pass,
        }));
    } else {
        println!("floats checked: {floats}");
        println!("serialization bit-exact: true");
        println!("max pair-spectrum residual after transfer: {max_residual:.3e}");
        println!("pass: {pass}");
    }
    Ok(if pass { EXIT_OK } else { EXIT_DEFECT })
}
