//! `hitset`: generation, verification, substitution, bootstrapping and
//! report emission for hitting-set constructions over finite fields.
//!
//! Exit codes: 0 success/pass, 1 verification failure (counterexample on
//! stdout), 2 usage or parameter error, 3 resource budget exceeded.

mod manifest;

use clap::{Args, Parser, Subcommand};
use hitset_core::bootstrap::{self, BaseGeneratorKind, StageOverride, ToyParams};
use hitset_core::budget::Budgets;
use hitset_core::circuit::Circuit;
use hitset_core::design::{build_design_with, verify_design, Design};
use hitset_core::error::Error;
use hitset_core::field::Field;
use hitset_core::hitting::{
    find_annihilator, grid_hitting_set, randomized_pit, verify_hitting_exhaustive, HittingSet,
    PitOutcome,
};
use hitset_core::multipoly::MultiPoly;
use hitset_core::reduction::{ki_extract, nw_substitute, KiBudget, NwSubstitution};
use hitset_core::Parallelism;
use manifest::RunManifest;
use num_bigint::BigUint;
use serde::Deserialize;
use std::collections::BTreeMap;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hitset", version, about = "hitting-set toolkit for blackbox identity testing")]
struct Cli {
    /// Seed for every randomized operation; identical seeds reproduce runs
    /// byte for byte.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Worker threads for the parallel sweeps (0 = library default). Never
    /// affects output bytes.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Reed-Solomon (k^c, k, r) design.
    GenDesign(GenDesign),
    /// Materialize the full grid sample^n.
    GenGrid(GenGrid),
    /// Find the canonical annihilator of a hitting set.
    FindAnnihilator(FindAnnihilator),
    /// Substitute a hard polynomial over the design sets of a circuit.
    NwSubstitute(NwArgs),
    /// Run the extraction that certifies a small multiple of q from a
    /// collapsing substitution.
    KiExtract(NwArgs),
    /// Randomized blackbox identity test on grid points.
    PitRandom(PitRandom),
    /// Check the design invariants exhaustively.
    VerifyDesign(VerifyDesign),
    /// Exhaustively verify the hitting property for a small class.
    VerifyHs(VerifyHs),
    /// Recursive hitting-set generator.
    #[command(subcommand)]
    Bootstrap(BootstrapCommand),
}

#[derive(Args)]
struct GenDesign {
    #[arg(long)]
    k: u64,
    #[arg(long)]
    c: u32,
    #[arg(long)]
    r: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GenGrid {
    /// Field spec, e.g. GF(5) or GF(2^3).
    #[arg(long)]
    field: String,
    /// Re-run inside GF(2^t) when the declared field is too small.
    #[arg(long)]
    extension_degree: Option<u32>,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: u64,
    /// Comma-separated sample elements (canonical encodings).
    #[arg(long, value_delimiter = ',')]
    sample: Option<Vec<u64>>,
    /// Shorthand: use the first SIZE canonical field elements.
    #[arg(long)]
    sample_size: Option<u64>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FindAnnihilator {
    #[arg(long)]
    hs: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d_individual: u64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct NwArgs {
    /// Design JSON file.
    #[arg(long)]
    design: PathBuf,
    /// Hard polynomial (MultiPoly JSON).
    #[arg(long)]
    q: PathBuf,
    /// Circuit JSON file.
    #[arg(long)]
    p: PathBuf,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PitRandom {
    /// Circuit JSON input.
    #[arg(long, conflicts_with = "abp")]
    circuit: Option<PathBuf>,
    /// ABP JSON input (layered edge list).
    #[arg(long)]
    abp: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    sample: Vec<u64>,
    #[arg(long, default_value_t = 20)]
    trials: u64,
}

#[derive(Args)]
struct VerifyDesign {
    design: PathBuf,
}

#[derive(Args)]
struct VerifyHs {
    #[arg(long)]
    hs: PathBuf,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d_individual: u64,
}

#[derive(Subcommand)]
enum BootstrapCommand {
    /// Execute a configured run (toy or report mode).
    Run(BootstrapRun),
    /// Symbolic cost report for the reference growth schedule.
    Report(BootstrapReport),
}

#[derive(Args)]
struct BootstrapRun {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = "bootstrap-out")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct BootstrapReport {
    #[arg(long)]
    n0: u64,
    /// Rational, e.g. "1" or "1/2".
    #[arg(long)]
    epsilon: String,
    /// Target size threshold s*.
    #[arg(long)]
    s: String,
    /// Accounting stage (defaults to the schedule's stage count).
    #[arg(long)]
    stage: Option<u32>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads(cli.threads);
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(threads: usize) {
    if threads > 0 {
        // Ignore the error when a pool already exists: output bytes do not
        // depend on the pool size.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(_threads: usize) {}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let budgets = Budgets::from_env();
    match cli.command {
        Command::GenDesign(args) => {
            let design =
                build_design_with(args.k, args.c, args.r, budgets.design(), Parallelism::default())?;
            emit_json(&design, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::GenGrid(args) => {
            let field: Field = match args.extension_degree {
                Some(t) => Field::binary(t)?,
                None => args.field.parse()?,
            };
            let sample: Vec<u64> = match (args.sample, args.sample_size) {
                (Some(s), None) => s,
                (None, Some(size)) => {
                    if size > field.order() {
                        return Err(Error::parameter(format!(
                            "sample size {size} exceeds the field order {}; \
                             use --extension-degree to move to GF(2^t)",
                            field.order()
                        )));
                    }
                    (0..size).collect()
                }
                _ => {
                    return Err(Error::parameter(
                        "exactly one of --sample and --sample-size is required",
                    ))
                }
            };
            let h = grid_hitting_set(field, args.n, args.d, &sample, budgets.grid_points)?;
            emit_text(&h.to_text(), args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::FindAnnihilator(args) => {
            let h = read_hitting_set(&args.hs)?;
            let q = find_annihilator(&h, args.k, args.d_individual, budgets.annihilator_monomials)?;
            emit_json(&q, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::NwSubstitute(args) => {
            let (p, sub) = read_nw_inputs(&args)?;
            let gamma = nw_substitute(&p, &sub)?;
            emit_json(&gamma, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::KiExtract(args) => {
            let (p, sub) = read_nw_inputs(&args)?;
            let budget = KiBudget {
                max_terms: budgets.expand_terms,
                max_assignments: budgets.ki_assignments,
            };
            let result = ki_extract(&p, &sub, budget)?;
            emit_json(&result, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::PitRandom(args) => {
            let outcome = match (&args.circuit, &args.abp) {
                (Some(path), None) => {
                    let circuit: Circuit = read_json(path)?;
                    randomized_pit(&circuit, &args.sample, args.trials, cli.seed)?
                }
                (None, Some(path)) => {
                    let abp: hitset_core::Abp = read_json(path)?;
                    hitset_core::hitting::randomized_pit_abp(
                        &abp,
                        &args.sample,
                        args.trials,
                        cli.seed,
                    )?
                }
                _ => {
                    return Err(Error::parameter(
                        "exactly one of --circuit and --abp is required",
                    ))
                }
            };
            println!("{}", serde_json::to_string_pretty(&outcome).expect("serializable"));
            match outcome {
                PitOutcome::NonzeroWitness { .. } | PitOutcome::ProbablyZero { .. } => {
                    Ok(ExitCode::SUCCESS)
                }
            }
        }
        Command::VerifyDesign(args) => {
            let design: Design = read_json(&args.design)?;
            match verify_design(&design) {
                None => {
                    println!("pass: {} sets, all pairwise intersections below {}",
                        design.num_sets(), design.r);
                    Ok(ExitCode::SUCCESS)
                }
                Some(violation) => {
                    println!("violation: {violation}");
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::VerifyHs(args) => {
            let h = read_hitting_set(&args.hs)?;
            match verify_hitting_exhaustive(&h, args.n, args.d_individual, budgets.enum_candidates)? {
                None => {
                    println!(
                        "pass: every nonzero {}-variate polynomial of individual degree <= {} is hit",
                        args.n, args.d_individual
                    );
                    Ok(ExitCode::SUCCESS)
                }
                Some(counterexample) => {
                    println!(
                        "counterexample: {}",
                        serde_json::to_string(&counterexample).expect("serializable")
                    );
                    Ok(ExitCode::from(1))
                }
            }
        }
        Command::Bootstrap(BootstrapCommand::Run(args)) => bootstrap_run(&args, cli.seed, budgets),
        Command::Bootstrap(BootstrapCommand::Report(args)) => {
            let epsilon = bootstrap::parse_rational(&args.epsilon)?;
            let s_star: BigUint = args
                .s
                .parse()
                .map_err(|_| Error::parameter(format!("bad s value {:?}", args.s)))?;
            let report = bootstrap::report(args.n0, epsilon, s_star, args.stage)?;
            emit_json(&report, args.output.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RunConfig {
    field: String,
    n0: u64,
    epsilon: serde_json::Value,
    s: u64,
    stage: u32,
    mode: String,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    s_star: Option<String>,
    #[serde(default)]
    base: Option<BaseGeneratorKind>,
    #[serde(default)]
    overrides: BTreeMap<u32, StageOverride>,
    #[serde(default)]
    derive_hard: Option<DeriveHardConfig>,
}

#[derive(Deserialize)]
struct DeriveHardConfig {
    n: usize,
    d_individual: u64,
}

fn bootstrap_run(args: &BootstrapRun, seed: u64, budgets: Budgets) -> Result<ExitCode, Error> {
    let started = std::time::Instant::now();
    let config_bytes =
        std::fs::read(&args.config).map_err(|e| Error::Io(format!("{}: {e}", args.config.display())))?;
    let config: RunConfig = from_json_bytes(&config_bytes)?;
    let epsilon = bootstrap::epsilon_from_json(&config.epsilon)?;
    let seed = config.seed.unwrap_or(seed);

    let mut manifest = RunManifest::new(
        std::env::args().collect(),
        &config_bytes,
        seed,
    );

    std::fs::create_dir_all(&args.out_dir)
        .map_err(|e| Error::Io(format!("{}: {e}", args.out_dir.display())))?;

    match config.mode.as_str() {
        "report" => {
            let s_star: BigUint = config
                .s_star
                .as_deref()
                .unwrap_or("18446744073709551615")
                .parse()
                .map_err(|_| Error::parameter("bad s_star"))?;
            let report = bootstrap::report(config.n0, epsilon, s_star, Some(config.stage))?;
            let bytes = serde_json::to_vec_pretty(&report).expect("serializable");
            write_output(&args.out_dir.join("report.json"), &bytes, &mut manifest)?;
        }
        "toy" => {
            let field: Field = config.field.parse()?;
            let params = ToyParams {
                field,
                n0: config.n0,
                epsilon,
                s: config.s,
                stage: config.stage,
                base: config
                    .base
                    .clone()
                    .unwrap_or(BaseGeneratorKind::Grid { sample: vec![0, 1] }),
                overrides: config.overrides.clone(),
                budgets,
                parallelism: Parallelism::default(),
            };
            let run = bootstrap::run_toy(&params)?;
            write_output(
                &args.out_dir.join("hitting_set.hs"),
                run.output.to_text().as_bytes(),
                &mut manifest,
            )?;
            let report = serde_json::json!({
                "mode": "toy",
                "field": field.to_string(),
                "stage": config.stage,
                "emitted_points": run.emitted.len(),
                "distinct_points": run.output.len(),
                "stages": run.stages,
                "log": run.log,
            });
            let bytes = serde_json::to_vec_pretty(&report).expect("serializable");
            write_output(&args.out_dir.join("report.json"), &bytes, &mut manifest)?;

            if let Some(hard) = &config.derive_hard {
                let (q, _) =
                    bootstrap::derive_hard_polynomial_toy(&params, hard.n, hard.d_individual)?;
                let bytes = serde_json::to_vec_pretty(&q).expect("serializable");
                write_output(&args.out_dir.join("hard_poly.json"), &bytes, &mut manifest)?;
            }
        }
        other => {
            return Err(Error::parameter(format!(
                "mode must be \"toy\" or \"report\", got {other:?}"
            )))
        }
    }

    manifest.wall_clock_ms = started.elapsed().as_millis();
    let manifest_bytes = serde_json::to_vec_pretty(&manifest).expect("serializable");
    atomic_write(&args.out_dir.join("manifest.json"), &manifest_bytes)?;
    println!("wrote {} outputs to {}", manifest.outputs.len(), args.out_dir.display());
    Ok(ExitCode::SUCCESS)
}

fn read_nw_inputs(args: &NwArgs) -> Result<(Circuit, NwSubstitution), Error> {
    let design: Design = read_json(&args.design)?;
    let q: MultiPoly = read_json(&args.q)?;
    let p: Circuit = read_json(&args.p)?;
    let sub = NwSubstitution::new(design, q)?;
    Ok((p, sub))
}

fn read_hitting_set(path: &Path) -> Result<HittingSet, Error> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    HittingSet::from_text(&text)
}

/// JSON reader that names the offending field on failure.
fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Error> {
    let mut bytes = Vec::new();
    std::fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json_bytes(&bytes)
}

fn from_json_bytes<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, Error> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|e| {
        Error::format(format!("invalid JSON at field `{}`: {}", e.path(), e.inner()))
    })
}

fn emit_json<T: serde::Serialize>(value: &T, output: Option<&Path>) -> Result<(), Error> {
    let text = serde_json::to_string_pretty(value).expect("serializable");
    emit_text(&text, output)
}

fn emit_text(text: &str, output: Option<&Path>) -> Result<(), Error> {
    match output {
        Some(path) => {
            let mut owned = text.as_bytes().to_vec();
            if !text.ends_with('\n') {
                owned.push(b'\n');
            }
            atomic_write(path, &owned)
        }
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn write_output(path: &Path, bytes: &[u8], manifest: &mut RunManifest) -> Result<(), Error> {
    atomic_write(path, bytes)?;
    manifest.record_output(path, bytes);
    Ok(())
}

/// Write via a temp file and rename, so interrupted runs never leave a
/// half-written artifact behind.
fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    let tmp = path.with_extension(format!("tmp.{}", std::process::id()));
    std::fs::write(&tmp, bytes).map_err(|e| Error::Io(format!("{}: {e}", tmp.display())))?;
    std::fs::rename(&tmp, path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    Ok(())
}
