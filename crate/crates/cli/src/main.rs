//! `qdet`: construct frames, certify injectivity, simulate quadratic
//! measurements, and solve the state estimation problem from the shell.
//!
//! Exit codes: 0 success (injective / solvable), 2 not injective,
//! 3 approximate-only estimate, 1 error (one-line message on stderr).

mod files;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qdet::construct::{
    parseval_staircase, random_frame, shift_frame, staircase_complex, staircase_real, sum_pairs,
    EigenvalueSchedule, ShiftFrameConfig,
};
use qdet::estimate::{
    estimate_state, random_state, simulate_measurements, validate_state, EstimateMode,
    EstimateOptions, StateValidation,
};
use qdet::experiments::{
    density_experiment, openness_probe, parseval_repair, perturbed_basis_family,
    riesz_perturbation_check, TrialSummary,
};
use qdet::frame_ops::{canonical_parseval, frame_bounds};
use qdet::injectivity::check_injectivity;
use qdet::separation::tilde_bessel_check;
use qdet::{Frame, FrameVector, ScalarField, TildeVariant};

#[derive(Debug)]
pub struct CliError(String);

impl CliError {
    fn new(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl From<qdet::Error> for CliError {
    fn from(e: qdet::Error) -> Self {
        CliError(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "qdet", version, about = "Frame quantum detection toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    SumPairs,
    Staircase,
    StaircaseComplex,
    Parseval,
    Shift,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for ScalarField {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => ScalarField::Real,
            FieldArg::Complex => ScalarField::Complex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VariantArg {
    Real,
    Complex,
    RealTraceOne,
    ComplexTraceOne,
}

impl From<VariantArg> for TildeVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Real => TildeVariant::RealFull,
            VariantArg::Complex => TildeVariant::ComplexFull,
            VariantArg::RealTraceOne => TildeVariant::RealTraceOne,
            VariantArg::ComplexTraceOne => TildeVariant::ComplexTraceOne,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Exact,
    Lsq,
    Subset,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ExperimentName {
    Density,
    Openness,
    ParsevalRepair,
    Riesz,
    TildeBound,
}

#[derive(Subcommand)]
enum Command {
    /// Generate one of the injective frame families.
    Construct {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Dimension n (for shift: the truncation N).
        #[arg(long)]
        dim: usize,
        /// Seed for the randomized block variants; deterministic without it.
        #[arg(long)]
        seed: Option<u64>,
        /// Scalar field for the parseval and shift kinds.
        #[arg(long, value_enum, default_value = "real")]
        field: FieldArg,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify injectivity of a frame file.
    Check {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Emit the report as JSON instead of the human summary.
        #[arg(long)]
        json: bool,
    },
    /// Recover an operator from a measurement record.
    Estimate {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        measurements: PathBuf,
        #[arg(long, value_enum, default_value = "lsq")]
        mode: ModeArg,
        /// Include state diagnostics (PSD, trace, principal minors).
        #[arg(long)]
        validate_state: bool,
        /// Also write the recovered operator to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate measurements of a state through a frame.
    Simulate {
        #[arg(long)]
        frame: PathBuf,
        /// `random` or a path to an operator file.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 0.0)]
        sigma: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Canonical Parseval transform of a frame file.
    Parseval {
        #[arg(long)]
        frame: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded empirical experiments; emits a trial summary as JSON.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    name: ExperimentName,
    /// Number of frame vectors (density) or family members (riesz,
    /// tilde-bound).
    #[arg(long)]
    m: Option<usize>,
    /// Ambient dimension / truncation.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, value_enum, default_value = "real")]
    field: FieldArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Input frame (openness, parseval-repair).
    #[arg(long)]
    frame: Option<PathBuf>,
    /// Perturbation size (openness, riesz).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Per-vector perturbation bound (parseval-repair).
    #[arg(long)]
    delta: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.0);
            ExitCode::from(1)
        }
    }
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run(command: Command) -> Result<u8, CliError> {
    match command {
        Command::Construct {
            kind,
            dim,
            seed,
            field,
            out,
        } => {
            let frame = match kind {
                KindArg::SumPairs => sum_pairs(dim)?,
                KindArg::Staircase => staircase_real(dim, seed)?,
                KindArg::StaircaseComplex => staircase_complex(dim, seed)?,
                KindArg::Parseval => {
                    let schedule = EigenvalueSchedule::uniform(dim)?;
                    parseval_staircase(&schedule, field.into(), seed)?
                }
                KindArg::Shift => {
                    let mut config = match ScalarField::from(field) {
                        ScalarField::Real => ShiftFrameConfig::real(dim),
                        ScalarField::Complex => ShiftFrameConfig::complex(dim),
                    };
                    config.truncation = dim;
                    shift_frame(&config)?
                }
            };
            emit(&out, &files::frame_json(&frame))?;
            Ok(0)
        }

        Command::Check { frame, variant, json } => {
            let frame = files::read_frame(&frame)?;
            let report = check_injectivity(&frame, variant.into())?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
            } else {
                println!("frame: {} vectors, dimension {} ({})", report.m, frame.dim(), frame.field());
                println!("variant: {}", report.variant);
                println!("embed dim: {}", report.embed_dim);
                println!("rank: {}", report.rank);
                println!("injective: {}", if report.injective { "yes" } else { "no" });
                match report.smallest_kept_singular_value {
                    Some(s) => println!("smallest kept singular value: {s:.6e}"),
                    None => println!("smallest kept singular value: none (rank 0)"),
                }
                println!("tolerance: {:.6e}", report.tolerance);
            }
            Ok(if report.injective { 0 } else { 2 })
        }

        Command::Estimate {
            frame,
            measurements,
            mode,
            validate_state: with_validation,
            out,
        } => {
            let frame = files::read_frame(&frame)?;
            let record = files::read_measurements(&measurements)?;
            let options = EstimateOptions::mode(match mode {
                ModeArg::Exact => EstimateMode::Exact,
                ModeArg::Lsq => EstimateMode::LeastSquares,
                ModeArg::Subset => EstimateMode::Subset,
            });
            let result = estimate_state(&frame, &record, &options)?;

            #[derive(Serialize)]
            struct EstimateOutput {
                solvable: bool,
                rank_a: usize,
                rank_b: usize,
                residual: f64,
                trace: f64,
                min_eigenvalue: f64,
                is_state: bool,
                operator: files::OperatorFile,
                #[serde(skip_serializing_if = "Option::is_none")]
                validation: Option<StateValidation>,
            }
            let output = EstimateOutput {
                solvable: result.solvable,
                rank_a: result.rank_a,
                rank_b: result.rank_b,
                residual: result.residual,
                trace: result.trace,
                min_eigenvalue: result.min_eigenvalue,
                is_state: result.is_state,
                operator: files::OperatorFile::from_operator(&result.operator),
                validation: with_validation.then(|| validate_state(&result.operator, 1e-8)),
            };
            println!("{}", serde_json::to_string_pretty(&output).expect("output serializes"));
            if let Some(path) = out {
                let op_json = serde_json::to_string_pretty(&output.operator).expect("operator serializes");
                std::fs::write(&path, op_json)
                    .map_err(|e| CliError::new(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(if result.solvable { 0 } else { 3 })
        }

        Command::Simulate {
            frame,
            state,
            sigma,
            seed,
            out,
        } => {
            let frame = files::read_frame(&frame)?;
            let operator = if state == "random" {
                random_state(frame.dim(), frame.field(), seed)
            } else {
                files::read_operator(std::path::Path::new(&state))?
            };
            // Independent stream for the noise so `--sigma 0` and a later
            // noisy run share the same state.
            let record = simulate_measurements(&frame, &operator, sigma, seed.wrapping_add(1))?;
            emit(&out, &files::measurements_csv(&record))?;
            Ok(0)
        }

        Command::Parseval { frame, out } => {
            let frame = files::read_frame(&frame)?;
            let parseval = canonical_parseval(&frame)?;
            emit(&out, &files::frame_json(&parseval))?;
            Ok(0)
        }

        Command::Experiment(args) => {
            let summary = run_experiment(&args)?;
            println!("{}", serde_json::to_string_pretty(&summary).expect("summary serializes"));
            Ok(0)
        }
    }
}

fn require<T: Copy>(value: Option<T>, flag: &str, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::new(format!("experiment {name} requires --{flag}")))
}

fn run_experiment(args: &ExperimentArgs) -> Result<TrialSummary, CliError> {
    let field: ScalarField = args.field.into();
    match args.name {
        ExperimentName::Density => {
            let m = require(args.m, "m", "density")?;
            let n = require(args.n, "n", "density")?;
            Ok(density_experiment(m, n, field, args.trials, args.seed)?)
        }
        ExperimentName::Openness => {
            let path = args
                .frame
                .as_ref()
                .ok_or_else(|| CliError::new("experiment openness requires --frame"))?;
            let frame = files::read_frame(path)?;
            let epsilon = require(args.epsilon, "epsilon", "openness")?;
            Ok(openness_probe(&frame, epsilon, args.trials, args.seed)?)
        }
        ExperimentName::ParsevalRepair => {
            let path = args
                .frame
                .as_ref()
                .ok_or_else(|| CliError::new("experiment parseval-repair requires --frame"))?;
            let frame = files::read_frame(path)?;
            let delta = require(args.delta, "delta", "parseval-repair")?;
            let variant = TildeVariant::full(frame.field());
            let mut successes = 0;
            let mut worst_ratio: f64 = 0.0;
            for trial in 0..args.trials {
                let repair = parseval_repair(&frame, delta, split(args.seed, trial))?;
                let ok = repair.within_bound
                    && frame_bounds(&repair.frame).is_parseval(1e-8)
                    && check_injectivity(&repair.frame, variant)?.injective;
                if ok {
                    successes += 1;
                }
                worst_ratio = worst_ratio.max(repair.squared_distance / repair.bound);
            }
            Ok(summary_of(
                "parseval-repair",
                args,
                successes,
                [
                    ("delta".to_string(), delta.to_string()),
                    ("m".to_string(), frame.len().to_string()),
                    ("worst_distance_over_bound".to_string(), format!("{worst_ratio:.6e}")),
                ],
            ))
        }
        ExperimentName::Riesz => {
            let m = require(args.m, "m", "riesz")?;
            let n = require(args.n, "n", "riesz")?;
            let epsilon = require(args.epsilon, "epsilon", "riesz")?;
            let mut successes = 0;
            let mut worst_bound = f64::INFINITY;
            for trial in 0..args.trials {
                let seed = split(args.seed, trial);
                let scale = 0.2 + 0.75 * fract(seed);
                let family = perturbed_basis_family(m, n, epsilon * scale, seed)?;
                let check = riesz_perturbation_check(&family, epsilon)?;
                if check.ok {
                    successes += 1;
                }
                worst_bound = worst_bound.min(check.lower_bound);
            }
            Ok(summary_of(
                "riesz",
                args,
                successes,
                [
                    ("epsilon".to_string(), epsilon.to_string()),
                    ("threshold".to_string(), (1.0 - epsilon).powi(2).to_string()),
                    ("worst_lower_bound".to_string(), format!("{worst_bound:.6e}")),
                ],
            ))
        }
        ExperimentName::TildeBound => {
            let m = require(args.m, "m", "tilde-bound")?;
            let n = require(args.n, "n", "tilde-bound")?;
            let mut successes = 0;
            let mut worst_slack = f64::INFINITY;
            for trial in 0..args.trials {
                let raw = random_frame(m, n, field, split(args.seed, trial))?;
                let vectors: Vec<FrameVector> = raw
                    .vectors()
                    .iter()
                    .map(|v| v.scale(nalgebra::Complex::new(1.0 / v.norm(), 0.0)))
                    .collect();
                let frame = Frame::new(field, vectors)?;
                let report = tilde_bessel_check(&frame)?;
                if report.tilde_bessel_bound <= report.cap + 1e-10 {
                    successes += 1;
                }
                worst_slack = worst_slack.min(report.cap - report.tilde_bessel_bound);
            }
            Ok(summary_of(
                "tilde-bound",
                args,
                successes,
                [("worst_slack".to_string(), format!("{worst_slack:.6e}"))],
            ))
        }
    }
}

fn split(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn fract(seed: u64) -> f64 {
    (seed >> 11) as f64 / (1u64 << 53) as f64
}

fn summary_of(
    name: &str,
    args: &ExperimentArgs,
    successes: usize,
    extra: impl IntoIterator<Item = (String, String)>,
) -> TrialSummary {
    let mut params = BTreeMap::new();
    if let Some(m) = args.m {
        params.insert("m".to_string(), m.to_string());
    }
    if let Some(n) = args.n {
        params.insert("n".to_string(), n.to_string());
    }
    params.insert("field".to_string(), ScalarField::from(args.field).to_string());
    for (k, v) in extra {
        params.insert(k, v);
    }
    TrialSummary {
        name: name.to_string(),
        trials: args.trials,
        successes,
        fraction: if args.trials == 0 { 0.0 } else { successes as f64 / args.trials as f64 },
        seed: args.seed,
        params,
        margin_min: None,
        margin_median: None,
        failure_margins: Vec::new(),
        structurally_impossible: false,
    }
}
