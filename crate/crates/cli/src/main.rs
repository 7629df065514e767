//! `geomiracles`: count the generations of a point/line genealogy and list its miracles.
//!
//! Exit status:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | other failure (malformed pedigree, internal error) |
//! | 2 | usage error: bad flags or an invalid configuration |
//! | 3 | seed failure: no usable random instance within the resample limit |
//! | 4 | verification mismatch: instances disagree, or a listed miracle was refuted |
//! | 5 | law-of-cogeny violation |
//! | 6 | snapshot unusable: wrong format or written for another configuration |
//! | 7 | I/O or serialization failure |

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use geomiracles_core::field::{FieldError, DEFAULT_SAMPLE_BOUND};
use geomiracles_core::geometry::DEFAULT_SEED_RETRIES;
use geomiracles_core::pipeline::{DEFAULT_MAX_MIRACLES, DEFAULT_VERIFY_TRIALS};
use geomiracles_core::report::emit_sequence;
use geomiracles_core::{
    run_pipeline, Convention, Error, FieldKind, FieldSpec, MatingPolicy, PipelineConfig, RunConfig, SeedConfig,
    SeedMode, VerificationStatus,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    AllPairs,
    SameGeneration,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SeedModeArg {
    Generic,
    Conic,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FieldArg {
    Rational,
    Prime,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SequenceArg {
    New,
    Cumulative,
}

#[derive(Debug, Parser)]
#[command(name = "geomiracles", version, about = "Iterated join and meet of generic points and lines")]
struct Args {
    /// Number of seed points.
    #[arg(long, default_value_t = 4)]
    adams: usize,
    /// Last generation to compute.
    #[arg(long, default_value_t = 5)]
    generations: u32,
    #[arg(long, value_enum, default_value = "all-pairs")]
    policy: PolicyArg,
    #[arg(long, value_enum, default_value = "generic")]
    seed_mode: SeedModeArg,
    #[arg(long, value_enum, default_value = "prime")]
    field: FieldArg,
    /// Modulus for prime mode; a random prime of at least 60 bits when omitted.
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long, default_value_t = 0)]
    rng_seed: u64,
    /// Independent random instances whose counts must agree.
    #[arg(long, default_value_t = 2)]
    verify_runs: u32,
    /// Fresh instances each listed miracle is re-checked on.
    #[arg(long, default_value_t = DEFAULT_VERIFY_TRIALS)]
    trials: u32,
    /// Bound on numerator and denominator of random rational coordinates.
    #[arg(long, default_value_t = DEFAULT_SAMPLE_BOUND)]
    sample_bound: u64,
    #[arg(long, default_value_t = DEFAULT_SEED_RETRIES)]
    resample_limit: u32,
    /// Report file.
    #[arg(long, default_value = "report.json")]
    out: PathBuf,
    /// Write one snapshot per instance to this directory after every generation.
    #[arg(long, value_name = "DIR")]
    snapshot: Option<PathBuf>,
    /// Continue from the snapshots in this directory.
    #[arg(long, value_name = "PATH")]
    resume: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "new")]
    emit_sequence: SequenceArg,
    /// Nontrivial cogeny classes listed and verified in the report.
    #[arg(long, default_value_t = DEFAULT_MAX_MIRACLES)]
    max_miracles: usize,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

impl Args {
    fn pipeline(&self) -> PipelineConfig {
        let field = FieldSpec {
            kind: match self.field {
                FieldArg::Rational => FieldKind::Rational,
                FieldArg::Prime => FieldKind::Prime,
            },
            prime: self.prime,
            rng_seed: self.rng_seed,
            sample_bound: self.sample_bound,
        };
        let mode = match self.seed_mode {
            SeedModeArg::Generic => SeedMode::GenericPlane,
            SeedModeArg::Conic => SeedMode::GenericConic,
        };
        let policy = match self.policy {
            PolicyArg::AllPairs => MatingPolicy::AllPairs,
            PolicyArg::SameGeneration => MatingPolicy::SameGenerationOnly,
        };
        let mut run = RunConfig::new(SeedConfig::new(self.adams, mode, field), policy, self.generations);
        run.verify_runs = self.verify_runs;
        run.resample_limit = self.resample_limit;
        run.workers = self.workers;
        PipelineConfig {
            run,
            verify_trials: self.trials,
            max_miracles: self.max_miracles,
            snapshot_dir: self.snapshot.clone(),
            resume_dir: self.resume.clone(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_) | Error::Field(FieldError::InvalidSpec(_)) => 2,
        Error::SeedFailure { .. } | Error::DegenerateConfiguration(_) | Error::Field(FieldError::DivisionByZero) => 3,
        Error::VerificationMismatch(_) => 4,
        Error::CogenyViolation(_) => 5,
        Error::FormatMismatch(_) | Error::ConfigDigestMismatch { .. } | Error::Field(FieldError::Parse(_)) => 6,
        Error::Io(_) | Error::Json(_) => 7,
        Error::UnknownId(_) | Error::PedigreeParse(_) => 1,
    }
}

fn run(args: &Args) -> Result<VerificationStatus, Error> {
    let report = run_pipeline(&args.pipeline())?;
    std::fs::write(&args.out, serde_json::to_string_pretty(&report)? + "\n")?;
    let convention = match args.emit_sequence {
        SequenceArg::New => Convention::New,
        SequenceArg::Cumulative => Convention::Cumulative,
    };
    println!("{}", emit_sequence(&report, convention));
    eprintln!(
        "{} generations, {} nontrivial cogeny classes ({} listed), status {}, report {}",
        report.generations_computed,
        report.miracles.nontrivial_classes,
        report.miracles.listed.len(),
        report.verification_status,
        args.out.display()
    );
    if let Some(reference) = &report.reference {
        if !reference.agrees {
            eprintln!("warning: counts differ from the published prefix {:?}", reference.published);
        }
    }
    Ok(report.verification_status)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(VerificationStatus::Refuted) => {
            eprintln!("error: a listed miracle failed on a fresh instance");
            ExitCode::from(4)
        }
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
