//! End-to-end run: schedule, cogeny extraction, verification, report.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, PrimeField, Rationals};
use crate::genealogy::{config_digest, restore, snapshot, Ledger, RunConfig, Schedule};
use crate::miracles::{
    certificate, extract_cogeny_classes, render_pedigree, verify_candidates, CogenyClass, VerifyRequest,
};
use crate::report::{
    reference_check, ConfigEcho, GenerationCoincidences, MiracleEntry, MiracleSummary, Report, Timings, ToolInfo,
    VerificationStatus, REPORT_SCHEMA_VERSION,
};

pub const DEFAULT_VERIFY_TRIALS: u32 = 3;
pub const DEFAULT_MAX_MIRACLES: usize = 256;

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub run: RunConfig,
    /// Fresh instances each listed miracle is re-checked on.
    pub verify_trials: u32,
    /// Nontrivial classes listed (and verified) in the report.
    pub max_miracles: usize,
    /// Directory that receives one snapshot per instance after every generation.
    pub snapshot_dir: Option<PathBuf>,
    /// Directory of snapshots to continue from.
    pub resume_dir: Option<PathBuf>,
}

impl PipelineConfig {
    pub fn new(run: RunConfig) -> Self {
        PipelineConfig {
            run,
            verify_trials: DEFAULT_VERIFY_TRIALS,
            max_miracles: DEFAULT_MAX_MIRACLES,
            snapshot_dir: None,
            resume_dir: None,
        }
    }
}

/// Snapshot file of instance `index` inside a snapshot directory.
pub fn snapshot_path(dir: &Path, index: u32) -> PathBuf {
    dir.join(format!("instance-{index}.json"))
}

pub fn run_pipeline(config: &PipelineConfig) -> Result<Report> {
    match config.run.seed.field.kind {
        FieldKind::Rational => run_pipeline_in::<Rationals>(config),
        FieldKind::Prime => run_pipeline_in::<PrimeField>(config),
    }
}

pub fn run_pipeline_in<F: Field>(config: &PipelineConfig) -> Result<Report> {
    let run = &config.run;
    run.validate()?;
    let digest = config_digest(run);
    let spec = &run.seed.field;

    let resumed = match &config.resume_dir {
        Some(dir) => (0..run.verify_runs)
            .map(|i| restore::<F>(&snapshot_path(dir, i), &digest))
            .collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    if let Some(ledger) = resumed.iter().find(|l| l.last_generation() > run.max_generation) {
        return Err(Error::InvalidConfig(format!(
            "snapshot already holds generation {}, past the requested {}",
            ledger.last_generation(),
            run.max_generation
        )));
    }
    if let Some(dir) = &config.snapshot_dir {
        std::fs::create_dir_all(dir)?;
    }

    let started = Instant::now();
    let mut schedule = Schedule::<F>::new(run).resume(resumed);
    if let Some(dir) = &config.snapshot_dir {
        let digest = digest.clone();
        schedule = schedule.on_generation(move |ledger| {
            snapshot(ledger, spec, &digest, &snapshot_path(dir, ledger.instance().index))
        });
    }
    let output = schedule.run()?;
    if let Some(dir) = &config.snapshot_dir {
        for ledger in &output.ledgers {
            snapshot(ledger, spec, &digest, &snapshot_path(dir, ledger.instance().index))?;
        }
    }
    let schedule_ms = started.elapsed().as_millis() as u64;

    let started = Instant::now();
    let per_instance = output
        .ledgers
        .iter()
        .map(extract_cogeny_classes)
        .collect::<Result<Vec<_>>>()?;
    let mut classes = per_instance[0].clone();
    for class in classes.iter_mut() {
        class.witness_instances = per_instance
            .iter()
            .filter(|other| other.iter().any(|c| same_structure(c, class)))
            .count() as u32;
        if class.witness_instances != run.verify_runs {
            return Err(Error::VerificationMismatch(format!(
                "cogeny class of object {} is missing from some instances",
                class.child
            )));
        }
    }
    let primary = &output.ledgers[0];
    let nontrivial: Vec<&CogenyClass> = classes.iter().filter(|c| !c.trivial).collect();
    let listed: Vec<CogenyClass> = nontrivial.iter().take(config.max_miracles).map(|&c| c.clone()).collect();
    let certificates = listed
        .iter()
        .map(|c| certificate(primary, c))
        .collect::<Result<Vec<_>>>()?;
    let miracles_ms = started.elapsed().as_millis() as u64;

    let started = Instant::now();
    let request = VerifyRequest {
        adams: run.seed.adams,
        mode: run.seed.mode,
        seed_gender: run.seed.seed_gender,
        field: spec.clone(),
        trials: config.verify_trials.max(1),
        resample_limit: run.resample_limit,
    };
    let candidates: Vec<_> = certificates.iter().map(|c| c.expressions.clone()).collect();
    let verdicts = if candidates.is_empty() {
        Vec::new()
    } else {
        verify_candidates::<F>(&candidates, &request)?
    };
    let verification_ms = started.elapsed().as_millis() as u64;

    let mut entries = Vec::with_capacity(listed.len());
    for ((mut class, cert), verdict) in listed.into_iter().zip(certificates).zip(&verdicts) {
        class.witness_instances += verdict.witness_instances;
        let coords = &primary.object(class.child)?.object.coords;
        let f = primary.field();
        entries.push(MiracleEntry {
            members: class
                .members
                .iter()
                .map(|&id| render_pedigree(primary, id))
                .collect::<Result<_>>()?,
            child: render_pedigree(primary, class.child)?,
            child_coordinates: [f.format(&coords[0]), f.format(&coords[1])],
            certificate: cert.rendered,
            confirmed: verdict.confirmed,
            class,
        });
    }

    let status = if entries.iter().any(|e| !e.confirmed) {
        VerificationStatus::Refuted
    } else if run.verify_runs < 2 {
        VerificationStatus::SingleInstance
    } else {
        VerificationStatus::Verified
    };
    let trivial_classes = classes.iter().filter(|c| c.trivial).count();
    let report = Report {
        schema_version: REPORT_SCHEMA_VERSION,
        tool: ToolInfo::default(),
        config: ConfigEcho {
            adams: run.seed.adams,
            seed_mode: run.seed.mode,
            seed_gender: run.seed.seed_gender,
            policy: run.policy,
            field: spec.clone(),
            max_generation: run.max_generation,
            verify_runs: run.verify_runs,
            verify_trials: request.trials,
            resample_limit: run.resample_limit,
            config_digest: digest,
        },
        instances: output.instances.clone(),
        resamples: output.resamples,
        generations_computed: primary.last_generation(),
        reference: reference_check(run.seed.adams, run.seed.mode, run.policy, &output.new_counts),
        new_counts: output.new_counts.clone(),
        cumulative_by_gender: output.cumulative_by_gender.clone(),
        coincidences: coincidence_summary(primary),
        miracles: MiracleSummary {
            total_classes: classes.len(),
            trivial_classes,
            nontrivial_classes: nontrivial.len(),
            truncated: nontrivial.len() > entries.len(),
            listed: entries,
        },
        verification_status: status,
        timings: Timings {
            schedule_ms,
            miracles_ms,
            verification_ms,
        },
    };
    report.validate()?;
    Ok(report)
}

fn same_structure(a: &CogenyClass, b: &CogenyClass) -> bool {
    a.members == b.members && a.child == b.child && a.trivial == b.trivial
}

fn coincidence_summary<F: Field>(ledger: &Ledger<F>) -> Vec<GenerationCoincidences> {
    let mut out: Vec<GenerationCoincidences> = (1..=ledger.last_generation())
        .map(|generation| GenerationCoincidences {
            generation,
            candidate_pairs: 0,
            rediscovered_objects: 0,
            rediscovering_pairs: 0,
            multi_births: 0,
        })
        .collect();
    let mut per_generation: Vec<u64> = vec![0; out.len() + 1];
    for record in ledger.objects() {
        per_generation.iter_mut().for_each(|n| *n = 0);
        for pair in &record.parent_pairs {
            per_generation[pair.generation as usize] += 1;
        }
        for (g, &n) in per_generation.iter().enumerate().skip(1) {
            if n == 0 {
                continue;
            }
            let entry = &mut out[g - 1];
            entry.candidate_pairs += n;
            if (g as u32) > record.birth_generation {
                entry.rediscovered_objects += 1;
                entry.rediscovering_pairs += n;
            } else if n >= 2 {
                entry.multi_births += 1;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::genealogy::{MatingPolicy, SeedConfig};
    use crate::geometry::SeedMode;

    fn config(adams: usize, generations: u32) -> PipelineConfig {
        let seed = SeedConfig::new(adams, SeedMode::GenericPlane, FieldSpec::prime(11));
        PipelineConfig::new(RunConfig::new(seed, MatingPolicy::AllPairs, generations))
    }

    #[test]
    fn four_adams_through_generation_five() {
        let report = run_pipeline(&config(4, 5)).unwrap();
        assert_eq!(report.new_counts, vec![4, 6, 3, 3, 6, 16]);
        assert_eq!(report.miracles.nontrivial_classes, 4);
        assert_eq!(report.verification_status, VerificationStatus::Verified);
        assert!(report.reference.as_ref().unwrap().agrees);
        for entry in &report.miracles.listed {
            assert!(entry.confirmed);
            assert_eq!(entry.class.members.len(), 3);
            assert_eq!(entry.class.witness_instances, 2 + 3);
            assert_eq!(entry.certificate.len(), 3);
        }
        let last = report.coincidences.last().unwrap();
        assert_eq!(last.multi_births, 4);
    }

    #[test]
    fn identical_configs_give_identical_reports() {
        let a = run_pipeline(&config(4, 4)).unwrap();
        let b = run_pipeline(&config(4, 4)).unwrap();
        assert_eq!(a.without_timings(), b.without_timings());
    }

    #[test]
    fn seeds_only() {
        let report = run_pipeline(&config(4, 0)).unwrap();
        assert_eq!(report.new_counts, vec![4]);
        assert!(report.coincidences.is_empty());
        assert_eq!(report.miracles.total_classes, 0);
    }

    #[test]
    fn truncated_listing() {
        let mut c = config(4, 5);
        c.max_miracles = 1;
        let report = run_pipeline(&c).unwrap();
        assert_eq!(report.miracles.listed.len(), 1);
        assert!(report.miracles.truncated);
    }

    #[test]
    fn resume_past_target_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = config(4, 3);
        c.snapshot_dir = Some(dir.path().to_path_buf());
        run_pipeline(&c).unwrap();
        let mut c = config(4, 2);
        c.resume_dir = Some(dir.path().to_path_buf());
        assert!(matches!(run_pipeline(&c), Err(Error::InvalidConfig(_))));
    }
}
