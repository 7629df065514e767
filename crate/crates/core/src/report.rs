//! Run reports and sequence output.
//!
//! A report is a JSON document. Top-level keys, all required:
//!
//! | key | contents |
//! |-----|----------|
//! | `schema_version` | [`REPORT_SCHEMA_VERSION`] |
//! | `tool` | `{name, version}` |
//! | `config` | echo of the run configuration |
//! | `instances` | `{index, attempt, prime}` per verification instance |
//! | `resamples` | instances discarded as degenerate or disagreeing |
//! | `generations_computed` | last generation index |
//! | `new_counts` | objects born at each generation, entry 0 is the seed count |
//! | `cumulative_by_gender` | same-gender running totals |
//! | `reference` | agreement with a published prefix, or `null` |
//! | `coincidences` | per-generation rediscovery and multi-birth counts |
//! | `miracles` | nontrivial cogeny classes with certificates |
//! | `verification_status` | `verified`, `single-instance` or `refuted` |
//! | `timings` | wall-clock milliseconds per phase |
//!
//! Objects are named by their pedigree. Coordinates appear only for miracle
//! children, as canonical `n/d` strings or residues.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::genealogy::{cumulative_by_gender, InstanceInfo, MatingPolicy};
use crate::geometry::{Gender, SeedMode};
use crate::miracles::CogenyClass;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: ConfigEcho,
    pub instances: Vec<InstanceInfo>,
    pub resamples: u32,
    pub generations_computed: u32,
    pub new_counts: Vec<u64>,
    pub cumulative_by_gender: Vec<u64>,
    pub reference: Option<ReferenceCheck>,
    pub coincidences: Vec<GenerationCoincidences>,
    pub miracles: MiracleSummary,
    pub verification_status: VerificationStatus,
    pub timings: Timings,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl Default for ToolInfo {
    fn default() -> Self {
        ToolInfo {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigEcho {
    pub adams: usize,
    pub seed_mode: SeedMode,
    pub seed_gender: Gender,
    pub policy: MatingPolicy,
    pub field: FieldSpec,
    pub max_generation: u32,
    pub verify_runs: u32,
    pub verify_trials: u32,
    pub resample_limit: u32,
    pub config_digest: String,
}

/// Comparison of `new_counts` with a published prefix for the same configuration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceCheck {
    pub published: Vec<u64>,
    /// Number of leading terms compared.
    pub compared: usize,
    pub agrees: bool,
    /// Terms computed past the published prefix, which nothing external confirms.
    pub unverified_terms: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationCoincidences {
    pub generation: u32,
    pub candidate_pairs: u64,
    /// Existing objects reproduced by this generation's matings.
    pub rediscovered_objects: u64,
    pub rediscovering_pairs: u64,
    /// New objects born of two or more pairs.
    pub multi_births: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiracleSummary {
    pub total_classes: usize,
    pub trivial_classes: usize,
    pub nontrivial_classes: usize,
    /// The first `listed.len()` nontrivial classes, in child id order.
    pub listed: Vec<MiracleEntry>,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MiracleEntry {
    pub class: CogenyClass,
    pub members: Vec<String>,
    pub child: String,
    /// Exact coordinates of the child in the first instance.
    pub child_coordinates: [String; 2],
    pub certificate: Vec<String>,
    pub confirmed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerificationStatus {
    /// Counts agreed on every instance and every listed miracle was confirmed.
    Verified,
    /// Only one instance was run.
    SingleInstance,
    /// Some listed candidate failed on a fresh instance.
    Refuted,
}

impl fmt::Display for VerificationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerificationStatus::Verified => "verified",
            VerificationStatus::SingleInstance => "single-instance",
            VerificationStatus::Refuted => "refuted",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timings {
    pub schedule_ms: u64,
    pub miracles_ms: u64,
    pub verification_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// Objects born at each generation.
    New,
    /// Same-gender running totals.
    Cumulative,
}

/// Published new-count prefixes, keyed by seed count, seed mode and policy.
pub fn published_sequence(adams: usize, mode: SeedMode, policy: MatingPolicy) -> Option<&'static [u64]> {
    match (adams, mode, policy) {
        (4, SeedMode::GenericPlane, MatingPolicy::AllPairs) => Some(&[4, 6, 3, 3, 6, 16, 84, 1716, 719628]),
        (5, SeedMode::GenericPlane, MatingPolicy::AllPairs) => Some(&[5, 10, 15, 90, 3495]),
        (6, SeedMode::GenericPlane, MatingPolicy::AllPairs) => Some(&[6, 15, 45, 855, 342000]),
        (5, SeedMode::GenericPlane, MatingPolicy::SameGenerationOnly) => Some(&[5, 10, 15, 75, 2080]),
        _ => None,
    }
}

pub fn reference_check(adams: usize, mode: SeedMode, policy: MatingPolicy, new_counts: &[u64]) -> Option<ReferenceCheck> {
    let published = published_sequence(adams, mode, policy)?;
    let compared = published.len().min(new_counts.len());
    Some(ReferenceCheck {
        published: published.to_vec(),
        compared,
        agrees: published[..compared] == new_counts[..compared],
        unverified_terms: new_counts.len() - compared,
    })
}

/// One line of comma-separated counts.
pub fn emit_sequence(report: &Report, convention: Convention) -> String {
    let terms = match convention {
        Convention::New => &report.new_counts,
        Convention::Cumulative => &report.cumulative_by_gender,
    };
    terms.iter().map(u64::to_string).collect::<Vec<_>>().join(", ")
}

impl Report {
    /// Checks the cross-field invariants a well-formed report satisfies.
    pub fn validate(&self) -> Result<()> {
        let fail = |what: String| Err(Error::FormatMismatch(what));
        if self.schema_version != REPORT_SCHEMA_VERSION {
            return fail(format!("schema version {}", self.schema_version));
        }
        if self.new_counts.first().copied() != Some(self.config.adams as u64) {
            return fail("first count is not the seed count".into());
        }
        if self.new_counts.len() != self.generations_computed as usize + 1 {
            return fail("count vector length does not match generations".into());
        }
        if self.cumulative_by_gender != cumulative_by_gender(&self.new_counts) {
            return fail("cumulative counts are not parity partial sums".into());
        }
        if self.instances.len() != self.config.verify_runs as usize {
            return fail("instance list does not match verify runs".into());
        }
        for entry in &self.miracles.listed {
            if entry.class.trivial {
                return fail("trivial class listed as miracle".into());
            }
            if entry.confirmed && entry.class.witness_instances < self.config.verify_runs {
                return fail(format!("class of {} has too few witnesses", entry.child));
            }
        }
        if self.miracles.listed.len() > self.miracles.nontrivial_classes
            || self.miracles.trivial_classes + self.miracles.nontrivial_classes != self.miracles.total_classes
        {
            return fail("miracle counts are inconsistent".into());
        }
        Ok(())
    }

    /// The report with timings zeroed, for comparing runs.
    pub fn without_timings(&self) -> Report {
        Report {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}
