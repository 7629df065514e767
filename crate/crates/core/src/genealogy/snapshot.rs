//! Ledger snapshots.
//!
//! A snapshot is a JSON document holding one instance ledger: format tag and
//! version, the digest of the run configuration it belongs to, the field spec
//! and modulus, and one record per object with its coordinates written as
//! exact decimal strings.

use std::fs;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{GenerationRecord, InstanceInfo, Ledger, MatingPolicy, ObjectId, ObjectRecord, ParentPair, Pedigree, RunConfig};
use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, FieldSpec};
use crate::geometry::{Gender, GeomObject, SeedMode};

pub const SNAPSHOT_FORMAT_VERSION: u32 = 1;
const SNAPSHOT_FORMAT: &str = "geomiracles-ledger";

/// Digest of everything in a run configuration that determines ledger contents.
///
/// Target generation, worker count and resample limit are left out so that a
/// snapshot can be resumed towards a later generation on a different machine.
pub fn config_digest(config: &RunConfig) -> String {
    #[derive(Serialize)]
    struct Digested<'a> {
        adams: usize,
        mode: SeedMode,
        seed_gender: Gender,
        field: &'a FieldSpec,
        policy: MatingPolicy,
        verify_runs: u32,
    }
    let digested = Digested {
        adams: config.seed.adams,
        mode: config.seed.mode,
        seed_gender: config.seed.seed_gender,
        field: &config.seed.field,
        policy: config.policy,
        verify_runs: config.verify_runs,
    };
    let bytes = serde_json::to_vec(&digested).expect("config serializes");
    hex::encode(Sha256::digest(bytes))
}

#[derive(Serialize, Deserialize)]
struct SnapshotFile {
    format: String,
    version: u32,
    config_digest: String,
    field: FieldSpec,
    field_kind: FieldKind,
    instance: InstanceInfo,
    generations: Vec<GenerationRecord>,
    objects: Vec<ObjectEntry>,
}

#[derive(Serialize, Deserialize)]
struct ObjectEntry {
    id: u32,
    gender: Gender,
    coords: [String; 2],
    birth_generation: u32,
    first_pedigree: Pedigree,
    /// `[a, b, generation]` triples.
    parent_pairs: Vec<[u32; 3]>,
}

/// Writes `ledger` to `path`, replacing any previous file atomically.
pub fn snapshot<F: Field>(ledger: &Ledger<F>, spec: &FieldSpec, digest: &str, path: &Path) -> Result<()> {
    let f = ledger.field();
    let file = SnapshotFile {
        format: SNAPSHOT_FORMAT.to_string(),
        version: SNAPSHOT_FORMAT_VERSION,
        config_digest: digest.to_string(),
        field: spec.clone(),
        field_kind: f.kind(),
        instance: *ledger.instance(),
        generations: ledger.generations().to_vec(),
        objects: ledger
            .objects()
            .iter()
            .enumerate()
            .map(|(i, r)| ObjectEntry {
                id: i as u32,
                gender: r.object.gender,
                coords: [f.format(&r.object.coords[0]), f.format(&r.object.coords[1])],
                birth_generation: r.birth_generation,
                first_pedigree: r.first_pedigree,
                parent_pairs: r.parent_pairs.iter().map(|p| [p.a.0, p.b.0, p.generation]).collect(),
            })
            .collect(),
    };
    let tmp = path.with_extension("tmp");
    {
        let mut out = BufWriter::new(fs::File::create(&tmp)?);
        serde_json::to_writer(&mut out, &file)?;
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a ledger written by [`snapshot`], checking it against `expected_digest`.
pub fn restore<F: Field>(path: &Path, expected_digest: &str) -> Result<Ledger<F>> {
    let reader = BufReader::new(fs::File::open(path)?);
    let file: SnapshotFile = serde_json::from_reader(reader)
        .map_err(|e| Error::FormatMismatch(format!("{}: {e}", path.display())))?;
    if file.format != SNAPSHOT_FORMAT || file.version != SNAPSHOT_FORMAT_VERSION {
        return Err(Error::FormatMismatch(format!(
            "expected {SNAPSHOT_FORMAT} v{SNAPSHOT_FORMAT_VERSION}, found {} v{}",
            file.format, file.version
        )));
    }
    if file.config_digest != expected_digest {
        return Err(Error::ConfigDigestMismatch {
            expected: expected_digest.to_string(),
            found: file.config_digest,
        });
    }
    let field = F::reinstate(&file.field, file.instance.prime)?;
    if field.kind() != file.field_kind {
        return Err(Error::FormatMismatch(format!(
            "snapshot holds a {} ledger",
            file.field_kind
        )));
    }

    let mut objects = Vec::with_capacity(file.objects.len());
    for (i, entry) in file.objects.into_iter().enumerate() {
        if entry.id as usize != i {
            return Err(Error::FormatMismatch(format!("object {i} stored with id {}", entry.id)));
        }
        if let Pedigree::Birth(a, b) = entry.first_pedigree {
            if a >= b || b.index() >= i {
                return Err(Error::FormatMismatch(format!("bad pedigree for object {i}")));
            }
        }
        let [c1, c2] = entry.coords;
        objects.push(ObjectRecord {
            object: GeomObject {
                gender: entry.gender,
                coords: [field.parse(&c1)?, field.parse(&c2)?],
            },
            birth_generation: entry.birth_generation,
            first_pedigree: entry.first_pedigree,
            parent_pairs: entry
                .parent_pairs
                .into_iter()
                .map(|[a, b, generation]| ParentPair {
                    a: ObjectId(a),
                    b: ObjectId(b),
                    generation,
                })
                .collect(),
        });
    }
    if file.generations.is_empty() {
        return Err(Error::FormatMismatch("no generations".into()));
    }
    for g in &file.generations {
        if g.new_ids.iter().any(|id| id.index() >= objects.len()) {
            return Err(Error::FormatMismatch(format!("generation {} lists unknown ids", g.index)));
        }
    }
    Ledger::from_parts(field, file.instance, objects, file.generations)
}
