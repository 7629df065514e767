//! Generation-by-generation reproduction with deduplication.
//!
//! A [`Ledger`] owns every object born so far in one random instance. Each call
//! to [`Ledger::next_generation`] mates the eligible pairs of the parent gender,
//! registers children that were never seen before, and records every other
//! birth as an extra parent pair on the object it reproduced.
//!
//! Candidate pairs are visited in lexicographic order of `(smaller id, larger id)`
//! and new ids are handed out in that order, so the ledger is identical no
//! matter how many workers evaluate the pairs.

mod schedule;
mod snapshot;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::geometry::{cross, Gender, GeomObject};

pub use schedule::{
    cumulative_by_gender, run_schedule, InstanceInfo, RunConfig, RunOutput, Schedule, SeedConfig,
};
pub use snapshot::{config_digest, restore, snapshot, SNAPSHOT_FORMAT_VERSION};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjectId(pub u32);

impl ObjectId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// How an object first came to exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pedigree {
    /// Seed number `i`, counted from 1.
    Adam(u32),
    /// Child of two distinct objects of the opposite gender, smaller id first.
    Birth(ObjectId, ObjectId),
}

/// One unordered pair of parents that produced an object, with the generation it was mated in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ParentPair {
    pub a: ObjectId,
    pub b: ObjectId,
    pub generation: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectRecord<E> {
    pub object: GeomObject<E>,
    pub birth_generation: u32,
    pub first_pedigree: Pedigree,
    pub parent_pairs: Vec<ParentPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationRecord {
    pub index: u32,
    pub gender: Gender,
    pub new_ids: Vec<ObjectId>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatingPolicy {
    /// Any two distinct objects of the parent gender, whatever their birth generation.
    #[default]
    AllPairs,
    /// Only pairs born in the immediately preceding generation.
    SameGenerationOnly,
}

impl fmt::Display for MatingPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatingPolicy::AllPairs => f.write_str("all-pairs"),
            MatingPolicy::SameGenerationOnly => f.write_str("same-generation"),
        }
    }
}

/// A child value reached more than once in one generation, or a birth that
/// reproduced an object which already existed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoincidenceRecord {
    pub generation: u32,
    pub child: ObjectId,
    /// Parent pairs of this generation that produced `child`.
    pub hits: u32,
    /// The child existed before this generation (a clone or rediscovery).
    pub pre_existing: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationOutcome {
    pub new_ids: Vec<ObjectId>,
    pub coincidences: Vec<CoincidenceRecord>,
    pub candidate_pairs: u64,
}

enum Evaluated<E> {
    Existing(ObjectId),
    Fresh([E; 2]),
}

/// Every object of one instance, indexed by id and by canonical coordinates.
#[derive(Debug, Clone)]
pub struct Ledger<F: Field> {
    field: F,
    instance: InstanceInfo,
    objects: Vec<ObjectRecord<F::Elem>>,
    registry: [HashMap<[F::Elem; 2], ObjectId>; 2],
    generations: Vec<GenerationRecord>,
}

impl<F: Field> Ledger<F> {
    /// Generation 0: the seeds, with ids `0..k` in order.
    pub fn from_seeds(field: F, instance: InstanceInfo, seeds: Vec<GeomObject<F::Elem>>) -> Result<Self> {
        let gender = match seeds.first() {
            Some(s) => s.gender,
            None => return Err(Error::InvalidConfig("no seeds".into())),
        };
        let mut ledger = Ledger {
            field,
            instance,
            objects: Vec::with_capacity(seeds.len()),
            registry: [HashMap::new(), HashMap::new()],
            generations: Vec::new(),
        };
        let mut new_ids = Vec::with_capacity(seeds.len());
        for (i, seed) in seeds.into_iter().enumerate() {
            if seed.gender != gender {
                return Err(Error::InvalidConfig("seeds must share one gender".into()));
            }
            if ledger.lookup(&seed).is_some() {
                return Err(Error::DegenerateConfiguration("repeated seed"));
            }
            new_ids.push(ledger.insert(seed, 0, Pedigree::Adam(i as u32 + 1)));
        }
        ledger.generations.push(GenerationRecord {
            index: 0,
            gender,
            new_ids,
        });
        Ok(ledger)
    }

    pub(crate) fn from_parts(
        field: F,
        instance: InstanceInfo,
        objects: Vec<ObjectRecord<F::Elem>>,
        generations: Vec<GenerationRecord>,
    ) -> Result<Self> {
        let mut registry = [HashMap::new(), HashMap::new()];
        for (i, record) in objects.iter().enumerate() {
            let key = record.object.coords.clone();
            if registry[record.object.gender.index()]
                .insert(key, ObjectId(i as u32))
                .is_some()
            {
                return Err(Error::FormatMismatch(format!("duplicate coordinates for id {i}")));
            }
        }
        Ok(Ledger {
            field,
            instance,
            objects,
            registry,
            generations,
        })
    }

    fn insert(&mut self, object: GeomObject<F::Elem>, generation: u32, pedigree: Pedigree) -> ObjectId {
        let id = ObjectId(self.objects.len() as u32);
        self.registry[object.gender.index()].insert(object.coords.clone(), id);
        self.objects.push(ObjectRecord {
            object,
            birth_generation: generation,
            first_pedigree: pedigree,
            parent_pairs: Vec::new(),
        });
        id
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn instance(&self) -> &InstanceInfo {
        &self.instance
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[ObjectRecord<F::Elem>] {
        &self.objects
    }

    pub fn object(&self, id: ObjectId) -> Result<&ObjectRecord<F::Elem>> {
        self.objects.get(id.index()).ok_or(Error::UnknownId(id.0))
    }

    pub fn generations(&self) -> &[GenerationRecord] {
        &self.generations
    }

    /// Index of the last completed generation.
    pub fn last_generation(&self) -> u32 {
        self.generations.len() as u32 - 1
    }

    pub fn seed_gender(&self) -> Gender {
        self.generations[0].gender
    }

    pub fn adams(&self) -> &[ObjectId] {
        &self.generations[0].new_ids
    }

    pub fn lookup(&self, object: &GeomObject<F::Elem>) -> Option<ObjectId> {
        self.registry[object.gender.index()].get(&object.coords).copied()
    }

    pub fn new_counts(&self) -> Vec<u64> {
        self.generations.iter().map(|g| g.new_ids.len() as u64).collect()
    }

    /// All objects of `gender` in id order.
    pub fn ids_of(&self, gender: Gender) -> Vec<ObjectId> {
        self.generations
            .iter()
            .filter(|g| g.gender == gender)
            .flat_map(|g| g.new_ids.iter().copied())
            .collect::<std::collections::BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    /// Coincidence events of one generation, rebuilt from the recorded parent pairs.
    pub fn coincidences(&self, generation: u32) -> Vec<CoincidenceRecord> {
        let mut hits: BTreeMap<ObjectId, u32> = BTreeMap::new();
        let Some(record) = self.generations.get(generation as usize) else {
            return Vec::new();
        };
        for (i, object) in self.objects.iter().enumerate() {
            if object.object.gender != record.gender {
                continue;
            }
            let n = object
                .parent_pairs
                .iter()
                .filter(|p| p.generation == generation)
                .count() as u32;
            if n > 0 {
                hits.insert(ObjectId(i as u32), n);
            }
        }
        self.coincidence_records(generation, &hits)
    }

    fn coincidence_records(&self, generation: u32, hits: &BTreeMap<ObjectId, u32>) -> Vec<CoincidenceRecord> {
        hits.iter()
            .filter_map(|(&child, &n)| {
                let pre_existing = self.objects[child.index()].birth_generation < generation;
                (pre_existing || n >= 2).then_some(CoincidenceRecord {
                    generation,
                    child,
                    hits: n,
                    pre_existing,
                })
            })
            .collect()
    }

    /// The full coincidence log, generation by generation.
    pub fn coincidence_log(&self) -> Vec<CoincidenceRecord> {
        (1..self.generations.len() as u32)
            .flat_map(|g| self.coincidences(g))
            .collect()
    }

    /// Parents eligible for the next generation, plus the index in that list
    /// of the first parent from the previous generation.
    fn parent_pool(&self, policy: MatingPolicy) -> (Vec<ObjectId>, usize) {
        let previous = self.generations.last().expect("generation 0 exists");
        let mut pool = Vec::new();
        if policy == MatingPolicy::AllPairs {
            for g in &self.generations[..self.generations.len() - 1] {
                if g.gender == previous.gender {
                    pool.extend_from_slice(&g.new_ids);
                }
            }
            pool.sort_unstable();
        }
        let first_new = pool.len();
        pool.extend_from_slice(&previous.new_ids);
        (pool, first_new)
    }

    /// Candidate pairs the next generation will evaluate.
    pub fn candidate_pairs(&self, policy: MatingPolicy) -> u64 {
        let (pool, first_new) = self.parent_pool(policy);
        let fresh = (pool.len() - first_new) as u64;
        first_new as u64 * fresh + fresh * fresh.saturating_sub(1) / 2
    }

    /// Runs one generation.
    ///
    /// Under [`MatingPolicy::AllPairs`] only pairs with at least one parent
    /// from the previous generation are mated: every other pair of existing
    /// objects was already mated two generations earlier and can only
    /// reproduce an existing child. `workers` is the number of threads used to
    /// evaluate pairs; `0` uses the global rayon pool, `1` stays on the
    /// calling thread.
    pub fn next_generation(&mut self, policy: MatingPolicy, workers: usize) -> Result<GenerationOutcome> {
        let generation = self.generations.len() as u32;
        let child_gender = self.generations.last().expect("generation 0 exists").gender.opposite();
        let (pool, first_new) = self.parent_pool(policy);
        let candidate_pairs = self.candidate_pairs(policy);

        let rows = match workers {
            1 => (0..pool.len())
                .map(|i| self.evaluate_row(&pool, first_new, i, child_gender))
                .collect::<Result<Vec<_>>>()?,
            0 => self.evaluate_parallel(&pool, first_new, child_gender)?,
            n => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidConfig(e.to_string()))?
                .install(|| self.evaluate_parallel(&pool, first_new, child_gender))?,
        };

        // Deterministic commit in lexicographic pair order.
        let mut new_ids = Vec::new();
        let mut hits: BTreeMap<ObjectId, u32> = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            for (j, evaluated) in row {
                let (a, b) = (pool[i], pool[j]);
                let child = match evaluated {
                    Evaluated::Existing(id) => id,
                    Evaluated::Fresh(coords) => match self.registry[child_gender.index()].get(&coords) {
                        Some(&id) => id,
                        None => {
                            let id = self.insert(
                                GeomObject {
                                    gender: child_gender,
                                    coords,
                                },
                                generation,
                                Pedigree::Birth(a, b),
                            );
                            new_ids.push(id);
                            id
                        }
                    },
                };
                self.objects[child.index()].parent_pairs.push(ParentPair { a, b, generation });
                *hits.entry(child).or_default() += 1;
            }
        }

        let coincidences = self.coincidence_records(generation, &hits);
        self.generations.push(GenerationRecord {
            index: generation,
            gender: child_gender,
            new_ids: new_ids.clone(),
        });
        Ok(GenerationOutcome {
            new_ids,
            coincidences,
            candidate_pairs,
        })
    }

    fn evaluate_parallel(
        &self,
        pool: &[ObjectId],
        first_new: usize,
        child_gender: Gender,
    ) -> Result<Vec<Vec<(usize, Evaluated<F::Elem>)>>> {
        (0..pool.len())
            .into_par_iter()
            .map(|i| self.evaluate_row(pool, first_new, i, child_gender))
            .collect()
    }

    /// Children of `pool[i]` with every later eligible partner.
    fn evaluate_row(
        &self,
        pool: &[ObjectId],
        first_new: usize,
        i: usize,
        child_gender: Gender,
    ) -> Result<Vec<(usize, Evaluated<F::Elem>)>> {
        let start = if i < first_new { first_new } else { i + 1 };
        let registry = &self.registry[child_gender.index()];
        let x = &self.objects[pool[i].index()].object.coords;
        (start..pool.len())
            .map(|j| {
                let y = &self.objects[pool[j].index()].object.coords;
                if x == y {
                    return Err(Error::DegenerateConfiguration("identical parents"));
                }
                let coords = cross(&self.field, x, y)?;
                Ok((
                    j,
                    match registry.get(&coords) {
                        Some(&id) => Evaluated::Existing(id),
                        None => Evaluated::Fresh(coords),
                    },
                ))
            })
            .collect()
    }
}
