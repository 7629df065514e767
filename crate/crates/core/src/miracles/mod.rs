//! Coincidences between family trees.
//!
//! When the child of `A` and `B` equals the child of `A` and `C`, the three
//! parents are cogenical: three collinear points, or three concurrent lines.
//! [`extract_cogeny_classes`] groups the recorded parent pairs of every object
//! into such classes, and [`verify_candidates`] re-checks a claimed identity on
//! fresh random instances.

pub mod fixtures;
mod term;

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, FieldKind, FieldSpec, PrimeField, Rationals};
use crate::genealogy::{Ledger, ObjectId};
use crate::geometry::{child, seed_objects, Gender, SeedMode, DEFAULT_SEED_RETRIES};

pub use term::{render_pedigree, term_of, Term};

/// First random stream used by verification instances, clear of the run instances.
const VERIFY_STREAM_BASE: u64 = 1 << 30;

/// A maximal set of same-gender objects any two of which produce `child`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CogenyClass {
    /// Gender of the members.
    pub gender: Gender,
    pub members: Vec<ObjectId>,
    pub child: ObjectId,
    pub child_generation: u32,
    /// Earliest generation in which two members were mated.
    pub first_mating_generation: u32,
    /// The child was not born of a coincidence: it already existed, or had a single
    /// parent pair in its birth generation, before the members' other matings reproduced it.
    pub trivial: bool,
    pub witness_instances: u32,
}

/// Groups the parent pairs of every object into cogeny classes.
///
/// Within one child, two parent pairs sharing a parent are joined into one
/// class; the class must then be a clique (every two members reproduce the
/// child). Member pairs that were never mated are computed explicitly, and a
/// different result is reported as [`Error::CogenyViolation`].
pub fn extract_cogeny_classes<F: Field>(ledger: &Ledger<F>) -> Result<Vec<CogenyClass>> {
    let f = ledger.field();
    let mut classes = Vec::new();
    for (i, record) in ledger.objects().iter().enumerate() {
        if record.parent_pairs.len() < 2 {
            continue;
        }
        let child_id = ObjectId(i as u32);

        let mut slot: HashMap<ObjectId, usize> = HashMap::new();
        let mut vertices = Vec::new();
        for p in &record.parent_pairs {
            for v in [p.a, p.b] {
                slot.entry(v).or_insert_with(|| {
                    vertices.push(v);
                    vertices.len() - 1
                });
            }
        }
        let mut uf = UnionFind::new(vertices.len());
        for p in &record.parent_pairs {
            uf.union(slot[&p.a], slot[&p.b]);
        }
        let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (pi, p) in record.parent_pairs.iter().enumerate() {
            components.entry(uf.find(slot[&p.a])).or_default().push(pi);
        }

        for pair_indices in components.values() {
            if pair_indices.len() < 2 {
                continue;
            }
            let pairs: Vec<_> = pair_indices.iter().map(|&pi| record.parent_pairs[pi]).collect();
            let mut members: Vec<ObjectId> = pairs.iter().flat_map(|p| [p.a, p.b]).collect();
            members.sort_unstable();
            members.dedup();

            let edges: HashSet<(ObjectId, ObjectId)> = pairs.iter().map(|p| (p.a.min(p.b), p.a.max(p.b))).collect();
            for (x, &u) in members.iter().enumerate() {
                for &v in &members[x + 1..] {
                    if edges.contains(&(u, v)) {
                        continue;
                    }
                    let produced = child(f, &ledger.object(u)?.object, &ledger.object(v)?.object)?;
                    if produced != record.object {
                        return Err(Error::CogenyViolation(format!(
                            "{u} and {v} share parents-in-law with {child_id} but produce a different child"
                        )));
                    }
                }
            }

            let at_birth = pairs
                .iter()
                .filter(|p| p.generation == record.birth_generation)
                .count();
            classes.push(CogenyClass {
                gender: record.object.gender.opposite(),
                members,
                child: child_id,
                child_generation: record.birth_generation,
                first_mating_generation: pairs.iter().map(|p| p.generation).min().expect("non-empty"),
                trivial: at_birth < 2,
                witness_instances: 1,
            });
        }
    }
    Ok(classes)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// The expressions that all construct one shared child, with their text form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    #[serde(skip)]
    pub expressions: Vec<Term>,
    pub rendered: Vec<String>,
}

impl Certificate {
    pub fn new(expressions: Vec<Term>, seed_gender: Gender) -> Self {
        let rendered = expressions.iter().map(|t| t.render(seed_gender)).collect();
        Certificate { expressions, rendered }
    }
}

/// Every pairwise child of `members`: the constructions a cogenical set claims are equal.
pub fn cogeny_expressions(members: &[Term]) -> Vec<Term> {
    let mut out = Vec::new();
    for (i, x) in members.iter().enumerate() {
        for y in &members[i + 1..] {
            out.push(Term::birth(x.clone(), y.clone()));
        }
    }
    out
}

/// Certificate for a class: the child built from each pair of members.
pub fn certificate<F: Field>(ledger: &Ledger<F>, class: &CogenyClass) -> Result<Certificate> {
    let members = class
        .members
        .iter()
        .map(|&id| term_of(ledger, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(Certificate::new(cogeny_expressions(&members), ledger.seed_gender()))
}

/// Where and how often to re-check candidate identities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyRequest {
    pub adams: usize,
    pub mode: SeedMode,
    pub seed_gender: Gender,
    pub field: FieldSpec,
    pub trials: u32,
    pub resample_limit: u32,
}

impl VerifyRequest {
    pub fn new(adams: usize, mode: SeedMode, field: FieldSpec, trials: u32) -> Self {
        VerifyRequest {
            adams,
            mode,
            seed_gender: Gender::Point,
            field,
            trials,
            resample_limit: DEFAULT_SEED_RETRIES,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verification {
    pub confirmed: bool,
    /// Fresh instances on which every expression agreed.
    pub witness_instances: u32,
}

/// Checks one candidate; see [`verify_candidates`].
pub fn verify_candidate<F: Field>(expressions: &[Term], request: &VerifyRequest) -> Result<Verification> {
    Ok(verify_candidates::<F>(&[expressions.to_vec()], request)?[0])
}

/// Evaluates every candidate's expressions on `request.trials` fresh instances.
///
/// A candidate is confirmed when its expressions agree on every instance and
/// refuted at the first instance where they differ. An instance on which any
/// evaluation is degenerate is resampled and not counted.
pub fn verify_candidates<F: Field>(candidates: &[Vec<Term>], request: &VerifyRequest) -> Result<Vec<Verification>> {
    if request.trials < 1 {
        return Err(Error::InvalidConfig("verification needs at least one trial".into()));
    }
    for expressions in candidates {
        if let Some(t) = expressions.iter().find(|t| t.max_adam() as usize > request.adams) {
            return Err(Error::InvalidConfig(format!(
                "{} uses more than {} seeds",
                t.render(request.seed_gender),
                request.adams
            )));
        }
        let genders = expressions
            .iter()
            .map(|t| t.gender(request.seed_gender))
            .collect::<Result<HashSet<_>>>()?;
        if genders.len() > 1 {
            return Err(Error::InvalidConfig("expressions of different gender".into()));
        }
    }

    let mut results: Vec<Verification> = candidates
        .iter()
        .map(|_| Verification {
            confirmed: true,
            witness_instances: 0,
        })
        .collect();
    let mut resamples = 0u32;
    for trial in 0..request.trials {
        let mut attempt = 0u64;
        let values = loop {
            match evaluate_instance::<F>(candidates, &results, request, trial, attempt) {
                Ok(values) => break values,
                Err(e) if e.is_resamplable() => {
                    resamples += 1;
                    if resamples > request.resample_limit {
                        return Err(Error::SeedFailure { attempts: resamples });
                    }
                    attempt += 1;
                }
                Err(e) => return Err(e),
            }
        };
        for (result, agreed) in results.iter_mut().zip(values) {
            match agreed {
                Some(true) => result.witness_instances += 1,
                Some(false) => result.confirmed = false,
                None => {}
            }
        }
    }
    Ok(results)
}

/// Per candidate: `Some(agree)` if still open, `None` if already refuted.
fn evaluate_instance<F: Field>(
    candidates: &[Vec<Term>],
    results: &[Verification],
    request: &VerifyRequest,
    trial: u32,
    attempt: u64,
) -> Result<Vec<Option<bool>>> {
    let mut stream = request.field.stream(VERIFY_STREAM_BASE + trial as u64, attempt);
    let f = F::instantiate(&request.field, &mut stream)?;
    let seeds = seed_objects(
        &f,
        request.adams,
        request.mode,
        request.seed_gender,
        &mut stream,
        request.resample_limit,
    )?;
    candidates
        .iter()
        .zip(results)
        .map(|(expressions, result)| {
            if !result.confirmed {
                return Ok(None);
            }
            let mut values = expressions.iter().map(|t| t.evaluate(&f, &seeds.objects));
            let Some(first) = values.next().transpose()? else {
                return Ok(Some(true));
            };
            for v in values {
                if v? != first {
                    return Ok(Some(false));
                }
            }
            Ok(Some(true))
        })
        .collect()
}

/// [`verify_candidates`] in the field named by `request.field.kind`.
pub fn verify_candidates_in(candidates: &[Vec<Term>], request: &VerifyRequest) -> Result<Vec<Verification>> {
    match request.field.kind {
        FieldKind::Rational => verify_candidates::<Rationals>(candidates, request),
        FieldKind::Prime => verify_candidates::<PrimeField>(candidates, request),
    }
}
