//! Acceptance gate: one PASS/FAIL line per criterion.

use std::collections::BTreeSet;
use std::time::Instant;

use geomiracles_core::field::{Field, FieldSpec, PrimeField, Rationals};
use geomiracles_core::genealogy::{cumulative_by_gender, run_schedule, Ledger};
use geomiracles_core::geometry::{child, cross, incident, join, meet, GeomObject};
use geomiracles_core::miracles::fixtures::{five_adam_triples, pascal_triple, permutations, trilinear_polar_triples};
use geomiracles_core::miracles::{cogeny_expressions, extract_cogeny_classes, verify_candidates, Term, VerifyRequest};
use geomiracles_core::pipeline::{run_pipeline, PipelineConfig};
use geomiracles_core::{Gender, MatingPolicy, ObjectId, RunConfig, SeedConfig, SeedMode};

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn config(adams: usize, field: FieldSpec, policy: MatingPolicy, generations: u32) -> RunConfig {
    RunConfig::new(SeedConfig::new(adams, SeedMode::GenericPlane, field), policy, generations)
}

fn counts<F: Field>(config: &RunConfig) -> std::result::Result<Vec<u64>, String> {
    run_schedule::<F>(config).map(|o| o.new_counts).map_err(|e| e.to_string())
}

fn totals(new_counts: &[u64]) -> (u64, u64) {
    let points = new_counts.iter().step_by(2).sum();
    let lines = new_counts.iter().skip(1).step_by(2).sum();
    (points, lines)
}

fn sequence_k4() -> Check {
    let expected = [4, 6, 3, 3, 6, 16, 84, 1716, 719628];
    let started = Instant::now();
    let q = counts::<Rationals>(&config(4, FieldSpec::rational(1), MatingPolicy::AllPairs, 7))?;
    ensure(q == expected[..8], format!("rational through generation 7: {q:?}"))?;
    let rational_s = started.elapsed().as_secs_f64();
    let started = Instant::now();
    let p = counts::<PrimeField>(&config(4, FieldSpec::prime(1), MatingPolicy::AllPairs, 8))?;
    ensure(p == expected, format!("prime through generation 8: {p:?}"))?;
    Ok(format!(
        "{p:?} (rational g<=7 in {rational_s:.1}s, prime g=8 x2 in {:.1}s)",
        started.elapsed().as_secs_f64()
    ))
}

fn sequences_k5_k6() -> Check {
    let k5 = counts::<PrimeField>(&config(5, FieldSpec::prime(2), MatingPolicy::AllPairs, 4))?;
    ensure(k5 == [5, 10, 15, 90, 3495], format!("k=5: {k5:?}"))?;
    let started = Instant::now();
    let k6 = counts::<PrimeField>(&config(6, FieldSpec::prime(2), MatingPolicy::AllPairs, 4))?;
    ensure(k6 == [6, 15, 45, 855, 342000], format!("k=6: {k6:?}"))?;
    Ok(format!("k=5 {k5:?}, k=6 {k6:?} in {:.1}s", started.elapsed().as_secs_f64()))
}

fn same_generation_variant() -> Check {
    let k5 = counts::<PrimeField>(&config(5, FieldSpec::prime(3), MatingPolicy::SameGenerationOnly, 4))?;
    ensure(k5 == [5, 10, 15, 75, 2080], format!("k=5 new: {k5:?}"))?;
    let cumulative = cumulative_by_gender(&k5);
    ensure(cumulative == [5, 10, 20, 85, 2100], format!("k=5 cumulative: {cumulative:?}"))?;
    let k4 = counts::<PrimeField>(&config(4, FieldSpec::prime(3), MatingPolicy::SameGenerationOnly, 7))?;
    ensure(k4 == [4, 6, 3, 3, 0, 0, 0, 0], format!("k=4: {k4:?}"))?;
    Ok(format!("k=5 new {k5:?}, cumulative {cumulative:?}; k=4 {k4:?}"))
}

fn extinction() -> Check {
    let k3 = counts::<PrimeField>(&config(3, FieldSpec::prime(4), MatingPolicy::AllPairs, 9))?;
    ensure(k3[..3] == [3, 3, 0] && k3[3..].iter().all(|&n| n == 0), format!("k=3: {k3:?}"))?;
    ensure(totals(&k3) == (3, 3), "k=3 totals")?;
    let k2 = counts::<Rationals>(&config(2, FieldSpec::rational(4), MatingPolicy::AllPairs, 6))?;
    ensure(totals(&k2) == (2, 1) && k2[2..].iter().all(|&n| n == 0), format!("k=2: {k2:?}"))?;
    Ok(format!("k=3 {k3:?}, k=2 {k2:?}"))
}

fn ids_of<F: Field>(ledger: &Ledger<F>, terms: &[Term]) -> std::result::Result<BTreeSet<ObjectId>, String> {
    let seeds: Vec<GeomObject<F::Elem>> = ledger
        .adams()
        .iter()
        .map(|&id| ledger.object(id).map(|r| r.object.clone()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    terms
        .iter()
        .map(|t| {
            let value = t.evaluate(ledger.field(), &seeds).map_err(|e| e.to_string())?;
            ledger.lookup(&value).ok_or_else(|| format!("{t} is not in the ledger"))
        })
        .collect()
}

fn trilinear_polars() -> Check {
    let mut c = PipelineConfig::new(config(4, FieldSpec::prime(5), MatingPolicy::AllPairs, 5));
    c.verify_trials = 3;
    let report = run_pipeline(&c).map_err(|e| e.to_string())?;
    ensure(report.new_counts[5] == 16, "16 births at generation 5")?;
    let listed = &report.miracles.listed;
    ensure(report.miracles.nontrivial_classes == 4 && listed.len() == 4, "four nontrivial classes")?;
    let found: BTreeSet<BTreeSet<ObjectId>> =
        listed.iter().map(|e| e.class.members.iter().copied().collect()).collect();

    let out = run_schedule::<PrimeField>(&c.run).map_err(|e| e.to_string())?;
    let ledger = &out.ledgers[0];
    let mut expected = BTreeSet::new();
    for triple in trilinear_polar_triples() {
        expected.insert(ids_of(ledger, &triple)?);
    }
    ensure(found == expected, "membership differs from the named triples")?;
    for e in listed {
        ensure(e.class.members.len() == 3 && e.class.gender == Gender::Point, "class shape")?;
        ensure(e.class.child_generation == 5 && e.confirmed, format!("class of {} unconfirmed", e.child))?;
        ensure(e.class.witness_instances == 2 + 3, "witnessed on verify-runs + 3 instances")?;
    }
    let gen5 = &ledger.generations()[5].new_ids;
    let multi: Vec<_> = gen5
        .iter()
        .filter(|&&id| ledger.object(id).unwrap().parent_pairs.len() > 1)
        .collect();
    let singletons = gen5.len() - multi.len();
    ensure(singletons == 12 && multi.len() == 4, format!("{singletons} singleton births"))?;
    Ok("4 classes of 3 collinear points, 12 singleton births, 5 witnesses each".into())
}

fn five_adam_facts() -> Check {
    let mut candidates = Vec::new();
    for triple in five_adam_triples() {
        for perm in permutations(5) {
            let images: Vec<Term> = triple.iter().map(|t| t.permute(&perm)).collect();
            candidates.push(cogeny_expressions(&images));
        }
    }
    let request = VerifyRequest::new(5, SeedMode::GenericPlane, FieldSpec::prime(6), 5);
    let verdicts = verify_candidates::<PrimeField>(&candidates, &request).map_err(|e| e.to_string())?;
    let confirmed = verdicts.iter().filter(|v| v.confirmed && v.witness_instances == 5).count();
    ensure(confirmed == candidates.len(), format!("{confirmed} of {} confirmed", candidates.len()))?;
    Ok(format!("4 facts x 120 relabelings = {confirmed} confirmed on 5 instances"))
}

fn pascal() -> Check {
    let expressions = cogeny_expressions(&pascal_triple());
    let verdict = |mode| {
        let request = VerifyRequest::new(6, mode, FieldSpec::prime(7), 5);
        verify_candidates::<PrimeField>(&[expressions.clone()], &request).map(|v| v[0])
    };
    let conic = verdict(SeedMode::GenericConic).map_err(|e| e.to_string())?;
    let generic = verdict(SeedMode::GenericPlane).map_err(|e| e.to_string())?;
    ensure(conic.confirmed && conic.witness_instances == 5, "not confirmed on conic seeds")?;
    ensure(!generic.confirmed, "not refuted on generic seeds")?;
    Ok("confirmed on 5 conic instances, refuted on generic".into())
}

fn properties() -> Check {
    const CASES: u64 = 1000;
    let q = Rationals::default();
    let spec = FieldSpec::prime(8);
    let mut stream = spec.stream(0, 0);
    let p = PrimeField::instantiate(&spec, &mut stream).map_err(|e| e.to_string())?;
    let point = |s: &mut _| GeomObject::point(q.sample(s), q.sample(s));
    let mut skipped = 0;
    for _ in 0..CASES {
        let (a, b, c) = (point(&mut stream), point(&mut stream), point(&mut stream));
        let (Ok(ab), Ok(ac)) = (join(&q, &a, &b), join(&q, &a, &c)) else {
            skipped += 1;
            continue;
        };
        ensure(incident(&q, &a, &ab) && incident(&q, &b, &ab), "join incidence")?;
        let x = meet(&q, &ab, &ac).map_err(|e| e.to_string())?;
        ensure(incident(&q, &x, &ab) && incident(&q, &x, &ac), "meet incidence")?;
        ensure(x == a, "clone law")?;
        let dual = meet(&q, &GeomObject::line(a.coords[0].clone(), a.coords[1].clone()), &GeomObject::line(b.coords[0].clone(), b.coords[1].clone()));
        ensure(dual.ok().map(|d| d.coords) == Some(ab.coords.clone()), "duality")?;
        let [s, t] = &a.coords;
        let [s2, t2] = &b.coords;
        let det = q.sub(&q.mul(s, t2), &q.mul(s2, t));
        let printed = GeomObject::line(
            q.div(&q.sub(t, t2), &det).unwrap(),
            q.div(&q.sub(s, s2), &det).unwrap(),
        );
        ensure(s == s2 || !(incident(&q, &a, &printed) && incident(&q, &b, &printed)), "printed sign passed")?;

        let pa = GeomObject::point(p.sample(&mut stream), p.sample(&mut stream));
        let pb = GeomObject::point(p.sample(&mut stream), p.sample(&mut stream));
        let l = GeomObject { gender: Gender::Line, coords: cross(&p, &pa.coords, &pb.coords).map_err(|e| e.to_string())? };
        ensure(incident(&p, &pa, &l) && incident(&p, &pb, &l), "prime join incidence")?;
    }

    for (adams, generations) in [(4, 7), (5, 4)] {
        let out = run_schedule::<PrimeField>(&config(adams, FieldSpec::prime(9), MatingPolicy::AllPairs, generations))
            .map_err(|e| e.to_string())?;
        for ledger in &out.ledgers {
            let classes = extract_cogeny_classes(ledger).map_err(|e| e.to_string())?;
            for class in &classes {
                let target = &ledger.object(class.child).unwrap().object;
                for (i, x) in class.members.iter().enumerate() {
                    for y in &class.members[i + 1..] {
                        let z = child(ledger.field(), &ledger.object(*x).unwrap().object, &ledger.object(*y).unwrap().object);
                        ensure(z.ok().as_ref() == Some(target), "cogeny closure")?;
                    }
                }
            }
        }
        let mut dual = config(adams, FieldSpec::prime(9), MatingPolicy::AllPairs, generations);
        dual.seed.seed_gender = Gender::Line;
        ensure(counts::<PrimeField>(&dual)? == out.new_counts, format!("dual seeding at k={adams}"))?;
    }

    let by_workers: Vec<_> = [1, 2, 8]
        .into_iter()
        .map(|workers| {
            let mut c = config(4, FieldSpec::prime(10), MatingPolicy::AllPairs, 7);
            c.workers = workers;
            run_schedule::<PrimeField>(&c).map(|o| o.ledgers[0].objects().to_vec())
        })
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(by_workers.iter().all(|l| *l == by_workers[0]), "worker count changed the ledger")?;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let base = config(4, FieldSpec::prime(11), MatingPolicy::AllPairs, 5);
    let mut first = PipelineConfig::new(base.clone());
    first.snapshot_dir = Some(dir.path().to_path_buf());
    run_pipeline(&first).map_err(|e| e.to_string())?;
    let mut rest = PipelineConfig::new(RunConfig { max_generation: 6, ..base.clone() });
    rest.resume_dir = Some(dir.path().to_path_buf());
    let resumed = run_pipeline(&rest).map_err(|e| e.to_string())?;
    let straight = run_pipeline(&PipelineConfig::new(RunConfig { max_generation: 6, ..base })).map_err(|e| e.to_string())?;
    ensure(resumed.new_counts[6] == 84 && resumed.without_timings() == straight.without_timings(), "resume")?;

    Ok(format!(
        "{CASES} geometry cases ({skipped} degenerate draws), closure k=4,5, duality k=4,5, workers 1/2/8, resume"
    ))
}

fn cross_mode() -> Check {
    let q = run_schedule::<Rationals>(&config(4, FieldSpec::rational(12), MatingPolicy::AllPairs, 6)).map_err(|e| e.to_string())?;
    let p = run_schedule::<PrimeField>(&config(4, FieldSpec::prime(12), MatingPolicy::AllPairs, 6)).map_err(|e| e.to_string())?;
    ensure(q.new_counts == p.new_counts, "counts differ")?;
    let (cq, cp) = (shape(&q.ledgers[0])?, shape(&p.ledgers[0])?);
    ensure(cq == cp, "class structure differs")?;
    Ok(format!("{:?}, {} classes in both modes", q.new_counts, cq.len()))
}

type Shape = Vec<(Gender, Vec<ObjectId>, ObjectId, u32, bool)>;

fn shape<F: Field>(l: &Ledger<F>) -> std::result::Result<Shape, String> {
    extract_cogeny_classes(l)
        .map(|cs| cs.into_iter().map(|c| (c.gender, c.members, c.child, c.child_generation, c.trivial)).collect())
        .map_err(|e| e.to_string())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("k=4 all-pairs sequence", sequence_k4),
        ("k=5 and k=6 all-pairs sequences", sequences_k5_k6),
        ("same-generation variant", same_generation_variant),
        ("extinction and stall", extinction),
        ("trilinear polar classes", trilinear_polars),
        ("five-seed concurrencies", five_adam_facts),
        ("conic hexagon collinearity", pascal),
        ("property suites", properties),
        ("rational/prime cross-check", cross_mode),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail} [{secs:.1}s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {} {name}: {why} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
