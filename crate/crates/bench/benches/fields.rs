use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use geomiracles_core::field::FieldSpec;
use geomiracles_core::geometry::cross;
use geomiracles_core::{Field, PrimeField, Rationals};

fn sample_pairs<F: Field>(f: &F, spec: &FieldSpec, n: usize) -> Vec<[F::Elem; 2]> {
    let mut stream = spec.stream(0, 0);
    (0..n).map(|_| [f.sample(&mut stream), f.sample(&mut stream)]).collect()
}

fn prime(c: &mut Criterion) {
    let spec = FieldSpec::prime(1);
    let f = PrimeField::instantiate(&spec, &mut spec.stream(0, 1)).unwrap();
    let xs = sample_pairs(&f, &spec, 1024);
    c.bench_function("prime mul", |b| {
        b.iter(|| xs.iter().fold(f.one(), |acc, [x, y]| f.mul(&acc, &f.mul(x, y))))
    });
    c.bench_function("prime inv", |b| b.iter(|| xs.iter().map(|[x, _]| f.inv(black_box(x)).unwrap()).collect::<Vec<_>>()));
    c.bench_function("prime cross", |b| {
        b.iter(|| xs.windows(2).map(|w| cross(&f, &w[0], &w[1]).unwrap()).collect::<Vec<_>>())
    });
}

fn rational(c: &mut Criterion) {
    let spec = FieldSpec::rational(1);
    let f = Rationals::instantiate(&spec, &mut spec.stream(0, 1)).unwrap();
    let xs = sample_pairs(&f, &spec, 256);
    c.bench_function("rational mul", |b| b.iter(|| xs.iter().map(|[x, y]| f.mul(x, y)).collect::<Vec<_>>()));
    c.bench_function("rational cross", |b| {
        b.iter(|| xs.windows(2).map(|w| cross(&f, &w[0], &w[1]).unwrap()).collect::<Vec<_>>())
    });
}

criterion_group!(benches, prime, rational);
criterion_main!(benches);
