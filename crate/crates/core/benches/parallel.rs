use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use mvpolarity::canonical::{build_surrogate, CanonicalOptions, ModalLattice};
use mvpolarity::generate::{random_compatible_frame, random_context, rng};
use mvpolarity::semantics::sequent_valid;
use mvpolarity::{parse_sequent, EnumerationOptions, Exec, TruthAlgebra, ValidityOptions};

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn enumeration(c: &mut Criterion) {
    let ctx = random_context(&mut rng(1), Arc::new(TruthAlgebra::lukasiewicz(4).unwrap()), 5, 5);
    let mut group = c.benchmark_group("enumerate_concepts");
    for (name, exec) in EXECS {
        let opts = EnumerationOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::new(name, "L4 5x5"), &opts, |b, opts| {
            b.iter(|| black_box(ctx.enumerate_concepts(opts).unwrap().len()))
        });
    }
    group.finish();
}

fn validity(c: &mut Criterion) {
    let s = parse_sequent("box (p | q) & dia r |- box p | dia (q & r)").unwrap();
    let mut group = c.benchmark_group("sequent_valid");
    for (size, label) in [(3, "L3 3x3, 3 atoms"), (5, "L3 5x5, 3 atoms")] {
        let frame = random_compatible_frame(&mut rng(2), Arc::new(TruthAlgebra::lukasiewicz(3).unwrap()), size, size).unwrap();
        for (name, exec) in EXECS {
            let opts = ValidityOptions { exec, enumeration: EnumerationOptions { exec, ..Default::default() }, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(name, label), &opts, |b, opts| {
                b.iter(|| black_box(sequent_valid(&frame, &s, opts).unwrap().valuations))
            });
        }
    }
    group.finish();
}

fn canonical(c: &mut Criterion) {
    let alg = Arc::new(TruthAlgebra::lukasiewicz(5).unwrap());
    let l = ModalLattice::diamond();
    let mut group = c.benchmark_group("build_surrogate");
    for (name, exec) in EXECS {
        let opts = CanonicalOptions { exec, ..Default::default() };
        group.bench_with_input(BenchmarkId::new(name, "diamond over L5"), &opts, |b, opts| {
            b.iter(|| black_box(build_surrogate(alg.clone(), &l, opts).unwrap().forms.pairs))
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, validity, canonical);
criterion_main!(benches);
