use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rotorbell::bell::BellSystem;
use rotorbell::linalg::hermitian_eig;
use rotorbell::scan::scan_system;
use rotorbell::validation::random_hermitian;
use rotorbell::{BellKind, RotorBasis};

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_eig");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for dim in [4, 9, 16, 36] {
        let a = random_hermitian(dim, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(dim), &a, |b, a| {
            b.iter(|| hermitian_eig(black_box(a)).unwrap())
        });
    }
    group.finish();
}

fn bell_operator(c: &mut Criterion) {
    let mut group = c.benchmark_group("bell_max_eigenvalue");
    for jmax in [1, 2, 5] {
        let system = BellSystem::new(RotorBasis::with_jmax(jmax).unwrap(), BellKind::B1).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(jmax), &system, |b, s| {
            b.iter(|| s.max_eigenvalue(black_box(0.4261)).unwrap())
        });
    }
    group.finish();
}

fn curve(c: &mut Criterion) {
    let system = BellSystem::new(RotorBasis::with_jmax(5).unwrap(), BellKind::B2).unwrap();
    c.bench_function("scan_b2_jmax5_grid100", |b| {
        b.iter(|| scan_system(black_box(&system), 100).unwrap())
    });
}

criterion_group!(benches, eigensolver, bell_operator, curve);
criterion_main!(benches);
