use std::hint::black_box;

use chain_core::exact::{correlation_matrix, diagonalize, FilledState};
use chain_core::profiles::{make_builtin, FamilyParameters};
use chain_core::wkb;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn rainbow(n: usize) -> (chain_core::LatticeProfile, chain_core::ContinuumProfile) {
    make_builtin(&FamilyParameters::Rainbow { h: 1.0 }, n, 1.0).expect("rainbow chain")
}

fn exact(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    for n in [100, 200, 400] {
        let (lat, _) = rainbow(n);
        g.bench_with_input(BenchmarkId::new("diagonalize", n), &lat, |b, l| {
            b.iter(|| diagonalize(black_box(l)).unwrap())
        });
    }
    let (lat, _) = rainbow(400);
    let s = diagonalize(&lat).unwrap();
    g.bench_function("correlation_matrix/400", |b| {
        b.iter(|| {
            let st = FilledState::from_filling(&s, 0.4).unwrap();
            correlation_matrix(&s, black_box(&st)).unwrap()
        })
    });
    g.finish();
}

fn semiclassical(c: &mut Criterion) {
    let mut g = c.benchmark_group("wkb");
    let (_, rb) = rainbow(400);
    let (_, cos) = make_builtin(&FamilyParameters::asymmetric_cosine_default(), 400, 1.0).unwrap();
    g.bench_function("filling_fraction/rainbow", |b| {
        b.iter(|| wkb::filling_fraction(&rb, black_box(-0.24)).unwrap())
    });
    g.bench_function("filling_fraction/asymmetric_cosine", |b| {
        b.iter(|| wkb::filling_fraction(&cos, black_box(1.69)).unwrap())
    });
    g.bench_function("invert_filling/rainbow", |b| {
        b.iter(|| wkb::invert_filling(&rb, black_box(0.4)).unwrap())
    });
    g.bench_function("wells/asymmetric_cosine", |b| {
        b.iter(|| wkb::wells(&cos, black_box(1.69), wkb::DEFAULT_SCAN).unwrap())
    });
    let grid = wkb::lattice_grid(&rb);
    let ef = wkb::invert_filling(&rb, 0.4).unwrap();
    g.bench_function("density_profile/rainbow", |b| {
        b.iter(|| wkb::density_profile(&rb, black_box(ef), &grid).unwrap())
    });
    g.finish();
}

criterion_group!(benches, exact, semiclassical);
criterion_main!(benches);
