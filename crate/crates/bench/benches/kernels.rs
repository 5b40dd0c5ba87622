use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use vilenkin::kernels::{dirichlet, fejer, lebesgue_constant};
use vilenkin::means::MeanKind;
use vilenkin::GroupSpec;
use vilenkin_bench::{label, random_grid, PATTERNS};

fn kernels(c: &mut Criterion) {
    let mut group = c.benchmark_group("kernels");
    for pattern in PATTERNS {
        let g = GroupSpec::new(pattern, 12).unwrap();
        let res = (1..=12).rev().find(|&r| g.power(r) <= 4096).unwrap();
        let n = g.power(res) - 1;
        group.bench_with_input(BenchmarkId::new("dirichlet", label(pattern)), &n, |b, &n| {
            b.iter(|| dirichlet(&g, black_box(n), res).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("fejer", label(pattern)), &n, |b, &n| {
            b.iter(|| fejer(&g, black_box(n), res).unwrap())
        });
    }
    group.finish();
}

fn lebesgue(c: &mut Criterion) {
    let g = GroupSpec::walsh(12).unwrap();
    c.bench_function("lebesgue/walsh/n<=256", |b| {
        b.iter(|| (1..=256).map(|n| lebesgue_constant(&g, n).unwrap()).sum::<f64>())
    });
}

fn means(c: &mut Criterion) {
    let f = random_grid(&[3], 729, 5);
    let mut group = c.benchmark_group("means");
    for kind in [MeanKind::Fejer, MeanKind::Cesaro { alpha: 0.5 }, MeanKind::RieszLog] {
        group.bench_function(kind.name(), |b| b.iter(|| kind.apply(black_box(&f), 500).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, kernels, lebesgue, means);
criterion_main!(benches);
