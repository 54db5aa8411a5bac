use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gqm_core::chsh::{chsh_maximize_sequential, ChshOptions};
use gqm_core::twostate::TwoParticleSystem;

fn chsh(c: &mut Criterion) {
    let mut group = c.benchmark_group("chsh");
    group.sample_size(10);
    for q in [2usize, 3, 4] {
        let two = TwoParticleSystem::new(q).unwrap();
        let opts = ChshOptions {
            include_product: true,
            prune: false,
        };
        group.bench_with_input(BenchmarkId::new("sequential", q), &two, |b, two| {
            b.iter(|| chsh_maximize_sequential(two, opts))
        });
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", q), &two, |b, two| {
            b.iter(|| gqm_core::chsh::chsh_maximize_parallel(two, opts))
        });
    }
    group.finish();
}

fn hv_sweep(c: &mut Criterion) {
    let mut group = c.benchmark_group("hv_sweep");
    group.sample_size(10);
    for q in [3usize, 5] {
        let two = TwoParticleSystem::new(q).unwrap();
        group.bench_with_input(BenchmarkId::new("entangled", q), &two, |b, two| {
            b.iter(|| gqm_core::hv::entangled_sweep(two))
        });
    }
    group.finish();
}

criterion_group!(benches, chsh, hv_sweep);
criterion_main!(benches);
