//! Compares parallel and sequential batch execution of independent fuzz
//! worlds. Build with `--no-default-features` to see the pure sequential
//! core in both arms.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use multichain_sim::batch::{run_batch, run_batch_sequential};
use multichain_sim::fuzz::fuzz_run;

fn bench_batch(c: &mut Criterion) {
    let mut group = c.benchmark_group("fuzz_batch");
    group.sample_size(10);
    for &n_worlds in &[8usize, 32] {
        let seeds: Vec<u64> = (0..n_worlds as u64).collect();
        group.bench_with_input(
            BenchmarkId::new("sequential", n_worlds),
            &seeds,
            |b, seeds| {
                b.iter(|| run_batch_sequential(seeds, |&s| fuzz_run(s, 300).steps_run));
            },
        );
        group.bench_with_input(BenchmarkId::new("default", n_worlds), &seeds, |b, seeds| {
            b.iter(|| run_batch(seeds, |&s| fuzz_run(s, 300).steps_run));
        });
    }
    group.finish();
}

criterion_group!(benches, bench_batch);
criterion_main!(benches);
