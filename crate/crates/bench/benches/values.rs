use cohesive_bench::{tu_instance, voting_instance};
use cohesive_core::values::{classical_shapley_oracle, cohesion_value, power_index};
use cohesive_core::Branch;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn cohesion_values(c: &mut Criterion) {
    let mut group = c.benchmark_group("cohesion_value");
    for n in [6, 10, 14, 18] {
        let (v, kappa) = tu_instance(n);
        for branch in Branch::ALL {
            group.bench_with_input(BenchmarkId::new(branch.as_str(), n), &n, |b, _| {
                b.iter(|| {
                    cohesion_value(black_box(&v), black_box(&kappa), branch, 1.0, None).unwrap()
                })
            });
        }
    }
    group.finish();
}

fn voting_index(c: &mut Criterion) {
    let mut group = c.benchmark_group("power_index");
    for n in [5, 10, 15, 20] {
        let (v, kappa) = voting_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| power_index(black_box(&v), black_box(&kappa), Branch::Shapley, 2.0).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("ordering_oracle");
    group.sample_size(10);
    for n in [6, 8] {
        let (v, _) = tu_instance(n);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| classical_shapley_oracle(black_box(&v)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, cohesion_values, voting_index, oracle);
criterion_main!(benches);
