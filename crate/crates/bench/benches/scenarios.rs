use cohesive_core::axioms::{check, AxiomId, CohesionValue, TrialConfig};
use cohesive_core::scenarios::{builtin, sweep_exponent};
use cohesive_core::Branch;
use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

fn sweeps(c: &mut Criterion) {
    for name in ["bundestag-2025", "france-2024-party"] {
        let d = builtin(name).unwrap();
        let s = d.scenarios[0].clone();
        c.bench_function(&format!("sweep/{name}"), |b| {
            b.iter(|| sweep_exponent(black_box(&d), &s, None).unwrap())
        });
    }
}

fn axiom_checks(c: &mut Criterion) {
    let f = CohesionValue {
        branch: Branch::Shapley,
        b: 1.0,
    };
    let cfg = TrialConfig::new(100, 1);
    let mut group = c.benchmark_group("axiom_check_100_trials");
    group.sample_size(10);
    for axiom in [
        AxiomId::Linearity,
        AxiomId::CohesionMonotonicity,
        AxiomId::ShapleyCalibration,
    ] {
        group.bench_function(axiom.as_str(), |b| {
            b.iter(|| check(axiom, &f, &cfg).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, sweeps, axiom_checks);
criterion_main!(benches);
