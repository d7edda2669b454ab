use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use flagdeg::grasshopper::randomized_search_trials;
use flagdeg::localization::{verify_identity_with, Space};
use flagdeg::roots::Weight;
use flagdeg::sumsets::{exhaustive_scan_with, ScanConfig, Theorem};
use flagdeg::{Exec, Field};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn identities(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_identity");
    group.sample_size(10);
    let space = Space::PartialFlag { lambda: Weight(vec![3, 2, 1, 0]) };
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("full_flag_4", name), &exec, |b, &exec| {
            b.iter(|| verify_identity_with(exec, black_box(&space), 32, Field::Rational, 7).unwrap())
        });
    }
    group.finish();
}

fn scans(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive_scan");
    group.sample_size(10);
    let config = ScanConfig::new(vec![7, 11]);
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("ddsh_7_11", name), &exec, |b, &exec| {
            b.iter(|| exhaustive_scan_with(exec, Theorem::Ddsh, black_box(&config)).unwrap())
        });
    }
    group.finish();
}

fn grasshopper(c: &mut Criterion) {
    let mut group = c.benchmark_group("randomized_search_trials");
    group.sample_size(10);
    let budget = [1u64, 2, 2, 1, 4];
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("k6", name), &exec, |b, &exec| {
            b.iter(|| randomized_search_trials(exec, 6, black_box(&budget), None, 200, 3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, identities, scans, grasshopper);
criterion_main!(benches);
