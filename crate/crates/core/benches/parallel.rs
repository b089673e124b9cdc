//! Sequential (one worker) against parallel (all cores) runs of the two
//! data-parallel workloads: the definability table and the bonding
//! simulation. Build with `--no-default-features` for the rayon-free path.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use triad_core::analyze::{closure_simulation, DefinabilityTable, Fragment, SearchBudget};
use triad_core::exec::with_jobs;
use triad_core::relcore::DomainSet;

const MODES: [(&str, usize); 2] = [("sequential", 1), ("parallel", 0)];

fn table(c: &mut Criterion) {
    let mut group = c.benchmark_group("definability_table");
    group.sample_size(10);
    let d = DomainSet::numbered(2);
    for (label, jobs) in MODES {
        group.bench_function(BenchmarkId::new(label, "full_3x4"), |b| {
            b.iter(|| {
                with_jobs(jobs, || {
                    let mut t = DefinabilityTable::new(d.clone(), Fragment::Full, SearchBudget::new(3, 4), 4)
                        .unwrap();
                    t.build_all();
                    black_box(t.stats().entries)
                })
            })
        });
    }
    group.finish();
}

fn bonding(c: &mut Criterion) {
    let mut group = c.benchmark_group("closure_simulation");
    for (label, jobs) in MODES {
        group.bench_function(BenchmarkId::new(label, 2000), |b| {
            b.iter(|| {
                with_jobs(jobs, || {
                    black_box(closure_simulation(3, &[1, 2], 2000, 7).unwrap().bonds)
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, table, bonding);
criterion_main!(benches);
