//! Data-parallel sweeps against plain sequential loops over the same work.
//! Build with `--no-default-features` to see the sequential fallback of the
//! library paths.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use lmg_correlations::oracle::{self, exact_ground_state, tripartite_reduced_exact};
use lmg_correlations::sweep::{run_sweep, HGrid, SweepSpec};
use lmg_correlations::{evaluate, is_parallel, ModelPoint, Partition, Units};

fn backend() -> &'static str {
    if is_parallel() {
        "rayon"
    } else {
        "sequential-fallback"
    }
}

fn gaussian_grid(c: &mut Criterion) {
    let spec = SweepSpec {
        gamma: 0.5,
        partition: Partition::tripartite(1.0 / 3.0).unwrap(),
        grid: HGrid::LogOffset { min: 0.0, max: 3.0, min_offset: 1e-10, count: 2000 },
        units: Units::Paper,
    };
    let hs = spec.grid.points().unwrap();
    let mut g = c.benchmark_group("gaussian_sweep_4000");
    g.bench_function(backend(), |b| b.iter(|| run_sweep(black_box(&spec)).unwrap()));
    g.bench_function("loop", |b| {
        b.iter(|| {
            hs.iter()
                .map(|&h| evaluate(&ModelPoint::new(0.5, h, spec.partition).unwrap()).unwrap())
                .collect::<Vec<_>>()
        })
    });
    g.finish();
}

fn oracle_series(c: &mut Criterion) {
    let ns = [60, 90, 120];
    let mut g = c.benchmark_group("tripartite_oracle");
    g.sample_size(10);
    g.bench_function(backend(), |b| {
        b.iter(|| oracle::tripartite_series(black_box(&ns), 0.5, 1.0, 1.0 / 3.0).unwrap())
    });
    g.bench_function("loop", |b| {
        b.iter(|| {
            ns.iter()
                .map(|&n| {
                    let s = exact_ground_state(n, 0.5, 1.0).unwrap();
                    let k = oracle::group_size(n, 1.0 / 3.0);
                    tripartite_reduced_exact(&s, k, k).unwrap()
                })
                .collect::<Vec<_>>()
        })
    });
    g.finish();
}

criterion_group!(benches, gaussian_grid, oracle_series);
criterion_main!(benches);
