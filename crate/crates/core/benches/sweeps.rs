use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use flipgraph::explorer::Explorer;
use flipgraph::par::Exec;
use flipgraph::surface::Triangulation;
use flipgraph::sweep;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn explore(c: &mut Criterion) {
    let mut g = c.benchmark_group("explore disc(10)");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let mut e = Explorer::new(Triangulation::disc(10).unwrap()).with_exec(exec);
                e.explore_all().unwrap()
            })
        });
    }
    g.finish();
}

fn nlf(c: &mut Criterion) {
    let mut g = c.benchmark_group("nlf sweep disc(8)");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep::disc_nlf(8, exec, 1).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("bounded nlf torus radius 5");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let t = Triangulation::torus_one_boundary().unwrap();
                sweep::bounded_nlf(t, 5, 5, 1_000_000, exec, 1).unwrap()
            })
        });
    }
    g.finish();
}

fn projections(c: &mut Criterion) {
    let mut g = c.benchmark_group("projection axioms disc(8)");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep::disc_axioms(8, exec).unwrap())
        });
    }
    g.finish();

    let mut g = c.benchmark_group("oracle equivalence disc(9)");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| sweep::disc_oracle_equivalence(9, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, explore, nlf, projections);
criterion_main!(benches);
