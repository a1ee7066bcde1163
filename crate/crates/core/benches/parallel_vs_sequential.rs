use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use latmat::enumeration::{enumerate_meet_semilattices, extend_layer};
use latmat::lattice::{Valuation, ValuedSet};
use latmat::matrix::{determinants, join_matrix};
use latmat::numtheory::{random_gcd_closed, search_singular, SearchTemplate};
use latmat::Execution;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("enumerate_layer_8");
    group.sample_size(10);
    let layer7 = enumerate_meet_semilattices(7, Execution::Parallel).unwrap();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| extend_layer(&layer7, exec).unwrap().len())
        });
    }
    group.finish();
}

fn lcm_determinants(c: &mut Criterion) {
    let mut group = c.benchmark_group("lcm_determinants_200");
    let matrices: Vec<_> = (0..200u64)
        .map(|seed| {
            let ints = random_gcd_closed(7, 1_000_000, seed).unwrap();
            join_matrix(&ValuedSet::divisor(&ints, Valuation::Identity).unwrap()).unwrap()
        })
        .collect();
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| determinants(exec, &matrices).unwrap())
        });
    }
    group.finish();
}

fn singular_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search_s38");
    group.sample_size(10);
    let template = SearchTemplate::s38(5, 30);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| search_singular(&template, 100, exec).unwrap().len())
        });
    }
    group.finish();
}

criterion_group!(benches, enumeration, lcm_determinants, singular_search);
criterion_main!(benches);
