//! Parallel against sequential on the same work.
//!
//! The `map` groups run one closure through `par::map` and through a plain
//! iterator in the same binary. The `pipeline` group times library calls
//! that parallelize internally; compare `cargo bench` with
//! `cargo bench --no-default-features` for those.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use growthlab::axioms::{projection_table, AxisFamily};
use growthlab::groups::{parse_group, word_power, Letter};
use growthlab::horoball::{default_depth, horoball_distance, HoroballSpace};
use growthlab::metric_space::{distance, IntegerLine, SearchOptions};
use growthlab::par;
use growthlab::projection::WordMetric;
use growthlab::quotient::{quotient_ball, Quotient};
use std::hint::black_box;

fn horoball_distances(c: &mut Criterion) {
    let space = HoroballSpace::new(IntegerLine, 1.0, default_depth(1.0, 3_200.0));
    let targets: Vec<i64> = (1..=32).map(|k| k * 100).collect();
    let one = |&t: &i64| horoball_distance(&space, &0, &t).distance;
    let mut g = c.benchmark_group("map/horoball_distance");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| par::map(black_box(&targets), one)));
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(&targets).iter().map(one).collect::<Vec<_>>())
    });
    g.finish();
}

fn snowflake_distances(c: &mut Criterion) {
    let bb = parse_group("bb:3").unwrap();
    let id = bb.identity();
    let targets: Vec<_> = (1..=18)
        .map(|n| bb.evaluate(&word_power(&[Letter::pos(0)], n)))
        .collect();
    let opts = SearchOptions { state_cap: 200_000 };
    let one = |t: &_| distance(&*bb, &id, t, f64::INFINITY, opts).value();
    let mut g = c.benchmark_group("map/snowflake_distance");
    g.sample_size(10);
    g.bench_function("parallel", |b| b.iter(|| par::map(black_box(&targets), one)));
    g.bench_function("sequential", |b| {
        b.iter(|| black_box(&targets).iter().map(one).collect::<Vec<_>>())
    });
    g.finish();
}

fn pipelines(c: &mut Criterion) {
    let mode = if par::is_parallel() { "parallel" } else { "sequential" };
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);

    let metric = WordMetric::new(parse_group("free:2").unwrap(), 8.0);
    let a = metric.model().parse_word("a").unwrap();
    let family = AxisFamily::translates(&metric, &a, 8.0, 4.0).unwrap();
    g.bench_function(BenchmarkId::new("projection_table", mode), |b| {
        b.iter(|| projection_table(&metric, black_box(&family)))
    });

    let q = Quotient::from_spec("free:2", "relators:a^3 b a^2 -b a b -a -b^3").unwrap();
    g.bench_function(BenchmarkId::new("quotient_ball_r8", mode), |b| {
        b.iter(|| quotient_ball(black_box(&q), 8.0, 50_000_000).unwrap())
    });
    g.finish();
}

criterion_group!(benches, horoball_distances, snowflake_distances, pipelines);
criterion_main!(benches);
