use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use seqmon::workload::{run_dense, run_discrete, BenchSpec, Property, Trace};
use seqmon::{parse, IntInterval, IntIntervalSet, Period, PeriodSet, TimeModel};

const LEN: usize = 100_000;

fn discrete_properties(c: &mut Criterion) {
    let mut g = c.benchmark_group("discrete");
    g.throughput(Throughput::Elements(LEN as u64));
    g.sample_size(20);
    let properties = [
        Property::Pandq(1, 6),
        Property::Pandq(1, 600),
        Property::Qpr(3, 6),
        Property::Qpr(300, 600),
        Property::Delay(6),
        Property::Delay(600),
    ];
    for p in properties {
        let trace = BenchSpec::new(p, LEN).with_seed(1).generate();
        let f = p.formula();
        g.bench_with_input(BenchmarkId::from_parameter(p), &trace, |b, t| b.iter(|| run_discrete("", &f, t)));
    }
    g.finish();
}

fn dense_chunk_sizes(c: &mut Criterion) {
    let mut g = c.benchmark_group("dense");
    g.throughput(Throughput::Elements(LEN as u64));
    g.sample_size(20);
    let stutter = Trace::stuttering(LEN, 1000);
    let f = parse("p since[1:600] q", TimeModel::Discrete).unwrap();
    for rows in [10, 100, 1000] {
        g.bench_with_input(BenchmarkId::new("stutter", rows), &rows, |b, &r| b.iter(|| run_dense("", &f, &stutter, r)));
    }
    let delay = BenchSpec::new(Property::Delay(600), LEN).generate();
    let wide = parse("p since[599:600] q", TimeModel::Dense).unwrap();
    for rows in [10, 1000] {
        g.bench_with_input(BenchmarkId::new("delay600", rows), &rows, |b, &r| b.iter(|| run_dense("", &wide, &delay, r)));
    }
    g.finish();
}

fn interval_sets(c: &mut Criterion) {
    let mut g = c.benchmark_group("sets");
    g.bench_function("int_insert_prune", |b| {
        b.iter(|| {
            let mut s = IntIntervalSet::new();
            for k in 0..10_000i64 {
                s.insert(IntInterval::closed(k + 600, k + 600));
                s.prune_below(k);
            }
            s
        })
    });
    let a: PeriodSet = (0..1000).map(|k| Period::ints(4 * k, 4 * k + 2)).collect();
    let bset: PeriodSet = (0..1000).map(|k| Period::ints(4 * k + 1, 4 * k + 3)).collect();
    g.bench_function("period_union", |b| b.iter(|| a.union(&bset)));
    g.bench_function("period_intersect", |b| b.iter(|| a.intersect(&bset)));
    g.finish();
}

criterion_group!(benches, discrete_properties, dense_chunk_sizes, interval_sets);
criterion_main!(benches);
