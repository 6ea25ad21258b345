use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lowlying::density::DensityModel;
use lowlying::lfunc::LSeries;
use lowlying::ratios::EulerProduct;
use lowlying::{arith, averages, hecke, Family, TraceTable, WashingtonCurve};
use lowlying_bench::{critical_points, shift, SWEEP_PRIMES};

fn finite_field(c: &mut Criterion) {
    let mut g = c.benchmark_group("finite_field");
    for p in SWEEP_PRIMES {
        g.bench_with_input(BenchmarkId::new("washington_traces_all_t", p), &p, |b, &p| {
            b.iter(|| arith::washington_traces_all_t(black_box(p)).unwrap())
        });
    }
    g.bench_function("q_star_bruteforce_grid/97", |b| b.iter(|| averages::q_star_bruteforce_grid(8, black_box(97)).unwrap()));
    g.finish();
}

fn traces(c: &mut Criterion) {
    c.bench_function("trace_table/22x997", |b| b.iter(|| TraceTable::build(22, black_box(997))));
    c.bench_function("trace_hecke_selberg/12,997", |b| b.iter(|| hecke::trace_hecke_selberg(12, black_box(997)).unwrap()));
}

fn euler_product(c: &mut Criterion) {
    let s = shift();
    let mut g = c.benchmark_group("euler_product");
    g.sample_size(20);
    for fam in [Family::AllCurves, Family::Washington] {
        let prod = EulerProduct::new(fam, 10_000, 14).unwrap();
        g.bench_function(format!("value/family{}", fam.index()), |b| b.iter(|| prod.value(black_box(&s)).unwrap()));
    }
    g.finish();
}

fn density(c: &mut Criterion) {
    let model = DensityModel::new(Family::Washington, 10_000, 14).unwrap();
    let mut g = c.benchmark_group("density");
    g.sample_size(10);
    g.bench_function("smooth/family2", |b| b.iter(|| model.smooth(black_box(1.3), 1e12).unwrap()));
    g.finish();
}

fn lfunction(c: &mut Criterion) {
    let ls = LSeries::for_height(WashingtonCurve::new(13), 10.0, false).unwrap();
    let pts = critical_points();
    let mut g = c.benchmark_group("lfunc");
    g.sample_size(20);
    g.bench_function("completed_l/t13", |b| {
        b.iter(|| pts.iter().map(|&s| ls.completed_l(black_box(s)).unwrap()).sum::<lowlying::Complex64>())
    });
    g.finish();
}

criterion_group!(benches, finite_field, traces, euler_product, density, lfunction);
criterion_main!(benches);
