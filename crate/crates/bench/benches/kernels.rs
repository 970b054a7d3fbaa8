use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use pdcalc::exactalg::smith_normal_form;
use pdcalc::fgl::{fgl_construct, FglKind};
use pdcalc::senhom::{build_bokstedt, BokstedtVariant};
use pdcalc::{WittContext, WittVector};
use pdcalc_bench::{lcg_matrix, witt_components};

fn snf(c: &mut Criterion) {
    let mut g = c.benchmark_group("smith_normal_form");
    for n in [8, 16, 32] {
        let a = lcg_matrix(n, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &a, |b, a| b.iter(|| smith_normal_form(black_box(a))));
    }
    g.finish();
}

fn witt_mul(c: &mut Criterion) {
    let mut g = c.benchmark_group("witt_mul");
    for (p, len) in [(2u64, 4usize), (3, 4), (2, 6)] {
        let ctx = WittContext::integers(p, len).unwrap();
        let x = WittVector::new(ctx, witt_components(len, 3)).unwrap();
        let y = WittVector::new(ctx, witt_components(len, -2)).unwrap();
        g.bench_function(format!("p{p}_L{len}"), |b| b.iter(|| black_box(&x).mul(black_box(&y)).unwrap()));
    }
    g.finish();
}

fn honda(c: &mut Criterion) {
    let mut g = c.benchmark_group("honda");
    g.sample_size(10);
    for (p, n, degree) in [(3u64, 1u32, 9u32), (2, 2, 16)] {
        g.bench_function(format!("p{p}_n{n}_D{degree}"), |b| {
            b.iter(|| fgl_construct(FglKind::Honda { p, n }, black_box(degree)).unwrap())
        });
    }
    g.finish();
}

fn bokstedt(c: &mut Criterion) {
    let mut g = c.benchmark_group("bokstedt_t1");
    g.sample_size(10);
    for p in [2u64, 3] {
        g.bench_function(format!("p{p}"), |b| {
            b.iter(|| build_bokstedt(p, BokstedtVariant::T1, black_box(8 * p as i64)).unwrap())
        });
    }
    g.finish();
}

criterion_group!(kernels, snf, witt_mul, honda, bokstedt);
criterion_main!(kernels);
