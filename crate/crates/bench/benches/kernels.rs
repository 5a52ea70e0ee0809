use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pgcode_core::blocking::desarguesian_spread;
use pgcode_core::codes::{build_code, Incidence};
use pgcode_core::spectrum::full_spectrum;
use pgcode_core::{make_field, Budget, Geometry};

fn geom(n: usize, p: u32, h: u32) -> Geometry {
    Geometry::new(n, make_field(p, h).unwrap(), &Budget::default()).unwrap()
}

/// Gray-order enumeration of every codeword.
fn spectrum(c: &mut Criterion) {
    let b = Budget::default();
    let mut g = c.benchmark_group("full_spectrum");
    for (n, p, k) in [(2usize, 3u32, 1usize), (3, 2, 2), (3, 3, 2), (3, 2, 1)] {
        let code = build_code(&geom(n, p, 1), k, &b).unwrap();
        let id = format!("C_{k}(PG({n},{p})) dim {}", code.dim());
        g.bench_with_input(BenchmarkId::from_parameter(id), &code, |bch, code| {
            bch.iter(|| full_spectrum(black_box(code), &b).unwrap())
        });
    }
    g.finish();
}

/// Incidence construction plus row reduction to the RREF generator.
fn build(c: &mut Criterion) {
    let b = Budget::default();
    let mut g = c.benchmark_group("build_code");
    for (n, p, h, k) in [(2usize, 7u32, 1u32, 1usize), (2, 3, 2, 1), (3, 3, 1, 2), (4, 2, 1, 2)] {
        let geo = geom(n, p, h);
        g.bench_function(format!("C_{k}(PG({n},{p}^{h}))"), |bch| bch.iter(|| build_code(black_box(&geo), k, &b).unwrap()));
    }
    g.finish();
}

fn incidence(c: &mut Criterion) {
    let b = Budget::default();
    let mut g = c.benchmark_group("incidence");
    for (n, p, h, k) in [(3usize, 3u32, 1u32, 1usize), (2, 2, 3, 1), (4, 2, 1, 2)] {
        let geo = geom(n, p, h);
        g.bench_function(format!("{k}-spaces of PG({n},{p}^{h})"), |bch| {
            bch.iter(|| Incidence::new(black_box(&geo), k, &b).unwrap())
        });
    }
    g.bench_function("spread of PG(5,3)", |bch| {
        let base = geom(2, 3, 2);
        bch.iter(|| desarguesian_spread(black_box(&base), &b).unwrap())
    });
    g.finish();
}

criterion_group!(kernels, spectrum, build, incidence);
criterion_main!(kernels);
