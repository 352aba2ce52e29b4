//! Hot-path benchmarks: Mittag-Leffler evaluation per region, a full
//! propagation step, and a band-kernel sup.

use criterion::{black_box, criterion_group, criterion_main, Criterion};
use num_complex::Complex64;
use std::f64::consts::PI;

use fracwave::lpbesov::{band_kernel_sup, DyadicBand};
use fracwave::mlf::{ml_eval, MlParams};
use fracwave::spectral::{annulus_wave, propagate_ml, Grid, SymbolSpec};

fn ml_regions(c: &mut Criterion) {
    let params = MlParams::new(0.25, 1.0).unwrap();
    let ray = -PI / 8.0;
    let mut group = c.benchmark_group("ml_eval");
    group.bench_function("series", |b| {
        let z = Complex64::from_polar(1.0, ray);
        b.iter(|| ml_eval(params, black_box(z)).unwrap())
    });
    group.bench_function("contour", |b| {
        let z = Complex64::from_polar(5.0, ray);
        b.iter(|| ml_eval(params, black_box(z)).unwrap())
    });
    group.bench_function("asymptotic", |b| {
        let z = Complex64::from_polar(50.0, ray);
        b.iter(|| ml_eval(params, black_box(z)).unwrap())
    });
    group.finish();
}

fn propagation(c: &mut Criterion) {
    let grid = Grid::new(1, 4096, 1024.0).unwrap();
    let phi = annulus_wave(grid).unwrap();
    let spec = SymbolSpec::new(0.25, 0.5, 0.25).unwrap();
    c.bench_function("propagate_ml_4096", |b| {
        b.iter(|| propagate_ml(black_box(&phi), &spec, black_box(30.0)).unwrap())
    });
}

fn band_sup(c: &mut Criterion) {
    let grid = Grid::new(1, 8192, 512.0).unwrap();
    let spec = SymbolSpec::new(0.5, 1.0, 1.0).unwrap();
    c.bench_function("band_kernel_sup_8192", |b| {
        b.iter(|| band_kernel_sup(&spec, black_box(100.0), DyadicBand::new(1), &grid).unwrap())
    });
}

criterion_group!(benches, ml_regions, propagation, band_sup);
criterion_main!(benches);
