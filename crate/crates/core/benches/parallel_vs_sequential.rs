use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use lgmf_core::builder::{all_vectors, oracle_sweep, tilde_d_coefficients, wedge_contraction};
use lgmf_core::{build_potential, mf_verify, Strategy, ToricFanoData};
use lgmf_core::exterior::mf_verify_with;

fn strategies() -> [(&'static str, Strategy); 2] {
    [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)]
}

fn square(c: &mut Criterion) {
    let fan = ToricFanoData::preset("p1_x4").unwrap();
    let pot = build_potential(&fan);
    let (x, w) = tilde_d_coefficients(&fan, &pot, Strategy::Sequential);
    let d = wedge_contraction(&x, &w);
    let mut group = c.benchmark_group("square_p1_x4");
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(d.compose_with(&d, s).unwrap()))
        });
    }
    group.finish();
    let _ = mf_verify(&d, &pot.w).unwrap();
    let mut group = c.benchmark_group("mf_verify_p4");
    let fan = ToricFanoData::preset("p4").unwrap();
    let pot = build_potential(&fan);
    let (x, w) = tilde_d_coefficients(&fan, &pot, Strategy::Sequential);
    let d = wedge_contraction(&x, &w);
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(mf_verify_with(&d, &pot.w, s).unwrap()))
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let vectors = all_vectors(3, 3);
    let mut group = c.benchmark_group("telescope_n3");
    group.sample_size(10);
    for (name, s) in strategies() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &s, |b, &s| {
            b.iter(|| black_box(oracle_sweep(vectors.clone(), s)))
        });
    }
    group.finish();
}

criterion_group!(benches, square, oracle);
criterion_main!(benches);
