use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use optcoef::fem::{assemble_load, solve_state, Assembler};
use optcoef::{compliance_descent, CgOptions, Coefficient, DescentConfig, Mesh, PenaltySpec, Source};
use optcoef_bench::disk_fixture;

fn assembly(c: &mut Criterion) {
    let (mesh, a) = disk_fixture(0.02);
    let assembler = Assembler::new(&mesh);
    c.bench_function("stiffness, disk h=0.02", |b| {
        b.iter(|| assembler.stiffness(&mesh, Coefficient::Scalar(black_box(&a))).unwrap())
    });
}

fn state_solve(c: &mut Criterion) {
    let (mesh, a) = disk_fixture(0.02);
    let assembler = Assembler::new(&mesh);
    let load = assemble_load(&mesh, &Source::Constant(1.0)).unwrap();
    let cg = CgOptions::default();
    c.bench_function("state solve, disk h=0.02", |b| {
        b.iter(|| solve_state(&mesh, &assembler, Coefficient::Scalar(&a), black_box(&load), &cg, None).unwrap())
    });
}

fn descent(c: &mut Criterion) {
    let mesh = Mesh::unit_square(32).unwrap();
    let p = PenaltySpec::linear_box(1.0, 2.0, 0.01141).unwrap();
    let mut group = c.benchmark_group("drivers");
    group.sample_size(10);
    group.bench_function("two-phase compliance, square n=32", |b| {
        b.iter(|| compliance_descent(&mesh, &Source::Constant(1.0), &p, &DescentConfig::default()).unwrap())
    });
    group.finish();
}

criterion_group!(benches, assembly, state_solve, descent);
criterion_main!(benches);
