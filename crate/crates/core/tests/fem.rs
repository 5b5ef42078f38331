use optcoef::fem::{assemble_load, assemble_stiffness, compliance, solve_state, Assembler};
use optcoef::{CellScalarField, CgOptions, Coefficient, Mesh, NodalField, Source};

/// Center value of the unit-square Poisson solution with `f = 1`, from its
/// double sine series.
const SQUARE_CENTER: f64 = 0.0736713532815138;

fn poisson(mesh: &Mesh, f: &Source) -> (Vec<f64>, NodalField) {
    let a = CellScalarField::constant(mesh, 1.0);
    let load = assemble_load(mesh, f).unwrap();
    let assembler = Assembler::new(mesh);
    let u = solve_state(
        mesh,
        &assembler,
        Coefficient::Scalar(&a),
        &load,
        &CgOptions::default(),
        None,
    )
    .unwrap();
    (load, u)
}

#[test]
fn square_poisson_center_value() {
    let m = Mesh::unit_square(64).unwrap();
    let (_, u) = poisson(&m, &Source::Constant(1.0));
    let center = m
        .vertices()
        .iter()
        .position(|x| (x[0] - 0.5).abs() < 1e-12 && (x[1] - 0.5).abs() < 1e-12)
        .unwrap();
    assert!(
        (u.values()[center] - SQUARE_CENTER).abs() <= 2e-3,
        "{}",
        u.values()[center]
    );
}

#[test]
fn compliance_self_converges() {
    let c: Vec<f64> = [64, 128]
        .iter()
        .map(|&n| {
            let m = Mesh::unit_square(n).unwrap();
            let (load, u) = poisson(&m, &Source::Constant(1.0));
            compliance(&load, &u)
        })
        .collect();
    assert!((c[0] - c[1]).abs() / c[1] <= 1e-3, "{c:?}");
}

#[test]
fn linear_load_has_the_exact_total() {
    let m = Mesh::unit_square(16).unwrap();
    let load = assemble_load(&m, &Source::Nodal(NodalField::interpolate(&m, |x| x[0]))).unwrap();
    assert!((load.iter().sum::<f64>() - 0.5).abs() <= 1e-12);
}

#[test]
fn stiffness_is_symmetric_with_zero_row_sums() {
    let m = Mesh::unit_disk(0.2).unwrap();
    let a = CellScalarField::from_fn(&m, |c| 1.0 + (c % 7) as f64);
    let k = assemble_stiffness(&m, Coefficient::Scalar(&a)).unwrap();
    assert!(k.is_symmetric());
    let ones = vec![1.0; m.num_vertices()];
    assert!(k.mul_vec(&ones).iter().all(|r| r.abs() <= 1e-10));
}

#[test]
fn disk_boundary_values_are_zero() {
    let m = Mesh::unit_disk(0.1).unwrap();
    let (_, u) = poisson(&m, &Source::Constant(1.0));
    for (v, &x) in u.values().iter().enumerate() {
        if m.is_boundary(v) {
            assert_eq!(x, 0.0);
        } else {
            assert!(x > 0.0);
        }
    }
}
