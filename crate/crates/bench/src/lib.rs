//! Shared fixtures for the benchmarks.

use optcoef::{CellScalarField, Mesh};

/// Disk mesh with a smoothly varying coefficient, as seen mid-optimization.
pub fn disk_fixture(h: f64) -> (Mesh, CellScalarField) {
    let mesh = Mesh::unit_disk(h).expect("valid mesh size");
    let a = CellScalarField::from_fn(&mesh, |c| {
        let p = mesh.centroid(c);
        1.0 + p[0].hypot(p[1])
    });
    (mesh, a)
}
