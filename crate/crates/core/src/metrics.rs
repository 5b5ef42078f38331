//! Scalar summaries of computed designs.

use crate::fem::CellTensorField;
use crate::mesh::Mesh;
use crate::tensor::Vec2;

/// `‖a − b‖ / ‖b‖` in the area-weighted cell norm.
pub fn relative_l2(mesh: &Mesh, a: &[f64], b: &[f64]) -> f64 {
    let (mut num, mut den) = (0.0, 0.0);
    for ((area, x), y) in mesh.cell_areas().zip(a).zip(b) {
        num += area * (x - y) * (x - y);
        den += area * y * y;
    }
    (num / den).sqrt()
}

/// Reference values at the cell centroids.
pub fn sample_cells(mesh: &Mesh, f: impl Fn(Vec2) -> f64) -> Vec<f64> {
    (0..mesh.num_cells()).map(|c| f(mesh.centroid(c))).collect()
}

/// Area of `{a > threshold}` divided by the total area.
pub fn area_fraction_above(mesh: &Mesh, a: &[f64], threshold: f64) -> f64 {
    let inside: f64 = mesh
        .cell_areas()
        .zip(a)
        .filter(|(_, &v)| v > threshold)
        .map(|(area, _)| area)
        .sum();
    inside / mesh.total_area()
}

/// `∫ (a − α)/(β − α) / |Ω|`: the volume of phase `β` when intermediate
/// values are read as mixtures.
pub fn beta_volume_fraction(mesh: &Mesh, a: &[f64], alpha: f64, beta: f64) -> f64 {
    let v: f64 = mesh
        .cell_areas()
        .zip(a)
        .map(|(area, &x)| area * (x - alpha) / (beta - alpha))
        .sum();
    v / mesh.total_area()
}

/// Radius of the disk with the same area as `{a > threshold}`.
pub fn interface_radius(mesh: &Mesh, a: &[f64], threshold: f64) -> f64 {
    let inside: f64 = mesh
        .cell_areas()
        .zip(a)
        .filter(|(_, &v)| v > threshold)
        .map(|(area, _)| area)
        .sum();
    (inside / std::f64::consts::PI).sqrt()
}

/// Largest `λ₂/λ₁` over the cells.
pub fn max_anisotropy(a: &CellTensorField) -> f64 {
    a.values().iter().map(|t| t.anisotropy_ratio()).fold(1.0, f64::max)
}

/// Per-bin `(count, mean, standard deviation)` of a cell field binned by
/// centroid radius into `bins` equal rings of `[0, 1]`.
pub fn radial_bins(mesh: &Mesh, a: &[f64], bins: usize) -> Vec<(usize, f64, f64)> {
    let mut acc = vec![(0usize, 0.0f64, 0.0f64); bins];
    for (c, &v) in a.iter().enumerate() {
        let p = mesh.centroid(c);
        let r = p[0].hypot(p[1]);
        let k = ((r * bins as f64) as usize).min(bins - 1);
        acc[k].0 += 1;
        acc[k].1 += v;
        acc[k].2 += v * v;
    }
    acc.into_iter()
        .map(|(n, s, s2)| {
            if n == 0 {
                (0, f64::NAN, f64::NAN)
            } else {
                let mean = s / n as f64;
                (n, mean, (s2 / n as f64 - mean * mean).max(0.0).sqrt())
            }
        })
        .collect()
}
