//! Conforming triangulations of the unit square and the unit disk.
//!
//! Every [`Mesh`] caches the P1 geometry of its cells (area and the three
//! constant gradients of the hat functions) at construction. Meshes are
//! immutable afterwards and identical inputs give bit-identical meshes.

use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::tensor::Vec2;

/// Exact P1 geometry of one affine triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellGeometry {
    pub area: f64,
    pub gradients: [Vec2; 3],
}

/// Area and hat-function gradients of the triangle `p`.
///
/// Fails with [`Error::DegenerateCell`] (cell index 0) when the signed area is
/// not strictly positive, i.e. for degenerate or clockwise triangles.
pub fn triangle_geometry(p: &[Vec2; 3]) -> Result<CellGeometry> {
    let twice_area = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) - (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    if !(twice_area > 0.0) {
        return Err(Error::DegenerateCell {
            cell: 0,
            area: 0.5 * twice_area,
        });
    }
    let inv = 1.0 / twice_area;
    let mut gradients = [[0.0; 2]; 3];
    for (i, g) in gradients.iter_mut().enumerate() {
        let a = p[(i + 1) % 3];
        let b = p[(i + 2) % 3];
        *g = [(a[1] - b[1]) * inv, (b[0] - a[0]) * inv];
    }
    Ok(CellGeometry {
        area: 0.5 * twice_area,
        gradients,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mesh {
    vertices: Vec<Vec2>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    geometry: Vec<CellGeometry>,
}

impl Mesh {
    /// Builds a mesh from raw parts, validating indices and orientation.
    pub fn from_parts(vertices: Vec<Vec2>, triangles: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        if boundary.len() != vertices.len() {
            return Err(Error::LengthMismatch {
                expected: vertices.len(),
                got: boundary.len(),
            });
        }
        let mut geometry = Vec::with_capacity(triangles.len());
        for (cell, tri) in triangles.iter().enumerate() {
            if let Some(&bad) = tri.iter().find(|&&v| v >= vertices.len()) {
                return Err(Error::MeshCorruption(format!(
                    "cell {cell} references vertex {bad} of {}",
                    vertices.len()
                )));
            }
            let p = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
            let g = triangle_geometry(&p).map_err(|e| match e {
                Error::DegenerateCell { area, .. } => Error::DegenerateCell { cell, area },
                other => other,
            })?;
            geometry.push(g);
        }
        Ok(Self {
            vertices,
            triangles,
            boundary,
            geometry,
        })
    }

    /// Structured triangulation of `[0,1]²` with `n` subdivisions per side.
    ///
    /// The diagonal alternates from square to square (criss-cross pattern),
    /// giving `(n+1)²` vertices and `2n²` triangles.
    pub fn unit_square(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(invalid("n", "at least one subdivision is required"));
        }
        let side = n + 1;
        let mut vertices = Vec::with_capacity(side * side);
        let mut boundary = Vec::with_capacity(side * side);
        for j in 0..side {
            for i in 0..side {
                vertices.push([i as f64 / n as f64, j as f64 / n as f64]);
                boundary.push(i == 0 || j == 0 || i == n || j == n);
            }
        }
        let mut triangles = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let a = j * side + i;
                let b = a + 1;
                let c = a + side;
                let d = c + 1;
                if (i + j) % 2 == 0 {
                    triangles.push([a, b, d]);
                    triangles.push([a, d, c]);
                } else {
                    triangles.push([a, b, c]);
                    triangles.push([b, d, c]);
                }
            }
        }
        Self::from_parts(vertices, triangles, boundary)
    }

    /// Concentric-ring triangulation of the unit disk.
    ///
    /// With `m = ceil(1/h)` rings, ring `k` has radius `k/m` and `6k` equally
    /// spaced vertices; neighbouring rings are stitched by merging their
    /// angular orderings. The result has `1 + 3m(m+1)` vertices and `6m²`
    /// triangles, and the boundary polygon is the regular `6m`-gon inscribed
    /// in the unit circle.
    pub fn unit_disk(h: f64) -> Result<Self> {
        if !(h > 0.0 && h < 1.0) {
            return Err(invalid("h", format!("{h} is outside (0, 1)")));
        }
        let m = ((1.0 / h) - 1e-9).ceil().max(1.0) as usize;
        let num_vertices = 1 + 3 * m * (m + 1);
        let mut vertices = Vec::with_capacity(num_vertices);
        let mut boundary = Vec::with_capacity(num_vertices);
        vertices.push([0.0, 0.0]);
        boundary.push(false);
        let mut ring_start = vec![0usize];
        for k in 1..=m {
            ring_start.push(vertices.len());
            let count = 6 * k;
            let r = k as f64 / m as f64;
            for j in 0..count {
                let theta = std::f64::consts::TAU * j as f64 / count as f64;
                if k == m {
                    vertices.push([theta.cos(), theta.sin()]);
                } else {
                    vertices.push([r * theta.cos(), r * theta.sin()]);
                }
                boundary.push(k == m);
            }
        }

        let mut triangles = Vec::with_capacity(6 * m * m);
        for j in 0..6 {
            let s = ring_start[1];
            triangles.push([0, s + j, s + (j + 1) % 6]);
        }
        for k in 2..=m {
            let inner_count = 6 * (k - 1);
            let outer_count = 6 * k;
            let inner = |i: usize| ring_start[k - 1] + i % inner_count;
            let outer = |j: usize| ring_start[k] + j % outer_count;
            let (mut i, mut j) = (0usize, 0usize);
            while i < inner_count || j < outer_count {
                // compare the angles of the next inner and outer vertices
                let advance_outer =
                    j < outer_count && (i >= inner_count || (j + 1) * inner_count <= (i + 1) * outer_count);
                if advance_outer {
                    triangles.push([inner(i), outer(j), outer(j + 1)]);
                    j += 1;
                } else {
                    triangles.push([inner(i), outer(j), inner(i + 1)]);
                    i += 1;
                }
            }
        }
        Self::from_parts(vertices, triangles, boundary)
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self) -> &[Vec2] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, vertex: usize) -> bool {
        self.boundary[vertex]
    }

    pub fn geometry(&self) -> &[CellGeometry] {
        &self.geometry
    }

    pub fn area(&self, cell: usize) -> f64 {
        self.geometry[cell].area
    }

    pub fn cell_areas(&self) -> impl Iterator<Item = f64> + '_ {
        self.geometry.iter().map(|g| g.area)
    }

    /// Geometry of one cell, looked up by index.
    pub fn cell_geometry(&self, cell: usize) -> Result<CellGeometry> {
        self.geometry.get(cell).copied().ok_or_else(|| {
            invalid(
                "cell_index",
                format!("{cell} out of range for {} cells", self.num_cells()),
            )
        })
    }

    pub fn cell_points(&self, cell: usize) -> [Vec2; 3] {
        let t = self.triangles[cell];
        [self.vertices[t[0]], self.vertices[t[1]], self.vertices[t[2]]]
    }

    pub fn centroid(&self, cell: usize) -> Vec2 {
        let p = self.cell_points(cell);
        [(p[0][0] + p[1][0] + p[2][0]) / 3.0, (p[0][1] + p[1][1] + p[2][1]) / 3.0]
    }

    pub fn total_area(&self) -> f64 {
        self.cell_areas().sum()
    }

    /// Unique undirected edges as sorted vertex pairs.
    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        let mut edges = BTreeSet::new();
        for t in &self.triangles {
            for k in 0..3 {
                let (a, b) = (t[k], t[(k + 1) % 3]);
                edges.insert((a.min(b), a.max(b)));
            }
        }
        edges
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                (p[0] - q[0]).hypot(p[1] - q[1])
            })
            .fold(0.0, f64::max)
    }

    /// Largest cell diameter (longest edge of any triangle).
    pub fn max_cell_diameter(&self) -> f64 {
        (0..self.num_cells())
            .map(|c| {
                let p = self.cell_points(c);
                (0..3)
                    .map(|k| {
                        let (a, b) = (p[k], p[(k + 1) % 3]);
                        (a[0] - b[0]).hypot(a[1] - b[1])
                    })
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max)
    }

    /// Finds a cell containing `x`, using a barycentric tolerance of 1e-12.
    pub fn locate(&self, x: Vec2) -> Option<usize> {
        (0..self.num_cells()).find(|&c| {
            let p = self.cell_points(c);
            let g = &self.geometry[c];
            // barycentric coordinate i is the hat function i at x
            (0..3).all(|i| {
                let v = p[i];
                let li = 1.0 + g.gradients[i][0] * (x[0] - v[0]) + g.gradients[i][1] * (x[1] - v[1]);
                li >= -1e-12
            })
        })
    }
}
