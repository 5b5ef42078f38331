//! P1/P0 finite elements for `−div(A∇u) = f` with homogeneous Dirichlet
//! conditions: fields, assembly, the constrained linear system and the
//! post-processing used by the optimization drivers.

mod cg;
mod sparse;

pub use cg::{conjugate_gradient, CgOptions, CgReport};
pub use sparse::{CsrMatrix, StiffnessPattern};

use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::penalty::PenaltySpec;
use crate::tensor::{dot, SymTensor, Vec2};

fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// P1 field: one value per mesh vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct NodalField(Vec<f64>);

impl NodalField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Self(values))
        } else {
            Err(Error::NonFinite("nodal field"))
        }
    }

    pub fn zeros(mesh: &Mesh) -> Self {
        Self(vec![0.0; mesh.num_vertices()])
    }

    /// Nodal interpolant of `f`.
    pub fn interpolate(mesh: &Mesh, f: impl Fn(Vec2) -> f64) -> Self {
        Self(mesh.vertices().iter().map(|&p| f(p)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// P0 scalar field: one value per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellScalarField(Vec<f64>);

impl CellScalarField {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().all(|v| v.is_finite()) {
            Ok(Self(values))
        } else {
            Err(Error::NonFinite("cell field"))
        }
    }

    pub fn constant(mesh: &Mesh, value: f64) -> Self {
        Self(vec![value; mesh.num_cells()])
    }

    pub fn from_fn(mesh: &Mesh, f: impl FnMut(usize) -> f64) -> Self {
        Self((0..mesh.num_cells()).map(f).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(self.0.iter().map(|v| v * s).collect())
    }
}

/// P0 symmetric-matrix field.
#[derive(Debug, Clone, PartialEq)]
pub struct CellTensorField(Vec<SymTensor>);

impl CellTensorField {
    pub fn new(values: Vec<SymTensor>) -> Result<Self> {
        if values.iter().all(SymTensor::is_finite) {
            Ok(Self(values))
        } else {
            Err(Error::NonFinite("tensor field"))
        }
    }

    pub fn isotropic(scalar: &CellScalarField) -> Self {
        Self(scalar.values().iter().map(|&a| SymTensor::isotropic(a)).collect())
    }

    pub fn values(&self) -> &[SymTensor] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Coefficient<'a> {
    Scalar(&'a CellScalarField),
    Tensor(&'a CellTensorField),
}

impl Coefficient<'_> {
    fn len(&self) -> usize {
        match self {
            Coefficient::Scalar(a) => a.len(),
            Coefficient::Tensor(a) => a.len(),
        }
    }

    fn tensor(&self, cell: usize) -> Result<SymTensor> {
        match self {
            Coefficient::Scalar(a) => {
                let v = a.values()[cell];
                if v > 0.0 && v.is_finite() {
                    Ok(SymTensor::isotropic(v))
                } else {
                    Err(Error::IllPosedCoefficient {
                        cell,
                        reason: format!("scalar coefficient {v} is not positive"),
                    })
                }
            }
            Coefficient::Tensor(a) => {
                let t = a.values()[cell];
                let det = t.a11 * t.a22 - t.a12 * t.a12;
                if t.is_finite() && t.a11 > 0.0 && det > 0.0 {
                    Ok(t)
                } else {
                    Err(Error::IllPosedCoefficient {
                        cell,
                        reason: format!("tensor {t:?} is not positive definite"),
                    })
                }
            }
        }
    }
}

/// Right-hand side of the state equation.
#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Constant(f64),
    Nodal(NodalField),
    /// Unit point mass, lumped onto the nearest vertex.
    PointLoad(Vec2),
}

/// Reusable stiffness assembler; the sparsity pattern is built once.
#[derive(Debug, Clone)]
pub struct Assembler {
    pattern: StiffnessPattern,
}

impl Assembler {
    pub fn new(mesh: &Mesh) -> Self {
        Self {
            pattern: StiffnessPattern::new(mesh),
        }
    }

    /// Entry `(i,j) = Σ_cells area · (A∇φ_i)·∇φ_j`, accumulated in cell order.
    ///
    /// Scalar coefficients go through the same kernel as `a·I`, so both give
    /// bit-identical matrices.
    pub fn stiffness(&self, mesh: &Mesh, coeff: Coefficient<'_>) -> Result<CsrMatrix> {
        check_len(mesh.num_cells(), coeff.len())?;
        let mut matrix = self.pattern.zero_matrix();
        let values = StiffnessPattern::values_mut(&mut matrix);
        for (cell, geom) in mesh.geometry().iter().enumerate() {
            let a = coeff.tensor(cell)?;
            let slots = self.pattern.slots(cell);
            for i in 0..3 {
                let flux = a.apply(geom.gradients[i]);
                for j in i..3 {
                    let k = geom.area * dot(flux, geom.gradients[j]);
                    values[slots[3 * i + j]] += k;
                    if i != j {
                        values[slots[3 * j + i]] += k;
                    }
                }
            }
        }
        Ok(matrix)
    }
}

pub fn assemble_stiffness(mesh: &Mesh, coeff: Coefficient<'_>) -> Result<CsrMatrix> {
    Assembler::new(mesh).stiffness(mesh, coeff)
}

/// Load vector: each vertex of a cell receives `area/3 ·` (mean of `f` over
/// the cell vertices).
pub fn assemble_load(mesh: &Mesh, f: &Source) -> Result<Vec<f64>> {
    let mut b = vec![0.0; mesh.num_vertices()];
    match f {
        Source::Constant(c) => {
            for (t, g) in mesh.triangles().iter().zip(mesh.geometry()) {
                let w = c * g.area / 3.0;
                for &v in t {
                    b[v] += w;
                }
            }
        }
        Source::Nodal(field) => {
            check_len(mesh.num_vertices(), field.len())?;
            let f = field.values();
            for (t, g) in mesh.triangles().iter().zip(mesh.geometry()) {
                let mean = (f[t[0]] + f[t[1]] + f[t[2]]) / 3.0;
                let w = mean * g.area / 3.0;
                for &v in t {
                    b[v] += w;
                }
            }
        }
        Source::PointLoad(x) => return assemble_point_load(mesh, *x),
    }
    Ok(b)
}

/// Unit load on the vertex nearest to `location` (lowest index on ties).
pub fn assemble_point_load(mesh: &Mesh, location: Vec2) -> Result<Vec<f64>> {
    if mesh.locate(location).is_none() {
        return Err(Error::PointOutsideMesh {
            x: location[0],
            y: location[1],
        });
    }
    let mut best = (f64::INFINITY, 0usize);
    for (i, p) in mesh.vertices().iter().enumerate() {
        let d = (p[0] - location[0]).powi(2) + (p[1] - location[1]).powi(2);
        if d < best.0 {
            best = (d, i);
        }
    }
    let mut b = vec![0.0; mesh.num_vertices()];
    b[best.1] = 1.0;
    Ok(b)
}

/// Stiffness system with the boundary unknowns eliminated.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    matrix: CsrMatrix,
    rhs: Vec<f64>,
    constrained: Vec<bool>,
}

impl LinearSystem {
    /// Eliminates the boundary vertices of `mesh` from `matrix` and `rhs`.
    pub fn dirichlet(mesh: &Mesh, mut matrix: CsrMatrix, mut rhs: Vec<f64>) -> Result<Self> {
        check_len(mesh.num_vertices(), matrix.dim())?;
        check_len(mesh.num_vertices(), rhs.len())?;
        let constrained = mesh.boundary_flags().to_vec();
        if !constrained.iter().any(|&c| c) {
            return Err(crate::error::invalid("boundary", "the Dirichlet set is empty"));
        }
        matrix.eliminate(&constrained);
        for (r, &c) in rhs.iter_mut().zip(&constrained) {
            if c {
                *r = 0.0;
            }
        }
        Ok(Self {
            matrix,
            rhs,
            constrained,
        })
    }

    pub fn matrix(&self) -> &CsrMatrix {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn constrained(&self) -> &[bool] {
        &self.constrained
    }
}

/// CG solution of a Dirichlet system, optionally warm-started.
pub fn solve_dirichlet(
    system: &LinearSystem,
    options: &CgOptions,
    initial_guess: Option<&NodalField>,
) -> Result<(NodalField, CgReport)> {
    let n = system.matrix.dim();
    let mut x = match initial_guess {
        Some(g) => {
            check_len(n, g.len())?;
            g.values().to_vec()
        }
        None => vec![0.0; n],
    };
    for (xi, &c) in x.iter_mut().zip(&system.constrained) {
        if c {
            *xi = 0.0;
        }
    }
    let report = conjugate_gradient(&system.matrix, &system.rhs, &mut x, options)?;
    Ok((NodalField(x), report))
}

/// Assemble-and-solve helper used throughout the drivers.
pub fn solve_state(
    mesh: &Mesh,
    assembler: &Assembler,
    coeff: Coefficient<'_>,
    load: &[f64],
    options: &CgOptions,
    initial_guess: Option<&NodalField>,
) -> Result<NodalField> {
    let k = assembler.stiffness(mesh, coeff)?;
    let system = LinearSystem::dirichlet(mesh, k, load.to_vec())?;
    solve_dirichlet(&system, options, initial_guess).map(|(u, _)| u)
}

/// Constant gradient of the P1 field on every cell.
pub fn cell_gradients(mesh: &Mesh, u: &NodalField) -> Vec<Vec2> {
    let v = u.values();
    mesh.triangles()
        .iter()
        .zip(mesh.geometry())
        .map(|(t, g)| {
            let mut out = [0.0; 2];
            for k in 0..3 {
                out[0] += v[t[k]] * g.gradients[k][0];
                out[1] += v[t[k]] * g.gradients[k][1];
            }
            out
        })
        .collect()
}

pub fn grad_norm_sq(mesh: &Mesh, u: &NodalField) -> CellScalarField {
    CellScalarField(cell_gradients(mesh, u).iter().map(|g| dot(*g, *g)).collect())
}

/// `loadᵀu`; with the load from [`assemble_load`] this is the discrete `∫ f u`.
pub fn compliance(load: &[f64], u: &NodalField) -> f64 {
    load.iter().zip(u.values()).map(|(b, x)| b * x).sum()
}

/// Integral of a P0 field.
pub fn integrate_cells(mesh: &Mesh, values: &[f64]) -> f64 {
    mesh.cell_areas().zip(values).map(|(a, v)| a * v).sum()
}

/// `∫ f u + w·∫ ψ(a)` with `w` the penalty's convention weight.
///
/// Returns `+∞` when some cell value lies outside the penalty's domain.
pub fn cost_functional(mesh: &Mesh, load: &[f64], u: &NodalField, a: &CellScalarField, penalty: &PenaltySpec) -> f64 {
    let mut penalty_integral = 0.0;
    for (area, &v) in mesh.cell_areas().zip(a.values()) {
        match penalty.eval(v) {
            Ok(p) => penalty_integral += area * p,
            Err(_) => return f64::INFINITY,
        }
    }
    compliance(load, u) + penalty.weight() * penalty_integral
}

/// Area-weighted average of a P0 field onto the vertices.
pub fn cell_to_vertex_average(mesh: &Mesh, values: &[f64]) -> Vec<f64> {
    let mut num = vec![0.0; mesh.num_vertices()];
    let mut den = vec![0.0; mesh.num_vertices()];
    for ((t, g), &v) in mesh.triangles().iter().zip(mesh.geometry()).zip(values) {
        for &i in t {
            num[i] += g.area * v;
            den[i] += g.area;
        }
    }
    num.iter().zip(&den).map(|(n, d)| n / d).collect()
}
