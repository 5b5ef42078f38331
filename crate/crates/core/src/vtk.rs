//! Legacy ASCII VTK (`DATASET UNSTRUCTURED_GRID`) output of a mesh with
//! point and cell scalars.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::mesh::Mesh;

/// Named scalar field attached to points or cells.
#[derive(Debug, Clone, Copy)]
pub struct Scalars<'a> {
    pub name: &'a str,
    pub values: &'a [f64],
}

impl<'a> Scalars<'a> {
    pub fn new(name: &'a str, values: &'a [f64]) -> Self {
        Self { name, values }
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace()) {
        Err(crate::error::invalid(
            "name",
            format!("{name:?} is not a valid VTK array name"),
        ))
    } else {
        Ok(())
    }
}

fn write_scalars(out: &mut String, fields: &[Scalars<'_>], expected: usize) -> Result<()> {
    for f in fields {
        check_name(f.name)?;
        if f.values.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: f.values.len(),
            });
        }
        writeln!(out, "SCALARS {} double 1", f.name).unwrap();
        out.push_str("LOOKUP_TABLE default\n");
        for v in f.values {
            writeln!(out, "{v:e}").unwrap();
        }
    }
    Ok(())
}

/// Renders the mesh with the given point and cell scalars.
///
/// Numbers use Rust's shortest round-trip formatting, so output is
/// deterministic and re-reads to the same bits.
pub fn render(mesh: &Mesh, title: &str, point_data: &[Scalars<'_>], cell_data: &[Scalars<'_>]) -> Result<String> {
    let mut out = String::new();
    out.push_str("# vtk DataFile Version 3.0\n");
    let title: String = title.chars().filter(|c| *c != '\n').take(255).collect();
    writeln!(out, "{title}").unwrap();
    out.push_str("ASCII\nDATASET UNSTRUCTURED_GRID\n");
    writeln!(out, "POINTS {} double", mesh.num_vertices()).unwrap();
    for p in mesh.vertices() {
        writeln!(out, "{:e} {:e} 0", p[0], p[1]).unwrap();
    }
    let nc = mesh.num_cells();
    writeln!(out, "CELLS {} {}", nc, 4 * nc).unwrap();
    for t in mesh.triangles() {
        writeln!(out, "3 {} {} {}", t[0], t[1], t[2]).unwrap();
    }
    writeln!(out, "CELL_TYPES {nc}").unwrap();
    for _ in 0..nc {
        out.push_str("5\n");
    }
    if !point_data.is_empty() {
        writeln!(out, "POINT_DATA {}", mesh.num_vertices()).unwrap();
        write_scalars(&mut out, point_data, mesh.num_vertices())?;
    }
    if !cell_data.is_empty() {
        writeln!(out, "CELL_DATA {nc}").unwrap();
        write_scalars(&mut out, cell_data, nc)?;
    }
    Ok(out)
}

/// Header counts of a legacy unstructured-grid file.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VtkSummary {
    pub points: usize,
    pub cells: usize,
    pub point_arrays: Vec<String>,
    pub cell_arrays: Vec<String>,
}

/// Reads back the counts and array names written by [`render`].
pub fn summarize(text: &str) -> Result<VtkSummary> {
    let bad = |what: &str| Error::Consistency(format!("malformed VTK: {what}"));
    let mut summary = VtkSummary::default();
    let mut section = "";
    for line in text.lines() {
        let mut words = line.split_whitespace();
        match words.next() {
            Some("POINTS") => {
                summary.points = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| bad("POINTS"))?;
            }
            Some("CELLS") => {
                summary.cells = words.next().and_then(|w| w.parse().ok()).ok_or_else(|| bad("CELLS"))?;
            }
            Some("POINT_DATA") => section = "point",
            Some("CELL_DATA") => section = "cell",
            Some("SCALARS") => {
                let name = words.next().ok_or_else(|| bad("SCALARS"))?.to_string();
                match section {
                    "point" => summary.point_arrays.push(name),
                    "cell" => summary.cell_arrays.push(name),
                    _ => return Err(bad("SCALARS outside a data section")),
                }
            }
            _ => {}
        }
    }
    Ok(summary)
}
