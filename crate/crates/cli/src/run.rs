use std::fmt::Write as _;
use std::fs;

use optcoef::metrics::{area_fraction_above, beta_volume_fraction, interface_radius, max_anisotropy};
use optcoef::vtk::{self, Scalars};
use optcoef::{
    compliance_descent, energy_relaxed_solve, general_relaxed_optimize, CellScalarField, DescentConfig, LinearCost,
    Mesh, NodalField, OptReport, PenaltySpec, Source,
};

use crate::config::{Experiment, ExperimentConfig, MeshSpec, PenaltyChoice};
use crate::RunError;

/// Everything a run writes, kept in memory until the driver has finished.
#[derive(Debug, Clone, PartialEq)]
pub struct Artifacts {
    pub vtk: String,
    pub csv: String,
    pub summary: String,
}

struct Summary(String);

impl Summary {
    fn line(&mut self, key: &str, value: impl std::fmt::Display) {
        writeln!(self.0, "{key} = {value}").expect("writing to a String");
    }
}

fn build_mesh(spec: &MeshSpec) -> optcoef::Result<Mesh> {
    match *spec {
        MeshSpec::Square { n } => Mesh::unit_square(n),
        MeshSpec::Disk { h } => Mesh::unit_disk(h),
    }
}

fn header(c: &ExperimentConfig, mesh: &Mesh, report: &OptReport) -> Summary {
    let mut s = Summary(String::new());
    s.line("experiment", c.experiment);
    s.line("domain", c.mesh.domain());
    s.line("mesh_size", c.mesh.size());
    s.line("vertices", mesh.num_vertices());
    s.line("cells", mesh.num_cells());
    s.line("status", format!("{:?}", report.status).to_lowercase());
    s.line("iterations", report.iterations());
    s.line("final_cost", report.final_cost());
    s
}

/// Phase fraction of `β` by volume, from per-cell fractions of `α`.
fn beta_fraction_of(mesh: &Mesh, t: &[f64]) -> f64 {
    mesh.cell_areas().zip(t).map(|(a, t)| a * (1.0 - t)).sum::<f64>() / mesh.total_area()
}

/// `indicator` is a coefficient-valued field whose level `(α+β)/2`
/// marks the interface.
fn phase_lines(
    s: &mut Summary,
    c: &ExperimentConfig,
    mesh: &Mesh,
    (alpha, beta): (f64, f64),
    beta_fraction: f64,
    indicator: &[f64],
) {
    let mid = 0.5 * (alpha + beta);
    s.line("beta_fraction", beta_fraction);
    s.line("area_fraction_above_mid", area_fraction_above(mesh, indicator, mid));
    s.line("interface_radius", interface_radius(mesh, indicator, mid));
    s.line("interface_radius_uncertainty", c.mesh.size());
}

fn render_vtk(mesh: &Mesh, c: &ExperimentConfig, u: &NodalField, cells: &[Scalars<'_>]) -> Result<String, RunError> {
    Ok(vtk::render(
        mesh,
        &c.experiment.to_string(),
        &[Scalars::new("u", u.values())],
        cells,
    )?)
}

/// Runs the configured experiment and returns the file contents.
pub fn execute(c: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let mesh = build_mesh(&c.mesh)?;
    let f = Source::Constant(1.0);
    let config = DescentConfig {
        max_iterations: c.max_iters,
        ..DescentConfig::with_tol(c.tol)
    };
    let scalar_penalty = match (c.experiment, c.penalty) {
        (Experiment::GeneralRelaxed, _) => None,
        (_, PenaltyChoice::Quadratic) => Some(PenaltySpec::quadratic()),
        (_, PenaltyChoice::LinearBox) => Some(PenaltySpec::linear_box(c.alpha, c.beta, c.gamma)?),
        (_, PenaltyChoice::Threshold) => Some(PenaltySpec::threshold(c.tau, 2)?),
        (_, PenaltyChoice::AffineBox) => Some(PenaltySpec::affine_box(c.alpha, c.beta, c.gamma)?),
    };

    match scalar_penalty {
        Some(p) if p.kind == optcoef::PenaltyKind::AffineBox => {
            let r = energy_relaxed_solve(&mesh, &f, &p, &config)?;
            let mut s = header(c, &mesh, &r.report);
            phase_lines(
                &mut s,
                c,
                &mesh,
                (p.alpha, p.beta),
                beta_fraction_of(&mesh, r.t.values()),
                r.a_eff.values(),
            );
            let vtk = render_vtk(
                &mesh,
                c,
                &r.u,
                &[Scalars::new("a", r.a_eff.values()), Scalars::new("t", r.t.values())],
            )?;
            Ok(Artifacts {
                vtk,
                csv: r.report.to_csv(),
                summary: s.0,
            })
        }
        Some(p) => {
            let r = compliance_descent(&mesh, &f, &p, &config)?;
            let mut s = header(c, &mesh, &r.report);
            if p.kind.is_box() {
                let f = beta_volume_fraction(&mesh, r.a.values(), p.alpha, p.beta);
                phase_lines(&mut s, c, &mesh, (p.alpha, p.beta), f, r.a.values());
            }
            let (lo, hi) =
                r.a.values()
                    .iter()
                    .fold((f64::INFINITY, 0.0f64), |(lo, hi), &v| (lo.min(v), hi.max(v)));
            s.line("min_coefficient", lo);
            s.line("max_coefficient", hi);
            let vtk = render_vtk(&mesh, c, &r.u, &[Scalars::new("a", r.a.values())])?;
            Ok(Artifacts {
                vtk,
                csv: r.report.to_csv(),
                summary: s.0,
            })
        }
        None => {
            let eps = c.epsilon;
            let weight = Source::Nodal(NodalField::interpolate(&mesh, |x| 1.0 + eps * x[0]));
            let cost = LinearCost::new(&mesh, &weight)?;
            let g = CellScalarField::constant(&mesh, c.tau * c.tau);
            let r = general_relaxed_optimize(&mesh, &f, &cost, &g, c.alpha, c.beta, &config)?;
            let mut s = header(c, &mesh, &r.report);
            // μ_t is affine in t, so its level sets are those of t
            let mu: Vec<f64> = r.t.values().iter().map(|&t| t * c.alpha + (1.0 - t) * c.beta).collect();
            phase_lines(
                &mut s,
                c,
                &mesh,
                (c.alpha, c.beta),
                beta_fraction_of(&mesh, r.t.values()),
                &mu,
            );
            s.line("max_eigenvalue_ratio", max_anisotropy(&r.a));
            let (mut l1, mut l2, mut ratio) = (Vec::new(), Vec::new(), Vec::new());
            for a in r.a.values() {
                let (x, y) = a.eigenvalues();
                l1.push(x);
                l2.push(y);
                ratio.push(y / x);
            }
            let vtk = render_vtk(
                &mesh,
                c,
                &r.u,
                &[
                    Scalars::new("t", r.t.values()),
                    Scalars::new("lambda1", &l1),
                    Scalars::new("lambda2", &l2),
                    Scalars::new("ratio", &ratio),
                ],
            )?;
            Ok(Artifacts {
                vtk,
                csv: r.report.to_csv(),
                summary: s.0,
            })
        }
    }
}

/// Runs the experiment and writes `mesh_fields.vtk`, `convergence.csv` and
/// `summary.txt` into the output directory. Nothing is written if the
/// driver fails.
pub fn run(c: &ExperimentConfig) -> Result<Artifacts, RunError> {
    let out = execute(c)?;
    fs::create_dir_all(&c.out_dir)?;
    fs::write(c.out_dir.join("mesh_fields.vtk"), &out.vtk)?;
    fs::write(c.out_dir.join("convergence.csv"), &out.csv)?;
    fs::write(c.out_dir.join("summary.txt"), &out.summary)?;
    Ok(out)
}
