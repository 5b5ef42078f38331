use super::{DescentConfig, OptReport, StopReason};
use crate::error::{invalid, Error, Result};
use crate::fem::{
    assemble_load, cost_functional, grad_norm_sq, solve_state, Assembler, CellScalarField, CgOptions, Coefficient,
    NodalField, Source,
};
use crate::mesh::Mesh;
use crate::penalty::{PenaltyKind, PenaltySpec, POSITIVE_FLOOR};

#[derive(Debug, Clone)]
pub struct ScalarResult {
    pub a: CellScalarField,
    pub u: NodalField,
    pub report: OptReport,
}

fn default_start(penalty: &PenaltySpec) -> f64 {
    if penalty.kind.is_box() {
        0.5 * (penalty.alpha + penalty.beta)
    } else {
        1.0
    }
}

/// `w·ψ'(a) − |∇u|²` per cell: the L² gradient of `J(a) = ∫fu + w∫ψ(a)`.
fn cost_gradient(mesh: &Mesh, u: &NodalField, a: &CellScalarField, penalty: &PenaltySpec) -> Result<Vec<f64>> {
    let w = penalty.weight();
    let s = grad_norm_sq(mesh, u);
    a.values()
        .iter()
        .zip(s.values())
        .map(|(&ai, &si)| Ok(w * penalty.derivative(ai)? - si))
        .collect()
}

fn domain_violation(penalty: &PenaltySpec, a: &CellScalarField) -> f64 {
    let (lo, hi) = penalty.domain();
    a.values()
        .iter()
        .map(|&v| (lo - v).max(v - hi).max(0.0))
        .fold(0.0, f64::max)
}

/// Projected gradient descent on `J(a) = ∫ f u + w∫ψ(a)` subject to the
/// state equation with coefficient `a`.
///
/// The direction `−(wψ'(a) − |∇u|²)` is normalized by its largest cell
/// value and scaled by the coefficient range (`β − α` for the box
/// penalties, `max a` otherwise); the step fraction starts at
/// `config.initial_step` and is halved until `J` decreases.
pub fn compliance_descent(
    mesh: &Mesh,
    source: &Source,
    penalty: &PenaltySpec,
    config: &DescentConfig,
) -> Result<ScalarResult> {
    config.validate()?;
    if !matches!(penalty.kind, PenaltyKind::Quadratic | PenaltyKind::LinearBox) {
        return Err(invalid(
            "penalty",
            format!(
                "{} penalizes the energy, not the compliance; use the energy driver",
                penalty.kind.name()
            ),
        ));
    }
    let load = assemble_load(mesh, source)?;
    let assembler = Assembler::new(mesh);
    let start = penalty.project(config.initial_value.unwrap_or_else(|| default_start(penalty)));
    let mut a = CellScalarField::constant(mesh, start);
    let solve = |a: &CellScalarField, guess: Option<&NodalField>| {
        let u = solve_state(mesh, &assembler, Coefficient::Scalar(a), &load, &config.cg, guess)?;
        let j = cost_functional(mesh, &load, &u, a, penalty);
        Ok::<_, Error>((u, j))
    };
    let (mut u, mut cost) = solve(&a, None)?;
    let mut report = OptReport::start(cost, domain_violation(penalty, &a));

    for _ in 0..config.max_iterations {
        let grad = cost_gradient(mesh, &u, &a, penalty)?;
        let peak = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if peak == 0.0 {
            report.status = StopReason::Converged;
            return Ok(ScalarResult { a, u, report });
        }
        let range = if penalty.kind.is_box() {
            penalty.beta - penalty.alpha
        } else {
            a.values().iter().fold(0.0f64, |m, &v| m.max(v))
        };
        let scale = range / peak;

        let mut step = config.initial_step;
        let mut accepted = None;
        for attempt in 0..=config.max_halvings {
            let raw = a.values().iter().zip(&grad).map(|(&ai, &gi)| ai - step * scale * gi);
            // the positivity floor of an unbounded penalty is not a real
            // constraint; a step that reaches it is too long
            if !penalty.kind.is_box() && raw.clone().any(|v| v < POSITIVE_FLOOR) {
                step *= config.backtrack;
                continue;
            }
            let trial: Vec<f64> = raw.map(|v| penalty.project(v)).collect();
            if attempt == 0 && trial.as_slice() == a.values() {
                // the full projected step is a fixed point
                report.status = StopReason::Converged;
                return Ok(ScalarResult { a, u, report });
            }
            let trial = CellScalarField::new(trial)?;
            // a trial too badly conditioned to solve is rejected like an
            // increase; the accepted iterates always solve to tolerance
            match solve(&trial, Some(&u)) {
                Ok((u_new, j_new)) if j_new < cost => {
                    accepted = Some((trial, u_new, j_new));
                    break;
                }
                Ok(_) | Err(Error::SolverFailure { .. }) => {}
                Err(e) => return Err(e),
            }
            step *= config.backtrack;
        }
        let Some((a_new, u_new, j_new)) = accepted else {
            report.status = StopReason::Stagnated;
            return Ok(ScalarResult { a, u, report });
        };
        let ratio = report.accept(j_new, step, domain_violation(penalty, &a_new));
        a = a_new;
        u = u_new;
        cost = j_new;
        if ratio < config.tol {
            report.status = StopReason::Converged;
            break;
        }
    }
    Ok(ScalarResult { a, u, report })
}

/// Directional derivative of `J` at `a` along `direction`: the adjoint
/// formula `Σ area·d·(wψ'(a) − |∇u|²)` and the central difference
/// `(J(a + hd) − J(a − hd))/(2h)` with `h = 1e−6`.
///
/// States are solved to a relative residual of `1e−12` so that the
/// difference quotient is not dominated by solver error.
pub fn gradient_check(
    mesh: &Mesh,
    source: &Source,
    penalty: &PenaltySpec,
    a: &CellScalarField,
    direction: &CellScalarField,
) -> Result<(f64, f64)> {
    const H: f64 = 1e-6;
    if a.len() != mesh.num_cells() || direction.len() != mesh.num_cells() {
        return Err(Error::LengthMismatch {
            expected: mesh.num_cells(),
            got: if a.len() != mesh.num_cells() {
                a.len()
            } else {
                direction.len()
            },
        });
    }
    let load = assemble_load(mesh, source)?;
    let assembler = Assembler::new(mesh);
    let cg = CgOptions::with_tol(1e-12);
    let cost_at = |c: &CellScalarField| -> Result<f64> {
        let u = solve_state(mesh, &assembler, Coefficient::Scalar(c), &load, &cg, None)?;
        Ok(cost_functional(mesh, &load, &u, c, penalty))
    };
    let u = solve_state(mesh, &assembler, Coefficient::Scalar(a), &load, &cg, None)?;
    let grad = cost_gradient(mesh, &u, a, penalty)?;
    let analytic: f64 = mesh
        .cell_areas()
        .zip(&grad)
        .zip(direction.values())
        .map(|((area, g), d)| area * g * d)
        .sum();
    let shifted = |sign: f64| {
        CellScalarField::new(
            a.values()
                .iter()
                .zip(direction.values())
                .map(|(ai, di)| ai + sign * H * di)
                .collect(),
        )
    };
    let plus = cost_at(&shifted(1.0)?)?;
    let minus = cost_at(&shifted(-1.0)?)?;
    if !(plus.is_finite() && minus.is_finite()) {
        return Err(Error::DomainViolation {
            value: f64::NAN,
            penalty: penalty.kind.name(),
        });
    }
    Ok((analytic, (plus - minus) / (2.0 * H)))
}
