use super::{DescentConfig, OptReport, StopReason};
use crate::error::{invalid, Result};
use crate::fem::{
    assemble_load, compliance, grad_norm_sq, integrate_cells, solve_state, Assembler, CellScalarField, Coefficient,
    NodalField, Source,
};
use crate::gclosure::means_unchecked;
use crate::mesh::Mesh;
use crate::penalty::{PenaltyKind, PenaltySpec};

#[derive(Debug, Clone)]
pub struct EnergyResult {
    /// Volume fraction of phase `α` per cell.
    pub t: CellScalarField,
    /// Effective coefficient `ν_t`.
    pub a_eff: CellScalarField,
    pub u: NodalField,
    pub report: OptReport,
}

/// `∫ ν_t/2 |∇u|² − f u + wγ(β − μ_t)`.
fn relaxed_energy(mesh: &Mesh, load: &[f64], u: &NodalField, t: &[f64], penalty: &PenaltySpec) -> f64 {
    let (al, be, ga) = (penalty.alpha, penalty.beta, penalty.gamma);
    let w = penalty.weight();
    let s = grad_norm_sq(mesh, u);
    let density: Vec<f64> = t
        .iter()
        .zip(s.values())
        .map(|(&ti, &si)| {
            let (mu, nu) = means_unchecked(ti, al, be);
            0.5 * nu * si + w * ga * (be - mu)
        })
        .collect();
    integrate_cells(mesh, &density) - compliance(load, u)
}

/// Exact minimizer over `t ∈ [0,1]` of `ν_t s/2 + wγ(β − μ_t)` for
/// `s = |∇u|²`: `ν = √(2wαβγ/s)` clamped to `[α, β]`.
fn best_fraction(s: f64, penalty: &PenaltySpec) -> f64 {
    let (al, be) = (penalty.alpha, penalty.beta);
    let nu = if s > 0.0 {
        ((2.0 * penalty.weight() * al * be * penalty.gamma) / s)
            .sqrt()
            .clamp(al, be)
    } else {
        be
    };
    ((1.0 / nu - 1.0 / be) / (1.0 / al - 1.0 / be)).clamp(0.0, 1.0)
}

fn nu_field(t: &[f64], penalty: &PenaltySpec) -> CellScalarField {
    CellScalarField::new(
        t.iter()
            .map(|&ti| means_unchecked(ti, penalty.alpha, penalty.beta).1)
            .collect(),
    )
    .expect("harmonic means of [0,1] fractions are finite")
}

/// Alternating minimization of the relaxed two-phase energy: the state for
/// fixed `t`, then the closed-form `t` for fixed `u`. Both half-steps are
/// exact minimizations, so the recorded costs `min_u E(t_k, u)` never
/// increase.
///
/// `penalty` must be an affine-box penalty; its `half` flag selects the
/// weight of the `γ` term.
pub fn energy_relaxed_solve(
    mesh: &Mesh,
    source: &Source,
    penalty: &PenaltySpec,
    config: &DescentConfig,
) -> Result<EnergyResult> {
    config.validate()?;
    if penalty.kind != PenaltyKind::AffineBox {
        return Err(invalid(
            "penalty",
            format!("the energy driver needs affine-box, got {}", penalty.kind.name()),
        ));
    }
    let t0 = config.initial_value.unwrap_or(0.5);
    if !(0.0..=1.0).contains(&t0) {
        return Err(invalid(
            "initial_value",
            format!("volume fraction {t0} is outside [0, 1]"),
        ));
    }
    let load = assemble_load(mesh, source)?;
    let assembler = Assembler::new(mesh);
    let mut t = vec![t0; mesh.num_cells()];
    let mut u = solve_state(
        mesh,
        &assembler,
        Coefficient::Scalar(&nu_field(&t, penalty)),
        &load,
        &config.cg,
        None,
    )?;
    let mut report = OptReport::start(relaxed_energy(mesh, &load, &u, &t, penalty), 0.0);

    for _ in 0..config.max_iterations {
        let s = grad_norm_sq(mesh, &u);
        let t_new: Vec<f64> = s.values().iter().map(|&si| best_fraction(si, penalty)).collect();
        if t_new == t {
            report.status = StopReason::Converged;
            break;
        }
        t = t_new;
        u = solve_state(
            mesh,
            &assembler,
            Coefficient::Scalar(&nu_field(&t, penalty)),
            &load,
            &config.cg,
            Some(&u),
        )?;
        let cost = relaxed_energy(mesh, &load, &u, &t, penalty);
        let violation = t.iter().map(|&v| (-v).max(v - 1.0).max(0.0)).fold(0.0, f64::max);
        if report.accept(cost, 1.0, violation) < config.tol {
            report.status = StopReason::Converged;
            break;
        }
    }
    let a_eff = nu_field(&t, penalty);
    Ok(EnergyResult {
        t: CellScalarField::new(t)?,
        a_eff,
        u,
        report,
    })
}
