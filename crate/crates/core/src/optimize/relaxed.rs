use super::{DescentConfig, OptReport, StopReason};
use crate::error::{invalid, Error, Result};
use crate::fem::{
    assemble_load, cell_gradients, integrate_cells, solve_state, Assembler, CellScalarField, CellTensorField,
    Coefficient, NodalField, Source,
};
use crate::gclosure::{clamp_spectrum, means_unchecked, n_plus_minus, optimal_laminate, optimal_t};
use crate::mesh::Mesh;
use crate::tensor::SymTensor;

/// State cost `∫ j(x, u)` and the load of its adjoint equation
/// `−div(A∇p) = ∂_s j(x, u)`.
pub trait StateCost {
    fn value(&self, u: &NodalField) -> f64;
    fn adjoint_load(&self, u: &NodalField) -> Vec<f64>;
}

/// `j(x, s) = w(x)·s` with the same quadrature as the state load.
#[derive(Debug, Clone)]
pub struct LinearCost {
    load: Vec<f64>,
}

impl LinearCost {
    pub fn new(mesh: &Mesh, weight: &Source) -> Result<Self> {
        Ok(Self {
            load: assemble_load(mesh, weight)?,
        })
    }

    pub fn load(&self) -> &[f64] {
        &self.load
    }
}

impl StateCost for LinearCost {
    fn value(&self, u: &NodalField) -> f64 {
        self.load.iter().zip(u.values()).map(|(b, x)| b * x).sum()
    }

    fn adjoint_load(&self, _u: &NodalField) -> Vec<f64> {
        self.load.clone()
    }
}

#[derive(Debug, Clone)]
pub struct RelaxedResult {
    pub t: CellScalarField,
    pub a: CellTensorField,
    pub u: NodalField,
    pub p: NodalField,
    pub report: OptReport,
}

/// Slack below which a spectrum counts as inside `[ν_t, μ_t]`.
const SPECTRUM_TOL: f64 = 1e-10;

fn spectrum_violation(t: f64, a: &SymTensor, alpha: f64, beta: f64) -> f64 {
    let (mu, nu) = means_unchecked(t, alpha, beta);
    let (l1, l2) = a.eigenvalues();
    (nu - l1).max(l2 - mu).max(0.0)
}

/// Relaxed control of `∫ j(x,u) + g μ_t` over volume fractions `t` and
/// tensors `ν_t I ≤ A ≤ μ_t I`.
///
/// Each iteration solves the state and adjoint for `A_k`, builds the
/// pointwise optimal `(t̂, Â)` from `N±` and the optimal laminate, and
/// moves to `(t_k, A_k) + ε(t̂ − t_k, Â − A_k)`. The trial `ε` starts at
/// twice the previously accepted one (at most `config.initial_step`) and
/// is halved until the cost decreases. The admissible set is
/// convex, so the combination stays admissible; `A` is re-clamped to the
/// `t_{k+1}` box only to absorb rounding.
pub fn general_relaxed_optimize(
    mesh: &Mesh,
    source: &Source,
    cost: &dyn StateCost,
    g: &CellScalarField,
    alpha: f64,
    beta: f64,
    config: &DescentConfig,
) -> Result<RelaxedResult> {
    config.validate()?;
    if !(alpha > 0.0 && beta > alpha && beta.is_finite()) {
        return Err(invalid(
            "alpha/beta",
            format!("need 0 < alpha < beta, got ({alpha}, {beta})"),
        ));
    }
    if g.len() != mesh.num_cells() {
        return Err(Error::LengthMismatch {
            expected: mesh.num_cells(),
            got: g.len(),
        });
    }
    if let Some(c) = g.values().iter().position(|&v| !(v >= 0.0)) {
        return Err(invalid(
            "g",
            format!("weight {} in cell {c} must be non-negative", g.values()[c]),
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
    let nc = mesh.num_cells();

    let objective = |t: &[f64], u: &NodalField| {
        let pen: Vec<f64> = t
            .iter()
            .zip(g.values())
            .map(|(&ti, &gi)| gi * means_unchecked(ti, alpha, beta).0)
            .collect();
        cost.value(u) + integrate_cells(mesh, &pen)
    };
    let state = |a: &CellTensorField, guess: Option<&NodalField>| {
        solve_state(mesh, &assembler, Coefficient::Tensor(a), &load, &config.cg, guess)
    };

    let mut t = vec![t0; nc];
    let mut a = CellTensorField::new(vec![SymTensor::isotropic(means_unchecked(t0, alpha, beta).1); nc])?;
    let mut u = state(&a, None)?;
    let mut j = objective(&t, &u);
    let mut report = OptReport::start(j, 0.0);
    let mut p = u.clone();
    // each line search starts one doubling above the last accepted fraction
    let mut first_step = config.initial_step;

    for _ in 0..config.max_iterations {
        let adjoint = cost.adjoint_load(&u);
        p = if adjoint == load {
            u.clone()
        } else {
            solve_state(
                mesh,
                &assembler,
                Coefficient::Tensor(&a),
                &adjoint,
                &config.cg,
                Some(&p),
            )?
        };
        let gu = cell_gradients(mesh, &u);
        let gp = cell_gradients(mesh, &p);
        let mut t_hat = Vec::with_capacity(nc);
        let mut a_hat = Vec::with_capacity(nc);
        for c in 0..nc {
            let (np, nm) = n_plus_minus(gu[c], gp[c]);
            let th = optimal_t(np, nm, g.values()[c], alpha, beta);
            let (mu, nu) = means_unchecked(th, alpha, beta);
            let ah = clamp_spectrum(&optimal_laminate(gu[c], gp[c], mu, nu)?, nu, mu);
            t_hat.push(th);
            a_hat.push(ah);
        }
        if t_hat == t && a_hat.as_slice() == a.values() {
            report.status = StopReason::Converged;
            break;
        }

        let mut step = first_step;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let mut violation = 0.0f64;
            let mut t_new = Vec::with_capacity(nc);
            let mut a_new = Vec::with_capacity(nc);
            for c in 0..nc {
                let tc = (t[c] + step * (t_hat[c] - t[c])).clamp(0.0, 1.0);
                let ac = a.values()[c].lerp(&a_hat[c], step);
                let v = spectrum_violation(tc, &ac, alpha, beta);
                if v > SPECTRUM_TOL {
                    return Err(Error::Consistency(format!(
                        "cell {c}: convex update left the G-closure box by {v:e}"
                    )));
                }
                let (mu, nu) = means_unchecked(tc, alpha, beta);
                let ac = clamp_spectrum(&ac, nu, mu);
                violation = violation.max(spectrum_violation(tc, &ac, alpha, beta));
                t_new.push(tc);
                a_new.push(ac);
            }
            let a_new = CellTensorField::new(a_new)?;
            let u_new = state(&a_new, Some(&u))?;
            let j_new = objective(&t_new, &u_new);
            if j_new < j {
                accepted = Some((t_new, a_new, u_new, j_new, violation));
                break;
            }
            step *= config.backtrack;
        }
        let Some((t_new, a_new, u_new, j_new, violation)) = accepted else {
            report.status = StopReason::Stagnated;
            break;
        };
        let ratio = report.accept(j_new, step, violation);
        first_step = (step / config.backtrack).min(config.initial_step);
        t = t_new;
        a = a_new;
        u = u_new;
        j = j_new;
        if ratio < config.tol {
            report.status = StopReason::Converged;
            break;
        }
    }
    // adjoint of the returned state
    let adjoint = cost.adjoint_load(&u);
    if adjoint == load {
        p = u.clone();
    } else {
        p = solve_state(
            mesh,
            &assembler,
            Coefficient::Tensor(&a),
            &adjoint,
            &config.cg,
            Some(&p),
        )?;
    }
    Ok(RelaxedResult {
        t: CellScalarField::new(t)?,
        a,
        u,
        p,
        report,
    })
}
