//! Optimization drivers: projected descent on a scalar coefficient,
//! alternating minimization of the relaxed energy, and the relaxed
//! volume-fraction/laminate scheme for a general state cost.

mod energy;
mod relaxed;
mod scalar;

pub use energy::{energy_relaxed_solve, EnergyResult};
pub use relaxed::{general_relaxed_optimize, LinearCost, RelaxedResult, StateCost};
pub use scalar::{compliance_descent, gradient_check, ScalarResult};

use crate::error::{invalid, Result};
use crate::fem::CgOptions;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DescentConfig {
    /// First trial step of every line search, in `(0, 1]`. The scalar
    /// descent scales its normalized direction by this fraction of the
    /// coefficient range; the relaxed schemes use it as the convex weight.
    pub initial_step: f64,
    pub backtrack: f64,
    pub max_iterations: usize,
    /// Stop once `|J_{k+1} − J_k| / |J_0| < tol`.
    pub tol: f64,
    /// Starting coefficient (scalar descent) or volume fraction (relaxed
    /// schemes); `None` picks the driver default.
    pub initial_value: Option<f64>,
    pub max_halvings: usize,
    pub cg: CgOptions,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            initial_step: 1.0,
            backtrack: 0.5,
            max_iterations: 2000,
            tol: 1e-6,
            initial_value: None,
            max_halvings: 30,
            cg: CgOptions::default(),
        }
    }
}

impl DescentConfig {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.initial_step > 0.0 && self.initial_step <= 1.0) {
            return Err(invalid(
                "initial_step",
                format!("{} is outside (0, 1]", self.initial_step),
            ));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(invalid("backtrack", format!("{} is outside (0, 1)", self.backtrack)));
        }
        if !(self.tol > 0.0) {
            return Err(invalid("tol", format!("{} must be positive", self.tol)));
        }
        if self.max_iterations == 0 {
            return Err(invalid("max_iterations", "must be at least 1"));
        }
        if let Some(v) = self.initial_value {
            if !v.is_finite() {
                return Err(invalid("initial_value", format!("{v} is not finite")));
            }
        }
        Ok(())
    }
}

/// One accepted iterate. Row 0 is the initial point, with `step = 0` and
/// `ratio = NaN`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterRecord {
    pub iter: usize,
    pub cost: f64,
    pub step: f64,
    pub ratio: f64,
    /// Largest constraint violation of the iterate (0 when feasible).
    pub violation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// Stopping ratio below `tol`, or the projected step left the iterate
    /// unchanged.
    Converged,
    MaxIterations,
    /// No decrease after the maximal number of step halvings.
    Stagnated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptReport {
    pub history: Vec<IterRecord>,
    pub status: StopReason,
}

impl OptReport {
    fn start(cost: f64, violation: f64) -> Self {
        Self {
            history: vec![IterRecord {
                iter: 0,
                cost,
                step: 0.0,
                ratio: f64::NAN,
                violation,
            }],
            status: StopReason::MaxIterations,
        }
    }

    /// Records an accepted step and returns its stopping ratio.
    fn accept(&mut self, cost: f64, step: f64, violation: f64) -> f64 {
        let prev = self.final_cost();
        let j0 = self.history[0].cost.abs();
        let ratio = (cost - prev).abs() / if j0 > 0.0 { j0 } else { 1.0 };
        self.history.push(IterRecord {
            iter: self.history.len(),
            cost,
            step,
            ratio,
            violation,
        });
        ratio
    }

    /// Number of accepted steps.
    pub fn iterations(&self) -> usize {
        self.history.len() - 1
    }

    pub fn final_cost(&self) -> f64 {
        self.history.last().map(|r| r.cost).unwrap_or(f64::NAN)
    }

    pub fn is_monotone(&self) -> bool {
        self.history.windows(2).all(|w| w[1].cost <= w[0].cost)
    }

    pub fn max_violation(&self) -> f64 {
        self.history.iter().map(|r| r.violation).fold(0.0, f64::max)
    }

    /// `iter,cost,step,ratio` rows with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("iter,cost,step,ratio\n");
        for r in &self.history {
            out.push_str(&format!("{},{:e},{:e},{:e}\n", r.iter, r.cost, r.step, r.ratio));
        }
        out
    }
}
