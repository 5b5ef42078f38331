//! Optimal coefficients for `−div(a∇u) = f` on planar domains.
//!
//! The crate provides P1/P0 finite elements on structured square and disk
//! meshes, the penalty family with conjugates and recovery rules, the
//! two-phase G-closure toolkit, the optimization drivers and closed-form
//! radial reference solutions.
//!
//! ```
//! use optcoef::{compliance_descent, DescentConfig, Mesh, PenaltySpec, Source};
//!
//! let mesh = Mesh::unit_square(8)?;
//! let penalty = PenaltySpec::linear_box(1.0, 2.0, 0.01141)?;
//! let run = compliance_descent(&mesh, &Source::Constant(1.0), &penalty, &DescentConfig::default())?;
//! assert!(run.report.is_monotone());
//! # Ok::<(), optcoef::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

pub mod error;
pub mod fem;
pub mod gclosure;
pub mod mesh;
pub mod metrics;
pub mod optimize;
pub mod oracles;
pub mod penalty;
pub mod tensor;
pub mod vtk;

pub use error::{Error, Result};
pub use fem::{CellScalarField, CellTensorField, CgOptions, Coefficient, LinearSystem, NodalField, Source};
pub use mesh::Mesh;
pub use optimize::{
    compliance_descent, energy_relaxed_solve, general_relaxed_optimize, gradient_check, DescentConfig, EnergyResult,
    IterRecord, LinearCost, OptReport, RelaxedResult, ScalarResult, StateCost, StopReason,
};
pub use penalty::{PenaltyKind, PenaltySpec};
pub use tensor::{SymTensor, Vec2};
