//! DG discretization, time stepping and the regularized run loop.

mod flux;
mod problem;
mod rhs;
mod run;
mod state;
mod time;

pub use flux::{llf_flux, pc_interface_flux, pc_max_speed, pc_physical_flux, pc_triple_products};
pub use problem::{InterfaceFlux, ProblemDef, ProblemKind};
pub use rhs::{dg_rhs_scalar, pc_system_rhs, rhs};
pub use run::{run_simulation, Breakdown, DiagnosticsRow, RunReport, SensorLogRow};
pub use state::SolutionState;
pub use time::{compute_dt, ssprk33_step, StepSize};
