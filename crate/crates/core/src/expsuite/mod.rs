//! Parameter sweeps, steady-state analyses, report files and the command
//! line front end.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod io;
pub mod report;
pub mod sweep;

pub use analysis::{
    tail_torque_decomposition, thrust_decomposition, wavelength, wavelength_from_markers, TailTorque, ThrustTable,
    WavelengthFit,
};
pub use config::{CaseId, CaseSpec, GridAxes, SweepConfig};
pub use report::emit_reports;
pub use sweep::{run_case, run_sweep, CaseOutcome, CaseResult, ResultStore};
