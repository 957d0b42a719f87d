//! Simulation and gait optimization for modular, magnetically actuated
//! undulatory swimming robots.
//!
//! The crate is organized bottom-up:
//!
//! * [`morphology`] builds the articulated template (head, actuated body
//!   segments, peduncle, spring-mounted caudal fin);
//! * [`hydro`] evaluates per-segment reactive and resistive fluid wrenches;
//! * [`actuation`] turns harmonic voltage gaits into joint torques;
//! * [`dynamics`] assembles and integrates the planar chain equations with
//!   added-mass coupling;
//! * [`rollout`] runs one swimming episode and scores it;
//! * [`ephe`] optimizes gaits by reward-weighted elite Gaussian search;
//! * [`expsuite`] runs parameter sweeps and extracts wavelength, thrust and
//!   tail-torque analyses.
//!
//! ```no_run
//! use mubot::prelude::*;
//!
//! let model = build_robot(4, Some(StiffnessLevel::High), &Default::default()).unwrap();
//! let hydro = HydroParams::preset(HydroModel::HM4);
//! let gait = GaitPolicy::new(vec![3.0; 4], vec![0.8, 0.6, 0.4], 2.0).unwrap();
//! let traj = simulate(&model, &hydro, &gait, &SimOptions::default());
//! println!("speed {:.4} m/s", reward(&traj));
//! ```

// Negated comparisons are used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod actuation;
pub mod dynamics;
pub mod ephe;
pub mod error;
pub mod expsuite;
pub mod hydro;
pub mod morphology;
pub mod rollout;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::actuation::{actuator_torque, ActuatorConstants, GaitPolicy};
    pub use crate::dynamics::{forward_dynamics, Drive, GeneralizedState, Mechanism, Rk4};
    pub use crate::ephe::{EpheConfig, EpheHyperParams};
    pub use crate::error::{Error, Result};
    pub use crate::hydro::{HydroModel, HydroParams, PlanarWrench, SegmentFrameState};
    pub use crate::morphology::{build_robot, MorphologyOverrides, RobotModel, StiffnessLevel};
    pub use crate::rollout::{gait_metrics, reward, simulate, SimOptions, Trajectory};
}
