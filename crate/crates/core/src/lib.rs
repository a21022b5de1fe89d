//! Adaptive difficulty for motion-based games for health.
//!
//! - [`params`]: human-centric parameters and their mapping to game variables
//! - [`dda`]: threshold-zone difficulty adjustment
//! - [`plan`]: milestone treatment plans with a clamping band
//! - [`skeleton`]: recordings, rotation-distance accuracy, range-of-motion calibration
//! - [`simulate`]: synthetic players and closed-loop courses
//! - [`balance`]: two-player balancing strategies

pub mod balance;
pub mod dda;
pub mod error;
pub mod noise;
pub mod params;
pub mod plan;
pub mod simulate;
pub mod skeleton;

pub use dda::{adjust, classify, evaluate_performance, AdjustmentPolicy, Classification, PerformanceWindow, Trigger};
pub use error::{Error, Result};
pub use params::{
    map_params, scale_input, unmap_variable, Direction, GameVariableMap, Param, ParamVector, VariableSpec,
};
pub use plan::{Milestone, PlanMode, TreatmentPlan};
