//! Synthetic patient-players and closed-loop treatment courses.

mod ability;
mod course;
mod metrics;
mod response;

pub use ability::{ability_at, AbilityModel};
pub use course::{run_course, CourseConfig, RoundRecord, SessionLog, SessionSummary};
pub use metrics::{metrics, oscillation_amplitude, CourseMetrics, CEILING_WINDOW};
pub use response::{respond, ResponseModel};
