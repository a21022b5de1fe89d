//! Skeleton recordings, rotation-based accuracy and range-of-motion calibration.

mod accuracy;
mod recording;
mod rom;
mod rotation;
pub mod synth;
mod topology;

pub use accuracy::{exercise_distance, nmsrd, ExerciseOptions, DEFAULT_REP_WINDOW};
pub use recording::{
    center, mirror, resample, scale_to, FrameRecord, Recording, RecordingFile, RepSpan, SkeletonFrame, NOMINAL_FPS,
};
pub use rom::{calibrate_rom, percentile, RomExtent, ROM_PERCENTILE};
pub use rotation::{
    derive_rotations, frame_distance, frobenius_dist, is_rotation, minimal_rotation, RotationSet, MIN_BONE_LENGTH,
    ORTHONORMAL_TOL,
};
pub use topology::{Topology, TopologyFile};
