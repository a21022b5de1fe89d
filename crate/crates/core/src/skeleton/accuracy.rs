//! Exercise accuracy against a gold-standard recording.
//!
//! Each recipient frame is (optionally) mirrored, centered on the central
//! hip and scaled to the gold skeleton's torso length. Both skeletons are
//! reduced to hierarchical joint rotations, and the squared Frobenius
//! distances over a joint subset are averaged over every paired frame in the
//! selected repetitions. Per participant, the condition with the largest mean
//! distance then normalizes all others to `(0, 1]`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::recording::{center, mirror, resample, scale_to, NOMINAL_FPS};
use super::rotation::{indexed_frame_distance, local_rotations};
use super::{Recording, SkeletonFrame, Topology};
use crate::error::{Error, Result};

/// Repetitions (1-based, inclusive) used when comparing exercises.
pub const DEFAULT_REP_WINDOW: (usize, usize) = (3, 8);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExerciseOptions {
    /// Joints whose rotations enter the distance.
    pub subset: Vec<String>,
    #[serde(default = "default_window")]
    pub rep_window: (usize, usize),
    /// Mirror the recipient (face-to-face instruction).
    #[serde(default)]
    pub mirror: bool,
    #[serde(default = "default_grid")]
    pub grid_hz: f64,
}

fn default_window() -> (usize, usize) {
    DEFAULT_REP_WINDOW
}

fn default_grid() -> f64 {
    NOMINAL_FPS
}

impl ExerciseOptions {
    pub fn new<S: Into<String>>(subset: impl IntoIterator<Item = S>) -> Self {
        ExerciseOptions {
            subset: subset.into_iter().map(Into::into).collect(),
            rep_window: DEFAULT_REP_WINDOW,
            mirror: false,
            grid_hz: NOMINAL_FPS,
        }
    }

    pub fn mirrored(mut self, mirror: bool) -> Self {
        self.mirror = mirror;
        self
    }

    pub fn with_window(mut self, first: usize, last: usize) -> Self {
        self.rep_window = (first, last);
        self
    }
}

/// Mean squared rotation distance of `rec` against `gold`.
///
/// `rest` defaults to the topology's rest pose, or else the first windowed
/// gold frame.
pub fn exercise_distance(
    gold: &Recording,
    rec: &Recording,
    topology: &Topology,
    opts: &ExerciseOptions,
    rest: Option<&SkeletonFrame>,
) -> Result<f64> {
    gold.validate(topology)?;
    rec.validate(topology)?;
    if opts.subset.is_empty() {
        return Err(Error::config("subset", "joint subset is empty"));
    }
    let subset = topology.indices_of(&opts.subset)?;
    let (first, last) = opts.rep_window;
    if first == 0 || first > last {
        return Err(Error::config(
            "rep_window",
            format!("({first}, {last}) is not a 1-based inclusive range"),
        ));
    }
    if opts.grid_hz.is_nan() || opts.grid_hz <= 0.0 {
        return Err(Error::domain("grid_hz", opts.grid_hz, f64::MIN_POSITIVE, f64::MAX));
    }
    for (which, r) in [("gold", gold), ("recipient", rec)] {
        if r.reps.len() < last {
            return Err(Error::InsufficientData(format!(
                "{which} recording has {} repetitions, window needs {last}",
                r.reps.len()
            )));
        }
    }

    let rest = match rest
        .cloned()
        .or_else(|| topology.rest_pose().map(|p| SkeletonFrame::new(0.0, p.to_vec())))
    {
        Some(r) => {
            r.validate(topology)?;
            r
        }
        None => gold.frames[gold.reps[first - 1].0].clone(),
    };
    let rest = center(&rest, topology);

    let mut sum = 0.0;
    let mut count = 0usize;
    for rep in first - 1..last {
        let g = resample(gold.rep_frames(rep).unwrap_or_default(), opts.grid_hz);
        let r = resample(rec.rep_frames(rep).unwrap_or_default(), opts.grid_hz);
        for (gf, rf) in g.iter().zip(&r) {
            let gf = center(gf, topology);
            let rf = if opts.mirror { mirror(rf, topology)? } else { rf.clone() };
            let rf = scale_to(&center(&rf, topology), &gf, topology)?;
            let ga = local_rotations(&gf, topology, &rest)?;
            let ra = local_rotations(&rf, topology, &rest)?;
            sum += indexed_frame_distance(&ga, &ra, &subset)?;
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::InsufficientData(
            "no overlapping frames inside the repetition window".into(),
        ));
    }
    Ok(sum / count as f64)
}

/// Normalize one participant's per-condition distances by their maximum.
pub fn nmsrd(per_condition: &BTreeMap<String, f64>) -> Result<BTreeMap<String, f64>> {
    if per_condition.is_empty() {
        return Err(Error::InsufficientData("no conditions to normalize".into()));
    }
    for (name, &v) in per_condition {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::domain(name.clone(), v, 0.0, f64::MAX));
        }
    }
    let max = per_condition.values().copied().fold(0.0, f64::max);
    if max <= 0.0 {
        return Err(Error::UndefinedNormalization(
            "every condition has zero distance".into(),
        ));
    }
    Ok(per_condition.iter().map(|(k, &v)| (k.clone(), v / max)).collect())
}
