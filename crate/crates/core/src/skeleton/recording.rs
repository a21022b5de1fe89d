use std::collections::BTreeMap;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::Topology;
use crate::error::{Error, Result};

pub const NOMINAL_FPS: f64 = 30.0;

/// Joint positions at one instant, indexed like the topology's joints.
#[derive(Debug, Clone, PartialEq)]
pub struct SkeletonFrame {
    /// Seconds, relative to the start of the recording.
    pub t: f64,
    pub positions: Vec<Vector3<f64>>,
}

impl SkeletonFrame {
    pub fn new(t: f64, positions: Vec<Vector3<f64>>) -> Self {
        SkeletonFrame { t, positions }
    }

    pub fn validate(&self, topology: &Topology) -> Result<()> {
        if self.positions.len() != topology.len() {
            return Err(Error::InsufficientData(format!(
                "frame has {} joints, topology `{}` has {}",
                self.positions.len(),
                topology.id(),
                topology.len()
            )));
        }
        if !self.t.is_finite() || self.positions.iter().any(|p| !p.iter().all(|c| c.is_finite())) {
            return Err(Error::NonFinite(format!("frame at t={}", self.t)));
        }
        Ok(())
    }

    pub fn joint(&self, idx: usize) -> Vector3<f64> {
        self.positions[idx]
    }

    /// Apply `f` to every position.
    pub fn map_positions(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        SkeletonFrame {
            t: self.t,
            positions: self.positions.iter().map(f).collect(),
        }
    }

    pub fn hip_shoulder_distance(&self, topology: &Topology) -> f64 {
        (self.positions[topology.central_shoulder()] - self.positions[topology.central_hip()]).norm()
    }
}

/// A half-open frame span `[start, end)` covering one exercise repetition.
pub type RepSpan = (usize, usize);

/// Timestamped frames plus repetition boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct Recording {
    pub topology_id: String,
    pub fps: f64,
    pub frames: Vec<SkeletonFrame>,
    pub reps: Vec<RepSpan>,
}

impl Recording {
    pub fn validate(&self, topology: &Topology) -> Result<()> {
        if self.topology_id != topology.id() {
            return Err(Error::TopologyMismatch {
                expected: topology.id().to_string(),
                found: self.topology_id.clone(),
            });
        }
        for f in &self.frames {
            f.validate(topology)?;
        }
        if self.frames.windows(2).any(|w| w[1].t < w[0].t) {
            return Err(Error::config("frames", "timestamps must be non-decreasing"));
        }
        let mut prev_end = 0;
        for (i, &(s, e)) in self.reps.iter().enumerate() {
            if s >= e || e > self.frames.len() || s < prev_end {
                return Err(Error::config(
                    format!("reps[{i}]"),
                    format!("span [{s}, {e}) is empty, out of bounds, or overlaps the previous repetition"),
                ));
            }
            prev_end = e;
        }
        Ok(())
    }

    pub fn rep_frames(&self, rep: usize) -> Option<&[SkeletonFrame]> {
        self.reps.get(rep).map(|&(s, e)| &self.frames[s..e])
    }

    /// Copy of this recording with every position transformed.
    pub fn map_positions(&self, f: impl Fn(&Vector3<f64>) -> Vector3<f64>) -> Self {
        Recording {
            frames: self.frames.iter().map(|fr| fr.map_positions(&f)).collect(),
            ..self.clone()
        }
    }

    pub fn from_file(file: &RecordingFile, topology: &Topology) -> Result<Self> {
        if file.topology_id != topology.id() {
            return Err(Error::TopologyMismatch {
                expected: topology.id().to_string(),
                found: file.topology_id.clone(),
            });
        }
        let mut frames = Vec::with_capacity(file.frames.len());
        for fr in &file.frames {
            let mut positions = vec![Vector3::zeros(); topology.len()];
            let mut seen = vec![false; topology.len()];
            for (name, p) in &fr.joints {
                let i = topology.index_of(name)?;
                positions[i] = Vector3::from(*p);
                seen[i] = true;
            }
            if let Some(i) = seen.iter().position(|s| !s) {
                return Err(Error::MissingJoint(topology.joints()[i].clone()));
            }
            frames.push(SkeletonFrame::new(fr.t, positions));
        }
        let rec = Recording {
            topology_id: file.topology_id.clone(),
            fps: file.fps,
            frames,
            reps: file.reps.clone(),
        };
        rec.validate(topology)?;
        Ok(rec)
    }

    pub fn to_file(&self, topology: &Topology) -> RecordingFile {
        RecordingFile {
            topology_id: self.topology_id.clone(),
            fps: self.fps,
            frames: self
                .frames
                .iter()
                .map(|f| FrameRecord {
                    t: f.t,
                    joints: topology
                        .joints()
                        .iter()
                        .zip(&f.positions)
                        .map(|(n, p)| (n.clone(), [p.x, p.y, p.z]))
                        .collect(),
                })
                .collect(),
            reps: self.reps.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameRecord {
    pub t: f64,
    pub joints: BTreeMap<String, [f64; 3]>,
}

/// On-disk form of a [`Recording`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RecordingFile {
    pub topology_id: String,
    #[serde(default = "nominal_fps")]
    pub fps: f64,
    pub frames: Vec<FrameRecord>,
    #[serde(default)]
    pub reps: Vec<RepSpan>,
}

fn nominal_fps() -> f64 {
    NOMINAL_FPS
}

/// Reflect through the sagittal plane `x = 0` and swap left/right labels.
pub fn mirror(f: &SkeletonFrame, topology: &Topology) -> Result<SkeletonFrame> {
    topology.check_mirror_pairs()?;
    let mut positions = vec![Vector3::zeros(); f.positions.len()];
    for (i, p) in f.positions.iter().enumerate() {
        positions[topology.mirror_of(i)] = Vector3::new(-p.x, p.y, p.z);
    }
    Ok(SkeletonFrame { t: f.t, positions })
}

/// Translate so the central hip sits at the origin.
pub fn center(f: &SkeletonFrame, topology: &Topology) -> SkeletonFrame {
    let hip = f.positions[topology.central_hip()];
    f.map_positions(|p| p - hip)
}

/// Uniformly scale `f` so its hip-shoulder distance matches `reference`.
pub fn scale_to(f: &SkeletonFrame, reference: &SkeletonFrame, topology: &Topology) -> Result<SkeletonFrame> {
    let own = f.hip_shoulder_distance(topology);
    let target = reference.hip_shoulder_distance(topology);
    if own.is_nan() || own <= 0.0 || own.is_infinite() {
        return Err(Error::Degenerate(format!(
            "hip-shoulder distance of the recipient is {own}"
        )));
    }
    if own == target {
        return Ok(f.clone());
    }
    let k = target / own;
    Ok(f.map_positions(|p| p * k))
}

/// Resample a segment onto a uniform grid starting at its first frame.
///
/// Timestamps are rebased to the first frame of the segment; positions are
/// linearly interpolated between the bracketing frames. Grid points that
/// coincide with a frame reproduce it exactly.
pub fn resample(frames: &[SkeletonFrame], hz: f64) -> Vec<SkeletonFrame> {
    let Some(first) = frames.first() else {
        return Vec::new();
    };
    let t0 = first.t;
    let duration = frames.last().map_or(0.0, |l| l.t - t0);
    let n = (duration * hz + 1e-9).floor() as usize + 1;
    (0..n)
        .map(|k| {
            let tau = k as f64 / hz;
            let i = frames.partition_point(|f| f.t - t0 <= tau).saturating_sub(1);
            let a = &frames[i];
            let positions = match frames.get(i + 1) {
                Some(b) if tau > a.t - t0 => {
                    let w = (tau - (a.t - t0)) / (b.t - a.t);
                    a.positions
                        .iter()
                        .zip(&b.positions)
                        .map(|(pa, pb)| pa + (pb - pa) * w)
                        .collect()
                }
                _ => a.positions.clone(),
            };
            SkeletonFrame { t: tau, positions }
        })
        .collect()
}
