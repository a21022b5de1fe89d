//! Synthetic exercise recordings for tests, benches and demos.
//!
//! Motion is produced by forward kinematics: every joint swings about a
//! random axis with a sinusoidal angle that completes one cycle per
//! repetition, so repetitions look alike and rotations are known exactly.

use std::f64::consts::TAU;

use nalgebra::{Rotation3, Unit, Vector3};
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Recording, SkeletonFrame, Topology, NOMINAL_FPS};
use crate::noise;

/// A neutral standing pose for the Kinect v2 layout, arms out sideways.
/// Subject's left is `-x`.
pub fn kinect_t_pose(topology: &Topology) -> SkeletonFrame {
    let offsets: &[(&str, [f64; 3])] = &[
        ("SpineBase", [0.0, 1.0, 0.0]),
        ("SpineMid", [0.0, 0.3, 0.0]),
        ("SpineShoulder", [0.0, 0.25, 0.0]),
        ("Neck", [0.0, 0.08, 0.0]),
        ("Head", [0.0, 0.15, 0.02]),
        ("ShoulderLeft", [-0.18, -0.03, 0.0]),
        ("ElbowLeft", [-0.28, 0.0, 0.0]),
        ("WristLeft", [-0.25, 0.0, 0.0]),
        ("HandLeft", [-0.08, 0.0, 0.0]),
        ("HandTipLeft", [-0.07, 0.0, 0.0]),
        ("ThumbLeft", [-0.03, 0.0, 0.04]),
        ("HipLeft", [-0.08, -0.05, 0.0]),
        ("KneeLeft", [0.0, -0.42, 0.02]),
        ("AnkleLeft", [0.0, -0.4, -0.02]),
        ("FootLeft", [0.0, -0.05, 0.1]),
    ];
    let mut positions = vec![Vector3::zeros(); topology.len()];
    let offset_of = |name: &str| -> Vector3<f64> {
        let (base, mirrored) = match name.strip_suffix("Right") {
            Some(stem) => (format!("{stem}Left"), true),
            None => (name.to_string(), false),
        };
        let o = offsets
            .iter()
            .find(|(n, _)| *n == base)
            .map_or([0.0, 0.1, 0.0], |(_, o)| *o);
        Vector3::new(if mirrored { -o[0] } else { o[0] }, o[1], o[2])
    };
    for &j in topology.hierarchy_order() {
        let off = offset_of(&topology.joints()[j]);
        positions[j] = match topology.parent(j) {
            Some(p) => positions[p] + off,
            None => off,
        };
    }
    SkeletonFrame::new(0.0, positions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotionSpec {
    pub reps: usize,
    pub frames_per_rep: usize,
    /// Peak swing angle per joint, radians.
    pub amplitude: f64,
    /// Timestamp jitter (seconds, uniform half-width).
    pub jitter: f64,
    pub seed: u64,
}

impl Default for MotionSpec {
    fn default() -> Self {
        MotionSpec {
            reps: 10,
            frames_per_rep: 30,
            amplitude: 0.6,
            jitter: 0.0,
            seed: 0,
        }
    }
}

/// Per-joint swing parameters: axis and phase.
#[derive(Debug, Clone)]
pub struct Motion {
    axes: Vec<Unit<Vector3<f64>>>,
    phases: Vec<f64>,
    amplitude: f64,
}

impl Motion {
    pub fn random(topology: &Topology, amplitude: f64, seed: u64) -> Self {
        let mut rng = noise::stream(seed, &[0x5EED]);
        let mut axes = Vec::with_capacity(topology.len());
        let mut phases = Vec::with_capacity(topology.len());
        for _ in 0..topology.len() {
            let v = loop {
                let v = Vector3::new(
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-1.0..1.0),
                );
                if v.norm() > 0.1 {
                    break v;
                }
            };
            axes.push(Unit::new_normalize(v));
            phases.push(rng.random_range(0.0..TAU));
        }
        Motion {
            axes,
            phases,
            amplitude,
        }
    }

    /// Copy with every joint's swing phase shifted by `offset` radians.
    pub fn delayed(&self, offset: f64) -> Self {
        Motion {
            phases: self.phases.iter().map(|p| p + offset).collect(),
            ..self.clone()
        }
    }

    /// Pose at cycle position `cycle` (1.0 = one full repetition).
    pub fn pose(&self, topology: &Topology, rest: &SkeletonFrame, cycle: f64) -> Vec<Vector3<f64>> {
        let n = topology.len();
        let mut global = vec![Rotation3::identity(); n];
        let mut positions = vec![Vector3::zeros(); n];
        for &j in topology.hierarchy_order() {
            let angle = self.amplitude * (TAU * cycle + self.phases[j]).sin();
            let local = Rotation3::from_axis_angle(&self.axes[j], angle);
            match topology.parent(j) {
                Some(p) => {
                    global[j] = global[p] * local;
                    positions[j] = positions[p] + global[p] * (rest.positions[j] - rest.positions[p]);
                }
                None => {
                    global[j] = Rotation3::identity();
                    positions[j] = rest.positions[j];
                }
            }
        }
        positions
    }
}

/// Generate a recording of `spec.reps` repetitions of `motion`.
pub fn record(topology: &Topology, rest: &SkeletonFrame, motion: &Motion, spec: &MotionSpec) -> Recording {
    let mut rng = noise::stream(spec.seed, &[0x717]);
    let total = spec.reps * spec.frames_per_rep;
    let frames = (0..total)
        .map(|i| {
            let jitter = if spec.jitter > 0.0 {
                rng.random_range(-spec.jitter..spec.jitter)
            } else {
                0.0
            };
            let t = (i as f64 / NOMINAL_FPS + jitter).max(0.0);
            let cycle = (i % spec.frames_per_rep) as f64 / spec.frames_per_rep as f64;
            SkeletonFrame::new(t, motion.pose(topology, rest, cycle))
        })
        .collect::<Vec<_>>();
    // jitter must not reorder frames
    let mut frames = frames;
    for i in 1..frames.len() {
        if frames[i].t < frames[i - 1].t {
            frames[i].t = frames[i - 1].t;
        }
    }
    Recording {
        topology_id: topology.id().to_string(),
        fps: NOMINAL_FPS,
        frames,
        reps: (0..spec.reps)
            .map(|k| (k * spec.frames_per_rep, (k + 1) * spec.frames_per_rep))
            .collect(),
    }
}

/// A rest pose with every bone length scaled by a random factor in
/// `[1 - spread, 1 + spread]`, standing in for a differently built person.
pub fn reproportioned(topology: &Topology, rest: &SkeletonFrame, spread: f64, seed: u64) -> SkeletonFrame {
    let mut rng = noise::stream(seed, &[0xB0DE]);
    let mut positions = rest.positions.clone();
    for &j in topology.hierarchy_order() {
        if let Some(p) = topology.parent(j) {
            let k = 1.0 + rng.random_range(-spread..=spread);
            positions[j] = positions[p] + (rest.positions[j] - rest.positions[p]) * k;
        }
    }
    SkeletonFrame::new(rest.t, positions)
}
