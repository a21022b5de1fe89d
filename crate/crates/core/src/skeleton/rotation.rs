//! Hierarchical joint rotations and the Frobenius rotation distance.

use std::collections::BTreeMap;

use nalgebra::{Matrix3, Vector3};

use super::{SkeletonFrame, Topology};
use crate::error::{Error, Result};

/// Tolerance on `||R^T R - I||_F` and `|det R - 1|`.
pub const ORTHONORMAL_TOL: f64 = 1e-6;

/// Bones shorter than this (metres) have no usable direction.
pub const MIN_BONE_LENGTH: f64 = 1e-9;

pub fn is_rotation(m: &Matrix3<f64>, tol: f64) -> bool {
    m.iter().all(|v| v.is_finite())
        && frobenius(&(m.transpose() * m - Matrix3::identity())) <= tol
        && (m.determinant() - 1.0).abs() <= tol
}

fn frobenius(m: &Matrix3<f64>) -> f64 {
    m.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// `||R1 - R2||_F`: the square root of the summed squared entry differences.
pub fn frobenius_dist(r1: &Matrix3<f64>, r2: &Matrix3<f64>) -> Result<f64> {
    let mut sum = 0.0;
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = (r1[(i, j)], r2[(i, j)]);
            if !(a.is_finite() && b.is_finite()) {
                return Err(Error::NonFinite(format!("rotation entry ({i}, {j})")));
            }
            let d = a - b;
            sum += d * d;
        }
    }
    Ok(sum.sqrt())
}

/// Smallest rotation taking unit vector `from` onto unit vector `to`.
///
/// Antiparallel inputs rotate by pi about an axis perpendicular to `from`,
/// chosen deterministically.
pub fn minimal_rotation(from: &Vector3<f64>, to: &Vector3<f64>) -> Matrix3<f64> {
    let c = from.dot(to);
    if c < -1.0 + 1e-12 {
        let least = from.iamin();
        let mut e = Vector3::zeros();
        e[least] = 1.0;
        let axis = from.cross(&e).normalize();
        return 2.0 * axis * axis.transpose() - Matrix3::identity();
    }
    let v = from.cross(to);
    let k = v.cross_matrix();
    Matrix3::identity() + k + k * k * (1.0 / (1.0 + c))
}

/// Per-joint local rotations keyed by joint name.
#[derive(Debug, Clone, PartialEq)]
pub struct RotationSet {
    rotations: BTreeMap<String, Matrix3<f64>>,
}

impl RotationSet {
    pub fn new(rotations: BTreeMap<String, Matrix3<f64>>) -> Result<Self> {
        for (name, r) in &rotations {
            if !is_rotation(r, ORTHONORMAL_TOL) {
                return Err(Error::config(
                    format!("rotations.{name}"),
                    "matrix is not a proper rotation",
                ));
            }
        }
        Ok(RotationSet { rotations })
    }

    pub fn get(&self, joint: &str) -> Option<&Matrix3<f64>> {
        self.rotations.get(joint)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Matrix3<f64>)> {
        self.rotations.iter()
    }

    pub fn len(&self) -> usize {
        self.rotations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rotations.is_empty()
    }
}

/// Local rotations indexed like the topology's joints.
///
/// Each joint's rotation is the minimal rotation taking its rest-pose bone
/// direction (parent to joint) to the observed bone direction, expressed in
/// the parent's accumulated frame. The root is the identity. Twist about the
/// bone axis cannot be observed from positions and is taken as zero.
pub(crate) fn local_rotations(
    f: &SkeletonFrame,
    topology: &Topology,
    rest: &SkeletonFrame,
) -> Result<Vec<Matrix3<f64>>> {
    let n = topology.len();
    let mut local = vec![Matrix3::identity(); n];
    let mut global = vec![Matrix3::identity(); n];
    for &j in topology.hierarchy_order() {
        let Some(p) = topology.parent(j) else {
            continue;
        };
        let observed = bone(f, p, j, topology, "observed")?;
        let rest_dir = bone(rest, p, j, topology, "rest")?;
        let in_parent = global[p].transpose() * observed;
        let r = minimal_rotation(&rest_dir, &in_parent);
        local[j] = r;
        global[j] = global[p] * r;
    }
    Ok(local)
}

fn bone(f: &SkeletonFrame, p: usize, j: usize, topology: &Topology, which: &str) -> Result<Vector3<f64>> {
    let d = f.positions[j] - f.positions[p];
    let len = d.norm();
    if len.is_nan() || len < MIN_BONE_LENGTH {
        return Err(Error::Degenerate(format!(
            "{which} bone {} -> {} has length {len}",
            topology.joints()[p],
            topology.joints()[j]
        )));
    }
    Ok(d / len)
}

/// Local joint rotations of `f` relative to `rest`.
pub fn derive_rotations(f: &SkeletonFrame, topology: &Topology, rest: &SkeletonFrame) -> Result<RotationSet> {
    f.validate(topology)?;
    rest.validate(topology)?;
    let local = local_rotations(f, topology, rest)?;
    Ok(RotationSet {
        rotations: topology.joints().iter().cloned().zip(local).collect(),
    })
}

/// Sum over `subset` of squared Frobenius distances.
pub fn frame_distance<S: AsRef<str>>(a: &RotationSet, b: &RotationSet, subset: &[S]) -> Result<f64> {
    if subset.is_empty() {
        return Err(Error::config("subset", "joint subset is empty"));
    }
    let mut sum = 0.0;
    for name in subset {
        let name = name.as_ref();
        let ra = a.get(name).ok_or_else(|| Error::MissingJoint(name.to_string()))?;
        let rb = b.get(name).ok_or_else(|| Error::MissingJoint(name.to_string()))?;
        let d = frobenius_dist(ra, rb)?;
        sum += d * d;
    }
    Ok(sum)
}

pub(crate) fn indexed_frame_distance(a: &[Matrix3<f64>], b: &[Matrix3<f64>], subset: &[usize]) -> Result<f64> {
    let mut sum = 0.0;
    for &j in subset {
        let d = frobenius_dist(&a[j], &b[j])?;
        sum += d * d;
    }
    Ok(sum)
}
