use std::collections::{BTreeMap, HashMap};

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Joint hierarchy of a tracked skeleton.
///
/// The parent relation is a tree rooted at the central hip. Joints are
/// addressed by index in declaration order; [`Topology::index_of`] resolves
/// names.
#[derive(Debug, Clone, PartialEq)]
pub struct Topology {
    id: String,
    joints: Vec<String>,
    parent: Vec<Option<usize>>,
    central_hip: usize,
    central_shoulder: usize,
    mirror_pairs: Vec<(usize, usize)>,
    /// `mirror[i]` is the partner of joint `i`, or `i` itself.
    mirror: Vec<usize>,
    /// Root first, every parent before its children.
    order: Vec<usize>,
    index: HashMap<String, usize>,
    rest_pose: Option<Vec<Vector3<f64>>>,
}

/// On-disk form of a [`Topology`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologyFile {
    pub id: String,
    pub joints: Vec<String>,
    /// child -> parent; the central hip has no entry.
    pub parents: BTreeMap<String, String>,
    pub central_hip: String,
    pub central_shoulder: String,
    #[serde(default)]
    pub mirror_pairs: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rest_pose: Option<BTreeMap<String, [f64; 3]>>,
}

impl Topology {
    pub fn from_file(file: &TopologyFile) -> Result<Self> {
        let mut index = HashMap::with_capacity(file.joints.len());
        for (i, name) in file.joints.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::config("joints", format!("joint `{name}` declared twice")));
            }
        }
        let lookup = |field: &str, name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::config(field, format!("unknown joint `{name}`")))
        };

        let central_hip = lookup("central_hip", &file.central_hip)?;
        let central_shoulder = lookup("central_shoulder", &file.central_shoulder)?;

        let mut parent = vec![None; file.joints.len()];
        for (child, par) in &file.parents {
            let c = lookup("parents", child)?;
            let p = lookup("parents", par)?;
            if c == central_hip {
                return Err(Error::config(
                    "parents",
                    "the central hip is the root and has no parent",
                ));
            }
            parent[c] = Some(p);
        }
        for (i, p) in parent.iter().enumerate() {
            if p.is_none() && i != central_hip {
                return Err(Error::config(
                    "parents",
                    format!("joint `{}` has no parent", file.joints[i]),
                ));
            }
        }

        // breadth-first from the root; anything unreached sits on a cycle
        let mut children = vec![Vec::new(); file.joints.len()];
        for (c, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(c);
            }
        }
        let mut order = Vec::with_capacity(file.joints.len());
        order.push(central_hip);
        let mut head = 0;
        while head < order.len() {
            let j = order[head];
            order.extend_from_slice(&children[j]);
            head += 1;
        }
        if order.len() != file.joints.len() {
            return Err(Error::config(
                "parents",
                "parent relation is not a tree rooted at the central hip",
            ));
        }

        let mut mirror: Vec<usize> = (0..file.joints.len()).collect();
        let mut mirror_pairs = Vec::with_capacity(file.mirror_pairs.len());
        for (l, r) in &file.mirror_pairs {
            let li = lookup("mirror_pairs", l)?;
            let ri = lookup("mirror_pairs", r)?;
            if li == ri || mirror[li] != li || mirror[ri] != ri {
                return Err(Error::config(
                    "mirror_pairs",
                    format!("pair ({l}, {r}) breaks the one-partner-per-joint rule"),
                ));
            }
            mirror[li] = ri;
            mirror[ri] = li;
            mirror_pairs.push((li, ri));
        }

        let rest_pose = match &file.rest_pose {
            None => None,
            Some(map) => {
                let mut pose = Vec::with_capacity(file.joints.len());
                for name in &file.joints {
                    let p = map.get(name).ok_or_else(|| Error::MissingJoint(name.clone()))?;
                    pose.push(Vector3::from(*p));
                }
                Some(pose)
            }
        };

        Ok(Topology {
            id: file.id.clone(),
            joints: file.joints.clone(),
            parent,
            central_hip,
            central_shoulder,
            mirror_pairs,
            mirror,
            order,
            index,
            rest_pose,
        })
    }

    pub fn to_file(&self) -> TopologyFile {
        let name = |i: usize| self.joints[i].clone();
        TopologyFile {
            id: self.id.clone(),
            joints: self.joints.clone(),
            parents: self
                .parent
                .iter()
                .enumerate()
                .filter_map(|(c, p)| p.map(|p| (name(c), name(p))))
                .collect(),
            central_hip: name(self.central_hip),
            central_shoulder: name(self.central_shoulder),
            mirror_pairs: self.mirror_pairs.iter().map(|&(l, r)| (name(l), name(r))).collect(),
            rest_pose: self.rest_pose.as_ref().map(|pose| {
                pose.iter()
                    .enumerate()
                    .map(|(i, p)| (name(i), [p.x, p.y, p.z]))
                    .collect()
            }),
        }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn joints(&self) -> &[String] {
        &self.joints
    }

    pub fn len(&self) -> usize {
        self.joints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.joints.is_empty()
    }

    pub fn parent(&self, joint: usize) -> Option<usize> {
        self.parent[joint]
    }

    pub fn central_hip(&self) -> usize {
        self.central_hip
    }

    pub fn central_shoulder(&self) -> usize {
        self.central_shoulder
    }

    pub fn mirror_of(&self, joint: usize) -> usize {
        self.mirror[joint]
    }

    /// Joint indices, every parent before its children.
    pub fn hierarchy_order(&self) -> &[usize] {
        &self.order
    }

    pub fn rest_pose(&self) -> Option<&[Vector3<f64>]> {
        self.rest_pose.as_deref()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingJoint(name.to_string()))
    }

    pub fn indices_of<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.index_of(n.as_ref())).collect()
    }

    /// Every joint whose name marks it as left or right must have a partner.
    pub fn check_mirror_pairs(&self) -> Result<()> {
        for (i, name) in self.joints.iter().enumerate() {
            if is_lateral(name) && self.mirror[i] == i {
                return Err(Error::config(
                    "mirror_pairs",
                    format!("lateral joint `{name}` has no mirror partner"),
                ));
            }
        }
        Ok(())
    }

    /// The 25-joint layout of the Kinect v2 body tracker.
    pub fn kinect_v2() -> Self {
        const MIDLINE: [(&str, Option<&str>); 5] = [
            ("SpineBase", None),
            ("SpineMid", Some("SpineBase")),
            ("SpineShoulder", Some("SpineMid")),
            ("Neck", Some("SpineShoulder")),
            ("Head", Some("Neck")),
        ];
        const SIDE: [(&str, &str); 10] = [
            ("Shoulder", "SpineShoulder"),
            ("Elbow", "Shoulder"),
            ("Wrist", "Elbow"),
            ("Hand", "Wrist"),
            ("HandTip", "Hand"),
            ("Thumb", "Hand"),
            ("Hip", "SpineBase"),
            ("Knee", "Hip"),
            ("Ankle", "Knee"),
            ("Foot", "Ankle"),
        ];
        let sided = |base: &str, side: &str| {
            if base.starts_with("Spine") {
                base.to_string()
            } else {
                format!("{base}{side}")
            }
        };

        let mut joints = Vec::new();
        let mut parents = BTreeMap::new();
        for (j, p) in MIDLINE {
            joints.push(j.to_string());
            if let Some(p) = p {
                parents.insert(j.to_string(), p.to_string());
            }
        }
        let mut mirror_pairs = Vec::new();
        for (j, p) in SIDE {
            for side in ["Left", "Right"] {
                joints.push(sided(j, side));
                parents.insert(sided(j, side), sided(p, side));
            }
            mirror_pairs.push((sided(j, "Left"), sided(j, "Right")));
        }

        let file = TopologyFile {
            id: "kinect_v2".into(),
            joints,
            parents,
            central_hip: "SpineBase".into(),
            central_shoulder: "SpineShoulder".into(),
            mirror_pairs,
            rest_pose: None,
        };
        Topology::from_file(&file).expect("built-in topology is valid")
    }
}

fn is_lateral(name: &str) -> bool {
    let lower = name.to_ascii_lowercase();
    ["left", "right"]
        .iter()
        .any(|side| lower.starts_with(side) || lower.ends_with(side))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> TopologyFile {
        TopologyFile {
            id: "small".into(),
            joints: vec!["hip".into(), "shoulder".into(), "left_hand".into(), "right_hand".into()],
            parents: [
                ("shoulder", "hip"),
                ("left_hand", "shoulder"),
                ("right_hand", "shoulder"),
            ]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect(),
            central_hip: "hip".into(),
            central_shoulder: "shoulder".into(),
            mirror_pairs: vec![("left_hand".into(), "right_hand".into())],
            rest_pose: None,
        }
    }

    #[test]
    fn builds_hierarchy_order() {
        let t = Topology::from_file(&small()).unwrap();
        assert_eq!(t.hierarchy_order()[0], t.central_hip());
        for (pos, &j) in t.hierarchy_order().iter().enumerate() {
            if let Some(p) = t.parent(j) {
                let ppos = t.hierarchy_order().iter().position(|&x| x == p).unwrap();
                assert!(ppos < pos);
            }
        }
        assert_eq!(t.mirror_of(2), 3);
        assert_eq!(t.mirror_of(1), 1);
        t.check_mirror_pairs().unwrap();
    }

    #[test]
    fn rejects_cycles_and_orphans() {
        let mut f = small();
        f.parents.remove("left_hand");
        assert!(Topology::from_file(&f).is_err());

        let mut f = small();
        f.parents.insert("shoulder".into(), "left_hand".into());
        assert!(Topology::from_file(&f).is_err());

        let mut f = small();
        f.parents.insert("hip".into(), "shoulder".into());
        assert!(Topology::from_file(&f).is_err());
    }

    #[test]
    fn mirror_pairs_form_an_involution() {
        let mut f = small();
        f.mirror_pairs.push(("left_hand".into(), "shoulder".into()));
        assert!(Topology::from_file(&f).is_err());
    }

    #[test]
    fn unpaired_lateral_joint_detected() {
        let mut f = small();
        f.mirror_pairs.clear();
        let t = Topology::from_file(&f).unwrap();
        assert!(matches!(t.check_mirror_pairs(), Err(Error::Config { .. })));
    }

    #[test]
    fn kinect_layout() {
        let t = Topology::kinect_v2();
        assert_eq!(t.len(), 25);
        t.check_mirror_pairs().unwrap();
        assert_eq!(t.joints()[t.central_hip()], "SpineBase");
        let back = Topology::from_file(&t.to_file()).unwrap();
        assert_eq!(back, t);
    }
}
