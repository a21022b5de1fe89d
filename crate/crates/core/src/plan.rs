//! Milestone-based treatment plans.
//!
//! Therapists set milestones (keyframes) at chosen sessions. Targets between
//! milestones are linearly interpolated and held after the last one. In
//! semi-automatic mode the difficulty adjustment may move parameters only
//! within a band of half-width `band` around the interpolated target; in
//! manual mode the plan (and any overrides) dictate the parameters outright.

use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};
use crate::params::ParamVector;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Milestone {
    pub session: u32,
    pub params: ParamVector,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlanMode {
    Manual,
    SemiAutomatic,
}

/// A manual setting effective from `session` onward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Override {
    pub session: u32,
    pub params: ParamVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreatmentPlan {
    pub mode: PlanMode,
    pub band: f64,
    pub milestones: Vec<Milestone>,
    /// Active overrides, sorted by session, at most one per session.
    #[serde(default)]
    pub overrides: Vec<Override>,
    /// Every override ever applied, in application order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub history: Vec<Override>,
}

pub const MAX_BAND: f64 = 0.5;

impl TreatmentPlan {
    pub fn new(mode: PlanMode, band: f64, milestones: Vec<Milestone>) -> Result<Self> {
        let plan = TreatmentPlan {
            mode,
            band,
            milestones,
            overrides: Vec::new(),
            history: Vec::new(),
        };
        plan.validate()?;
        Ok(plan)
    }

    /// Single-milestone plan holding `target` for every session.
    pub fn constant(mode: PlanMode, band: f64, target: ParamVector) -> Result<Self> {
        Self::new(
            mode,
            band,
            vec![Milestone {
                session: 0,
                params: target,
            }],
        )
    }

    pub fn validate(&self) -> Result<()> {
        check_closed("band", self.band, 0.0, MAX_BAND)?;
        if self.milestones.is_empty() {
            return Err(Error::config("milestones", "plan needs at least one milestone"));
        }
        for (i, m) in self.milestones.iter().enumerate() {
            if i > 0 && m.session <= self.milestones[i - 1].session {
                return Err(Error::config(
                    format!("milestones[{i}].session"),
                    format!(
                        "session {} does not follow session {}",
                        m.session,
                        self.milestones[i - 1].session
                    ),
                ));
            }
            m.params
                .validate()
                .map_err(|e| e.within(&format!("milestones[{i}].params")))?;
        }
        for (i, o) in self.overrides.iter().enumerate() {
            if i > 0 && o.session <= self.overrides[i - 1].session {
                return Err(Error::config(
                    format!("overrides[{i}].session"),
                    "overrides must have strictly increasing sessions",
                ));
            }
            o.params
                .validate()
                .map_err(|e| e.within(&format!("overrides[{i}].params")))?;
        }
        Ok(())
    }

    /// Interpolated target for `session`.
    ///
    /// Exactly the milestone's vector at a milestone session, the first
    /// milestone before it, the last milestone after it.
    pub fn target_at(&self, session: u32) -> Result<ParamVector> {
        let ms = &self.milestones;
        let first = ms
            .first()
            .ok_or_else(|| Error::config("milestones", "plan needs at least one milestone"))?;
        // index of the first milestone strictly after `session`
        let next = ms.partition_point(|m| m.session <= session);
        if next == 0 {
            return Ok(first.params);
        }
        let prev = &ms[next - 1];
        if prev.session == session || next == ms.len() {
            return Ok(prev.params);
        }
        let after = &ms[next];
        let t = f64::from(session - prev.session) / f64::from(after.session - prev.session);
        Ok(prev.params.zip_with(after.params, |a, b| a + t * (b - a)))
    }

    /// Lower and upper band edges around the target, intersected with `[0, 1]`.
    pub fn band_at(&self, session: u32) -> Result<(ParamVector, ParamVector)> {
        let target = self.target_at(session)?;
        let lo = target.map(|_, v| (v - self.band).max(0.0));
        let hi = target.map(|_, v| (v + self.band).min(1.0));
        Ok((lo, hi))
    }

    /// Latest override at or before `session`.
    pub fn override_at(&self, session: u32) -> Option<&Override> {
        let idx = self.overrides.partition_point(|o| o.session <= session);
        idx.checked_sub(1).map(|i| &self.overrides[i])
    }

    /// The parameters a session actually runs with.
    ///
    /// Semi-automatic plans clamp `proposed` into the band; manual plans
    /// ignore it.
    pub fn effective_params(&self, session: u32, proposed: &ParamVector) -> Result<ParamVector> {
        match self.mode {
            PlanMode::SemiAutomatic => {
                let (lo, hi) = self.band_at(session)?;
                Ok(proposed.clamp(&lo, &hi))
            }
            PlanMode::Manual => match self.override_at(session) {
                Some(o) => Ok(o.params),
                None => self.target_at(session),
            },
        }
    }

    /// A copy of this plan with an override recorded at `session`.
    ///
    /// An existing override at the same session is replaced; both remain
    /// visible in `history`.
    pub fn apply_override(&self, session: u32, p: ParamVector) -> Result<TreatmentPlan> {
        p.validate().map_err(|e| e.within("override"))?;
        let mut plan = self.clone();
        let o = Override { session, params: p };
        match plan.overrides.binary_search_by_key(&session, |o| o.session) {
            Ok(i) => plan.overrides[i] = o.clone(),
            Err(i) => plan.overrides.insert(i, o.clone()),
        }
        plan.history.push(o);
        Ok(plan)
    }

    pub fn last_milestone_session(&self) -> u32 {
        self.milestones.last().map_or(0, |m| m.session)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::Param;

    fn speed(v: f64) -> ParamVector {
        ParamVector::default().with(Param::Speed, v)
    }

    fn two_point(mode: PlanMode) -> TreatmentPlan {
        TreatmentPlan::new(
            mode,
            0.1,
            vec![
                Milestone {
                    session: 0,
                    params: speed(0.2),
                },
                Milestone {
                    session: 10,
                    params: speed(0.6),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn target_interpolation() {
        let plan = two_point(PlanMode::SemiAutomatic);
        assert!((plan.target_at(5).unwrap().speed - 0.4).abs() < 1e-15);
        assert_eq!(plan.target_at(0).unwrap().speed, 0.2);
        assert_eq!(plan.target_at(10).unwrap().speed, 0.6);
        assert_eq!(plan.target_at(12).unwrap().speed, 0.6);
    }

    #[test]
    fn before_first_milestone_holds_first() {
        let plan = TreatmentPlan::new(
            PlanMode::Manual,
            0.0,
            vec![Milestone {
                session: 4,
                params: speed(0.3),
            }],
        )
        .unwrap();
        assert_eq!(plan.target_at(0).unwrap(), speed(0.3));
    }

    #[test]
    fn empty_plan_rejected() {
        let err = TreatmentPlan::new(PlanMode::Manual, 0.1, vec![]).unwrap_err();
        assert_eq!(err.field(), Some("milestones"));
        let raw = TreatmentPlan {
            mode: PlanMode::Manual,
            band: 0.1,
            milestones: vec![],
            overrides: vec![],
            history: vec![],
        };
        assert!(raw.target_at(0).is_err());
    }

    #[test]
    fn validation_names_fields() {
        let err = TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.6, speed(0.2)).unwrap_err();
        assert_eq!(err.field(), Some("band"));

        let err = TreatmentPlan::new(
            PlanMode::Manual,
            0.1,
            vec![
                Milestone {
                    session: 5,
                    params: speed(0.2),
                },
                Milestone {
                    session: 3,
                    params: speed(0.2),
                },
            ],
        )
        .unwrap_err();
        assert_eq!(err.field(), Some("milestones[1].session"));

        let err = TreatmentPlan::constant(PlanMode::Manual, 0.1, speed(1.5)).unwrap_err();
        assert_eq!(err.field(), Some("milestones[0].params.speed"));
    }

    #[test]
    fn band_clamping() {
        let plan = TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.1, speed(0.4)).unwrap();
        let eff = plan.effective_params(0, &speed(0.55)).unwrap();
        assert!((eff.speed - 0.5).abs() < 1e-15);
        assert_eq!(plan.effective_params(0, &speed(0.45)).unwrap().speed, 0.45);

        let tight = TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.0, speed(0.4)).unwrap();
        for v in [0.0, 0.39, 0.41, 1.0] {
            assert_eq!(tight.effective_params(3, &speed(v)).unwrap().speed, 0.4);
        }
    }

    #[test]
    fn band_respects_unit_interval() {
        let plan = TreatmentPlan::constant(PlanMode::SemiAutomatic, 0.2, speed(0.95)).unwrap();
        let (lo, hi) = plan.band_at(0).unwrap();
        assert_eq!(hi.speed, 1.0);
        assert!((lo.speed - 0.75).abs() < 1e-15);
        assert_eq!(lo.rom, 0.0);
    }

    #[test]
    fn manual_overrides() {
        let plan = two_point(PlanMode::Manual);
        let with = plan.apply_override(3, speed(0.7)).unwrap();
        assert!(plan.overrides.is_empty());
        assert_eq!(with.effective_params(3, &speed(0.0)).unwrap().speed, 0.7);
        assert_eq!(with.effective_params(9, &speed(0.0)).unwrap().speed, 0.7);
        let s2 = with.effective_params(2, &speed(0.99)).unwrap().speed;
        assert!((s2 - (0.2 + 0.2 * 0.4)).abs() < 1e-15);

        let twice = with.apply_override(3, speed(0.1)).unwrap();
        assert_eq!(twice.overrides.len(), 1);
        assert_eq!(twice.history.len(), 2);
        assert_eq!(twice.effective_params(4, &speed(0.5)).unwrap().speed, 0.1);

        assert!(plan.apply_override(1, speed(-0.1)).is_err());
    }

    #[test]
    fn manual_without_overrides_follows_targets() {
        let plan = two_point(PlanMode::Manual);
        for s in 0..15 {
            assert_eq!(
                plan.effective_params(s, &speed(0.99)).unwrap(),
                plan.target_at(s).unwrap()
            );
        }
    }

    #[test]
    fn plan_json_layout() {
        let text = r#"{
            "mode": "SemiAutomatic",
            "band": 0.1,
            "milestones": [
                {"session": 0, "params": {"rom": 0.2, "speed": 0.3}},
                {"session": 8, "params": {"rom": 0.5, "speed": 0.6}}
            ],
            "overrides": [{"session": 2, "params": {"rom": 0.3}}]
        }"#;
        let plan: TreatmentPlan = serde_json::from_str(text).unwrap();
        plan.validate().unwrap();
        assert_eq!(plan.milestones[1].params.speed, 0.6);
        assert_eq!(plan.overrides[0].params.rom, 0.3);
        assert!(
            serde_json::from_str::<TreatmentPlan>(r#"{"mode":"Manual","band":0.1,"milestones":[],"bogus":1}"#).is_err()
        );
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_plan() -> impl Strategy<Value = TreatmentPlan> {
            (
                prop::collection::vec((1u32..6, prop::array::uniform6(0.0f64..=1.0)), 1..6),
                0.0f64..=0.5,
            )
                .prop_map(|(raw, band)| {
                    let mut session = 0;
                    let milestones = raw
                        .into_iter()
                        .map(|(gap, v)| {
                            session += gap;
                            Milestone {
                                session,
                                params: ParamVector::from_array(v),
                            }
                        })
                        .collect();
                    TreatmentPlan::new(PlanMode::SemiAutomatic, band, milestones).unwrap()
                })
        }

        proptest! {
            #[test]
            fn keyframes_exact(plan in any_plan()) {
                for m in &plan.milestones {
                    prop_assert_eq!(plan.target_at(m.session).unwrap(), m.params);
                }
            }

            #[test]
            fn consecutive_sessions_bounded_by_slope(plan in any_plan(), s in 0u32..40) {
                let a = plan.target_at(s).unwrap();
                let b = plan.target_at(s + 1).unwrap();
                let ms = &plan.milestones;
                let max_slope = ms
                    .windows(2)
                    .map(|w| {
                        let span = f64::from(w[1].session - w[0].session);
                        (w[1].params - w[0].params).to_array().iter().fold(0.0f64, |m, d| m.max(d.abs() / span))
                    })
                    .fold(0.0, f64::max);
                for (x, y) in a.to_array().iter().zip(b.to_array()) {
                    prop_assert!((x - y).abs() <= max_slope + 1e-12);
                }
            }

            #[test]
            fn semi_automatic_stays_in_band(plan in any_plan(), s in 0u32..40, v in prop::array::uniform6(0.0f64..=1.0)) {
                let target = plan.target_at(s).unwrap();
                let eff = plan.effective_params(s, &ParamVector::from_array(v)).unwrap();
                for (e, t) in eff.to_array().iter().zip(target.to_array()) {
                    prop_assert!(*e >= t - plan.band && *e <= t + plan.band);
                    prop_assert!((0.0..=1.0).contains(e));
                }
            }
        }
    }
}
