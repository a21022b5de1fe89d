//! Human-centric parameters and their mapping onto concrete game variables.
//!
//! A [`ParamVector`] holds six normalized ability/difficulty levels for one
//! player in one game. A [`GameVariableMap`] turns those levels into game
//! variables (targets per minute, target radius, ...) by linear interpolation
//! between per-variable thresholds.

use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};

/// The six human-centric parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    Rom,
    Speed,
    Accuracy,
    Endurance,
    CognitiveComplexity,
    Resilience,
}

impl Param {
    pub const ALL: [Param; 6] = [
        Param::Rom,
        Param::Speed,
        Param::Accuracy,
        Param::Endurance,
        Param::CognitiveComplexity,
        Param::Resilience,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::Rom => "rom",
            Param::Speed => "speed",
            Param::Accuracy => "accuracy",
            Param::Endurance => "endurance",
            Param::CognitiveComplexity => "cognitive_complexity",
            Param::Resilience => "resilience",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::config("param", format!("unknown parameter `{s}`")))
    }
}

/// Normalized parameter levels, each in `[0, 1]`.
///
/// Construction does not validate; call [`ParamVector::validate`] at trust
/// boundaries. Arithmetic is componentwise.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamVector {
    pub rom: f64,
    pub speed: f64,
    pub accuracy: f64,
    pub endurance: f64,
    pub cognitive_complexity: f64,
    pub resilience: f64,
}

impl ParamVector {
    pub fn splat(v: f64) -> Self {
        Self::from_array([v; 6])
    }

    pub fn from_array(a: [f64; 6]) -> Self {
        ParamVector {
            rom: a[0],
            speed: a[1],
            accuracy: a[2],
            endurance: a[3],
            cognitive_complexity: a[4],
            resilience: a[5],
        }
    }

    pub fn to_array(self) -> [f64; 6] {
        [
            self.rom,
            self.speed,
            self.accuracy,
            self.endurance,
            self.cognitive_complexity,
            self.resilience,
        ]
    }

    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::Rom => self.rom,
            Param::Speed => self.speed,
            Param::Accuracy => self.accuracy,
            Param::Endurance => self.endurance,
            Param::CognitiveComplexity => self.cognitive_complexity,
            Param::Resilience => self.resilience,
        }
    }

    pub fn set(&mut self, p: Param, v: f64) {
        *self.get_mut(p) = v;
    }

    fn get_mut(&mut self, p: Param) -> &mut f64 {
        match p {
            Param::Rom => &mut self.rom,
            Param::Speed => &mut self.speed,
            Param::Accuracy => &mut self.accuracy,
            Param::Endurance => &mut self.endurance,
            Param::CognitiveComplexity => &mut self.cognitive_complexity,
            Param::Resilience => &mut self.resilience,
        }
    }

    pub fn with(mut self, p: Param, v: f64) -> Self {
        self.set(p, v);
        self
    }

    /// Apply `f(param, value)` to every component.
    pub fn map(self, mut f: impl FnMut(Param, f64) -> f64) -> Self {
        let mut out = self;
        for p in Param::ALL {
            out.set(p, f(p, self.get(p)));
        }
        out
    }

    /// Combine two vectors componentwise.
    pub fn zip_with(self, other: Self, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        self.map(|p, a| f(a, other.get(p)))
    }

    /// Componentwise clamp to `[lo, hi]`.
    pub fn clamp(self, lo: &ParamVector, hi: &ParamVector) -> Self {
        self.map(|p, v| v.max(lo.get(p)).min(hi.get(p)))
    }

    pub fn clamp_unit(self) -> Self {
        self.map(|_, v| v.clamp(0.0, 1.0))
    }

    /// Every component finite and within `[0, 1]`.
    pub fn validate(&self) -> Result<()> {
        for p in Param::ALL {
            check_closed(p.name(), self.get(p), 0.0, 1.0)?;
        }
        Ok(())
    }

    /// Mean over the given parameters. Returns 0 for an empty list.
    pub fn mean_of(&self, params: &[Param]) -> f64 {
        if params.is_empty() {
            return 0.0;
        }
        params.iter().map(|&p| self.get(p)).sum::<f64>() / params.len() as f64
    }
}

impl std::ops::Add for ParamVector {
    type Output = ParamVector;

    fn add(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl std::ops::Sub for ParamVector {
    type Output = ParamVector;

    fn sub(self, rhs: Self) -> Self {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Whether a higher parameter level makes the variable harder or easier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    IncreasesDifficulty,
    DecreasesDifficulty,
}

/// A game variable and the thresholds its value is confined to.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VariableSpec {
    pub name: String,
    pub lo: f64,
    pub hi: f64,
    pub direction: Direction,
}

impl VariableSpec {
    pub fn new(name: impl Into<String>, lo: f64, hi: f64, direction: Direction) -> Result<Self> {
        let spec = VariableSpec {
            name: name.into(),
            lo,
            hi,
            direction,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite()) {
            return Err(Error::NonFinite(format!("thresholds of `{}`", self.name)));
        }
        if self.lo >= self.hi {
            return Err(Error::config(
                &self.name,
                format!("lo ({}) must be strictly below hi ({})", self.lo, self.hi),
            ));
        }
        Ok(())
    }

    /// Value of this variable for normalized level `q`.
    ///
    /// `q` must already be in `[0, 1]`; out-of-range levels are rejected
    /// rather than clamped.
    pub fn map(&self, q: f64) -> Result<f64> {
        check_closed(&self.name, q, 0.0, 1.0)?;
        let t = match self.direction {
            Direction::IncreasesDifficulty => q,
            Direction::DecreasesDifficulty => 1.0 - q,
        };
        // lo + t*(hi-lo) can overshoot hi by an ulp
        Ok((self.lo + t * (self.hi - self.lo)).clamp(self.lo, self.hi))
    }

    /// Normalized level that produces `value`.
    pub fn unmap(&self, value: f64) -> Result<f64> {
        check_closed(&self.name, value, self.lo, self.hi)?;
        let t = ((value - self.lo) / (self.hi - self.lo)).clamp(0.0, 1.0);
        Ok(match self.direction {
            Direction::IncreasesDifficulty => t,
            Direction::DecreasesDifficulty => 1.0 - t,
        })
    }
}

/// One row of a [`GameVariableMap`]: which parameter drives which variable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MapEntry {
    pub param: Param,
    #[serde(flatten)]
    pub spec: VariableSpec,
}

/// Per-game mapping from parameters to variables.
///
/// A parameter may drive several variables; a variable is driven by exactly
/// one parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameVariableMap {
    pub game_id: String,
    pub entries: Vec<MapEntry>,
}

impl GameVariableMap {
    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for (i, e) in self.entries.iter().enumerate() {
            e.spec.validate().map_err(|err| err.within(&format!("entries[{i}]")))?;
            if !seen.insert(e.spec.name.as_str()) {
                return Err(Error::config(
                    format!("entries[{i}].name"),
                    format!("variable `{}` mapped more than once", e.spec.name),
                ));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Map every entry of `m` from the levels in `p`.
pub fn map_params(p: &ParamVector, m: &GameVariableMap) -> Result<Vec<(String, f64)>> {
    m.entries
        .iter()
        .map(|e| {
            let q = p.get(e.param);
            check_closed(e.param.name(), q, 0.0, 1.0)?;
            Ok((e.spec.name.clone(), e.spec.map(q)?))
        })
        .collect()
}

/// Inverse of the linear map for a single variable.
pub fn unmap_variable(value: f64, spec: &VariableSpec) -> Result<f64> {
    spec.unmap(value)
}

/// Scale a tracked position about `anchor`.
///
/// With `factor = calibrated extent / measured extent`, a player with a
/// reduced range of motion covers the full game space while targets stay
/// where they are drawn.
pub fn scale_input(raw: Vector3<f64>, anchor: Vector3<f64>, factor: f64) -> Result<Vector3<f64>> {
    if !(factor > 0.0 && factor.is_finite()) {
        return Err(Error::domain("factor", factor, f64::MIN_POSITIVE, f64::MAX));
    }
    Ok(anchor + (raw - anchor) * factor)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn speed_spec() -> VariableSpec {
        VariableSpec::new("targets_per_minute", 2.0, 10.0, Direction::IncreasesDifficulty).unwrap()
    }

    fn radius_spec() -> VariableSpec {
        VariableSpec::new("target_radius", 0.05, 0.25, Direction::DecreasesDifficulty).unwrap()
    }

    #[test]
    fn map_examples() {
        let m = GameVariableMap {
            game_id: "g".into(),
            entries: vec![
                MapEntry {
                    param: Param::Speed,
                    spec: speed_spec(),
                },
                MapEntry {
                    param: Param::Accuracy,
                    spec: radius_spec(),
                },
            ],
        };
        let p = ParamVector::default()
            .with(Param::Speed, 0.5)
            .with(Param::Accuracy, 0.25);
        let out = map_params(&p, &m).unwrap();
        assert_eq!(out[0], ("targets_per_minute".to_string(), 6.0));
        assert!((out[1].1 - 0.20).abs() < 1e-15);

        let p0 = ParamVector::default();
        assert_eq!(map_params(&p0, &m).unwrap()[0].1, 2.0);
    }

    #[test]
    fn map_rejects_out_of_range() {
        let m = GameVariableMap {
            game_id: "g".into(),
            entries: vec![MapEntry {
                param: Param::Speed,
                spec: speed_spec(),
            }],
        };
        for bad in [-0.01, 1.01, f64::NAN] {
            let p = ParamVector::default().with(Param::Speed, bad);
            assert!(matches!(map_params(&p, &m), Err(Error::Domain { .. })));
        }
    }

    #[test]
    fn unmap_examples() {
        assert_eq!(unmap_variable(6.0, &speed_spec()).unwrap(), 0.5);
        assert_eq!(unmap_variable(2.0, &speed_spec()).unwrap(), 0.0);
        assert!((unmap_variable(0.20, &radius_spec()).unwrap() - 0.25).abs() < 1e-12);
        assert!(unmap_variable(10.5, &speed_spec()).is_err());
        assert!(unmap_variable(1.9, &speed_spec()).is_err());
    }

    #[test]
    fn spec_requires_lo_below_hi() {
        assert!(VariableSpec::new("x", 1.0, 1.0, Direction::IncreasesDifficulty).is_err());
        assert!(VariableSpec::new("x", 2.0, 1.0, Direction::IncreasesDifficulty).is_err());
    }

    #[test]
    fn duplicate_variable_rejected() {
        let m = GameVariableMap {
            game_id: "g".into(),
            entries: vec![
                MapEntry {
                    param: Param::Speed,
                    spec: speed_spec(),
                },
                MapEntry {
                    param: Param::Rom,
                    spec: speed_spec(),
                },
            ],
        };
        let err = m.validate().unwrap_err();
        assert_eq!(err.field(), Some("entries[1].name"));
    }

    #[test]
    fn map_json_layout() {
        let text = r#"{"game_id":"sdf","entries":[
            {"param":"speed","name":"targets_per_minute","lo":2,"hi":10,"direction":"IncreasesDifficulty"}]}"#;
        let m = GameVariableMap::from_json(text).unwrap();
        m.validate().unwrap();
        assert_eq!(m.entries[0].param, Param::Speed);
        assert_eq!(m.entries[0].spec, speed_spec());
        let back: GameVariableMap = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn scale_input_examples() {
        let o = Vector3::zeros();
        assert_eq!(
            scale_input(Vector3::new(0.3, 0.0, 0.0), o, 2.0).unwrap(),
            Vector3::new(0.6, 0.0, 0.0)
        );
        let raw = Vector3::new(0.1, -0.4, 2.0);
        assert_eq!(scale_input(raw, o, 1.0).unwrap(), raw);
        let a = Vector3::new(0.2, 0.1, 0.0);
        assert_eq!(scale_input(a, a, 5.0).unwrap(), a);
        assert!(scale_input(raw, o, 0.0).is_err());
        assert!(scale_input(raw, o, -1.0).is_err());
    }

    #[test]
    fn param_names_roundtrip() {
        for p in Param::ALL {
            assert_eq!(p.name().parse::<Param>().unwrap(), p);
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.name()));
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn any_spec() -> impl Strategy<Value = VariableSpec> {
            (-100.0f64..100.0, 1e-3f64..50.0, any::<bool>()).prop_map(|(lo, w, inc)| {
                let dir = if inc {
                    Direction::IncreasesDifficulty
                } else {
                    Direction::DecreasesDifficulty
                };
                VariableSpec::new("v", lo, lo + w, dir).unwrap()
            })
        }

        proptest! {
            #[test]
            fn map_in_range_and_monotone(spec in any_spec(), a in 0.0f64..=1.0, b in 0.0f64..=1.0) {
                let va = spec.map(a).unwrap();
                let vb = spec.map(b).unwrap();
                prop_assert!(va >= spec.lo && va <= spec.hi);
                if a < b {
                    match spec.direction {
                        Direction::IncreasesDifficulty => prop_assert!(va <= vb),
                        Direction::DecreasesDifficulty => prop_assert!(va >= vb),
                    }
                }
            }

            #[test]
            fn decreasing_is_flipped_increasing(lo in -5.0f64..5.0, w in 0.01f64..5.0, q in 0.0f64..=1.0) {
                let inc = VariableSpec::new("v", lo, lo + w, Direction::IncreasesDifficulty).unwrap();
                let dec = VariableSpec::new("v", lo, lo + w, Direction::DecreasesDifficulty).unwrap();
                prop_assert_eq!(dec.map(q).unwrap(), inc.map(1.0 - q).unwrap());
            }

            #[test]
            fn scale_input_is_affine(
                a in prop::array::uniform3(-2.0f64..2.0),
                t in prop::array::uniform3(-2.0f64..2.0),
                anchor in prop::array::uniform3(-2.0f64..2.0),
                factor in 0.01f64..10.0,
            ) {
                let a = Vector3::from(a);
                let t = Vector3::from(t);
                let anchor = Vector3::from(anchor);
                let d = scale_input(a + t, anchor, factor).unwrap() - scale_input(a, anchor, factor).unwrap();
                prop_assert!((d - t * factor).norm() < 1e-9);
            }
        }
    }
}
