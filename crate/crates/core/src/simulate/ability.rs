use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};
use crate::noise;

const SHORT_TERM_STREAM: u64 = 0xAB11;

/// Synthetic player ability built from three temporal components: a
/// long-term piecewise-linear trend over sessions, a medium-term sinusoid,
/// and short-term zero-mean noise per round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbilityModel {
    /// `(session, level)` breakpoints; held flat outside their range.
    pub long_term: Vec<(u32, f64)>,
    #[serde(default)]
    pub medium_amplitude: f64,
    #[serde(default = "default_period")]
    pub medium_period: f64,
    /// Phase offset of the medium-term oscillation, radians.
    #[serde(default)]
    pub medium_phase: f64,
    #[serde(default)]
    pub short_sd: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_period() -> f64 {
    7.0
}

impl AbilityModel {
    pub fn constant(level: f64) -> Self {
        AbilityModel {
            long_term: vec![(0, level)],
            medium_amplitude: 0.0,
            medium_period: default_period(),
            medium_phase: 0.0,
            short_sd: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.long_term.is_empty() {
            return Err(Error::config("long_term", "at least one breakpoint required"));
        }
        for (i, &(s, v)) in self.long_term.iter().enumerate() {
            check_closed(&format!("long_term[{i}]"), v, 0.0, 1.0)?;
            if i > 0 && s <= self.long_term[i - 1].0 {
                return Err(Error::config(
                    format!("long_term[{i}]"),
                    "breakpoint sessions must be strictly increasing",
                ));
            }
        }
        check_closed("medium_amplitude", self.medium_amplitude, 0.0, 0.3)?;
        if !(self.medium_period > 0.0 && self.medium_period.is_finite()) {
            return Err(Error::domain(
                "medium_period",
                self.medium_period,
                f64::MIN_POSITIVE,
                f64::MAX,
            ));
        }
        if !self.medium_phase.is_finite() {
            return Err(Error::NonFinite("medium_phase".into()));
        }
        check_closed("short_sd", self.short_sd, 0.0, 0.2)?;
        Ok(())
    }

    pub fn long_term_at(&self, session: u32) -> f64 {
        let pts = &self.long_term;
        let next = pts.partition_point(|&(s, _)| s <= session);
        if next == 0 {
            return pts[0].1;
        }
        let (s0, v0) = pts[next - 1];
        if s0 == session || next == pts.len() {
            return v0;
        }
        let (s1, v1) = pts[next];
        v0 + (v1 - v0) * f64::from(session - s0) / f64::from(s1 - s0)
    }

    pub fn medium_term_at(&self, session: u32) -> f64 {
        if self.medium_amplitude == 0.0 {
            return 0.0;
        }
        self.medium_amplitude * (TAU * f64::from(session) / self.medium_period + self.medium_phase).sin()
    }

    pub fn short_term_at(&self, session: u32, round: u32) -> f64 {
        if self.short_sd == 0.0 {
            return 0.0;
        }
        self.short_sd * noise::standard_normal(self.seed, &[SHORT_TERM_STREAM, u64::from(session), u64::from(round)])
    }
}

/// Ability of the modelled player during `round` of `session`, in `[0, 1]`.
pub fn ability_at(m: &AbilityModel, session: u32, round: u32) -> f64 {
    (m.long_term_at(session) + m.medium_term_at(session) + m.short_term_at(session, round)).clamp(0.0, 1.0)
}
