use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noise;

const RESPONSE_STREAM: u64 = 0x5E5B;

/// Logistic link from the ability-challenge gap to observed performance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResponseModel {
    pub steepness: f64,
    /// Standard deviation of additive performance noise.
    #[serde(default)]
    pub noise: f64,
    #[serde(default)]
    pub seed: u64,
}

impl ResponseModel {
    pub fn noiseless(steepness: f64) -> Self {
        ResponseModel {
            steepness,
            noise: 0.0,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.steepness > 0.0 && self.steepness.is_finite()) {
            return Err(Error::domain("steepness", self.steepness, f64::MIN_POSITIVE, f64::MAX));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::domain("noise", self.noise, 0.0, f64::MAX));
        }
        Ok(())
    }

    /// Expected performance for an ability-challenge pair.
    pub fn mean_response(&self, ability: f64, challenge: f64) -> f64 {
        1.0 / (1.0 + (self.steepness * (challenge - ability)).exp())
    }

    /// Noise sample for one round.
    pub fn draw(&self, session: u32, round: u32) -> f64 {
        if self.noise == 0.0 {
            return 0.0;
        }
        self.noise * noise::standard_normal(self.seed, &[RESPONSE_STREAM, u64::from(session), u64::from(round)])
    }
}

/// Realized performance: the logistic mean plus `draw`, clamped to `[0, 1]`.
pub fn respond(ability: f64, challenge: f64, rm: &ResponseModel, draw: f64) -> f64 {
    (rm.mean_response(ability, challenge) + draw).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_examples() {
        let rm = ResponseModel::noiseless(10.0);
        assert_eq!(respond(0.4, 0.4, &rm, 0.0), 0.5);
        assert!((respond(0.6, 0.4, &rm, 0.0) - 0.880_797_077_977_882_3).abs() < 1e-12);
        assert!(respond(0.0, 1.0, &ResponseModel::noiseless(1e4), 0.0) < 1e-12);
        assert_eq!(respond(0.5, 0.5, &rm, 0.8), 1.0);
        assert_eq!(respond(0.5, 0.5, &rm, -0.8), 0.0);
    }

    #[test]
    fn strictly_decreasing_in_gap() {
        let rm = ResponseModel::noiseless(6.0);
        let mut prev = f64::INFINITY;
        for i in 0..=100 {
            let r = rm.mean_response(0.5, i as f64 / 100.0);
            assert!(r < prev);
            prev = r;
        }
    }

    #[test]
    fn validation() {
        assert!(ResponseModel::noiseless(0.0).validate().is_err());
        assert!(ResponseModel {
            noise: -0.1,
            ..ResponseModel::noiseless(1.0)
        }
        .validate()
        .is_err());
    }
}
