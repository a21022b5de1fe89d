//! Threshold-zone dynamic difficulty adjustment.
//!
//! Performance is compared against a target window: below the window the
//! player is struggling and difficulty drops, above it difficulty rises,
//! inside it (boundaries included) nothing changes.

use serde::de::{self, Deserializer};
use serde::{Deserialize, Serialize};

use crate::error::{check_closed, Error, Result};
use crate::params::{Param, ParamVector};

/// Target band for observed performance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawWindow")]
pub struct PerformanceWindow {
    lower: f64,
    upper: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawWindow {
    lower: f64,
    upper: f64,
}

impl TryFrom<RawWindow> for PerformanceWindow {
    type Error = Error;

    fn try_from(raw: RawWindow) -> Result<Self> {
        PerformanceWindow::new(raw.lower, raw.upper)
    }
}

impl PerformanceWindow {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        check_closed("lower", lower, 0.0, 1.0)?;
        check_closed("upper", upper, 0.0, 1.0)?;
        if lower >= upper {
            return Err(Error::config(
                "lower",
                format!("lower ({lower}) must be strictly below upper ({upper})"),
            ));
        }
        Ok(PerformanceWindow { lower, upper })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn contains(&self, performance: f64) -> bool {
        performance >= self.lower && performance <= self.upper
    }
}

impl Default for PerformanceWindow {
    fn default() -> Self {
        PerformanceWindow { lower: 0.4, upper: 0.7 }
    }
}

/// Outcome of comparing performance with the window.
///
/// Ordered `Decrease < Hold < Increase`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Classification {
    Decrease,
    Hold,
    Increase,
}

impl Classification {
    pub fn sign(self) -> f64 {
        match self {
            Classification::Decrease => -1.0,
            Classification::Hold => 0.0,
            Classification::Increase => 1.0,
        }
    }
}

/// When adjustments are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Trigger {
    #[default]
    PerRound,
    PerSession,
}

/// A per-parameter value that may be written as a single number in config
/// files and then applies to every parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct PerParam(pub ParamVector);

impl PerParam {
    pub fn uniform(v: f64) -> Self {
        PerParam(ParamVector::splat(v))
    }

    pub fn get(&self, p: Param) -> f64 {
        self.0.get(p)
    }
}

impl<'de> Deserialize<'de> for PerParam {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Uniform(f64),
            Each(ParamVector),
        }
        match Repr::deserialize(deserializer) {
            Ok(Repr::Uniform(v)) => Ok(PerParam::uniform(v)),
            Ok(Repr::Each(p)) => Ok(PerParam(p)),
            Err(_) => Err(de::Error::custom(
                "expected a number or an object keyed by parameter name",
            )),
        }
    }
}

/// How classification turns into parameter changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdjustmentPolicy {
    pub step: PerParam,
    #[serde(default = "zero")]
    pub min: PerParam,
    #[serde(default = "one")]
    pub max: PerParam,
    #[serde(default)]
    pub trigger: Trigger,
    pub affected: Vec<Param>,
}

fn zero() -> PerParam {
    PerParam::uniform(0.0)
}

fn one() -> PerParam {
    PerParam::uniform(1.0)
}

impl AdjustmentPolicy {
    /// Same step for every affected parameter, bounds `[0, 1]`, per-round trigger.
    pub fn uniform(step: f64, affected: &[Param]) -> Result<Self> {
        let pol = AdjustmentPolicy {
            step: PerParam::uniform(step),
            min: zero(),
            max: one(),
            trigger: Trigger::PerRound,
            affected: affected.to_vec(),
        };
        pol.validate()?;
        Ok(pol)
    }

    pub fn validate(&self) -> Result<()> {
        if self.affected.is_empty() {
            return Err(Error::config("affected", "at least one parameter must be affected"));
        }
        for (i, p) in self.affected.iter().enumerate() {
            if self.affected[..i].contains(p) {
                return Err(Error::config("affected", format!("`{p}` listed twice")));
            }
        }
        for p in Param::ALL {
            let lo = self.min.get(p);
            let hi = self.max.get(p);
            check_closed(&format!("min.{p}"), lo, 0.0, 1.0)?;
            check_closed(&format!("max.{p}"), hi, 0.0, 1.0)?;
            if lo >= hi {
                return Err(Error::config(
                    format!("min.{p}"),
                    format!("min ({lo}) must be strictly below max ({hi})"),
                ));
            }
        }
        for &p in &self.affected {
            let s = self.step.get(p);
            if !(s > 0.0 && s <= 0.5) {
                return Err(Error::domain(format!("step.{p}"), s, f64::MIN_POSITIVE, 0.5));
            }
        }
        Ok(())
    }

    /// Smallest step among the affected parameters.
    pub fn min_step(&self) -> f64 {
        self.affected
            .iter()
            .map(|&p| self.step.get(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Rounds excluded from oscillation metrics: `ceil(1 / min_step)`.
    pub fn warm_up_rounds(&self) -> usize {
        (1.0 / self.min_step()).ceil() as usize
    }
}

/// Fraction of successful attempts.
pub fn evaluate_performance(hits: u64, attempts: u64) -> Result<f64> {
    if attempts == 0 {
        return Err(Error::InsufficientData("no attempts this round".into()));
    }
    if hits > attempts {
        return Err(Error::config("hits", format!("{hits} hits exceed {attempts} attempts")));
    }
    Ok(hits as f64 / attempts as f64)
}

/// Compare `performance` with the window; boundary values hold.
pub fn classify(performance: f64, w: &PerformanceWindow) -> Result<Classification> {
    check_closed("performance", performance, 0.0, 1.0)?;
    Ok(if performance < w.lower {
        Classification::Decrease
    } else if performance > w.upper {
        Classification::Increase
    } else {
        Classification::Hold
    })
}

/// Step every affected parameter in the direction of `c`, then clamp to the
/// policy bounds. Unaffected parameters pass through untouched.
pub fn adjust(p: &ParamVector, c: Classification, pol: &AdjustmentPolicy) -> ParamVector {
    if c == Classification::Hold {
        return *p;
    }
    let mut out = *p;
    for &param in &pol.affected {
        let v = p.get(param) + c.sign() * pol.step.get(param);
        out.set(param, v.clamp(pol.min.get(param), pol.max.get(param)));
    }
    out
}
