use serde::{Deserialize, Serialize};

use super::ability::{ability_at, AbilityModel};
use super::response::{respond, ResponseModel};
use crate::dda::{adjust, classify, AdjustmentPolicy, Classification, PerformanceWindow, Trigger};
use crate::error::{Error, Result};
use crate::noise;
use crate::params::{map_params, GameVariableMap, ParamVector};
use crate::plan::{PlanMode, TreatmentPlan};

const ABILITY_KEY: u64 = 1;
const RESPONSE_KEY: u64 = 2;

/// Everything a simulated treatment course needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CourseConfig {
    pub plan: TreatmentPlan,
    pub policy: AdjustmentPolicy,
    #[serde(default)]
    pub window: PerformanceWindow,
    pub ability: AbilityModel,
    pub response: ResponseModel,
    pub sessions: u32,
    pub rounds_per_session: u32,
    #[serde(default)]
    pub seed: u64,
    /// Optional game mapping; when present every round logs its variables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameVariableMap>,
}

impl CourseConfig {
    pub fn validate(&self) -> Result<()> {
        self.plan.validate().map_err(|e| e.within("plan"))?;
        self.policy.validate().map_err(|e| e.within("policy"))?;
        self.ability.validate().map_err(|e| e.within("ability"))?;
        self.response.validate().map_err(|e| e.within("response"))?;
        if let Some(g) = &self.game {
            g.validate().map_err(|e| e.within("game"))?;
        }
        if self.sessions == 0 {
            return Err(Error::config("sessions", "at least one session required"));
        }
        if self.rounds_per_session == 0 {
            return Err(Error::config("rounds_per_session", "at least one round required"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u32,
    pub ability: f64,
    pub challenge: f64,
    pub performance: f64,
    pub classification: Classification,
    /// Parameters the round was played with.
    pub params: ParamVector,
    /// Some affected parameter sat at its upper limit (plan band or policy max).
    pub at_ceiling: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variables: Option<Vec<(String, f64)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session: u32,
    pub rounds: u32,
    pub target_challenge: f64,
    pub mean_ability: f64,
    pub mean_challenge: f64,
    pub final_challenge: f64,
    pub mean_performance: f64,
    pub time_in_channel: f64,
    pub decreases: u32,
    pub increases: u32,
    /// Per-session decision when the policy triggers once per session.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub session_classification: Option<Classification>,
}

/// One simulated session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionLog {
    pub session: u32,
    pub target: ParamVector,
    pub rounds: Vec<RoundRecord>,
    pub summary: SessionSummary,
}

/// Run a whole course: per round, clamp the adjustment state into the
/// plan, derive the challenge, sample performance, classify and adjust.
pub fn run_course(cfg: &CourseConfig) -> Result<Vec<SessionLog>> {
    cfg.validate()?;
    let ability = AbilityModel {
        seed: noise::derive_seed(cfg.seed, &[ABILITY_KEY, cfg.ability.seed]),
        ..cfg.ability.clone()
    };
    let response = ResponseModel {
        seed: noise::derive_seed(cfg.seed, &[RESPONSE_KEY, cfg.response.seed]),
        ..cfg.response.clone()
    };
    let affected = &cfg.policy.affected;

    let mut proposed = cfg.plan.target_at(0)?;
    let mut logs = Vec::with_capacity(cfg.sessions as usize);
    for session in 0..cfg.sessions {
        let target = cfg.plan.target_at(session)?;
        let ceiling = match cfg.plan.mode {
            PlanMode::SemiAutomatic => cfg.plan.band_at(session)?.1,
            PlanMode::Manual => ParamVector::splat(1.0),
        };
        let mut rounds = Vec::with_capacity(cfg.rounds_per_session as usize);
        for round in 0..cfg.rounds_per_session {
            let effective = cfg.plan.effective_params(session, &proposed)?;
            let challenge = effective.mean_of(affected);
            let a = ability_at(&ability, session, round);
            let performance = respond(a, challenge, &response, response.draw(session, round));
            let c = classify(performance, &cfg.window)?;
            let at_ceiling = affected.iter().any(|&p| {
                let limit = ceiling.get(p).min(cfg.policy.max.get(p));
                effective.get(p) >= limit - 1e-12
            });
            let variables = match &cfg.game {
                Some(g) => Some(map_params(&effective, g)?),
                None => None,
            };
            rounds.push(RoundRecord {
                round,
                ability: a,
                challenge,
                performance,
                classification: c,
                params: effective,
                at_ceiling,
                variables,
            });
            proposed = match cfg.policy.trigger {
                Trigger::PerRound => adjust(&effective, c, &cfg.policy),
                Trigger::PerSession => effective,
            };
        }
        let mut summary = summarize(session, target.mean_of(affected), &rounds);
        if cfg.policy.trigger == Trigger::PerSession {
            let c = classify(summary.mean_performance, &cfg.window)?;
            summary.session_classification = Some(c);
            if let Some(last) = rounds.last() {
                proposed = adjust(&last.params, c, &cfg.policy);
            }
        }
        logs.push(SessionLog {
            session,
            target,
            rounds,
            summary,
        });
    }
    Ok(logs)
}

fn summarize(session: u32, target_challenge: f64, rounds: &[RoundRecord]) -> SessionSummary {
    let n = rounds.len() as f64;
    let mean = |f: fn(&RoundRecord) -> f64| rounds.iter().map(f).sum::<f64>() / n;
    let count = |c: Classification| rounds.iter().filter(|r| r.classification == c).count() as u32;
    SessionSummary {
        session,
        rounds: rounds.len() as u32,
        target_challenge,
        mean_ability: mean(|r| r.ability),
        mean_challenge: mean(|r| r.challenge),
        final_challenge: rounds.last().map_or(f64::NAN, |r| r.challenge),
        mean_performance: mean(|r| r.performance),
        time_in_channel: f64::from(count(Classification::Hold)) / n,
        decreases: count(Classification::Decrease),
        increases: count(Classification::Increase),
        session_classification: None,
    }
}
