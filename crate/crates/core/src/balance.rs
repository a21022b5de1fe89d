//! Monte-Carlo evaluation of two-player rhythm-game balancing.
//!
//! Each player hits cues with a zero-mean normal timing error; a cue counts
//! as hit when the error falls inside the player's hit window. Three
//! strategies help the weaker player: a denser step chart (input), a wider
//! hit window (time) or a score multiplier (score). Score balancing only
//! touches the reported score, never the hit or step counts.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::erf::{erf, erf_inv};

use crate::error::{Error, Result};
use crate::noise;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerModel {
    /// Standard deviation of timing error around the cue, seconds.
    pub timing_sd: f64,
    /// Step chart density, cues per second.
    pub density: f64,
    /// Hit window half-width, seconds.
    pub window: f64,
}

impl PlayerModel {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("timing_sd", self.timing_sd),
            ("density", self.density),
            ("window", self.window),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(name, v, f64::MIN_POSITIVE, f64::MAX));
            }
        }
        Ok(())
    }

    /// Probability that one cue is hit with window scale `k`.
    pub fn hit_probability(&self, k: f64) -> f64 {
        erf(k * self.window / (self.timing_sd * std::f64::consts::SQRT_2))
    }

    /// Expected hits per second.
    pub fn hit_rate(&self) -> f64 {
        self.density * self.hit_probability(1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DyadModel {
    pub players: [PlayerModel; 2],
}

impl DyadModel {
    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.players.iter().enumerate() {
            p.validate().map_err(|e| e.within(&format!("players[{i}]")))?;
        }
        Ok(())
    }

    /// Index of the player with the lower expected hit rate; ties pick player 1.
    pub fn weaker(&self) -> usize {
        if self.players[0].hit_rate() < self.players[1].hit_rate() {
            0
        } else {
            1
        }
    }

    /// Strategy parameters that equalize expected steps (input), hits (time)
    /// and scores (score) between the players.
    ///
    /// The time parameter is `None` when no finite window scale reaches the
    /// stronger player's rate.
    pub fn parity_parameters(&self) -> (f64, Option<f64>, f64) {
        let w = self.weaker();
        let weak = self.players[w];
        let strong = self.players[1 - w];
        let ratio = strong.hit_rate() / weak.hit_rate();
        let needed = strong.hit_rate() / weak.density;
        let k = (needed < 1.0)
            .then(|| erf_inv(needed) * weak.timing_sd * std::f64::consts::SQRT_2 / weak.window)
            .map(|k| k.max(1.0));
        (ratio, k, ratio)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum Strategy {
    None,
    /// Weaker player's chart density multiplied by `rho`.
    InputBalancing {
        rho: f64,
    },
    /// Weaker player's hit window multiplied by `k >= 1`.
    TimeBalancing {
        k: f64,
    },
    /// Weaker player's score multiplied by `m >= 1`.
    ScoreBalancing {
        m: f64,
    },
}

impl Strategy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Strategy::None => Ok(()),
            Strategy::InputBalancing { rho } if rho > 0.0 && rho.is_finite() => Ok(()),
            Strategy::InputBalancing { rho } => Err(Error::domain("rho", rho, f64::MIN_POSITIVE, f64::MAX)),
            Strategy::TimeBalancing { k } if k >= 1.0 && k.is_finite() => Ok(()),
            Strategy::TimeBalancing { k } => Err(Error::domain("k", k, 1.0, f64::MAX)),
            Strategy::ScoreBalancing { m } if m >= 1.0 && m.is_finite() => Ok(()),
            Strategy::ScoreBalancing { m } => Err(Error::domain("m", m, 1.0, f64::MAX)),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Strategy::None => "none".into(),
            Strategy::InputBalancing { rho } => format!("input(rho={rho})"),
            Strategy::TimeBalancing { k } => format!("time(k={k})"),
            Strategy::ScoreBalancing { m } => format!("score(m={m})"),
        }
    }

    fn density_scale(&self) -> f64 {
        match *self {
            Strategy::InputBalancing { rho } => rho,
            _ => 1.0,
        }
    }

    fn window_scale(&self) -> f64 {
        match *self {
            Strategy::TimeBalancing { k } => k,
            _ => 1.0,
        }
    }

    fn score_scale(&self) -> f64 {
        match *self {
            Strategy::ScoreBalancing { m } => m,
            _ => 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadRound {
    pub cues: [u32; 2],
    pub hits: [u32; 2],
    pub score: [f64; 2],
    /// Higher reported score; `None` on a tie.
    pub winner: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DyadLog {
    pub strategy: Strategy,
    pub weaker: usize,
    pub rounds: Vec<DyadRound>,
}

/// Play `rounds` rounds between the two modelled players.
///
/// A round lasts `cues_per_round / mean density` seconds, so players with
/// equal density each see `cues_per_round` cues. Fractional expected cue
/// counts are resolved by a Bernoulli draw. Every `(round, player)` pair has
/// its own random stream, so strategies compared under one seed see the
/// same timing errors.
pub fn simulate_dyad(
    dyad: &DyadModel,
    strategy: &Strategy,
    rounds: u32,
    cues_per_round: u32,
    seed: u64,
) -> Result<DyadLog> {
    dyad.validate()?;
    strategy.validate()?;
    let weaker = dyad.weaker();
    let mean_density = (dyad.players[0].density + dyad.players[1].density) / 2.0;
    let duration = f64::from(cues_per_round) / mean_density;

    let play = |round: u32, player: usize| -> (u32, u32) {
        let model = &dyad.players[player];
        let (density, window) = if player == weaker {
            (
                model.density * strategy.density_scale(),
                model.window * strategy.window_scale(),
            )
        } else {
            (model.density, model.window)
        };
        let mut rng = noise::stream(seed, &[u64::from(round), player as u64]);
        let expected = density * duration;
        let remainder: f64 = rng.random();
        let cues = expected.floor() as u32 + u32::from(remainder < expected.fract());
        let hits = (0..cues)
            .filter(|_| {
                let z: f64 = StandardNormal.sample(&mut rng);
                (z * model.timing_sd).abs() <= window
            })
            .count() as u32;
        (cues, hits)
    };

    let rounds = (0..rounds)
        .into_par_iter()
        .map(|round| {
            let (c0, h0) = play(round, 0);
            let (c1, h1) = play(round, 1);
            let mut score = [f64::from(h0), f64::from(h1)];
            score[weaker] *= strategy.score_scale();
            let winner = if score[0] > score[1] {
                Some(0)
            } else if score[1] > score[0] {
                Some(1)
            } else {
                None
            };
            DyadRound {
                cues: [c0, c1],
                hits: [h0, h1],
                score,
                winner,
            }
        })
        .collect();

    Ok(DyadLog {
        strategy: *strategy,
        weaker,
        rounds,
    })
}

/// A mean with its Monte-Carlo standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub se: f64,
}

impl Estimate {
    pub fn of(xs: impl ExactSizeIterator<Item = f64> + Clone) -> Self {
        let n = xs.len() as f64;
        let mean = xs.clone().sum::<f64>() / n;
        let se = if xs.len() > 1 {
            (xs.map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) / n).sqrt()
        } else {
            0.0
        };
        Estimate { mean, se }
    }
}

/// Stronger-minus-weaker differentials over a dyad log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DifferentialReport {
    pub rounds: usize,
    pub strong_score: Estimate,
    pub weak_score: Estimate,
    pub score_differential: Estimate,
    pub step_differential: Estimate,
    /// Rounds won by the weaker player; ties count one half.
    pub weaker_win_rate: Estimate,
}

pub fn differential(log: &DyadLog) -> Result<DifferentialReport> {
    if log.rounds.is_empty() {
        return Err(Error::InsufficientData("dyad log has no rounds".into()));
    }
    let w = log.weaker;
    let s = 1 - w;
    let rs = &log.rounds;
    Ok(DifferentialReport {
        rounds: rs.len(),
        strong_score: Estimate::of(rs.iter().map(|r| r.score[s])),
        weak_score: Estimate::of(rs.iter().map(|r| r.score[w])),
        score_differential: Estimate::of(rs.iter().map(|r| r.score[s] - r.score[w])),
        step_differential: Estimate::of(rs.iter().map(|r| f64::from(r.hits[s]) - f64::from(r.hits[w]))),
        weaker_win_rate: Estimate::of(rs.iter().map(|r| match r.winner {
            Some(i) if i == w => 1.0,
            Some(_) => 0.0,
            None => 0.5,
        })),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn player(sd: f64) -> PlayerModel {
        PlayerModel {
            timing_sd: sd,
            density: 2.0,
            window: 0.1,
        }
    }

    fn dyad() -> DyadModel {
        DyadModel {
            players: [player(0.06), player(0.12)],
        }
    }

    #[test]
    fn weaker_is_lower_hit_rate() {
        assert_eq!(dyad().weaker(), 1);
        let swapped = DyadModel {
            players: [player(0.12), player(0.06)],
        };
        assert_eq!(swapped.weaker(), 0);
    }

    #[test]
    fn neutral_time_balancing_matches_none() {
        let a = simulate_dyad(&dyad(), &Strategy::None, 50, 40, 5).unwrap();
        let b = simulate_dyad(&dyad(), &Strategy::TimeBalancing { k: 1.0 }, 50, 40, 5).unwrap();
        assert_eq!(a.rounds, b.rounds);
    }

    #[test]
    fn score_multiplier_only_touches_scores() {
        let base = simulate_dyad(&dyad(), &Strategy::None, 30, 40, 9).unwrap();
        let scored = simulate_dyad(&dyad(), &Strategy::ScoreBalancing { m: 2.0 }, 30, 40, 9).unwrap();
        for (a, b) in base.rounds.iter().zip(&scored.rounds) {
            assert_eq!(a.hits, b.hits);
            assert_eq!(a.cues, b.cues);
            assert_eq!(b.score[1], 2.0 * f64::from(b.hits[1]));
            assert_eq!(b.score[0], a.score[0]);
        }
    }

    #[test]
    fn wider_window_never_loses_hits_on_paired_seeds() {
        let base = simulate_dyad(&dyad(), &Strategy::None, 40, 40, 2).unwrap();
        let wide = simulate_dyad(&dyad(), &Strategy::TimeBalancing { k: 1.7 }, 40, 40, 2).unwrap();
        for (a, b) in base.rounds.iter().zip(&wide.rounds) {
            assert!(b.hits[1] >= a.hits[1]);
            assert_eq!(a.hits[0], b.hits[0]);
        }
        let huge = simulate_dyad(&dyad(), &Strategy::TimeBalancing { k: 1e6 }, 10, 40, 2).unwrap();
        assert!(huge.rounds.iter().all(|r| r.hits[1] == r.cues[1]));
    }

    #[test]
    fn input_balancing_scales_cue_count() {
        let log = simulate_dyad(&dyad(), &Strategy::InputBalancing { rho: 1.5 }, 20, 40, 1).unwrap();
        assert!(log.rounds.iter().all(|r| r.cues == [40, 60]));
        let frac = simulate_dyad(&dyad(), &Strategy::InputBalancing { rho: 1.25 }, 400, 10, 1).unwrap();
        let mean = frac.rounds.iter().map(|r| f64::from(r.cues[1])).sum::<f64>() / 400.0;
        assert!((mean - 12.5).abs() < 0.1);
    }

    #[test]
    fn strategy_validation() {
        assert!(Strategy::TimeBalancing { k: 0.9 }.validate().is_err());
        assert!(Strategy::ScoreBalancing { m: 0.5 }.validate().is_err());
        assert!(Strategy::InputBalancing { rho: 0.0 }.validate().is_err());
        let s: Strategy = serde_json::from_str(r#"{"type":"TimeBalancing","k":1.5}"#).unwrap();
        assert_eq!(s, Strategy::TimeBalancing { k: 1.5 });
        let bad = DyadModel {
            players: [player(0.0), player(0.1)],
        };
        assert!(simulate_dyad(&bad, &Strategy::None, 1, 1, 0).is_err());
    }

    #[test]
    fn identical_rounds_give_zero_differential() {
        let log = DyadLog {
            strategy: Strategy::None,
            weaker: 1,
            rounds: vec![
                DyadRound {
                    cues: [10, 10],
                    hits: [7, 7],
                    score: [7.0, 7.0],
                    winner: None,
                };
                5
            ],
        };
        let d = differential(&log).unwrap();
        assert_eq!(d.score_differential.mean, 0.0);
        assert_eq!(d.score_differential.se, 0.0);
        assert_eq!(d.weaker_win_rate.mean, 0.5);
        assert!(differential(&DyadLog { rounds: vec![], ..log }).is_err());
    }

    #[test]
    fn parity_parameters_for_equal_density() {
        let d = dyad();
        let (rho, k, m) = d.parity_parameters();
        let p0 = d.players[0].hit_probability(1.0);
        let p1 = d.players[1].hit_probability(1.0);
        assert!((rho - p0 / p1).abs() < 1e-12);
        assert_eq!(rho, m);
        let k = k.unwrap();
        assert!((d.players[1].hit_probability(k) - p0).abs() < 1e-9);
    }
}
