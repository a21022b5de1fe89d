use serde::{Deserialize, Serialize};

use super::course::SessionLog;
use crate::dda::Classification;
use crate::error::{Error, Result};

/// Rounds at the end of a course inspected for the ceiling flag.
pub const CEILING_WINDOW: usize = 10;

/// Course-level flow-channel statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CourseMetrics {
    pub rounds: usize,
    pub warm_up: usize,
    /// Fraction of rounds classified Hold.
    pub time_in_channel: f64,
    /// Same, over the rounds after warm-up (falls back to all rounds when
    /// the course is shorter than the warm-up).
    pub time_in_channel_after_warm_up: f64,
    /// Runs of consecutive Decrease rounds (performance below the window).
    pub overchallenge_episodes: usize,
    pub overchallenge_max_run: usize,
    /// Runs of consecutive Increase rounds (performance above the window).
    pub underchallenge_episodes: usize,
    pub underchallenge_max_run: usize,
    /// Largest challenge swing between direction reversals after warm-up.
    pub oscillation_amplitude: f64,
    /// Some parameter stayed pinned at its upper limit over the final rounds.
    pub ceiling_hit: bool,
    pub final_challenge: f64,
}

/// Summarize a course. `warm_up` rounds are excluded from the oscillation
/// and post-warm-up channel statistics.
pub fn metrics(logs: &[SessionLog], warm_up: usize) -> Result<CourseMetrics> {
    let rounds: Vec<_> = logs.iter().flat_map(|l| &l.rounds).collect();
    if rounds.is_empty() {
        return Err(Error::InsufficientData("no rounds logged".into()));
    }
    let labels: Vec<Classification> = rounds.iter().map(|r| r.classification).collect();
    let challenges: Vec<f64> = rounds.iter().map(|r| r.challenge).collect();

    let hold_fraction =
        |ls: &[Classification]| ls.iter().filter(|&&c| c == Classification::Hold).count() as f64 / ls.len() as f64;
    let after = if warm_up < labels.len() {
        &labels[warm_up..]
    } else {
        &labels[..]
    };
    let (over_n, over_max) = runs(&labels, Classification::Decrease);
    let (under_n, under_max) = runs(&labels, Classification::Increase);
    let tail = rounds.len().min(CEILING_WINDOW);

    Ok(CourseMetrics {
        rounds: rounds.len(),
        warm_up,
        time_in_channel: hold_fraction(&labels),
        time_in_channel_after_warm_up: hold_fraction(after),
        overchallenge_episodes: over_n,
        overchallenge_max_run: over_max,
        underchallenge_episodes: under_n,
        underchallenge_max_run: under_max,
        oscillation_amplitude: oscillation_amplitude(challenges.get(warm_up..).unwrap_or(&[])),
        ceiling_hit: rounds[rounds.len() - tail..].iter().all(|r| r.at_ceiling),
        final_challenge: challenges[challenges.len() - 1],
    })
}

/// Number of maximal runs of `label` and the longest one.
fn runs(labels: &[Classification], label: Classification) -> (usize, usize) {
    let mut count = 0;
    let mut longest = 0;
    let mut current = 0;
    for &l in labels {
        if l == label {
            if current == 0 {
                count += 1;
            }
            current += 1;
            longest = longest.max(current);
        } else {
            current = 0;
        }
    }
    (count, longest)
}

/// Largest net move of a monotone stretch of `series`, provided the series
/// reverses direction at least once; a monotone or flat series has
/// amplitude zero.
pub fn oscillation_amplitude(series: &[f64]) -> f64 {
    const EPS: f64 = 1e-12;
    let mut swings = Vec::new();
    let mut current = 0.0f64;
    for w in series.windows(2) {
        let d = w[1] - w[0];
        if d.abs() <= EPS {
            continue;
        }
        if current != 0.0 && current.signum() != d.signum() {
            swings.push(current.abs());
            current = 0.0;
        }
        current += d;
    }
    if current != 0.0 {
        swings.push(current.abs());
    }
    if swings.len() < 2 {
        0.0
    } else {
        swings.into_iter().fold(0.0, f64::max)
    }
}
