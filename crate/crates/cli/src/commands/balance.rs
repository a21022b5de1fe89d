use std::io::Write;

use flowband_core::balance::{differential, simulate_dyad, DyadModel, Strategy};
use serde::{Deserialize, Serialize};

use crate::args::BalanceArgs;
use crate::error::{CliError, CliResult};
use crate::files::{check_version, csv_bytes, load_json, validation_error, OutputGuard};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BalanceFile {
    #[serde(default)]
    pub format_version: Option<u32>,
    pub dyad: DyadModel,
    pub rounds: u32,
    pub cues_per_round: u32,
    #[serde(default)]
    pub seed: u64,
    /// Strategies to compare; defaults to no balancing plus each strategy at
    /// its parity parameter.
    #[serde(default)]
    pub strategies: Option<Vec<Strategy>>,
}

impl BalanceFile {
    fn validate(&self) -> flowband_core::Result<()> {
        self.dyad.validate().map_err(|e| e.within("dyad"))?;
        for (i, s) in self.strategies.iter().flatten().enumerate() {
            s.validate().map_err(|e| e.within(&format!("strategies[{i}]")))?;
        }
        Ok(())
    }

    pub fn resolved_strategies(&self) -> Vec<Strategy> {
        if let Some(s) = &self.strategies {
            return s.clone();
        }
        let (rho, k, m) = self.dyad.parity_parameters();
        let mut out = vec![Strategy::None, Strategy::InputBalancing { rho }];
        if let Some(k) = k {
            out.push(Strategy::TimeBalancing { k });
        }
        out.push(Strategy::ScoreBalancing { m });
        out
    }
}

#[derive(Debug, Serialize)]
struct Row {
    strategy: String,
    weaker: usize,
    rounds: usize,
    strong_score: f64,
    weak_score: f64,
    score_differential: f64,
    score_differential_se: f64,
    step_differential: f64,
    step_differential_se: f64,
    weaker_win_rate: f64,
    weaker_win_rate_se: f64,
}

pub fn run(args: &BalanceArgs, stderr: &mut dyn Write) -> CliResult<()> {
    let (mut file, text): (BalanceFile, _) = load_json(&args.config)?;
    check_version(&args.config, &text, file.format_version)?;
    file.validate().map_err(|e| validation_error(&args.config, &text, e))?;
    if file.rounds == 0 || file.cues_per_round == 0 {
        return Err(CliError::config(format!(
            "{}: rounds and cues_per_round must be positive",
            args.config.display()
        )));
    }
    if let Some(seed) = args.seed {
        file.seed = seed;
    }
    let guard = OutputGuard::new(args.force);
    guard.check(std::slice::from_ref(&args.out))?;

    let mut rows = Vec::new();
    for strategy in file.resolved_strategies() {
        let log = simulate_dyad(&file.dyad, &strategy, file.rounds, file.cues_per_round, file.seed)
            .map_err(|e| CliError::from_core(&strategy.label(), e))?;
        let d = differential(&log).map_err(|e| CliError::from_core(&strategy.label(), e))?;
        rows.push(Row {
            strategy: strategy.label(),
            weaker: log.weaker,
            rounds: d.rounds,
            strong_score: d.strong_score.mean,
            weak_score: d.weak_score.mean,
            score_differential: d.score_differential.mean,
            score_differential_se: d.score_differential.se,
            step_differential: d.step_differential.mean,
            step_differential_se: d.step_differential.se,
            weaker_win_rate: d.weaker_win_rate.mean,
            weaker_win_rate_se: d.weaker_win_rate.se,
        });
    }
    guard.write(&args.out, &csv_bytes(&rows))?;
    let _ = writeln!(
        stderr,
        "compared {} strategies; wrote {}",
        rows.len(),
        args.out.display()
    );
    Ok(())
}
