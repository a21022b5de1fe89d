use std::io::Write;
use std::path::PathBuf;

use flowband_core::simulate::{metrics, run_course, AbilityModel, CourseConfig, ResponseModel};
use flowband_core::{AdjustmentPolicy, GameVariableMap, PerformanceWindow, TreatmentPlan};
use serde::{Deserialize, Serialize};

use crate::args::SimulateArgs;
use crate::error::{CliError, CliResult};
use crate::files::{
    check_version, csv_bytes, load_json, to_json_pretty, validation_error, OutputGuard, FORMAT_VERSION,
};

/// On-disk simulation config.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationFile {
    #[serde(default)]
    pub format_version: Option<u32>,
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
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub game: Option<GameVariableMap>,
}

impl SimulationFile {
    pub fn into_course(self) -> CourseConfig {
        CourseConfig {
            plan: self.plan,
            policy: self.policy,
            window: self.window,
            ability: self.ability,
            response: self.response,
            sessions: self.sessions,
            rounds_per_session: self.rounds_per_session,
            seed: self.seed,
            game: self.game,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest<'a, C: Serialize> {
    pub command: &'a str,
    pub config: String,
    pub seed: u64,
    pub out: String,
    pub format_version: u32,
    pub resolved: &'a C,
}

pub const SESSIONS_FILE: &str = "sessions.jsonl";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const METRICS_FILE: &str = "metrics.json";
pub const MANIFEST_FILE: &str = "manifest.json";

pub fn run(args: &SimulateArgs, stderr: &mut dyn Write) -> CliResult<()> {
    let (file, text): (SimulationFile, _) = load_json(&args.config)?;
    check_version(&args.config, &text, file.format_version)?;
    let mut course = file.into_course();
    if let Some(seed) = args.seed {
        course.seed = seed;
    }
    course
        .validate()
        .map_err(|e| validation_error(&args.config, &text, e))?;

    let paths: Vec<PathBuf> = [SESSIONS_FILE, SUMMARY_FILE, METRICS_FILE, MANIFEST_FILE]
        .iter()
        .map(|f| args.out.join(f))
        .collect();
    let guard = OutputGuard::new(args.force);
    guard.check(&paths)?;

    let logs = run_course(&course).map_err(|e| CliError::from_core("simulation", e))?;
    let report = metrics(&logs, course.policy.warm_up_rounds()).map_err(|e| CliError::from_core("metrics", e))?;

    let mut jsonl = Vec::new();
    for log in &logs {
        serde_json::to_writer(&mut jsonl, log).expect("serializable");
        jsonl.push(b'\n');
    }
    let summaries: Vec<_> = logs.iter().map(|l| SummaryRow::from(&l.summary)).collect();
    let manifest = RunManifest {
        command: "simulate",
        config: args.config.display().to_string(),
        seed: course.seed,
        out: args.out.display().to_string(),
        format_version: FORMAT_VERSION,
        resolved: &course,
    };

    guard.write(&paths[0], &jsonl)?;
    guard.write(&paths[1], &csv_bytes(&summaries))?;
    guard.write(&paths[2], &to_json_pretty(&report))?;
    guard.write(&paths[3], &to_json_pretty(&manifest))?;
    let _ = writeln!(
        stderr,
        "simulated {} sessions x {} rounds; time in channel {:.3}; outputs in {}",
        course.sessions,
        course.rounds_per_session,
        report.time_in_channel,
        args.out.display()
    );
    Ok(())
}

#[derive(Debug, Serialize)]
struct SummaryRow {
    session: u32,
    rounds: u32,
    target_challenge: f64,
    mean_ability: f64,
    mean_challenge: f64,
    final_challenge: f64,
    mean_performance: f64,
    time_in_channel: f64,
    decreases: u32,
    increases: u32,
}

impl From<&flowband_core::simulate::SessionSummary> for SummaryRow {
    fn from(s: &flowband_core::simulate::SessionSummary) -> Self {
        SummaryRow {
            session: s.session,
            rounds: s.rounds,
            target_challenge: s.target_challenge,
            mean_ability: s.mean_ability,
            mean_challenge: s.mean_challenge,
            final_challenge: s.final_challenge,
            mean_performance: s.mean_performance,
            time_in_channel: s.time_in_channel,
            decreases: s.decreases,
            increases: s.increases,
        }
    }
}
