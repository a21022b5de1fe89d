use std::io::Write;
use std::path::Path;

use flowband_core::plan::{Milestone, Override};
use flowband_core::{Param, PlanMode, TreatmentPlan};
use serde::Deserialize;

use crate::error::{CliError, CliResult};
use crate::files::{check_version, load_json, validation_error};

/// A plan file may carry a format version next to the plan itself.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanFile {
    #[serde(default)]
    format_version: Option<u32>,
    mode: PlanMode,
    band: f64,
    milestones: Vec<Milestone>,
    #[serde(default)]
    overrides: Vec<Override>,
    #[serde(default)]
    history: Vec<Override>,
}

pub fn load(path: &Path) -> CliResult<TreatmentPlan> {
    let (file, text): (PlanFile, _) = load_json(path)?;
    check_version(path, &text, file.format_version)?;
    let plan = TreatmentPlan {
        mode: file.mode,
        band: file.band,
        milestones: file.milestones,
        overrides: file.overrides,
        history: file.history,
    };
    plan.validate().map_err(|e| validation_error(path, &text, e))?;
    Ok(plan)
}

/// Print the interpolated target (and band, in semi-automatic mode) per session.
pub fn validate(config: &Path, sessions: Option<u32>, stdout: &mut dyn Write) -> CliResult<()> {
    let plan = load(config)?;
    let n = sessions.unwrap_or_else(|| plan.last_milestone_session() + 1);
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["session".to_string()];
    header.extend(Param::ALL.iter().map(|p| p.name().to_string()));
    header.extend(
        Param::ALL
            .iter()
            .flat_map(|p| [format!("{}_lo", p.name()), format!("{}_hi", p.name())]),
    );
    w.write_record(&header).expect("in-memory csv");
    for s in 0..n {
        let target = plan.target_at(s).map_err(|e| CliError::from_core("plan", e))?;
        let (lo, hi) = plan.band_at(s).map_err(|e| CliError::from_core("plan", e))?;
        let mut rec = vec![s.to_string()];
        rec.extend(target.to_array().iter().map(f64::to_string));
        for (l, h) in lo.to_array().iter().zip(hi.to_array()) {
            rec.push(l.to_string());
            rec.push(h.to_string());
        }
        w.write_record(&rec).expect("in-memory csv");
    }
    let bytes = w.into_inner().expect("in-memory csv");
    stdout
        .write_all(&bytes)
        .map_err(|e| CliError::io(Path::new("<stdout>"), e))
}
