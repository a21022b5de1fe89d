use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use flowband_core::skeleton::{
    exercise_distance, nmsrd, ExerciseOptions, Recording, RecordingFile, Topology, TopologyFile, DEFAULT_REP_WINDOW,
    NOMINAL_FPS,
};
use serde::{Deserialize, Serialize};

use crate::args::NmsrdArgs;
use crate::error::{CliError, CliResult};
use crate::files::{check_version, csv_bytes, load_json, OutputGuard};

/// Comparison settings shared by every condition.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComparisonFile {
    #[serde(default)]
    pub format_version: Option<u32>,
    /// Joint subset; empty means every joint.
    #[serde(default)]
    pub subset: Vec<String>,
    #[serde(default = "default_window")]
    pub rep_window: (usize, usize),
    /// Conditions recorded face to face; their recipient is mirrored.
    #[serde(default)]
    pub mirror_conditions: Vec<String>,
    #[serde(default = "default_grid")]
    pub grid_hz: f64,
}

fn default_window() -> (usize, usize) {
    DEFAULT_REP_WINDOW
}

fn default_grid() -> f64 {
    NOMINAL_FPS
}

impl Default for ComparisonFile {
    fn default() -> Self {
        ComparisonFile {
            format_version: None,
            subset: Vec::new(),
            rep_window: DEFAULT_REP_WINDOW,
            mirror_conditions: Vec::new(),
            grid_hz: NOMINAL_FPS,
        }
    }
}

#[derive(Debug, Serialize)]
struct Row<'a> {
    condition: &'a str,
    raw_distance: f64,
    nmsrd: f64,
}

fn parse_condition(spec: &str) -> CliResult<(String, PathBuf)> {
    match spec.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => Ok((name.to_string(), PathBuf::from(path))),
        _ => Err(CliError::config(format!("--condition {spec:?}: expected NAME=PATH"))),
    }
}

fn load_recording(path: &Path, topology: &Topology) -> CliResult<Recording> {
    let (file, _): (RecordingFile, _) = load_json(path)?;
    Recording::from_file(&file, topology).map_err(|e| CliError::from_core(&path.display().to_string(), e))
}

pub fn run(args: &NmsrdArgs, stderr: &mut dyn Write) -> CliResult<()> {
    let topology = match &args.topology {
        Some(path) => {
            let (file, _): (TopologyFile, _) = load_json(path)?;
            Topology::from_file(&file).map_err(|e| CliError::from_core(&path.display().to_string(), e))?
        }
        None => Topology::kinect_v2(),
    };
    let mut cmp = match &args.config {
        Some(path) => {
            let (file, text): (ComparisonFile, _) = load_json(path)?;
            check_version(path, &text, file.format_version)?;
            file
        }
        None => ComparisonFile::default(),
    };
    if let Some(subset) = &args.subset {
        cmp.subset = subset.clone();
    }
    cmp.mirror_conditions.extend(args.mirror.iter().cloned());
    if cmp.subset.is_empty() {
        cmp.subset = topology.joints().to_vec();
    }

    let mut conditions = Vec::with_capacity(args.conditions.len());
    let mut names = BTreeSet::new();
    for spec in &args.conditions {
        let (name, path) = parse_condition(spec)?;
        if !names.insert(name.clone()) {
            return Err(CliError::config(format!("condition {name:?} given more than once")));
        }
        conditions.push((name, path));
    }
    if let Some(unknown) = cmp.mirror_conditions.iter().find(|m| !names.contains(*m)) {
        return Err(CliError::config(format!(
            "mirrored condition {unknown:?} is not among the conditions"
        )));
    }

    let guard = OutputGuard::new(args.force);
    guard.check(std::slice::from_ref(&args.out))?;

    let gold = load_recording(&args.gold, &topology)?;
    let mut raw = BTreeMap::new();
    for (name, path) in &conditions {
        let rec = load_recording(path, &topology)?;
        let opts = ExerciseOptions {
            subset: cmp.subset.clone(),
            rep_window: cmp.rep_window,
            mirror: cmp.mirror_conditions.contains(name),
            grid_hz: cmp.grid_hz,
        };
        let d = exercise_distance(&gold, &rec, &topology, &opts, None)
            .map_err(|e| CliError::from_core(&format!("condition {name}"), e))?;
        raw.insert(name.clone(), d);
    }
    let normalized = nmsrd(&raw).map_err(|e| CliError::from_core("normalization", e))?;

    // Rows follow the command-line order of the conditions.
    let rows: Vec<Row> = conditions
        .iter()
        .map(|(name, _)| Row {
            condition: name,
            raw_distance: raw[name],
            nmsrd: normalized[name],
        })
        .collect();
    guard.write(&args.out, &csv_bytes(&rows))?;
    let _ = writeln!(
        stderr,
        "compared {} conditions; wrote {}",
        rows.len(),
        args.out.display()
    );
    Ok(())
}
