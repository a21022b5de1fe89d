use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use super::{Recording, Topology};
use crate::error::{Error, Result};

/// Percentile used for the robust range-of-motion extent.
pub const ROM_PERCENTILE: f64 = 0.95;

/// Per-axis reach of an effector relative to an origin joint, in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RomExtent {
    /// 95th percentile of `|effector - origin|` per axis.
    pub extent: [f64; 3],
    /// Raw per-axis maximum, kept for spotting tracker spikes.
    pub max: [f64; 3],
}

impl RomExtent {
    /// Factor that stretches this reach onto `target` along `axis`.
    pub fn scale_factor(&self, axis: usize, target: f64) -> Result<f64> {
        let e = self.extent[axis];
        if e.is_nan() || e <= 0.0 {
            return Err(Error::Degenerate(format!("zero extent on axis {axis}")));
        }
        Ok(target / e)
    }
}

/// Calibrate the reach of `effector` around `origin` over a recording.
pub fn calibrate_rom(rec: &Recording, topology: &Topology, effector: &str, origin: &str) -> Result<RomExtent> {
    if rec.frames.is_empty() {
        return Err(Error::InsufficientData("calibration recording has no frames".into()));
    }
    let e = topology.index_of(effector)?;
    let o = topology.index_of(origin)?;
    let offsets: Vec<Vector3<f64>> = rec
        .frames
        .iter()
        .map(|f| (f.positions[e] - f.positions[o]).abs())
        .collect();
    let mut extent = [0.0; 3];
    let mut max = [0.0; 3];
    for axis in 0..3 {
        let mut values: Vec<f64> = offsets.iter().map(|v| v[axis]).collect();
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("calibration offsets".into()));
        }
        max[axis] = values.iter().copied().fold(0.0, f64::max);
        extent[axis] = percentile(&mut values, ROM_PERCENTILE);
    }
    Ok(RomExtent { extent, max })
}

/// Linear-interpolation percentile (`q` in `[0, 1]`) of a non-empty slice.
///
/// Reorders `values`.
pub fn percentile(values: &mut [f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "percentile of an empty slice");
    let h = q.clamp(0.0, 1.0) * (values.len() - 1) as f64;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    let (_, &mut below, upper) = values.select_nth_unstable_by(lo, f64::total_cmp);
    if frac == 0.0 || upper.is_empty() {
        return below;
    }
    let above = upper.iter().copied().fold(f64::INFINITY, f64::min);
    below + frac * (above - below)
}
