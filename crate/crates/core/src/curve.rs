//! Growth curves: time series of fluorescence or deposit volume.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a curve's values measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveKind {
    /// Fluorescence rate, Mcts/s.
    Fluorescence,
    /// Deposit volume (site-volumes for simulated data, um^3 for measured).
    Volume,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveMeta {
    pub pillar_id: String,
    /// Oxygen partial pressure, mbar.
    pub p_o2: f64,
    /// Laser power, mW.
    pub laser_power: f64,
    pub kind: CurveKind,
}

impl CurveMeta {
    pub fn new(pillar_id: impl Into<String>, p_o2: f64, laser_power: f64, kind: CurveKind) -> Self {
        CurveMeta {
            pillar_id: pillar_id.into(),
            p_o2,
            laser_power,
            kind,
        }
    }
}

/// A single growth curve sampled at strictly increasing times (seconds).
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthCurve {
    times: Vec<f64>,
    values: Vec<f64>,
    pub meta: CurveMeta,
}

impl GrowthCurve {
    pub fn new(times: Vec<f64>, values: Vec<f64>, meta: CurveMeta) -> Result<Self> {
        if times.len() != values.len() {
            return Err(Error::invalid(format!(
                "curve {:?}: {} times vs {} values",
                meta.pillar_id,
                times.len(),
                values.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::invalid(format!("curve {:?} is empty", meta.pillar_id)));
        }
        for w in times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid(format!(
                    "curve {:?}: times must be strictly increasing ({} then {})",
                    meta.pillar_id, w[0], w[1]
                )));
            }
        }
        if times.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::invalid(format!(
                "curve {:?}: non-finite sample",
                meta.pillar_id
            )));
        }
        Ok(GrowthCurve { times, values, meta })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn first_time(&self) -> f64 {
        self.times[0]
    }

    pub fn last_time(&self) -> f64 {
        *self.times.last().unwrap()
    }

    /// Linearly interpolated value at `t`. No extrapolation: `t` must lie
    /// within the sampled range.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        if !t.is_finite() || t < self.first_time() || t > self.last_time() {
            return Err(Error::OutOfRange(format!(
                "t = {} outside sampled range [{}, {}]",
                t,
                self.first_time(),
                self.last_time()
            )));
        }
        Ok(interp_linear(&self.times, &self.values, t))
    }
}

/// Piecewise-linear interpolation on a non-decreasing time grid.
///
/// Assumes `t` lies within `[times[0], times[n-1]]`. Zero-width intervals
/// (duplicate sample times, legal in raw records) yield the later value.
pub(crate) fn interp_linear(times: &[f64], values: &[f64], t: f64) -> f64 {
    debug_assert_eq!(times.len(), values.len());
    debug_assert!(!times.is_empty());
    // First index with time >= t.
    let hi = times.partition_point(|&x| x < t);
    if hi == 0 {
        return values[0];
    }
    if hi == times.len() {
        return values[times.len() - 1];
    }
    if times[hi] == t {
        // Exact hit; with duplicates prefer the last sample at this time.
        let mut j = hi;
        while j + 1 < times.len() && times[j + 1] == t {
            j += 1;
        }
        return values[j];
    }
    let (t0, t1) = (times[hi - 1], times[hi]);
    let (v0, v1) = (values[hi - 1], values[hi]);
    let w = (t - t0) / (t1 - t0);
    v0 + w * (v1 - v0)
}
