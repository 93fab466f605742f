//! Reduction of raw fluorescence time series to comparable growth curves.
//!
//! Raw traces are sampled on an irregular sub-two-minute cadence. Reduction
//! interpolates each trace linearly onto exact marker times (multiples of
//! the marker spacing, default ten minutes, restricted to the sampled range:
//! no extrapolation) and subtracts the value at the first covered marker, so
//! every reduced curve starts at exactly zero. Replicate curves at one
//! pressure are then summarized at a reference time by their mean and a
//! Student-t 68% central confidence half-width `t*(n-1) * s / sqrt(n)`.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::curve::{interp_linear, CurveKind, CurveMeta, GrowthCurve};
use crate::error::{Error, Result};

/// Default marker spacing: ten minutes.
pub const MARKER_SPACING: f64 = 600.0;

/// Central probability mass of the 68% ("1 sigma") confidence interval,
/// erf(1/sqrt(2)).
pub const CENTRAL_68: f64 = 0.682_689_492_137_085_9;

/// One raw fluorescence trace plus its acquisition conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct RawRecord {
    pub pillar_id: String,
    /// Oxygen partial pressure, mbar.
    pub p_o2: f64,
    /// Laser power, mW.
    pub laser_power: f64,
    /// (time s, fluorescence Mcts/s); times non-decreasing.
    pub samples: Vec<(f64, f64)>,
}

impl RawRecord {
    pub fn validate(&self) -> Result<()> {
        if self.samples.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "record {:?}: need at least 2 samples, got {}",
                self.pillar_id,
                self.samples.len()
            )));
        }
        for (t, v) in &self.samples {
            if !t.is_finite() || !v.is_finite() {
                return Err(Error::Data(format!(
                    "record {:?}: non-finite sample ({t}, {v})",
                    self.pillar_id
                )));
            }
            if *v < 0.0 {
                return Err(Error::Data(format!(
                    "record {:?}: negative count rate {v} at t = {t}",
                    self.pillar_id
                )));
            }
        }
        for w in self.samples.windows(2) {
            if w[1].0 < w[0].0 {
                return Err(Error::Data(format!(
                    "record {:?}: sample times must be non-decreasing ({} then {})",
                    self.pillar_id, w[0].0, w[1].0
                )));
            }
        }
        if !self.p_o2.is_finite() || self.p_o2 < 0.0 {
            return Err(Error::Data(format!(
                "record {:?}: bad p_o2 {}",
                self.pillar_id, self.p_o2
            )));
        }
        Ok(())
    }
}

/// A baseline-subtracted curve on the marker grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedCurve {
    /// Exact multiples of the marker spacing covered by the record.
    pub marker_times: Vec<f64>,
    /// Fluorescence above the first marker; the first entry is exactly 0.
    pub values: Vec<f64>,
    pub meta: CurveMeta,
}

impl ReducedCurve {
    /// View as a growth curve (for onset fitting etc.).
    pub fn as_curve(&self) -> GrowthCurve {
        GrowthCurve::new(
            self.marker_times.clone(),
            self.values.clone(),
            self.meta.clone(),
        )
        .expect("reduced curves are well-formed by construction")
    }

    /// Interpolated value at `t` within the marker range.
    pub fn value_at(&self, t: f64) -> Result<f64> {
        let first = self.marker_times[0];
        let last = *self.marker_times.last().unwrap();
        if !t.is_finite() || t < first || t > last {
            return Err(Error::OutOfRange(format!(
                "t = {t} outside reduced range [{first}, {last}]"
            )));
        }
        Ok(interp_linear(&self.marker_times, &self.values, t))
    }
}

/// Marker times `k * spacing` covered by the closed interval
/// `[t_first, t_last]`, tolerating last-ulp misses of exact markers.
/// Returns `None` when the interval covers no marker.
pub(crate) fn marker_grid(t_first: f64, t_last: f64, spacing: f64) -> Option<Vec<f64>> {
    let k_first = (t_first / spacing - 1e-9).ceil().max(0.0) as u64;
    let k_last = (t_last / spacing + 1e-9).floor();
    if k_last < 0.0 || (k_last as u64) < k_first {
        return None;
    }
    Some((k_first..=k_last as u64).map(|k| k as f64 * spacing).collect())
}

/// Interpolate a record onto the marker grid and subtract the first marker.
///
/// Markers are the multiples of `marker_spacing` inside the sampled time
/// range; samples never extrapolate, so a trace ending at 95 min yields
/// markers through 90 min only. Reducing an already reduced, baseline-zero
/// curve is a no-op (idempotence).
pub fn reduce(record: &RawRecord, marker_spacing: f64) -> Result<ReducedCurve> {
    record.validate()?;
    if !marker_spacing.is_finite() || marker_spacing <= 0.0 {
        return Err(Error::invalid(format!(
            "marker spacing must be positive, got {marker_spacing}"
        )));
    }
    let t_first = record.samples[0].0;
    let t_last = record.samples.last().unwrap().0;
    let marker_times = marker_grid(t_first, t_last, marker_spacing).ok_or_else(|| {
        Error::InsufficientData(format!(
            "record {:?}: sampled range [{t_first}, {t_last}] covers no marker (spacing {marker_spacing})",
            record.pillar_id
        ))
    })?;

    let times: Vec<f64> = record.samples.iter().map(|s| s.0).collect();
    let values: Vec<f64> = record.samples.iter().map(|s| s.1).collect();
    let raw_at_markers: Vec<f64> = marker_times
        .iter()
        .map(|&mt| interp_linear(&times, &values, mt.clamp(t_first, t_last)))
        .collect();
    let baseline = raw_at_markers[0];
    let reduced = raw_at_markers.iter().map(|v| v - baseline).collect();
    Ok(ReducedCurve {
        marker_times,
        values: reduced,
        meta: CurveMeta::new(
            record.pillar_id.clone(),
            record.p_o2,
            record.laser_power,
            CurveKind::Fluorescence,
        ),
    })
}

/// Replicate summary at one pressure and reference time.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AveragedPoint {
    pub p_o2: f64,
    /// Number of replicate curves.
    pub n: usize,
    pub mean: f64,
    /// Student-t 68% central CI half-width; `None` (undefined) for n = 1.
    pub ci68_halfwidth: Option<f64>,
}

/// Two-sided Student-t critical value for the central 68% interval.
pub fn t_critical_68(df: usize) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, df as f64).expect("df >= 1");
    dist.inverse_cdf(0.5 + CENTRAL_68 / 2.0)
}

/// Mean and 68% CI of replicate reduced curves evaluated at `t_ref`.
///
/// All curves must share the same pressure and cover `t_ref`.
pub fn average_at(curves: &[ReducedCurve], t_ref: f64) -> Result<AveragedPoint> {
    if curves.is_empty() {
        return Err(Error::InsufficientData(
            "average_at needs at least one curve".into(),
        ));
    }
    let p_o2 = curves[0].meta.p_o2;
    if curves.iter().any(|c| c.meta.p_o2 != p_o2) {
        return Err(Error::invalid(
            "average_at mixes curves from different pressures",
        ));
    }
    let values: Vec<f64> = curves
        .iter()
        .map(|c| c.value_at(t_ref))
        .collect::<Result<_>>()?;
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let ci68_halfwidth = if n >= 2 {
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0);
        Some(t_critical_68(n - 1) * var.sqrt() / (n as f64).sqrt())
    } else {
        None
    };
    Ok(AveragedPoint {
        p_o2,
        n,
        mean,
        ci68_halfwidth,
    })
}

/// Centered moving average with an odd window; the window is truncated at
/// the edges rather than padded. Window 1 is the identity.
pub fn moving_average(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window == 0 || window % 2 == 0 {
        return Err(Error::invalid(format!(
            "window must be odd and positive, got {window}"
        )));
    }
    let half = window / 2;
    let n = values.len();
    Ok((0..n)
        .map(|i| {
            let lo = i.saturating_sub(half);
            let hi = (i + half).min(n - 1);
            let slice = &values[lo..=hi];
            slice.iter().sum::<f64>() / slice.len() as f64
        })
        .collect())
}
