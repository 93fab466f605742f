//! Growth-curve characterization: onset/rate fitting, growth deltas and
//! oxygen-pressure regime classification.
//!
//! The onset fit models a curve as flat baseline followed by linear growth,
//! `value(t) = b + m * max(0, t - t0)`, scanning the changepoint `t0` over
//! the sample times and solving the remaining linear least squares exactly
//! for each candidate; the best (smallest residual) candidate wins, with
//! ties broken toward the earliest onset.
//!
//! Classification mirrors the observed oxygen regimes:
//!
//! * Regime I: prompt onset, growth accelerating with pressure
//!   (fastest near 4.6e-3 mbar),
//! * Regime II (~2e-3..2 mbar): onset delayed, the delay growing with
//!   pressure, post-onset rate comparable to the Regime-I peak,
//! * Regime III (> 2 mbar): no net growth; pre-existing deposits etch.

use serde::{Deserialize, Serialize};

use crate::curve::GrowthCurve;
use crate::error::{Error, Result};

/// Default reference time for growth deltas: 200 min.
pub const REFERENCE_TIME: f64 = 12_000.0;

/// Result of the hinge (baseline + ramp) fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OnsetFit {
    /// Changepoint, seconds. 0 when `no_growth`.
    pub onset_time: f64,
    /// Post-onset slope, value units per second. 0 when `no_growth`.
    pub rate: f64,
    /// Sum of squared residuals of the winning candidate.
    pub residual: f64,
    /// Set for constant curves, where an onset is meaningless.
    pub no_growth: bool,
}

/// Fit `value(t) = b + m * max(0, t - t0)` with `t0` scanned over the
/// sample times. Needs at least 4 samples.
pub fn fit_onset(curve: &GrowthCurve) -> Result<OnsetFit> {
    let times = curve.times();
    let values = curve.values();
    let n = times.len();
    if n < 4 {
        return Err(Error::InsufficientData(format!(
            "onset fit needs at least 4 samples, got {n}"
        )));
    }

    let vmin = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = vmax.abs().max(vmin.abs()).max(1e-300);
    if (vmax - vmin) <= 1e-12 * scale {
        return Ok(OnsetFit {
            onset_time: 0.0,
            rate: 0.0,
            residual: 0.0,
            no_growth: true,
        });
    }

    let mut best: Option<(f64, f64, f64, f64)> = None; // (rss, t0, b, m)
    for &t0 in times {
        let (b, m, rss) = hinge_least_squares(times, values, t0);
        // Strict improvement only: ties keep the earliest t0.
        if best.map_or(true, |(best_rss, ..)| rss < best_rss) {
            best = Some((rss, t0, b, m));
        }
    }
    let (rss, t0, _b, m) = best.unwrap();
    Ok(OnsetFit {
        onset_time: t0,
        rate: m,
        residual: rss,
        no_growth: false,
    })
}

/// Exact least squares of `b + m * relu(t - t0)` for a fixed changepoint.
fn hinge_least_squares(times: &[f64], values: &[f64], t0: f64) -> (f64, f64, f64) {
    let n = times.len() as f64;
    let xs = times.iter().map(|&t| (t - t0).max(0.0));
    let sx: f64 = xs.clone().sum();
    let sxx: f64 = xs.clone().map(|x| x * x).sum();
    let sy: f64 = values.iter().sum();
    let sxy: f64 = xs.clone().zip(values).map(|(x, &y)| x * y).sum();
    let det = n * sxx - sx * sx;
    let (b, m) = if det.abs() <= 1e-12 * (n * sxx).max(1.0) {
        // Ramp column vanishes (t0 at/after the last sample): flat fit.
        (sy / n, 0.0)
    } else {
        let m = (n * sxy - sx * sy) / det;
        let b = (sy - m * sx) / n;
        (b, m)
    };
    let rss = times
        .iter()
        .zip(values)
        .map(|(&t, &y)| {
            let pred = b + m * (t - t0).max(0.0);
            (y - pred) * (y - pred)
        })
        .sum();
    (b, m, rss)
}

/// Interpolated growth since the curve start: `value(t_ref) - value(first)`.
/// `t_ref` must lie inside the sampled range (no extrapolation).
pub fn delta_at(curve: &GrowthCurve, t_ref: f64) -> Result<f64> {
    Ok(curve.value_at(t_ref)? - curve.values()[0])
}

/// Oxygen-pressure growth regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    I,
    II,
    III,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Regime::I => write!(f, "I"),
            Regime::II => write!(f, "II"),
            Regime::III => write!(f, "III"),
        }
    }
}

/// Classification thresholds. Defaults follow the observed pattern; all are
/// data-driven knobs, not model constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RegimeThresholds {
    /// Onsets at or below this (seconds) count as prompt: 20 min.
    pub onset_threshold: f64,
    /// Fraction of the sweep's best rate within which a delayed curve still
    /// counts as "grows about as fast as the peak" (informative flag).
    pub rate_tolerance: f64,
    /// Growth deltas at or below this are treated as no-growth/etch.
    pub etch_noise: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds {
            onset_threshold: 1200.0,
            rate_tolerance: 0.3,
            etch_noise: 0.0,
        }
    }
}

/// Onset fit plus growth delta for one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthMetrics {
    pub onset_time: f64,
    pub post_onset_rate: f64,
    pub fit_residual: f64,
    pub delta_at_reference: f64,
    pub no_growth: bool,
}

/// Fit the onset and evaluate the growth delta at `t_ref` for one curve.
pub fn characterize(curve: &GrowthCurve, t_ref: f64) -> Result<GrowthMetrics> {
    let onset = fit_onset(curve)?;
    let delta = delta_at(curve, t_ref)?;
    Ok(GrowthMetrics {
        onset_time: onset.onset_time,
        post_onset_rate: onset.rate,
        fit_residual: onset.residual,
        delta_at_reference: delta,
        no_growth: onset.no_growth,
    })
}

/// One classified sweep point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport {
    /// Oxygen partial pressure, mbar.
    pub p_o2: f64,
    pub onset_time: f64,
    pub post_onset_rate: f64,
    pub delta_at_reference: f64,
    pub regime: Regime,
    pub no_growth: bool,
    /// Whether the post-onset rate falls within `rate_tolerance` of the
    /// sweep's best rate (the Regime-II "similar rate" signature).
    pub rate_matches_peak: bool,
}

/// Classified pressure sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepClassification {
    /// Reports sorted by pressure.
    pub reports: Vec<RegimeReport>,
    /// Pressure with the largest growth delta.
    pub peak_pressure: f64,
}

/// Label every sweep point with its regime.
///
/// Labels are assigned per point, in decreasing precedence:
/// III where the delta is inside the etch/noise band, otherwise I where the
/// onset is prompt, otherwise II (delayed onset). The Regime-II "rate close
/// to the sweep maximum" signature is reported as a flag rather than used to
/// veto a label, which keeps classification total.
/// Regime label for a single point, independent of the rest of the sweep:
/// no net growth is III, a prompt onset is I, a delayed onset is II.
pub fn label_point(m: &GrowthMetrics, thresholds: &RegimeThresholds) -> Regime {
    if m.delta_at_reference <= thresholds.etch_noise || m.no_growth {
        Regime::III
    } else if m.onset_time <= thresholds.onset_threshold {
        Regime::I
    } else {
        Regime::II
    }
}

pub fn classify_sweep(
    points: &[(f64, GrowthMetrics)],
    thresholds: &RegimeThresholds,
) -> Result<SweepClassification> {
    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "sweep classification needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(p, _)| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid("pressures must be finite and non-negative"));
    }
    let mut sorted: Vec<&(f64, GrowthMetrics)> = points.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in sorted.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::invalid(format!(
                "duplicate pressure {} in sweep",
                w[0].0
            )));
        }
    }

    let max_rate = sorted
        .iter()
        .map(|(_, m)| m.post_onset_rate)
        .fold(0.0_f64, f64::max);
    let reports: Vec<RegimeReport> = sorted
        .iter()
        .map(|&&(p, m)| {
            let regime = label_point(&m, thresholds);
            RegimeReport {
                p_o2: p,
                onset_time: m.onset_time,
                post_onset_rate: m.post_onset_rate,
                delta_at_reference: m.delta_at_reference,
                regime,
                no_growth: m.no_growth,
                rate_matches_peak: max_rate > 0.0
                    && m.post_onset_rate >= (1.0 - thresholds.rate_tolerance) * max_rate,
            }
        })
        .collect();

    // Argmax of the growth delta; ties toward lower pressure.
    let peak = reports
        .iter()
        .fold(None::<&RegimeReport>, |acc, r| match acc {
            Some(best) if best.delta_at_reference >= r.delta_at_reference => Some(best),
            _ => Some(r),
        })
        .unwrap();
    Ok(SweepClassification {
        peak_pressure: peak.p_o2,
        reports,
    })
}
