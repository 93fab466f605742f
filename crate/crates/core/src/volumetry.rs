//! Deposit volumetry and the fluorescence <-> volume calibration.
//!
//! SEM top-down views give a deposit's width `w` and depth `d`; tilted views
//! give its height `h`. None of the deposits is a clean geometric solid, so
//! the volume is estimated three ways and the scatter across formulas is the
//! shape uncertainty:
//!
//! ```text
//! spherical cap: V = pi/6 h^3 + pi/8 l^2 h      with l = (w + d)/2
//! cylinder:      V = pi l^2 h
//! gaussian:      V = 2 pi h w d / (2 * 2.355)
//! ```
//!
//! The cap formula's base diameter uses the mean footprint l in place of d,
//! matching how the other two treat the slightly elliptical footprints. The
//! gaussian profile interprets w and d as FWHM (2.355 sigma).
//!
//! Calibration ties fluorescence to volume: a ratio in um^3 s / Mcts valid
//! at a reference laser power. Fluorescence scales linearly with power at
//! fixed volume, so the ratio rescales inversely with power.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Fixed relative uncertainty assumed on every SEM dimension.
pub const DIM_RELATIVE_UNCERTAINTY: f64 = 0.10;

/// FWHM-to-sigma factor for the gaussian profile.
pub const FWHM_PER_SIGMA: f64 = 2.355;

/// SEM dimensions of one deposit, micrometres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DepositDims {
    pub height: f64,
    pub width: f64,
    pub depth: f64,
}

impl DepositDims {
    pub fn new(height: f64, width: f64, depth: f64) -> Result<Self> {
        for (name, v) in [("height", height), ("width", width), ("depth", depth)] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(DepositDims {
            height,
            width,
            depth,
        })
    }
}

/// Volume estimates from the three shape models, um^3.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeEstimate {
    pub spherical_cap: f64,
    pub cylinder: f64,
    pub gaussian: f64,
    /// Mean of the three formulas.
    pub mean: f64,
    /// Sample standard deviation of the three formulas (shape uncertainty).
    pub spread: f64,
    /// First-order propagation of the +-10% dimension uncertainty: volumes
    /// are degree-3 in the dimensions, so 3 x 10% relative, applied to the
    /// mean. Reported alongside `spread`; measurement floors (SEM pixel
    /// scale, ~0.003 um^3 here) are not modelled.
    pub dim_uncertainty: f64,
}

/// Evaluate all three volume formulas for one deposit.
pub fn estimate_volume(dims: &DepositDims) -> Result<VolumeEstimate> {
    let d = DepositDims::new(dims.height, dims.width, dims.depth)?;
    let l = (d.width + d.depth) / 2.0;
    let spherical_cap = PI / 6.0 * d.height.powi(3) + PI / 8.0 * l * l * d.height;
    let cylinder = PI * l * l * d.height;
    let gaussian = 2.0 * PI * d.height * d.width * d.depth / (2.0 * FWHM_PER_SIGMA);
    let mean = (spherical_cap + cylinder + gaussian) / 3.0;
    let var = [spherical_cap, cylinder, gaussian]
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / 2.0;
    Ok(VolumeEstimate {
        spherical_cap,
        cylinder,
        gaussian,
        mean,
        spread: var.sqrt(),
        dim_uncertainty: 3.0 * DIM_RELATIVE_UNCERTAINTY * mean,
    })
}

/// Fluorescence-to-volume conversion ratio at a reference laser power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Calibration {
    /// um^3 * s / Mcts.
    pub ratio: f64,
    /// Laser power the ratio was established at, mW.
    pub reference_power: f64,
}

impl Calibration {
    pub fn new(ratio: f64, reference_power: f64) -> Result<Self> {
        if !ratio.is_finite() || ratio <= 0.0 {
            return Err(Error::invalid(format!(
                "calibration ratio must be positive, got {ratio}"
            )));
        }
        if !reference_power.is_finite() || reference_power <= 0.0 {
            return Err(Error::invalid(format!(
                "reference power must be positive, got {reference_power}"
            )));
        }
        Ok(Calibration {
            ratio,
            reference_power,
        })
    }

    /// The measured reference calibration: 9.3e-3 um^3 s / Mcts at 0.092 mW.
    pub fn reference() -> Self {
        Calibration {
            ratio: 9.3e-3,
            reference_power: 0.092,
        }
    }
}

/// Ordinary least squares of volume against fluorescence with a free
/// intercept; the slope is the calibration ratio. The intercept absorbs any
/// constant background and is discarded. This is an order-of-magnitude tool:
/// a slope that is not positive and finite is rejected as singular.
pub fn fit_calibration(points: &[(f64, f64)], power: f64) -> Result<Calibration> {
    if points.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "calibration needs at least 2 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|(f, v)| !f.is_finite() || !v.is_finite()) {
        return Err(Error::invalid("non-finite calibration point"));
    }
    let n = points.len() as f64;
    let mean_f = points.iter().map(|(f, _)| f).sum::<f64>() / n;
    let mean_v = points.iter().map(|(_, v)| v).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|(f, _)| (f - mean_f) * (f - mean_f)).sum();
    let sxy: f64 = points
        .iter()
        .map(|(f, v)| (f - mean_f) * (v - mean_v))
        .sum();
    let scale: f64 = points.iter().map(|(f, _)| f * f).sum::<f64>().max(1e-300);
    if sxx <= scale * 1e-24 {
        return Err(Error::SingularFit(
            "fluorescence values do not vary; slope is undetermined".into(),
        ));
    }
    let slope = sxy / sxx;
    if !slope.is_finite() || slope <= 0.0 {
        return Err(Error::SingularFit(format!(
            "fitted ratio must be positive, got {slope}"
        )));
    }
    Calibration::new(slope, power)
}

/// Rescale a calibration ratio to a different laser power: fluorescence per
/// volume is proportional to power, so ratio' = ratio * P_ref / P_target.
pub fn rescale_ratio(cal: &Calibration, target_power: f64) -> Result<Calibration> {
    Calibration::new(cal.ratio, cal.reference_power)?;
    if !target_power.is_finite() || target_power <= 0.0 {
        return Err(Error::invalid(format!(
            "target power must be positive, got {target_power}"
        )));
    }
    Ok(Calibration {
        ratio: cal.ratio * cal.reference_power / target_power,
        reference_power: target_power,
    })
}

/// Fluorescence (Mcts/s) a deposit of `volume_um3` produces at `power`.
pub fn volume_to_fluorescence(volume_um3: f64, cal: &Calibration, power: f64) -> Result<f64> {
    let scaled = rescale_ratio(cal, power)?;
    if !volume_um3.is_finite() {
        return Err(Error::invalid(format!("volume must be finite, got {volume_um3}")));
    }
    Ok(volume_um3 / scaled.ratio)
}

/// Inverse of [`volume_to_fluorescence`].
pub fn fluorescence_to_volume(fluorescence: f64, cal: &Calibration, power: f64) -> Result<f64> {
    let scaled = rescale_ratio(cal, power)?;
    if !fluorescence.is_finite() {
        return Err(Error::invalid(format!(
            "fluorescence must be finite, got {fluorescence}"
        )));
    }
    Ok(fluorescence * scaled.ratio)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_deposit_has_zero_volume_and_spread() {
        let e = estimate_volume(&DepositDims::new(0.0, 2.0, 3.0).unwrap()).unwrap();
        assert_eq!(e.spherical_cap, 0.0);
        assert_eq!(e.cylinder, 0.0);
        assert_eq!(e.gaussian, 0.0);
        assert_eq!(e.spread, 0.0);
    }

    #[test]
    fn spherical_cap_worked_example() {
        // h = 1, w = d = 2: l = 2, V = pi/6 + pi/2 = 2pi/3.
        let e = estimate_volume(&DepositDims::new(1.0, 2.0, 2.0).unwrap()).unwrap();
        assert_relative_eq!(e.spherical_cap, 2.0 * PI / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn cylinder_and_gaussian_worked_examples() {
        let e = estimate_volume(&DepositDims::new(1.0, 1.0, 1.0).unwrap()).unwrap();
        assert_relative_eq!(e.cylinder, PI, max_relative = 1e-12);
        assert_relative_eq!(e.gaussian, 2.0 * PI / 4.71, max_relative = 1e-12);
        assert_relative_eq!(e.gaussian, 1.334, max_relative = 1e-3);
    }

    #[test]
    fn rejects_negative_dimensions() {
        assert!(DepositDims::new(-1.0, 1.0, 1.0).is_err());
        assert!(DepositDims::new(1.0, f64::NAN, 1.0).is_err());
    }

    #[test]
    fn dim_uncertainty_is_thirty_percent_of_mean() {
        let e = estimate_volume(&DepositDims::new(1.0, 2.0, 3.0).unwrap()).unwrap();
        assert_relative_eq!(e.dim_uncertainty, 0.3 * e.mean, max_relative = 1e-12);
    }

    proptest! {
        /// All three formulas are homogeneous of degree 3 in the dimensions.
        #[test]
        fn volume_is_degree_three_homogeneous(
            h in 1e-3f64..10.0,
            w in 1e-3f64..10.0,
            d in 1e-3f64..10.0,
            s in 0.1f64..10.0,
        ) {
            let base = estimate_volume(&DepositDims::new(h, w, d).unwrap()).unwrap();
            let scaled = estimate_volume(&DepositDims::new(s * h, s * w, s * d).unwrap()).unwrap();
            let s3 = s * s * s;
            prop_assert!((scaled.spherical_cap - s3 * base.spherical_cap).abs() <= 1e-9 * s3 * base.spherical_cap.max(1e-300));
            prop_assert!((scaled.cylinder - s3 * base.cylinder).abs() <= 1e-9 * s3 * base.cylinder.max(1e-300));
            prop_assert!((scaled.gaussian - s3 * base.gaussian).abs() <= 1e-9 * s3 * base.gaussian.max(1e-300));
        }
    }

    #[test]
    fn exact_two_point_calibration() {
        let cal = fit_calibration(&[(0.0, 0.0), (1.0, 9.3e-3)], 0.092).unwrap();
        assert_relative_eq!(cal.ratio, 9.3e-3, max_relative = 1e-12);
        assert_eq!(cal.reference_power, 0.092);
    }

    #[test]
    fn noisy_calibration_recovers_slope_within_ten_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let truth = 9.3e-3;
        let points: Vec<(f64, f64)> = (0..40)
            .map(|i| {
                let f = 0.5 + i as f64 * 0.25;
                let noise = 1.0 + 0.05 * (rng.random::<f64>() - 0.5);
                (f, (truth * f + 2e-3) * noise)
            })
            .collect();
        let cal = fit_calibration(&points, 0.092).unwrap();
        assert_relative_eq!(cal.ratio, truth, max_relative = 0.10);
    }

    #[test]
    fn constant_fluorescence_is_singular() {
        let err = fit_calibration(&[(2.0, 1.0), (2.0, 3.0), (2.0, 5.0)], 1.0).unwrap_err();
        assert!(matches!(err, Error::SingularFit(_)));
    }

    #[test]
    fn rescale_reproduces_reference_conversion() {
        // 9.3e-3 um^3 s/Mcts at 0.092 mW -> ~5.78e-4 (~6e-4) at 1.48 mW.
        let scaled = rescale_ratio(&Calibration::reference(), 1.48).unwrap();
        assert_relative_eq!(scaled.ratio, 9.3e-3 * 0.092 / 1.48, max_relative = 1e-12);
        assert_relative_eq!(scaled.ratio, 5.781e-4, max_relative = 1e-3);
        // Rounds to 6e-4 at one significant figure.
        assert!((scaled.ratio - 6e-4).abs() < 0.5e-4);
    }

    #[test]
    fn rescale_is_inverse_proportional_to_power() {
        let cal = Calibration::new(1e-2, 1.0).unwrap();
        assert_relative_eq!(rescale_ratio(&cal, 2.0).unwrap().ratio, 5e-3);
        assert_relative_eq!(rescale_ratio(&cal, 1.0).unwrap().ratio, 1e-2);
        assert!(rescale_ratio(&cal, 0.0).is_err());
        assert!(rescale_ratio(&cal, -1.0).is_err());
    }

    #[test]
    fn fluorescence_volume_round_trip() {
        let cal = Calibration::reference();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let v = 10f64.powf(rng.random_range(-4.0..2.0));
            let p = 10f64.powf(rng.random_range(-2.0..1.0));
            let f = volume_to_fluorescence(v, &cal, p).unwrap();
            let back = fluorescence_to_volume(f, &cal, p).unwrap();
            assert_relative_eq!(back, v, max_relative = 1e-12);
        }
    }

    #[test]
    fn unit_ratio_is_identity() {
        let cal = Calibration::new(1.0, 1.0).unwrap();
        assert_relative_eq!(volume_to_fluorescence(3.5, &cal, 1.0).unwrap(), 3.5);
    }
}
