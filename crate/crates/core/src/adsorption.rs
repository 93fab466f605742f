//! Competitive Langmuir adsorption.
//!
//! Fractional surface coverage of each species in a gas mixture that
//! adsorbs non-dissociatively and equilibrates much faster than the
//! photochemistry consuming it (quasi-static approximation):
//!
//! ```text
//! theta_i = K_i * P_i / (1 + sum_j K_j * P_j)
//! ```
//!
//! `K_i` is the adsorption equilibrium constant (1/mbar) and `P_i` the
//! partial pressure (mbar). The remaining fraction of vacant sites is
//! `1 / (1 + sum_j K_j * P_j)`, so coverages and the vacant fraction sum to
//! one. Chemically inert background gases participate as ordinary entries in
//! the species list: they occupy sites (suppressing every other coverage)
//! without appearing in any reaction rate.
//!
//! The isotherm sits behind the [`Isotherm`] trait so that variants
//! (dissociative adsorption, mobile adsorbates, ...) can be added without
//! touching call sites; [`coverage`] applies the default
//! [`NonDissociativeLangmuir`] model.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One adsorbing species: an equilibrium constant and a partial pressure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdsorbateSpec {
    pub name: String,
    /// Langmuir adsorption equilibrium constant, 1/mbar.
    pub equilibrium_constant: f64,
    /// Partial pressure, mbar.
    pub partial_pressure: f64,
}

impl AdsorbateSpec {
    pub fn new(name: impl Into<String>, equilibrium_constant: f64, partial_pressure: f64) -> Self {
        AdsorbateSpec {
            name: name.into(),
            equilibrium_constant,
            partial_pressure,
        }
    }

    fn validate(&self) -> Result<()> {
        if !self.equilibrium_constant.is_finite() || self.equilibrium_constant < 0.0 {
            return Err(Error::invalid(format!(
                "species {:?}: equilibrium constant must be finite and non-negative, got {}",
                self.name, self.equilibrium_constant
            )));
        }
        if !self.partial_pressure.is_finite() || self.partial_pressure < 0.0 {
            return Err(Error::invalid(format!(
                "species {:?}: partial pressure must be finite and non-negative, got {}",
                self.name, self.partial_pressure
            )));
        }
        Ok(())
    }
}

/// Fractional coverages, aligned with the input species order.
#[derive(Debug, Clone, PartialEq)]
pub struct CoverageResult {
    pub coverages: Vec<f64>,
    /// Fraction of sites not occupied by any species.
    pub vacant: f64,
}

/// An adsorption model mapping a gas mixture to surface coverages.
pub trait Isotherm {
    fn coverage(&self, species: &[AdsorbateSpec]) -> Result<CoverageResult>;
}

/// The default model: single-site, non-dissociative competitive Langmuir.
#[derive(Debug, Clone, Copy, Default)]
pub struct NonDissociativeLangmuir;

impl Isotherm for NonDissociativeLangmuir {
    fn coverage(&self, species: &[AdsorbateSpec]) -> Result<CoverageResult> {
        for s in species {
            s.validate()?;
        }
        let load: f64 = species
            .iter()
            .map(|s| s.equilibrium_constant * s.partial_pressure)
            .sum();
        let denom = 1.0 + load;
        let coverages = species
            .iter()
            .map(|s| s.equilibrium_constant * s.partial_pressure / denom)
            .collect();
        Ok(CoverageResult {
            coverages,
            vacant: 1.0 / denom,
        })
    }
}

/// Coverage under the default non-dissociative Langmuir isotherm.
pub fn coverage(species: &[AdsorbateSpec]) -> Result<CoverageResult> {
    NonDissociativeLangmuir.coverage(species)
}
