//! Simulation and analysis toolkit for laser-induced contamination (LIC)
//! growth on optical surfaces in vacuum.
//!
//! The crate models contaminant deposit growth under three competing
//! photochemical reactions (surface-mediated growth, direct precursor
//! attachment, oxidative etching) coupled to competitive Langmuir adsorption,
//! and ships the full experimental data-reduction chain used to compare
//! model output with fluorescence measurements: marker interpolation,
//! baseline subtraction, Student-t confidence intervals, deposit volumetry,
//! onset/rate fitting, oxygen-regime classification and parameter fitting.
//!
//! With the `parallel` feature (default) ensembles, pressure sweeps and fit
//! grid scans fan out over rayon; without it the same entry points run
//! sequentially and produce bit-identical results.

pub mod adsorption;
pub mod analysis;
pub mod curve;
pub mod error;
pub mod fit;
pub mod io;
pub mod kinetics;
pub mod pipeline;
pub mod stochastic;
pub mod volumetry;

mod exec;

pub use error::{Error, Result};
