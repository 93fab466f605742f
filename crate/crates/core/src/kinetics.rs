//! Deterministic three-reaction growth kinetics.
//!
//! Deposit volume `V` (dimensionless site-volumes) on a surface with `N_S`
//! reaction-ready sites evolves under three light-driven channels:
//!
//! ```text
//! Gamma_A = k_A * theta_O2 * theta_M * N_S^2          surface-mediated growth
//! Gamma_B = k_B' * min(V^(2/3), N_laser)              direct precursor attachment
//! Gamma_C = k_C * P_O2 * min(V^(2/3), N_laser)        oxidative etch
//! ```
//!
//! all scaled by a common `intensity_factor`. Coverages `theta` come from the
//! competitive Langmuir isotherm over O2, the precursor M and any inert
//! background species. The `min(V^(2/3), N_laser)` factor models the laser
//! spot: once the deposit cross-section outgrows the illuminated area, only
//! `N_laser` "sites worth" of deposit surface stay photoactive. `N_laser`
//! thereby fixes the (arbitrary) volume unit.
//!
//! Explicit forward-Euler update with step `dt` (canonical default
//! [`DEFAULT_DT`] = 10 s):
//!
//! ```text
//! V(t+dt)   = max(V + (Gamma_A + Gamma_B - Gamma_C) * dt, 0)
//! N_S(t+dt) = clamp(N_S - (Gamma_A*dt)^(2/3) + (Gamma_C*dt)^(2/3), 0, N_S(0))
//! ```
//!
//! Growth via A consumes surface sites; etching re-exposes them, never beyond
//! the initial count. The fractional 2/3 powers in the site budget make the
//! site dynamics dt-sensitive; stick to the canonical dt when comparing runs.

use serde::{Deserialize, Serialize};

use crate::adsorption::{self, AdsorbateSpec};
use crate::curve::{CurveKind, CurveMeta, GrowthCurve};
use crate::error::{Error, Result};
use crate::volumetry::{self, Calibration};

/// Canonical forward-Euler step, seconds.
pub const DEFAULT_DT: f64 = 10.0;

/// Rate constants and fixed model inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KineticParams {
    /// Surface-mediated growth constant, site-volumes / (s * site^2).
    pub k_a: f64,
    /// Direct-attachment constant with the precursor pressure folded in
    /// (k_B' = k_B * P_M), site-volumes / (s * site).
    pub k_b_prime: f64,
    /// Etch constant, site-volumes / (s * site * mbar).
    pub k_c: f64,
    /// O2 adsorption equilibrium constant, 1/mbar.
    pub k_o2: f64,
    /// Precursor adsorption equilibrium constant, 1/mbar.
    pub k_m: f64,
    /// Precursor partial pressure, mbar. Enters reaction A through the
    /// isotherm (theta_M); reaction B carries it inside k_B'.
    pub p_m: f64,
    /// Photoactive site count of the laser spot; caps V^(2/3) and defines
    /// the volume unit.
    pub n_laser: f64,
    /// Uniform scale on all three rates, in [0, 1]; models reduced laser
    /// intensity.
    #[serde(default = "default_intensity")]
    pub intensity_factor: f64,
}

fn default_intensity() -> f64 {
    1.0
}

impl KineticParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("k_a", self.k_a),
            ("k_b_prime", self.k_b_prime),
            ("k_c", self.k_c),
            ("k_o2", self.k_o2),
            ("k_m", self.k_m),
            ("p_m", self.p_m),
        ] {
            if v.is_nan() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be non-negative, got {v}"
                )));
            }
        }
        if self.n_laser.is_nan() || self.n_laser <= 0.0 {
            return Err(Error::invalid(format!(
                "n_laser must be positive, got {}",
                self.n_laser
            )));
        }
        if !(0.0..=1.0).contains(&self.intensity_factor) {
            return Err(Error::invalid(format!(
                "intensity_factor must lie in [0, 1], got {}",
                self.intensity_factor
            )));
        }
        Ok(())
    }

    /// Heuristic parameter set reproducing the observed oxygen-pressure
    /// regimes qualitatively. Not a published fit; constants were chosen by
    /// recipe: `k_o2 = 1/(4.6e-3 mbar)` puts the coverage product
    /// `theta_O2 * theta_M` (and hence the reaction-A peak) at the pressure
    /// where growth is fastest, `k_o2 >= 100 * k_m` keeps the precursor the
    /// stickier-but-scarcer species, and `k_b_prime / k_c = 2 mbar` places
    /// the full-inhibition threshold where growth is observed to cease.
    pub fn supp_heuristic() -> Self {
        KineticParams {
            k_a: 2.5e5,
            k_b_prime: 2.5e-3,
            k_c: 1.25e-3,
            k_o2: 1.0 / 4.6e-3,
            k_m: 2.0,
            p_m: 1e-10,
            n_laser: 100.0,
            intensity_factor: 1.0,
        }
    }
}

/// Chamber conditions around one illuminated spot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Environment {
    /// Oxygen partial pressure, mbar.
    pub p_o2: f64,
    /// Laser power, mW (bookkeeping for fluorescence conversion; the rates
    /// see intensity only through `intensity_factor`).
    #[serde(default = "default_power")]
    pub laser_power: f64,
    /// Chemically inert background gases competing for sites.
    #[serde(default)]
    pub inert_species: Vec<AdsorbateSpec>,
}

/// Acquisition laser power used when none is specified, mW.
pub const DEFAULT_LASER_POWER: f64 = 1.48;

fn default_power() -> f64 {
    DEFAULT_LASER_POWER
}

impl Environment {
    pub fn new(p_o2: f64) -> Self {
        Environment {
            p_o2,
            laser_power: default_power(),
            inert_species: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.p_o2.is_finite() || self.p_o2 < 0.0 {
            return Err(Error::invalid(format!(
                "p_o2 must be finite and non-negative, got {}",
                self.p_o2
            )));
        }
        if !self.laser_power.is_finite() || self.laser_power <= 0.0 {
            return Err(Error::invalid(format!(
                "laser_power must be positive, got {}",
                self.laser_power
            )));
        }
        Ok(())
    }
}

/// Instantaneous state of one deposit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LicState {
    /// Deposit volume, site-volumes.
    pub volume: f64,
    /// Reaction-ready surface sites.
    pub surface_sites: f64,
    /// Time, seconds.
    pub time: f64,
    /// Site count at trajectory start; upper clamp for etch-driven site
    /// recovery.
    pub sites_initial: f64,
}

impl LicState {
    /// Fresh state at t = 0; `surface_sites` doubles as the recovery clamp.
    pub fn new(volume: f64, surface_sites: f64) -> Result<Self> {
        if !volume.is_finite() || volume < 0.0 {
            return Err(Error::invalid(format!(
                "volume must be finite and non-negative, got {volume}"
            )));
        }
        if !surface_sites.is_finite() || surface_sites < 0.0 {
            return Err(Error::invalid(format!(
                "surface_sites must be finite and non-negative, got {surface_sites}"
            )));
        }
        Ok(LicState {
            volume,
            surface_sites,
            time: 0.0,
            sites_initial: surface_sites,
        })
    }
}

/// The three channel rates at one instant, plus the photoactive site count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    /// Surface-mediated growth rate, site-volumes/s.
    pub gamma_a: f64,
    /// Direct-attachment rate, site-volumes/s.
    pub gamma_b: f64,
    /// Etch rate, site-volumes/s.
    pub gamma_c: f64,
    /// min(V^(2/3), N_laser).
    pub n_l: f64,
}

impl RateBreakdown {
    /// Net volume growth rate, site-volumes/s.
    pub fn net(&self) -> f64 {
        self.gamma_a + self.gamma_b - self.gamma_c
    }
}

/// Environment-dependent rate prefactors, hoisted out of inner loops.
///
/// Coverages depend only on pressures (quasi-static isotherm), so for a
/// fixed environment each rate reduces to a coefficient times a state factor.
/// Shared by the deterministic stepper and the stochastic propensities so
/// both engines see exactly the same kinetics.
#[derive(Debug, Clone, Copy)]
pub(crate) struct RateCoeffs {
    /// intensity * k_A * theta_O2 * theta_M; multiplies N_S^2.
    a: f64,
    /// intensity * k_B'; multiplies min(V^(2/3), N_laser).
    b: f64,
    /// intensity * k_C * P_O2; multiplies min(V^(2/3), N_laser).
    c: f64,
    n_laser: f64,
}

impl RateCoeffs {
    pub(crate) fn new(params: &KineticParams, env: &Environment) -> Result<Self> {
        params.validate()?;
        env.validate()?;
        let mut species = Vec::with_capacity(2 + env.inert_species.len());
        species.push(AdsorbateSpec::new("O2", params.k_o2, env.p_o2));
        species.push(AdsorbateSpec::new("M", params.k_m, params.p_m));
        species.extend(env.inert_species.iter().cloned());
        let cov = adsorption::coverage(&species)?;
        let f = params.intensity_factor;
        Ok(RateCoeffs {
            a: f * params.k_a * cov.coverages[0] * cov.coverages[1],
            b: f * params.k_b_prime,
            c: f * params.k_c * env.p_o2,
            n_laser: params.n_laser,
        })
    }

    pub(crate) fn breakdown(&self, volume: f64, surface_sites: f64) -> RateBreakdown {
        let n_l = volume.powf(2.0 / 3.0).min(self.n_laser);
        RateBreakdown {
            gamma_a: self.a * surface_sites * surface_sites,
            gamma_b: self.b * n_l,
            gamma_c: self.c * n_l,
            n_l,
        }
    }
}

fn validate_state(state: &LicState) -> Result<()> {
    if !state.volume.is_finite()
        || state.volume < 0.0
        || !state.surface_sites.is_finite()
        || state.surface_sites < 0.0
        || !state.time.is_finite()
    {
        return Err(Error::invalid(format!("invalid state: {state:?}")));
    }
    Ok(())
}

/// Channel rates for `state` under `params` and `env`.
pub fn rates(params: &KineticParams, env: &Environment, state: &LicState) -> Result<RateBreakdown> {
    validate_state(state)?;
    Ok(RateCoeffs::new(params, env)?.breakdown(state.volume, state.surface_sites))
}

fn step_with(coeffs: &RateCoeffs, state: &LicState, dt: f64) -> LicState {
    let r = coeffs.breakdown(state.volume, state.surface_sites);
    let volume = (state.volume + r.net() * dt).max(0.0);
    let surface_sites = (state.surface_sites - (r.gamma_a * dt).powf(2.0 / 3.0)
        + (r.gamma_c * dt).powf(2.0 / 3.0))
    .clamp(0.0, state.sites_initial);
    LicState {
        volume,
        surface_sites,
        time: state.time + dt,
        sites_initial: state.sites_initial,
    }
}

/// One forward-Euler step of length `dt`.
pub fn step(params: &KineticParams, env: &Environment, state: &LicState, dt: f64) -> Result<LicState> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    validate_state(state)?;
    Ok(step_with(&RateCoeffs::new(params, env)?, state, dt))
}

/// A simulated (or event-sampled) state history.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Deposit volume per sample, site-volumes.
    pub volume: Vec<f64>,
    /// Surface sites per sample.
    pub sites: Vec<f64>,
    pub p_o2: f64,
    pub laser_power: f64,
}

impl Trajectory {
    /// Volume-kind growth curve view.
    pub fn volume_curve(&self, pillar_id: &str) -> Result<GrowthCurve> {
        GrowthCurve::new(
            self.times.clone(),
            self.volume.clone(),
            CurveMeta::new(pillar_id, self.p_o2, self.laser_power, CurveKind::Volume),
        )
    }

    /// Per-sample fluorescence, Mcts/s. Site-volumes are mapped 1:1 to um^3
    /// (the volume unit is arbitrary) and divided by the calibration ratio
    /// rescaled to this trajectory's laser power.
    pub fn fluorescence(&self, cal: &Calibration) -> Result<Vec<f64>> {
        let scaled = volumetry::rescale_ratio(cal, self.laser_power)?;
        self.volume
            .iter()
            .map(|&v| volumetry::volume_to_fluorescence(v, &scaled, self.laser_power))
            .collect()
    }

    /// Fluorescence-kind growth curve view under `cal`.
    pub fn fluorescence_curve(&self, pillar_id: &str, cal: &Calibration) -> Result<GrowthCurve> {
        GrowthCurve::new(
            self.times.clone(),
            self.fluorescence(cal)?,
            CurveMeta::new(
                pillar_id,
                self.p_o2,
                self.laser_power,
                CurveKind::Fluorescence,
            ),
        )
    }

    /// Last sampled value at or before `t` (piecewise-constant view; used to
    /// sample event-driven histories).
    pub fn volume_before(&self, t: f64) -> Result<f64> {
        if self.times.is_empty() || t < self.times[0] {
            return Err(Error::OutOfRange(format!(
                "t = {t} precedes trajectory start"
            )));
        }
        let idx = self.times.partition_point(|&x| x <= t) - 1;
        Ok(self.volume[idx])
    }
}

/// Forward-Euler trajectory from `initial`, sampled at every step.
///
/// Runs `floor(t_end/dt)` whole steps (`t_end = dt` gives exactly one); a
/// `t_end` that is not a multiple of `dt` is truncated, never split into a
/// partial step. The initial state is included as the first sample.
pub fn simulate(
    params: &KineticParams,
    env: &Environment,
    initial: &LicState,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    if !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    if !t_end.is_finite() || t_end < dt {
        return Err(Error::invalid(format!(
            "t_end must be at least dt ({dt}), got {t_end}"
        )));
    }
    validate_state(initial)?;
    let coeffs = RateCoeffs::new(params, env)?;
    let n_steps = (t_end / dt + 1e-9).floor() as usize;
    let mut times = Vec::with_capacity(n_steps + 1);
    let mut volume = Vec::with_capacity(n_steps + 1);
    let mut sites = Vec::with_capacity(n_steps + 1);
    let mut state = *initial;
    times.push(state.time);
    volume.push(state.volume);
    sites.push(state.surface_sites);
    for _ in 0..n_steps {
        state = step_with(&coeffs, &state, dt);
        times.push(state.time);
        volume.push(state.volume);
        sites.push(state.surface_sites);
    }
    Ok(Trajectory {
        times,
        volume,
        sites,
        p_o2: env.p_o2,
        laser_power: env.laser_power,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zeroed_params() -> KineticParams {
        KineticParams {
            k_a: 0.0,
            k_b_prime: 0.0,
            k_c: 0.0,
            k_o2: 0.0,
            k_m: 0.0,
            p_m: 0.0,
            n_laser: 100.0,
            intensity_factor: 1.0,
        }
    }

    #[test]
    fn rates_vanish_without_drivers() {
        let params = zeroed_params();
        let env = Environment::new(0.0);
        let state = LicState::new(10.0, 50.0).unwrap();
        let r = rates(&params, &env, &state).unwrap();
        assert_eq!((r.gamma_a, r.gamma_b, r.gamma_c), (0.0, 0.0, 0.0));
    }

    #[test]
    fn no_oxygen_disables_growth_a_and_etch() {
        let mut params = zeroed_params();
        params.k_a = 1.0;
        params.k_c = 1.0;
        params.k_o2 = 10.0;
        params.k_m = 1.0;
        params.p_m = 1e-9;
        let env = Environment::new(0.0);
        let state = LicState::new(10.0, 50.0).unwrap();
        let r = rates(&params, &env, &state).unwrap();
        assert_eq!(r.gamma_a, 0.0);
        assert_eq!(r.gamma_c, 0.0);
    }

    #[test]
    fn direct_attachment_scales_with_deposit_area() {
        let mut params = zeroed_params();
        params.k_b_prime = 0.5;
        let env = Environment::new(0.0);
        let state = LicState::new(8.0, 0.0).unwrap();
        let r = rates(&params, &env, &state).unwrap();
        // 8^(2/3) = 4 below the cap of 100.
        assert_relative_eq!(r.gamma_b, 2.0, max_relative = 1e-12);
        assert_relative_eq!(r.n_l, 4.0, max_relative = 1e-12);
    }

    #[test]
    fn laser_cap_limits_photoactive_area() {
        let mut params = zeroed_params();
        params.k_c = 2.0;
        let env = Environment::new(0.5);
        let state = LicState::new(1e6, 0.0).unwrap();
        let r = rates(&params, &env, &state).unwrap();
        assert_eq!(r.n_l, 100.0);
        assert_relative_eq!(r.gamma_c, 2.0 * 0.5 * 100.0, max_relative = 1e-12);
    }

    #[test]
    fn intensity_factor_scales_all_rates() {
        let mut params = zeroed_params();
        params.k_a = 1.0;
        params.k_b_prime = 1.0;
        params.k_c = 1.0;
        params.k_o2 = 100.0;
        params.k_m = 1.0;
        params.p_m = 1e-3;
        let env = Environment::new(1e-2);
        let state = LicState::new(10.0, 50.0).unwrap();
        let full = rates(&params, &env, &state).unwrap();
        params.intensity_factor = 0.25;
        let dimmed = rates(&params, &env, &state).unwrap();
        assert_relative_eq!(dimmed.gamma_a, 0.25 * full.gamma_a, max_relative = 1e-12);
        assert_relative_eq!(dimmed.gamma_b, 0.25 * full.gamma_b, max_relative = 1e-12);
        assert_relative_eq!(dimmed.gamma_c, 0.25 * full.gamma_c, max_relative = 1e-12);
    }

    #[test]
    fn zero_rate_step_only_advances_time() {
        let params = zeroed_params();
        let env = Environment::new(0.0);
        let state = LicState::new(5.0, 20.0).unwrap();
        let next = step(&params, &env, &state, 10.0).unwrap();
        assert_eq!(next.volume, 5.0);
        assert_eq!(next.surface_sites, 20.0);
        assert_eq!(next.time, 10.0);
    }

    #[test]
    fn etch_overshoot_floors_volume_at_zero() {
        let mut params = zeroed_params();
        params.k_c = 100.0;
        let env = Environment::new(1.0);
        let state = LicState::new(1.0, 0.0).unwrap();
        let next = step(&params, &env, &state, 10.0).unwrap();
        assert_eq!(next.volume, 0.0);
    }

    #[test]
    fn rejects_bad_dt_and_state() {
        let params = zeroed_params();
        let env = Environment::new(0.0);
        let state = LicState::new(1.0, 1.0).unwrap();
        assert!(step(&params, &env, &state, 0.0).is_err());
        assert!(step(&params, &env, &state, -1.0).is_err());
        assert!(LicState::new(-1.0, 0.0).is_err());
        assert!(LicState::new(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn rejects_bad_params() {
        let mut params = zeroed_params();
        params.intensity_factor = 1.5;
        assert!(params.validate().is_err());
        params.intensity_factor = 1.0;
        params.n_laser = 0.0;
        assert!(params.validate().is_err());
        params.n_laser = 100.0;
        params.k_a = -1.0;
        assert!(params.validate().is_err());
    }

    /// Pure direct attachment below the cap obeys dV/dt = k_B' V^(2/3),
    /// i.e. V(t) = (V0^(1/3) + k_B' t / 3)^3; with k_B' = 3, V0 = 1 the
    /// volume reaches (1 + t)^3. Forward Euler must converge on it.
    #[test]
    fn cube_growth_converges_under_refinement() {
        let mut params = zeroed_params();
        params.k_b_prime = 3.0;
        params.n_laser = f64::INFINITY;
        let env = Environment::new(0.0);
        let initial = LicState::new(1.0, 0.0).unwrap();
        let exact = 27.0; // (1 + 2)^3 at t = 2

        let run = |dt: f64| {
            let traj = simulate(&params, &env, &initial, 2.0, dt).unwrap();
            *traj.volume.last().unwrap()
        };
        let coarse = run(1e-3);
        let fine = run(5e-4);
        assert_relative_eq!(coarse, exact, max_relative = 0.01);
        // Halving dt keeps moving the answer toward the closed form.
        assert!((fine - exact).abs() < (coarse - exact).abs());
        assert!((fine - coarse).abs() / exact < 0.01);
    }

    /// With the cap saturated and A off, growth is exactly linear and Euler
    /// reproduces it to rounding.
    #[test]
    fn saturated_cap_growth_is_exactly_linear() {
        let mut params = zeroed_params();
        params.k_b_prime = 0.03;
        params.k_c = 0.01;
        let env = Environment::new(0.5);
        let initial = LicState::new(1000.0, 0.0).unwrap(); // 1000^(2/3) = 100 = cap
        let traj = simulate(&params, &env, &initial, 600.0, 10.0).unwrap();
        let rate = (0.03 - 0.01 * 0.5) * 100.0;
        for (&t, &v) in traj.times.iter().zip(&traj.volume) {
            assert_relative_eq!(v, 1000.0 + rate * t, max_relative = 1e-9);
        }
    }

    /// Full inhibition: when k_C P_O2 N_L exceeds all growth terms a
    /// pre-existing deposit shrinks monotonically.
    #[test]
    fn strong_etch_shrinks_seeded_deposit() {
        let params = KineticParams::supp_heuristic();
        let env = Environment::new(10.0);
        let initial = LicState::new(1000.0, params.n_laser).unwrap();
        let traj = simulate(&params, &env, &initial, 12_000.0, 10.0).unwrap();
        for w in traj.volume.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        assert!(*traj.volume.last().unwrap() < 1000.0);
    }

    #[test]
    fn t_end_equal_dt_gives_one_step() {
        let params = zeroed_params();
        let env = Environment::new(0.0);
        let initial = LicState::new(1.0, 1.0).unwrap();
        let traj = simulate(&params, &env, &initial, 10.0, 10.0).unwrap();
        assert_eq!(traj.times.len(), 2);
        assert_eq!(traj.times[1], 10.0);
        assert!(simulate(&params, &env, &initial, 5.0, 10.0).is_err());
    }

    /// Random parameter draws: rates stay non-negative, sites stay inside
    /// [0, N_S(0)], volume stays non-negative along whole trajectories.
    #[test]
    fn random_trajectories_respect_state_bounds() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let params = KineticParams {
                k_a: 10f64.powf(rng.random_range(-6.0..2.0)),
                k_b_prime: 10f64.powf(rng.random_range(-5.0..0.0)),
                k_c: 10f64.powf(rng.random_range(-5.0..0.0)),
                k_o2: 10f64.powf(rng.random_range(0.0..3.0)),
                k_m: 10f64.powf(rng.random_range(-2.0..1.0)),
                p_m: 10f64.powf(rng.random_range(-11.0..-8.0)),
                n_laser: 10f64.powf(rng.random_range(1.0..3.0)),
                intensity_factor: rng.random_range(0.0..=1.0),
            };
            let env = Environment::new(10f64.powf(rng.random_range(-8.0..1.0)));
            let sites0 = rng.random_range(1.0..200.0);
            let initial = LicState::new(rng.random_range(0.0..50.0), sites0).unwrap();
            let r = rates(&params, &env, &initial).unwrap();
            assert!(r.gamma_a >= 0.0 && r.gamma_b >= 0.0 && r.gamma_c >= 0.0);
            let traj = simulate(&params, &env, &initial, 600.0, 10.0).unwrap();
            for (&v, &s) in traj.volume.iter().zip(&traj.sites) {
                assert!(v >= 0.0, "volume went negative");
                assert!((0.0..=sites0 + 1e-12).contains(&s), "sites left [0, N_S(0)]");
            }
        }
    }

    #[test]
    fn params_json_round_trip() {
        let params = KineticParams::supp_heuristic();
        let text = serde_json::to_string(&params).unwrap();
        let back: KineticParams = serde_json::from_str(&text).unwrap();
        assert_eq!(params, back);
        // intensity_factor defaults to 1 when omitted.
        let partial: KineticParams = serde_json::from_str(
            r#"{"k_a":1.0,"k_b_prime":0.1,"k_c":0.1,"k_o2":10.0,"k_m":1.0,"p_m":1e-10,"n_laser":100.0}"#,
        )
        .unwrap();
        assert_eq!(partial.intensity_factor, 1.0);
    }
}
