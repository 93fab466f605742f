//! Exact stochastic simulation (Gillespie direct method) of the
//! three-reaction system, as a small-system cross-check of the deterministic
//! stepper.
//!
//! Volume is an integer number of site-volumes and sites an integer count.
//! Event propensities reuse the deterministic rate law at the current state
//! (quasi-static coverages, laser cap included), so both engines share one
//! kinetics definition:
//!
//! * reaction A: `V += 1`, `free_sites -= 1`
//! * reaction B: `V += 1`
//! * reaction C: `V -= 1`, `free_sites += 1` (never beyond the initial count)
//!
//! Waiting times are exponential with the total propensity; an all-zero
//! propensity state is absorbing and simply holds to `t_end`. Runs are
//! seed-deterministic; ensembles derive one seed per run from the base seed,
//! so results do not depend on scheduling order.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kinetics::{Environment, KineticParams, RateCoeffs, Trajectory};

/// Integer-valued system state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteState {
    /// Deposit volume, whole site-volumes.
    pub volume_units: u64,
    /// Unoccupied reaction-ready sites.
    pub free_sites: u64,
    /// Start time, seconds.
    pub time: f64,
    pub rng_seed: u64,
}

impl DiscreteState {
    pub fn new(volume_units: u64, free_sites: u64, rng_seed: u64) -> Self {
        DiscreteState {
            volume_units,
            free_sites,
            time: 0.0,
            rng_seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Event {
    SurfaceGrowth,
    DirectAttach,
    Etch,
}

/// Apply one reaction event; `sites_cap` is the initial site count.
fn apply(volume: &mut u64, free_sites: &mut u64, sites_cap: u64, event: Event) {
    match event {
        Event::SurfaceGrowth => {
            *volume += 1;
            *free_sites = free_sites.saturating_sub(1);
        }
        Event::DirectAttach => {
            *volume += 1;
        }
        Event::Etch => {
            *volume = volume.saturating_sub(1);
            if *free_sites < sites_cap {
                *free_sites += 1;
            }
        }
    }
}

/// Mean/variance summary of an ensemble of runs at fixed sample times.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSummary {
    pub sample_times: Vec<f64>,
    /// Ensemble mean volume per sample time.
    pub mean: Vec<f64>,
    /// Unbiased (n-1) sample variance per sample time; 0 for a single run.
    pub variance: Vec<f64>,
    pub n_runs: usize,
}

/// One exact trajectory from `initial` to `t_end`.
///
/// The returned trajectory holds the post-event state at every event time,
/// starting with the initial state at t = 0 and ending with a final sample
/// at `t_end`. Volume is piecewise constant between entries.
pub fn gillespie_run(
    params: &KineticParams,
    env: &Environment,
    initial: &DiscreteState,
    t_end: f64,
) -> Result<Trajectory> {
    if !t_end.is_finite() || t_end <= initial.time || !initial.time.is_finite() {
        return Err(Error::invalid(format!(
            "t_end must exceed the start time {}, got {t_end}",
            initial.time
        )));
    }
    let coeffs = RateCoeffs::new(params, env)?;
    run_with(&coeffs, initial, t_end, env)
}

fn run_with(
    coeffs: &RateCoeffs,
    initial: &DiscreteState,
    t_end: f64,
    env: &Environment,
) -> Result<Trajectory> {
    let sites_cap = initial.free_sites;
    let mut volume = initial.volume_units;
    let mut free_sites = initial.free_sites;
    let mut t = initial.time;
    let mut rng = ChaCha8Rng::seed_from_u64(initial.rng_seed);

    let mut times = vec![initial.time];
    let mut vols = vec![volume as f64];
    let mut sites = vec![free_sites as f64];

    loop {
        let r = coeffs.breakdown(volume as f64, free_sites as f64);
        let total = r.gamma_a + r.gamma_b + r.gamma_c;
        if !(total > 0.0) {
            // Absorbing state: nothing can fire any more.
            break;
        }
        // U in (0, 1]: guards ln(0).
        let u: f64 = 1.0 - rng.random::<f64>();
        t += -u.ln() / total;
        if t >= t_end {
            break;
        }
        let pick: f64 = rng.random::<f64>() * total;
        let event = if pick < r.gamma_a {
            Event::SurfaceGrowth
        } else if pick < r.gamma_a + r.gamma_b {
            Event::DirectAttach
        } else {
            Event::Etch
        };
        apply(&mut volume, &mut free_sites, sites_cap, event);
        times.push(t);
        vols.push(volume as f64);
        sites.push(free_sites as f64);
    }
    times.push(t_end);
    vols.push(volume as f64);
    sites.push(free_sites as f64);

    Ok(Trajectory {
        times,
        volume: vols,
        sites,
        p_o2: env.p_o2,
        laser_power: env.laser_power,
    })
}

/// Per-run seeds: a fixed odd stride decorrelates neighbouring run indices
/// while keeping the mapping trivially reproducible.
fn derive_seed(base: u64, run: usize) -> u64 {
    base.wrapping_add((run as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Ensemble of independent runs sampled on a shared time grid.
///
/// Runs are embarrassingly parallel (one derived seed per run index) and the
/// summary is identical with or without the `parallel` feature.
pub fn gillespie_ensemble(
    params: &KineticParams,
    env: &Environment,
    initial: &DiscreteState,
    t_end: f64,
    n_runs: usize,
    sample_times: &[f64],
) -> Result<EnsembleSummary> {
    if n_runs == 0 {
        return Err(Error::invalid("n_runs must be at least 1"));
    }
    if sample_times.is_empty() {
        return Err(Error::invalid("sample_times must not be empty"));
    }
    for w in sample_times.windows(2) {
        if !(w[1] > w[0]) {
            return Err(Error::invalid(
                "sample_times must be strictly increasing",
            ));
        }
    }
    let first = sample_times[0];
    let last = *sample_times.last().unwrap();
    if !first.is_finite() || first < initial.time || last > t_end {
        return Err(Error::invalid(format!(
            "sample_times must lie within [{}, {t_end}]; got [{first}, {last}]",
            initial.time
        )));
    }
    let coeffs = RateCoeffs::new(params, env)?;

    let samples: Vec<Result<Vec<f64>>> = map_indexed(n_runs, |i| {
        let seeded = DiscreteState {
            rng_seed: derive_seed(initial.rng_seed, i),
            ..*initial
        };
        let traj = run_with(&coeffs, &seeded, t_end, env)?;
        sample_times.iter().map(|&t| traj.volume_before(t)).collect()
    });

    let mut runs = Vec::with_capacity(n_runs);
    for s in samples {
        runs.push(s?);
    }

    let m = sample_times.len();
    let mut mean = vec![0.0; m];
    let mut variance = vec![0.0; m];
    for j in 0..m {
        let sum: f64 = runs.iter().map(|r| r[j]).sum();
        mean[j] = sum / n_runs as f64;
        if n_runs > 1 {
            let ss: f64 = runs.iter().map(|r| (r[j] - mean[j]).powi(2)).sum();
            variance[j] = ss / (n_runs as f64 - 1.0);
        }
    }
    Ok(EnsembleSummary {
        sample_times: sample_times.to_vec(),
        mean,
        variance,
        n_runs,
    })
}
