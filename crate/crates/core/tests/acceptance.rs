//! End-to-end acceptance suite: the numbered guarantees the toolkit ships
//! under, one test each.
//!
//! Each test prints a single `acceptance <n> (<title>): PASS — <evidence>`
//! line on success; a failed assertion names the check and the measured
//! value. Checks with a runtime budget also assert the elapsed wall time.
//!
//! Tolerances (rationale next to each constant):
//!
//! * cube growth vs closed form: 1% relative at the final time, under step
//!   refinement (forward Euler is first order, so the error must shrink as
//!   the step shrinks and land inside 1% at dt = 1e-3 s);
//! * cap-saturated linear growth: 1e-9 relative (the update is exact per
//!   step, leaving only float accumulation over ~1e3 steps);
//! * ensemble mean vs deterministic trajectory: 5% relative at every sample
//!   time (Monte-Carlo error at 1 500 runs is ~0.2%, discreteness bias well
//!   below 1%);
//! * pure-birth event counts: 3 sigma around the Poisson mean and variance;
//! * calibration rescale: exact arithmetic, checked at 1e-12 and with a 3%
//!   envelope (a one-significant-figure rounding, 6e-4, of the exact product
//!   sits 3.7% away, so the envelope is anchored on the product itself);
//! * volume formulas: 1e-12 relative on hand values and on degree-3
//!   homogeneity (pure float arithmetic, no iteration);
//! * marker reduction: exact zeros at the baseline marker, 1e-12 on linear
//!   records (linear interpolation is exact on a line);
//! * two-replicate 68% confidence half-width: 1% against the two-decimal
//!   table value 1.84 for Student-t with one degree of freedom;
//! * onset recovery: exact (1e-6 s) on noiseless hinges; with 5%
//!   multiplicative noise the breakpoint must land within one marker spacing
//!   in at least 95 of 100 seeded trials;
//! * fit round trip: every recovered parameter within 20% of truth in log10
//!   space from noiseless 4-pressure synthetic data; the single-free-
//!   parameter case within 1e-6 relative.

use std::time::Instant;

use lic_core::analysis::{characterize, classify_sweep, fit_onset, Regime, RegimeThresholds};
use lic_core::curve::{CurveKind, CurveMeta, GrowthCurve};
use lic_core::fit::{fit, sweep_predict, sweep_predict_with, Bounds, FitSpec, FreeParam, SweepOptions};
use lic_core::kinetics::{
    simulate, Environment, KineticParams, LicState, DEFAULT_DT, DEFAULT_LASER_POWER,
};
use lic_core::pipeline::{average_at, reduce, RawRecord, ReducedCurve, MARKER_SPACING};
use lic_core::stochastic::{gillespie_ensemble, DiscreteState};
use lic_core::volumetry::{estimate_volume, rescale_ratio, Calibration, DepositDims};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

const CUBE_GROWTH_REL_TOL: f64 = 0.01;
const LINEAR_EXACT_REL_TOL: f64 = 1e-9;
const ENSEMBLE_REL_TOL: f64 = 0.05;
const CALIBRATION_REL_TOL: f64 = 0.03;
const FORMULA_REL_TOL: f64 = 1e-12;
const CI_TABLE_REL_TOL: f64 = 0.01;
const NOISY_ONSET_MIN_SUCCESSES: usize = 95;
const FIT_LOG10_TOL: f64 = 0.079_181_246_047_624_83; // log10(1.2): 20% in log space
const SINGLE_PARAM_REL_TOL: f64 = 1e-6;

fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(f64::MIN_POSITIVE)
}

/// Deterministic trajectory as a volume curve, from a bare or seeded surface.
fn volume_curve_at(
    params: &KineticParams,
    p_o2: f64,
    v0: f64,
    t_end: f64,
    id: &str,
) -> GrowthCurve {
    let env = Environment::new(p_o2);
    let initial = LicState::new(v0, params.n_laser).unwrap();
    simulate(params, &env, &initial, t_end, DEFAULT_DT)
        .unwrap()
        .volume_curve(id)
        .unwrap()
}

#[test]
fn acceptance_1_euler_matches_closed_forms() {
    let started = Instant::now();

    // Unlimited cap, growth through the precursor channel only:
    // dV/dt = k * V^(2/3) has the closed solution V(t) = (V0^(1/3) + k t / 3)^3.
    let params = KineticParams {
        k_a: 0.0,
        k_b_prime: 3.0,
        k_c: 0.0,
        k_o2: 1.0,
        k_m: 1.0,
        p_m: 0.0,
        n_laser: f64::INFINITY,
        intensity_factor: 1.0,
    };
    let env = Environment::new(1.0);
    let initial = LicState::new(1.0, 1.0).unwrap();
    let t_end = 2.0;
    let closed = (1.0_f64 + t_end).powi(3); // V0 = 1, k = 3: (1 + t)^3

    let err_at = |dt: f64| {
        let traj = simulate(&params, &env, &initial, t_end, dt).unwrap();
        rel_err(*traj.volume.last().unwrap(), closed)
    };
    let coarse = err_at(1e-2);
    let finer = err_at(5e-3);
    let finest = err_at(1e-3);
    assert!(
        finer < coarse && finest < finer,
        "acceptance 1: refinement must shrink the error, got {coarse:.3e} -> {finer:.3e} -> {finest:.3e}"
    );
    assert!(
        finest <= CUBE_GROWTH_REL_TOL,
        "acceptance 1: cube-growth error {finest:.3e} exceeds {CUBE_GROWTH_REL_TOL}"
    );

    // Cap-saturated linear growth is exact per step: V0 = 1000 site-volumes
    // puts V^(2/3) = 100 right at the 100-site cap, so every 10 s step adds
    // exactly k_B' * 100 * dt.
    let sat = KineticParams {
        k_b_prime: 2.5e-3,
        n_laser: 100.0,
        ..params
    };
    let v0 = 1000.0;
    let t_sat = 12_000.0;
    let traj = simulate(&sat, &env, &LicState::new(v0, 100.0).unwrap(), t_sat, DEFAULT_DT).unwrap();
    let linear = v0 + 2.5e-3 * 100.0 * t_sat;
    let sat_err = rel_err(*traj.volume.last().unwrap(), linear);
    assert!(
        sat_err <= LINEAR_EXACT_REL_TOL,
        "acceptance 1: saturated linear error {sat_err:.3e} exceeds {LINEAR_EXACT_REL_TOL}"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "acceptance 1: took {elapsed:?}, budget 1 s");
    println!(
        "acceptance 1 (analytic ODE oracle): PASS — cube-growth error {finest:.2e} (refining {coarse:.2e} -> {finer:.2e}), saturated-linear error {sat_err:.2e}, {elapsed:?}"
    );
}

#[test]
fn acceptance_2_ensemble_mean_tracks_deterministic_trajectory() {
    let started = Instant::now();

    // Matched comparison on a 100-site system. The precursor and etch
    // channels have identical state dependence (min(V^(2/3), cap)) in both
    // engines, so their ensemble mean must track the deterministic curve;
    // the site-mediated channel's continuum site bookkeeping is a step-size
    // approximation with no exact event-level counterpart, so it is held at
    // zero here and exercised by its own unit tests.
    let params = KineticParams {
        k_a: 0.0,
        ..KineticParams::supp_heuristic()
    };
    let env = Environment::new(4.6e-3);
    let t_end = 2000.0;
    let sample_times: Vec<f64> = (1..=8).map(|i| 250.0 * i as f64).collect();

    let summary = gillespie_ensemble(
        &params,
        &env,
        &DiscreteState::new(64, 100, 0x11C),
        t_end,
        1500,
        &sample_times,
    )
    .unwrap();
    let ode = simulate(
        &params,
        &env,
        &LicState::new(64.0, 100.0).unwrap(),
        t_end,
        DEFAULT_DT,
    )
    .unwrap();

    let mut worst = 0.0_f64;
    for (k, &t) in sample_times.iter().enumerate() {
        let want = ode.volume[(t / DEFAULT_DT).round() as usize];
        let err = rel_err(summary.mean[k], want);
        worst = worst.max(err);
        assert!(
            err <= ENSEMBLE_REL_TOL,
            "acceptance 2: ensemble mean {:.3} vs deterministic {want:.3} at t = {t} ({err:.3e} > {ENSEMBLE_REL_TOL})",
            summary.mean[k]
        );
    }

    // Pure birth at a saturated cap is a Poisson process: lambda = k_B' * 100
    // = 0.25 events/s, so over T = 400 s the event count has mean and
    // variance lambda T = 100.
    let birth = KineticParams {
        k_a: 0.0,
        k_b_prime: 2.5e-3,
        k_c: 0.0,
        ..KineticParams::supp_heuristic()
    };
    let lambda_t = 100.0;
    let n_runs = 10_000;
    let poisson = gillespie_ensemble(
        &birth,
        &env,
        &DiscreteState::new(1000, 100, 0xB117),
        400.0,
        n_runs,
        &[400.0],
    )
    .unwrap();
    let mean_events = poisson.mean[0] - 1000.0;
    let var_events = poisson.variance[0];
    // Standard error of the sample mean is sqrt(lambda T / n); for the sample
    // variance of a Poisson count, sqrt((mu4 - sigma^4 (n-3)/(n-1)) / n) with
    // mu4 = lambda T (1 + 3 lambda T).
    let mean_tol = 3.0 * (lambda_t / n_runs as f64).sqrt();
    let mu4 = lambda_t * (1.0 + 3.0 * lambda_t);
    let var_tol = 3.0
        * ((mu4 - lambda_t * lambda_t * (n_runs as f64 - 3.0) / (n_runs as f64 - 1.0))
            / n_runs as f64)
            .sqrt();
    assert!(
        (mean_events - lambda_t).abs() <= mean_tol,
        "acceptance 2: Poisson mean {mean_events:.3} outside {lambda_t} +- {mean_tol:.3}"
    );
    assert!(
        (var_events - lambda_t).abs() <= var_tol,
        "acceptance 2: Poisson variance {var_events:.3} outside {lambda_t} +- {var_tol:.3}"
    );

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "acceptance 2: took {elapsed:?}, budget 1 min");
    println!(
        "acceptance 2 (stochastic/deterministic agreement): PASS — worst mean deviation {worst:.2e} over {} sample times ({} runs); Poisson events mean {mean_events:.2} (tol {mean_tol:.2}), variance {var_events:.1} (tol {var_tol:.1}); {elapsed:?}",
        sample_times.len(),
        summary.n_runs
    );
}

#[test]
fn acceptance_3_pressure_sweep_reproduces_the_regime_pattern() {
    let started = Instant::now();

    let params = KineticParams::supp_heuristic();
    let t_ref = 12_000.0;
    let pressures: Vec<f64> = (0..25)
        .map(|i| 10f64.powf(-8.0 + 9.0 * i as f64 / 24.0))
        .collect();

    // (a) Growth delta over pressure peaks strictly inside the range.
    let sweep = sweep_predict(&params, &pressures, t_ref).unwrap();
    let peak = sweep
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .unwrap()
        .0;
    assert!(
        peak != 0 && peak != sweep.len() - 1,
        "acceptance 3a: growth peak sits at the sweep edge (index {peak})"
    );
    assert!(
        sweep[peak].1 > sweep[0].1 && sweep[peak].1 > sweep[sweep.len() - 1].1 && sweep[peak].1 > 0.0,
        "acceptance 3a: peak delta {} does not dominate the endpoints",
        sweep[peak].1
    );

    // (b) Onset delay strictly increasing across at least 3 consecutive
    // delayed-onset pressures. Onsets are fitted on the full 10 s-resolution
    // trajectories: the breakpoint scan quantizes to the curve's sample grid,
    // and neighbouring delays differ by only a few hundred seconds.
    let mut points = Vec::new();
    for (i, &p) in pressures.iter().enumerate() {
        let curve = volume_curve_at(&params, p, 0.0, t_ref, &format!("sweep-{i}"));
        points.push((p, characterize(&curve, t_ref).unwrap()));
    }
    let classified = classify_sweep(&points, &RegimeThresholds::default()).unwrap();
    let mut run = 1usize;
    let mut best_run = 0usize;
    for w in classified.reports.windows(2) {
        if w[0].regime == Regime::II
            && w[1].regime == Regime::II
            && w[1].onset_time > w[0].onset_time
        {
            run += 1;
        } else {
            run = 1;
        }
        best_run = best_run.max(run);
    }
    assert!(
        best_run >= 3,
        "acceptance 3b: longest strictly-increasing delayed-onset run is {best_run}, need >= 3"
    );

    // (c) A pre-existing deposit shrinks at the top of the pressure range.
    let seeded = SweepOptions {
        v0: 1e4,
        ..SweepOptions::default()
    };
    let top = &pressures[pressures.len() - 2..];
    let etch = sweep_predict_with(&params, top, t_ref, &seeded).unwrap();
    for (p, delta) in &etch {
        assert!(
            *delta <= 0.0,
            "acceptance 3c: seeded deposit grew by {delta} at {p} mbar"
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "acceptance 3: took {elapsed:?}, budget 2 min");
    println!(
        "acceptance 3 (regime pattern): PASS — peak delta {:.0} at {:.2e} mbar (interior), {} consecutive rising onsets, seeded deltas {:.0} and {:.0} at the top pressures; {elapsed:?}",
        sweep[peak].1,
        sweep[peak].0,
        best_run,
        etch[0].1,
        etch[1].1
    );
}

#[test]
fn acceptance_4_calibration_rescale_reproduces_the_reference_conversion() {
    let reference = Calibration::reference();
    let rescaled = rescale_ratio(&reference, DEFAULT_LASER_POWER).unwrap();
    let product = 9.3e-3 * 0.092 / 1.48;
    let err = rel_err(rescaled.ratio, product);
    assert!(
        err <= 1e-12,
        "acceptance 4: rescaled ratio {} differs from the exact product {product} ({err:.3e})",
        rescaled.ratio
    );
    assert!(
        err <= CALIBRATION_REL_TOL,
        "acceptance 4: rescaled ratio outside the {CALIBRATION_REL_TOL} envelope"
    );
    assert_eq!(rescaled.reference_power, DEFAULT_LASER_POWER);
    println!(
        "acceptance 4 (calibration arithmetic): PASS — {:.6e} um^3 s/Mcts at {} mW (exact product, error {err:.1e})",
        rescaled.ratio, rescaled.reference_power
    );
}

#[test]
fn acceptance_5_volume_formulas_match_hand_values_and_scale_cubically() {
    // Hand values for h = 1, w = d = 2 (mean lateral extent 2):
    //   spherical cap  pi/6 h^3 + pi/8 l^2 h = pi/6 + pi/2 = 2 pi / 3
    //   cylinder       pi l^2 h              = 4 pi
    //   gaussian       2 pi h w d / (2 * 2.355) = 8 pi / 4.71
    let est = estimate_volume(&DepositDims::new(1.0, 2.0, 2.0).unwrap()).unwrap();
    let pi = std::f64::consts::PI;
    for (name, got, want) in [
        ("spherical cap", est.spherical_cap, 2.0 * pi / 3.0),
        ("cylinder", est.cylinder, 4.0 * pi),
        ("gaussian", est.gaussian, 8.0 * pi / 4.71),
    ] {
        let err = rel_err(got, want);
        assert!(
            err <= FORMULA_REL_TOL,
            "acceptance 5: {name} = {got} vs hand value {want} ({err:.3e})"
        );
    }

    // Degree-3 homogeneity: scaling all dimensions by c scales every
    // reported volume (and both uncertainty figures) by c^3.
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0_f64;
    for _ in 0..200 {
        let h = rng.random_range(0.05..5.0);
        let w = rng.random_range(0.05..5.0);
        let d = rng.random_range(0.05..5.0);
        let c: f64 = rng.random_range(0.1..10.0);
        let base = estimate_volume(&DepositDims::new(h, w, d).unwrap()).unwrap();
        let scaled = estimate_volume(&DepositDims::new(c * h, c * w, c * d).unwrap()).unwrap();
        let c3 = c * c * c;
        for (got, want) in [
            (scaled.spherical_cap, c3 * base.spherical_cap),
            (scaled.cylinder, c3 * base.cylinder),
            (scaled.gaussian, c3 * base.gaussian),
            (scaled.mean, c3 * base.mean),
            (scaled.spread, c3 * base.spread),
            (scaled.dim_uncertainty, c3 * base.dim_uncertainty),
        ] {
            let err = rel_err(got, want);
            worst = worst.max(err);
            assert!(
                err <= 64.0 * FORMULA_REL_TOL,
                "acceptance 5: homogeneity violated for ({h}, {w}, {d}) x {c}: {got} vs {want}"
            );
        }
    }
    println!(
        "acceptance 5 (volume formulas): PASS — hand values to 1e-12, homogeneity worst deviation {worst:.1e} over 200 random deposits"
    );
}

#[test]
fn acceptance_6_marker_reduction_and_replicate_interval_match_hand_values() {
    // 100 s cadence along the line v(t) = 0.5 + 0.001 t: every 10-minute
    // marker lands on a sample, so reduction must reproduce 0.6 per marker
    // step exactly, with an exactly-zero baseline.
    let record = RawRecord {
        pillar_id: "line-100s".into(),
        p_o2: 4.6e-3,
        laser_power: 1.48,
        samples: (0..=120)
            .map(|i| {
                let t = 100.0 * i as f64;
                (t, 0.5 + 1e-3 * t)
            })
            .collect(),
    };
    let reduced = reduce(&record, MARKER_SPACING).unwrap();
    assert_eq!(reduced.marker_times.len(), 21);
    assert_eq!(reduced.values[0], 0.0, "acceptance 6: baseline marker must be exactly zero");
    for (k, v) in reduced.values.iter().enumerate() {
        let want = 0.6 * k as f64;
        assert!(
            (v - want).abs() <= 1e-12 * want.max(1.0),
            "acceptance 6: marker {k} value {v} vs hand value {want}"
        );
    }

    // 110 s cadence (no marker lands on a sample): linear interpolation is
    // still exact on a line.
    let offgrid = RawRecord {
        pillar_id: "line-110s".into(),
        p_o2: 4.6e-3,
        laser_power: 1.48,
        samples: (0..=110)
            .map(|i| {
                let t = 110.0 * i as f64;
                (t, 2.0 + 1e-2 * t)
            })
            .collect(),
    };
    let reduced = reduce(&offgrid, MARKER_SPACING).unwrap();
    for (k, v) in reduced.values.iter().enumerate() {
        let want = 1e-2 * MARKER_SPACING * k as f64;
        assert!(
            (v - want).abs() <= 1e-9 * want.max(1.0),
            "acceptance 6: off-grid marker {k} value {v} vs hand value {want}"
        );
    }

    // Two replicates with deltas 1 and 3 at the same marker: mean 2, sample
    // standard deviation sqrt(2), and the central-68% Student-t critical
    // value for one degree of freedom is 1.84 (two-decimal table), so the
    // half-width is 1.84 * sqrt(2) / sqrt(2) = 1.84.
    let meta = |id: &str| CurveMeta::new(id, 4.6e-3, 1.48, CurveKind::Fluorescence);
    let curves = vec![
        ReducedCurve {
            marker_times: vec![0.0, 600.0],
            values: vec![0.0, 1.0],
            meta: meta("rep-a"),
        },
        ReducedCurve {
            marker_times: vec![0.0, 600.0],
            values: vec![0.0, 3.0],
            meta: meta("rep-b"),
        },
    ];
    let avg = average_at(&curves, 600.0).unwrap();
    assert_eq!(avg.n, 2);
    assert!(rel_err(avg.mean, 2.0) <= 1e-12);
    let half = avg.ci68_halfwidth.expect("two replicates define an interval");
    let table = 1.84;
    let err = rel_err(half, table);
    assert!(
        err <= CI_TABLE_REL_TOL,
        "acceptance 6: 68% half-width {half:.4} vs table value {table} ({err:.3e})"
    );
    println!(
        "acceptance 6 (pipeline oracle): PASS — marker values exact on both cadences, n=2 half-width {half:.4} within {CI_TABLE_REL_TOL} of {table}"
    );
}

#[test]
fn acceptance_7_onset_recovery_is_exact_then_robust_to_noise() {
    let times: Vec<f64> = (0..=20).map(|k| MARKER_SPACING * k as f64).collect();
    let t0 = 3000.0;
    let slope = 0.02;
    let hinge = |t: f64| 1.0 + slope * (t - t0).max(0.0);
    let meta = CurveMeta::new("hinge", 4.6e-3, 1.48, CurveKind::Fluorescence);

    let clean = GrowthCurve::new(
        times.clone(),
        times.iter().map(|&t| hinge(t)).collect(),
        meta.clone(),
    )
    .unwrap();
    let fit = fit_onset(&clean).unwrap();
    assert!(
        (fit.onset_time - t0).abs() <= 1e-6,
        "acceptance 7: noiseless onset {} vs {t0}",
        fit.onset_time
    );
    assert!(
        (fit.rate - slope).abs() <= 1e-9,
        "acceptance 7: noiseless slope {} vs {slope}",
        fit.rate
    );
    assert!(fit.residual <= 1e-12, "acceptance 7: noiseless residual {}", fit.residual);

    let trials = 100;
    let mut successes = 0;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(700 + trial);
        let noisy: Vec<f64> = times
            .iter()
            .map(|&t| {
                let z: f64 = rng.sample(StandardNormal);
                hinge(t) * (1.0 + 0.05 * z)
            })
            .collect();
        let curve = GrowthCurve::new(times.clone(), noisy, meta.clone()).unwrap();
        let noisy_fit = fit_onset(&curve).unwrap();
        if (noisy_fit.onset_time - t0).abs() <= MARKER_SPACING {
            successes += 1;
        }
    }
    assert!(
        successes >= NOISY_ONSET_MIN_SUCCESSES,
        "acceptance 7: only {successes}/{trials} noisy trials recovered the onset within one marker spacing"
    );
    println!(
        "acceptance 7 (onset fitting): PASS — noiseless breakpoint and slope exact, {successes}/{trials} noisy trials within +-{MARKER_SPACING} s"
    );
}

#[test]
fn acceptance_8_fit_round_trips_recover_the_generating_parameters() {
    let started = Instant::now();
    let truth = KineticParams::supp_heuristic();
    let t_end = 12_000.0;

    // Single free parameter on a cap-saturated linear curve: the loss in
    // k_B' is strictly convex, so the simplex stage must land on the exact
    // generating value.
    let single_curve = {
        let env = Environment::new(4.6e-3);
        let params = KineticParams {
            k_a: 0.0,
            k_c: 0.0,
            ..truth
        };
        let initial = LicState::new(1000.0, 100.0).unwrap();
        simulate(&params, &env, &initial, t_end, DEFAULT_DT)
            .unwrap()
            .volume_curve("single")
            .unwrap()
    };
    let mut spec = FitSpec::new(
        KineticParams {
            k_a: 0.0,
            k_c: 0.0,
            ..truth
        },
        vec![(FreeParam::KBPrime, Bounds::new(2.5e-4, 2.5e-2).unwrap())],
    );
    spec.v0 = 1000.0;
    spec.grid_points = 64;
    spec.seed = 1;
    let result = fit(&[single_curve], &spec).unwrap();
    let single_err = rel_err(result.params.k_b_prime, truth.k_b_prime);
    assert!(
        single_err <= SINGLE_PARAM_REL_TOL,
        "acceptance 8: single-parameter recovery {} vs {} ({single_err:.3e})",
        result.params.k_b_prime,
        truth.k_b_prime
    );

    // Three free parameters from four pressures spanning the sweep: the low
    // pressure pins the site channel, the mid pressures the precursor
    // channel, the high pressure the etch channel.
    let pressures = [1e-5, 4.6e-3, 1.33e-1, 1.78];
    let curves: Vec<GrowthCurve> = pressures
        .iter()
        .enumerate()
        .map(|(i, &p)| volume_curve_at(&truth, p, 0.0, t_end, &format!("round-{i}")))
        .collect();
    let spec = FitSpec {
        seed: 42,
        ..FitSpec::new(
            truth.clone(),
            vec![
                (FreeParam::KA, Bounds::new(2.5e4, 2.5e6).unwrap()),
                (FreeParam::KBPrime, Bounds::new(2.5e-4, 2.5e-2).unwrap()),
                (FreeParam::KC, Bounds::new(1.25e-4, 1.25e-2).unwrap()),
            ],
        )
    };
    let result = fit(&curves, &spec).unwrap();
    let recovered = [
        ("k_a", result.params.k_a, truth.k_a),
        ("k_b_prime", result.params.k_b_prime, truth.k_b_prime),
        ("k_c", result.params.k_c, truth.k_c),
    ];
    let mut worst_log = 0.0_f64;
    for (name, got, want) in recovered {
        let log_err = (got / want).log10().abs();
        worst_log = worst_log.max(log_err);
        assert!(
            log_err <= FIT_LOG10_TOL,
            "acceptance 8: {name} recovered as {got:.4e} vs {want:.4e} (log10 error {log_err:.3})"
        );
    }

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "acceptance 8: took {elapsed:?}, budget 5 min");
    println!(
        "acceptance 8 (fit round trip): PASS — single-parameter error {single_err:.1e}, three-parameter worst log10 error {worst_log:.4} (tol {FIT_LOG10_TOL:.4}), final loss {:.3e}; {elapsed:?}",
        result.loss
    );
}
