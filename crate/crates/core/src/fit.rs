//! Kinetic parameter estimation from measured growth curves.
//!
//! The search runs in two stages, both in log10 space: a seeded Latin-style
//! stratified scan of the bounding box, then derivative-free Nelder-Mead
//! refinement from the best grid point. The loss is the sum of squared
//! residuals between observed and simulated curves, both reduced to the same
//! marker grid and baseline-subtracted at the first marker, so fits are
//! insensitive to raw sampling cadence and to constant offsets. Grid
//! evaluations fan out through the crate's indexed map and results are
//! reduced in index order, so identical inputs give identical results with
//! or without the `parallel` feature.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curve::{interp_linear, CurveKind, GrowthCurve};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::kinetics::{
    simulate, Environment, KineticParams, LicState, DEFAULT_DT, DEFAULT_LASER_POWER,
};
use crate::pipeline::{marker_grid, MARKER_SPACING};
use crate::volumetry::{rescale_ratio, Calibration};

/// Kinetic parameter a fit may vary. `N_laser` stays fixed: it sets the
/// volume unit, and letting it float would let the fit rescale the problem
/// instead of explaining it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FreeParam {
    #[serde(rename = "k_a")]
    KA,
    #[serde(rename = "k_b_prime")]
    KBPrime,
    #[serde(rename = "k_c")]
    KC,
    #[serde(rename = "k_o2")]
    KO2,
    #[serde(rename = "k_m")]
    KM,
    #[serde(rename = "p_m")]
    PM,
}

impl FreeParam {
    pub fn name(self) -> &'static str {
        match self {
            FreeParam::KA => "k_a",
            FreeParam::KBPrime => "k_b_prime",
            FreeParam::KC => "k_c",
            FreeParam::KO2 => "k_o2",
            FreeParam::KM => "k_m",
            FreeParam::PM => "p_m",
        }
    }

    fn get(self, params: &KineticParams) -> f64 {
        match self {
            FreeParam::KA => params.k_a,
            FreeParam::KBPrime => params.k_b_prime,
            FreeParam::KC => params.k_c,
            FreeParam::KO2 => params.k_o2,
            FreeParam::KM => params.k_m,
            FreeParam::PM => params.p_m,
        }
    }

    fn set(self, params: &mut KineticParams, value: f64) {
        match self {
            FreeParam::KA => params.k_a = value,
            FreeParam::KBPrime => params.k_b_prime = value,
            FreeParam::KC => params.k_c = value,
            FreeParam::KO2 => params.k_o2 = value,
            FreeParam::KM => params.k_m = value,
            FreeParam::PM => params.p_m = value,
        }
    }
}

impl std::fmt::Display for FreeParam {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive positive search interval for one free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bounds {
    pub lo: f64,
    pub hi: f64,
}

impl Bounds {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let b = Bounds { lo, hi };
        b.validate("bounds")?;
        Ok(b)
    }

    fn validate(&self, what: &str) -> Result<()> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo <= 0.0 || self.hi < self.lo {
            return Err(Error::invalid(format!(
                "{what} must satisfy 0 < lo <= hi with finite endpoints, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }
}

fn default_coverage_ratio() -> f64 {
    100.0
}

fn default_grid_points() -> usize {
    240
}

fn default_simplex_iters() -> usize {
    200
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

fn default_marker_spacing() -> f64 {
    MARKER_SPACING
}

fn default_laser_power() -> f64 {
    DEFAULT_LASER_POWER
}

/// What varies, inside which bounds, under which constraints, and how
/// candidate trajectories are generated and scored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitSpec {
    /// Values for every parameter the fit does not vary; free entries are
    /// overwritten per candidate.
    pub base: KineticParams,
    /// Free parameters with their search bounds (scanned in log10 space).
    pub free: Vec<(FreeParam, Bounds)>,
    /// Site-competition constraint floor: candidates must satisfy
    /// `K_O2 >= coverage_ratio_min * K_M`.
    #[serde(default = "default_coverage_ratio")]
    pub coverage_ratio_min: f64,
    /// Stage-one candidates.
    #[serde(default = "default_grid_points")]
    pub grid_points: usize,
    /// Stage-two simplex iterations (0 skips refinement).
    #[serde(default = "default_simplex_iters")]
    pub simplex_iters: usize,
    /// Integration step for candidate trajectories, seconds.
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Marker spacing for the residual grid, seconds.
    #[serde(default = "default_marker_spacing")]
    pub marker_spacing: f64,
    /// Seed for the stage-one sampler.
    #[serde(default)]
    pub seed: u64,
    /// Divide each curve's squared-residual sum by its marker count so short
    /// and long traces weigh equally.
    #[serde(default)]
    pub normalize_per_curve: bool,
    /// Initial deposit volume for candidate trajectories, site-volumes.
    #[serde(default)]
    pub v0: f64,
    /// Initial vacant surface sites; `None` uses the base `n_laser`.
    #[serde(default)]
    pub sites0: Option<f64>,
    /// Fluorescence calibration; required when any fitted curve is a
    /// fluorescence trace.
    #[serde(default)]
    pub calibration: Option<Calibration>,
}

impl FitSpec {
    /// Spec with library defaults for everything but the model and free set.
    pub fn new(base: KineticParams, free: Vec<(FreeParam, Bounds)>) -> Self {
        FitSpec {
            base,
            free,
            coverage_ratio_min: default_coverage_ratio(),
            grid_points: default_grid_points(),
            simplex_iters: default_simplex_iters(),
            dt: default_dt(),
            marker_spacing: default_marker_spacing(),
            seed: 0,
            normalize_per_curve: false,
            v0: 0.0,
            sites0: None,
            calibration: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.free.is_empty() {
            return Err(Error::invalid("fit spec lists no free parameters"));
        }
        for (i, (p, b)) in self.free.iter().enumerate() {
            b.validate(&format!("bounds for {p}"))?;
            if self.free[..i].iter().any(|(q, _)| q == p) {
                return Err(Error::invalid(format!("free parameter {p} listed twice")));
            }
        }
        if !self.coverage_ratio_min.is_finite() || self.coverage_ratio_min < 0.0 {
            return Err(Error::invalid(format!(
                "coverage_ratio_min must be finite and non-negative, got {}",
                self.coverage_ratio_min
            )));
        }
        if self.grid_points == 0 {
            return Err(Error::invalid("grid_points must be at least 1"));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !self.marker_spacing.is_finite() || self.marker_spacing <= 0.0 {
            return Err(Error::invalid(format!(
                "marker_spacing must be positive, got {}",
                self.marker_spacing
            )));
        }
        if !self.v0.is_finite() || self.v0 < 0.0 {
            return Err(Error::invalid(format!(
                "v0 must be finite and non-negative, got {}",
                self.v0
            )));
        }
        match self.sites0 {
            Some(s) if !s.is_finite() || s < 0.0 => {
                return Err(Error::invalid(format!(
                    "sites0 must be finite and non-negative, got {s}"
                )));
            }
            None if !self.base.n_laser.is_finite() => {
                return Err(Error::invalid(
                    "sites0 must be given explicitly when n_laser is infinite",
                ));
            }
            _ => {}
        }
        // The coverage constraint must be satisfiable somewhere in the box
        // spanned by the bounds and the fixed values.
        let k_o2_max = self.param_max(FreeParam::KO2);
        let k_m_min = self.param_min(FreeParam::KM);
        if k_o2_max < self.coverage_ratio_min * k_m_min {
            return Err(Error::Infeasible(format!(
                "K_O2 can reach at most {k_o2_max}, below the constraint floor {} * {k_m_min}",
                self.coverage_ratio_min
            )));
        }
        Ok(())
    }

    fn bounds_of(&self, p: FreeParam) -> Option<Bounds> {
        self.free.iter().find(|&&(q, _)| q == p).map(|&(_, b)| b)
    }

    fn param_max(&self, p: FreeParam) -> f64 {
        self.bounds_of(p).map_or(p.get(&self.base), |b| b.hi)
    }

    fn param_min(&self, p: FreeParam) -> f64 {
        self.bounds_of(p).map_or(p.get(&self.base), |b| b.lo)
    }

    /// Candidate parameters at a log10-space coordinate vector.
    fn params_at(&self, x_log: &[f64]) -> KineticParams {
        let mut p = self.base.clone();
        for (&(fp, _), &xl) in self.free.iter().zip(x_log) {
            fp.set(&mut p, 10f64.powf(xl));
        }
        p
    }
}

/// One completed search stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub stage: String,
    /// Objective evaluations spent in this stage.
    pub evaluations: usize,
    /// Best loss known when the stage finished.
    pub loss: f64,
}

/// Outcome of [`fit`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    /// Best feasible parameters found.
    pub params: KineticParams,
    /// Total loss at `params`.
    pub loss: f64,
    /// Loss contribution of each input curve, in input order.
    pub per_curve: Vec<f64>,
    /// Best loss after each search stage.
    pub trace: Vec<TracePoint>,
}

/// One observed curve, reduced to fitting form.
struct Prepared {
    env: Environment,
    markers: Vec<f64>,
    /// Observed values at markers, baseline-subtracted, in the curve's units.
    observed: Vec<f64>,
    /// Multiplier taking simulated site-volumes into the curve's units.
    unit_scale: f64,
    /// Simulation horizon covering the last marker on the dt grid.
    t_sim: f64,
}

fn prepare(curves: &[GrowthCurve], spec: &FitSpec) -> Result<Vec<Prepared>> {
    curves
        .iter()
        .map(|curve| {
            let mut env = Environment::new(curve.meta.p_o2);
            env.laser_power = curve.meta.laser_power;
            env.validate()?;
            let markers = marker_grid(curve.first_time(), curve.last_time(), spec.marker_spacing)
                .ok_or_else(|| {
                    Error::InsufficientData(format!(
                        "curve {:?} covers no marker at spacing {}",
                        curve.meta.pillar_id, spec.marker_spacing
                    ))
                })?;
            if markers.len() < 2 {
                return Err(Error::InsufficientData(format!(
                    "curve {:?} covers a single marker; at least 2 are needed to fit",
                    curve.meta.pillar_id
                )));
            }
            let raw = markers
                .iter()
                .map(|&m| curve.value_at(m.clamp(curve.first_time(), curve.last_time())))
                .collect::<Result<Vec<f64>>>()?;
            let baseline = raw[0];
            let observed = raw.iter().map(|v| v - baseline).collect();
            let unit_scale = match curve.meta.kind {
                CurveKind::Volume => 1.0,
                CurveKind::Fluorescence => {
                    let cal = spec.calibration.as_ref().ok_or_else(|| {
                        Error::invalid(format!(
                            "curve {:?} is a fluorescence trace but the spec has no calibration",
                            curve.meta.pillar_id
                        ))
                    })?;
                    1.0 / rescale_ratio(cal, curve.meta.laser_power)?.ratio
                }
            };
            let last = *markers.last().unwrap();
            let t_sim = (last / spec.dt).ceil() * spec.dt;
            Ok(Prepared {
                env,
                markers,
                observed,
                unit_scale,
                t_sim,
            })
        })
        .collect()
}

/// Log-space slack so vertices sitting exactly on a bound survive rounding.
const BOUND_SLACK: f64 = 1e-9;

struct Objective<'a> {
    spec: &'a FitSpec,
    prepared: &'a [Prepared],
    /// Per-dimension log10 bounds.
    lo: Vec<f64>,
    hi: Vec<f64>,
    initial: LicState,
}

impl<'a> Objective<'a> {
    fn new(spec: &'a FitSpec, prepared: &'a [Prepared]) -> Result<Self> {
        let lo = spec.free.iter().map(|(_, b)| b.lo.log10()).collect();
        let hi = spec.free.iter().map(|(_, b)| b.hi.log10()).collect();
        let initial = LicState::new(spec.v0, spec.sites0.unwrap_or(spec.base.n_laser))?;
        Ok(Objective {
            spec,
            prepared,
            lo,
            hi,
            initial,
        })
    }

    /// Per-curve losses at a log10-space point, or `None` when the point is
    /// out of bounds, infeasible, or produces a non-finite trajectory.
    fn curve_losses(&self, x: &[f64]) -> Option<Vec<f64>> {
        for j in 0..x.len() {
            if !(x[j] >= self.lo[j] - BOUND_SLACK && x[j] <= self.hi[j] + BOUND_SLACK) {
                return None;
            }
        }
        let params = self.spec.params_at(x);
        if params.k_o2 < self.spec.coverage_ratio_min * params.k_m
            || params.validate().is_err()
        {
            return None;
        }
        let mut losses = Vec::with_capacity(self.prepared.len());
        for prep in self.prepared {
            let traj = simulate(&params, &prep.env, &self.initial, prep.t_sim, self.spec.dt)
                .ok()?;
            let sim0 = interp_linear(&traj.times, &traj.volume, prep.markers[0]);
            let mut ssr = 0.0;
            for (&m, &obs) in prep.markers.iter().zip(&prep.observed) {
                let sim = interp_linear(&traj.times, &traj.volume, m);
                let r = (sim - sim0) * prep.unit_scale - obs;
                ssr += r * r;
            }
            if self.spec.normalize_per_curve {
                ssr /= prep.markers.len() as f64;
            }
            if !ssr.is_finite() {
                return None;
            }
            losses.push(ssr);
        }
        Some(losses)
    }

    /// Total loss; unusable points price as +inf so the search routes
    /// around them.
    fn eval(&self, x: &[f64]) -> f64 {
        self.curve_losses(x)
            .map_or(f64::INFINITY, |l| l.iter().sum())
    }
}

/// `a` strictly better than `b`: smaller loss, ties broken toward the
/// lexicographically smaller coordinate vector so the argmin is independent
/// of evaluation order.
fn better(loss_a: f64, x_a: &[f64], loss_b: f64, x_b: &[f64]) -> bool {
    match loss_a.total_cmp(&loss_b) {
        std::cmp::Ordering::Less => return true,
        std::cmp::Ordering::Greater => return false,
        std::cmp::Ordering::Equal => {}
    }
    for (a, b) in x_a.iter().zip(x_b) {
        match a.total_cmp(b) {
            std::cmp::Ordering::Less => return true,
            std::cmp::Ordering::Greater => return false,
            std::cmp::Ordering::Equal => {}
        }
    }
    false
}

/// Latin-style stratified sample: each dimension is split into `n` equal
/// log-space strata, one point drawn per stratum, stratum order shuffled
/// independently per dimension. Candidates are generated sequentially from
/// the seeded RNG, so the set is identical however it is later evaluated.
fn latin_grid(rng: &mut ChaCha8Rng, n: usize, lo: &[f64], hi: &[f64]) -> Vec<Vec<f64>> {
    let d = lo.len();
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(d);
    for j in 0..d {
        let width = (hi[j] - lo[j]) / n as f64;
        let mut col: Vec<f64> = (0..n)
            .map(|s| lo[j] + (s as f64 + rng.random::<f64>()) * width)
            .collect();
        col.shuffle(rng);
        columns.push(col);
    }
    (0..n)
        .map(|i| (0..d).map(|j| columns[j][i]).collect())
        .collect()
}

/// A deterministic candidate that satisfies the coverage constraint whenever
/// the box admits one at all: K_O2 at its top, K_M at its bottom, everything
/// else at the log-space midpoint. Appended to the grid so a sparse random
/// scan cannot miss a thin feasible sliver entirely.
fn feasible_corner(spec: &FitSpec, lo: &[f64], hi: &[f64]) -> Vec<f64> {
    spec.free
        .iter()
        .enumerate()
        .map(|(j, &(p, _))| match p {
            FreeParam::KO2 => hi[j],
            FreeParam::KM => lo[j],
            _ => 0.5 * (lo[j] + hi[j]),
        })
        .collect()
}

/// Nelder-Mead in log space. Returns the best point ever evaluated (never
/// worse than the starting incumbent), its loss, and the evaluation count.
fn nelder_mead(
    f: impl Fn(&[f64]) -> f64,
    x0: &[f64],
    f0: f64,
    lo: &[f64],
    hi: &[f64],
    max_iters: usize,
) -> (Vec<f64>, f64, usize) {
    let d = x0.len();
    let mut evals = 0usize;
    let mut best_x = x0.to_vec();
    let mut best_f = f0;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), f0));
    for j in 0..d {
        let mut v = x0.to_vec();
        let range = hi[j] - lo[j];
        if range > 0.0 {
            let mut h = 0.05 * range;
            if v[j] + h > hi[j] {
                h = -h;
            }
            v[j] += h;
        }
        let fv = f(&v);
        evals += 1;
        simplex.push((v, fv));
    }
    for (x, fx) in &simplex {
        if better(*fx, x, best_f, &best_x) {
            best_f = *fx;
            best_x = x.clone();
        }
    }

    for _ in 0..max_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let diam = simplex[1..]
            .iter()
            .flat_map(|(x, _)| x.iter().zip(&simplex[0].0).map(|(a, b)| (a - b).abs()))
            .fold(0.0_f64, f64::max);
        if diam < 1e-10 {
            break;
        }

        let centroid: Vec<f64> = (0..d)
            .map(|j| simplex[..d].iter().map(|(x, _)| x[j]).sum::<f64>() / d as f64)
            .collect();
        let (worst_x, worst_f) = simplex[d].clone();
        let reflected: Vec<f64> = (0..d)
            .map(|j| 2.0 * centroid[j] - worst_x[j])
            .collect();
        let f_r = f(&reflected);
        evals += 1;
        if better(f_r, &reflected, best_f, &best_x) {
            best_f = f_r;
            best_x = reflected.clone();
        }

        if f_r < simplex[0].1 {
            let expanded: Vec<f64> = (0..d)
                .map(|j| centroid[j] + 2.0 * (reflected[j] - centroid[j]))
                .collect();
            let f_e = f(&expanded);
            evals += 1;
            if better(f_e, &expanded, best_f, &best_x) {
                best_f = f_e;
                best_x = expanded.clone();
            }
            simplex[d] = if f_e < f_r {
                (expanded, f_e)
            } else {
                (reflected, f_r)
            };
        } else if f_r < simplex[d - 1].1 {
            simplex[d] = (reflected, f_r);
        } else {
            // Contract: toward the reflection if it improved on the worst
            // vertex, otherwise inward toward the worst vertex.
            let toward = if f_r < worst_f { &reflected } else { &worst_x };
            let contracted: Vec<f64> = (0..d)
                .map(|j| centroid[j] + 0.5 * (toward[j] - centroid[j]))
                .collect();
            let f_c = f(&contracted);
            evals += 1;
            if better(f_c, &contracted, best_f, &best_x) {
                best_f = f_c;
                best_x = contracted.clone();
            }
            if f_c < worst_f.min(f_r) {
                simplex[d] = (contracted, f_c);
            } else {
                // Shrink everything toward the best vertex.
                for k in 1..=d {
                    let xk: Vec<f64> = (0..d)
                        .map(|j| simplex[0].0[j] + 0.5 * (simplex[k].0[j] - simplex[0].0[j]))
                        .collect();
                    let fk = f(&xk);
                    evals += 1;
                    if better(fk, &xk, best_f, &best_x) {
                        best_f = fk;
                        best_x = xk.clone();
                    }
                    simplex[k] = (xk, fk);
                }
            }
        }
    }
    (best_x, best_f, evals)
}

/// Estimate the free parameters of `spec` from one or more observed curves.
///
/// Deterministic for a given seed, spec, and curve list. The returned
/// parameters always satisfy the bounds and the coverage constraint, and the
/// refined loss is never worse than the best grid candidate.
pub fn fit(curves: &[GrowthCurve], spec: &FitSpec) -> Result<FitResult> {
    spec.validate()?;
    if curves.is_empty() {
        return Err(Error::invalid("cannot fit an empty curve list"));
    }
    let prepared = prepare(curves, spec)?;
    let objective = Objective::new(spec, &prepared)?;

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut candidates = latin_grid(&mut rng, spec.grid_points, &objective.lo, &objective.hi);
    candidates.push(feasible_corner(spec, &objective.lo, &objective.hi));
    let losses = map_indexed(candidates.len(), |i| objective.eval(&candidates[i]));
    let mut best = 0;
    for i in 1..candidates.len() {
        if better(losses[i], &candidates[i], losses[best], &candidates[best]) {
            best = i;
        }
    }
    if !losses[best].is_finite() {
        return Err(Error::SingularFit(
            "no grid candidate produced a finite loss (degenerate model or data)".into(),
        ));
    }
    let mut trace = vec![TracePoint {
        stage: "grid".into(),
        evaluations: candidates.len(),
        loss: losses[best],
    }];

    let (x_best, loss_best) = if spec.simplex_iters > 0 {
        let (x, l, evals) = nelder_mead(
            |x| objective.eval(x),
            &candidates[best],
            losses[best],
            &objective.lo,
            &objective.hi,
            spec.simplex_iters,
        );
        trace.push(TracePoint {
            stage: "simplex".into(),
            evaluations: evals,
            loss: l,
        });
        (x, l)
    } else {
        (candidates.swap_remove(best), losses[best])
    };

    let params = spec.params_at(&x_best);
    let per_curve = objective
        .curve_losses(&x_best)
        .expect("best point is feasible by construction");
    Ok(FitResult {
        params,
        loss: loss_best,
        per_curve,
        trace,
    })
}

/// Knobs for [`sweep_predict_with`]. Defaults mirror the canonical setup:
/// 10 s steps, bare surface with `n_laser` vacant sites, standard power.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepOptions {
    #[serde(default = "default_dt")]
    pub dt: f64,
    /// Initial deposit volume, site-volumes.
    #[serde(default)]
    pub v0: f64,
    /// Initial vacant sites; `None` uses `n_laser`.
    #[serde(default)]
    pub sites0: Option<f64>,
    /// Laser power, mW.
    #[serde(default = "default_laser_power")]
    pub laser_power: f64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            dt: default_dt(),
            v0: 0.0,
            sites0: None,
            laser_power: default_laser_power(),
        }
    }
}

/// Net volume change at `t_ref`, simulated per oxygen pressure.
pub fn sweep_predict(
    params: &KineticParams,
    pressures: &[f64],
    t_ref: f64,
) -> Result<Vec<(f64, f64)>> {
    sweep_predict_with(params, pressures, t_ref, &SweepOptions::default())
}

/// [`sweep_predict`] with explicit initial state and stepping.
pub fn sweep_predict_with(
    params: &KineticParams,
    pressures: &[f64],
    t_ref: f64,
    opts: &SweepOptions,
) -> Result<Vec<(f64, f64)>> {
    params.validate()?;
    if pressures.is_empty() {
        return Err(Error::invalid("pressure sweep is empty"));
    }
    for &p in pressures {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::invalid(format!(
                "sweep pressures must be positive, got {p}"
            )));
        }
    }
    for w in pressures.windows(2) {
        if w[1] < w[0] {
            return Err(Error::invalid(format!(
                "sweep pressures must be sorted ascending ({} then {})",
                w[0], w[1]
            )));
        }
    }
    if !t_ref.is_finite() || t_ref <= 0.0 {
        return Err(Error::invalid(format!(
            "t_ref must be positive, got {t_ref}"
        )));
    }
    if !opts.dt.is_finite() || opts.dt <= 0.0 {
        return Err(Error::invalid(format!(
            "dt must be positive, got {}",
            opts.dt
        )));
    }
    let sites0 = opts.sites0.unwrap_or(params.n_laser);
    if !sites0.is_finite() {
        return Err(Error::invalid(
            "sites0 must be given explicitly when n_laser is infinite",
        ));
    }
    let initial = LicState::new(opts.v0, sites0)?;
    let t_sim = (t_ref / opts.dt).ceil() * opts.dt;
    let points = map_indexed(pressures.len(), |i| -> Result<(f64, f64)> {
        let mut env = Environment::new(pressures[i]);
        env.laser_power = opts.laser_power;
        let traj = simulate(params, &env, &initial, t_sim, opts.dt)?;
        let v_ref = interp_linear(&traj.times, &traj.volume, t_ref);
        Ok((pressures[i], v_ref - traj.volume[0]))
    });
    points.into_iter().collect()
}
