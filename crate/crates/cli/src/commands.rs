//! Subcommand implementations and the config/flag merging they share.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use serde::{Deserialize, Serialize};

use lic_core::analysis::{
    characterize, classify_sweep, label_point, GrowthMetrics, Regime, RegimeReport,
    RegimeThresholds, SweepClassification, REFERENCE_TIME,
};
use lic_core::error::{Error, Result};
use lic_core::fit::fit as run_fit;
use lic_core::io::{
    load_calibration, load_fit_spec, load_raw_record, load_sim_config, write_averaged_csv,
    write_calibration, write_ensemble_csv, write_fit_residuals_csv, write_fit_result_json,
    write_reduced_csv, write_sweep_json, write_sweep_summary_csv, write_trajectory_csv,
    write_volume_table_csv, read_dims_csv, SimConfig,
};
use lic_core::kinetics::{
    simulate as integrate, Environment, KineticParams, LicState, DEFAULT_DT, DEFAULT_LASER_POWER,
};
use lic_core::pipeline::{average_at, reduce, AveragedPoint, ReducedCurve, MARKER_SPACING};
use lic_core::stochastic::{gillespie_ensemble, DiscreteState};
use lic_core::volumetry::{estimate_volume, fit_calibration, Calibration};

use crate::{
    AnalyzeArgs, FitArgs, GillespieCheckArgs, SimulateArgs, SweepArgs, VolumeArgs,
};

/// Name of the built-in parameter set.
const BUILTIN_PARAMS: &str = "supp-heuristic";
/// Name of the built-in calibration.
const BUILTIN_CALIBRATION: &str = "reference";
/// Environment variable naming the default config directory.
const CONFIG_DIR_VAR: &str = "LIC_CONFIG_DIR";

// ---------------------------------------------------------------------------
// shared plumbing

fn open(path: &Path) -> Result<File> {
    File::open(path)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

/// Output sink: a file when a path is given, stdout otherwise.
fn out_writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(std::io::stdout())),
    })
}

fn load_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_reader(BufReader::new(open(path)?))
        .map_err(|e| Error::Data(format!("{}: {e}", path.display())))
}

fn write_json_pretty(mut writer: impl Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    Ok(())
}

/// Resolve `spec` as a literal path, then as `$LIC_CONFIG_DIR/<spec>.json`.
fn locate(spec: &str) -> Option<PathBuf> {
    let direct = Path::new(spec);
    if direct.is_file() {
        return Some(direct.to_path_buf());
    }
    let dir = std::env::var_os(CONFIG_DIR_VAR)?;
    let named = Path::new(&dir).join(format!("{spec}.json"));
    named.is_file().then_some(named)
}

fn resolve_params(spec: &str) -> Result<KineticParams> {
    if spec == BUILTIN_PARAMS {
        return Ok(KineticParams::supp_heuristic());
    }
    let path = locate(spec).ok_or_else(|| {
        Error::invalid(format!(
            "parameter set {spec:?} is neither {BUILTIN_PARAMS:?}, an existing file, \
             nor a <name>.json under ${CONFIG_DIR_VAR}"
        ))
    })?;
    let params: KineticParams = load_json(&path)?;
    params.validate()?;
    Ok(params)
}

fn resolve_calibration(spec: &str) -> Result<Calibration> {
    if spec == BUILTIN_CALIBRATION {
        return Ok(Calibration::reference());
    }
    let path = locate(spec).ok_or_else(|| {
        Error::invalid(format!(
            "calibration {spec:?} is neither {BUILTIN_CALIBRATION:?}, an existing file, \
             nor a <name>.json under ${CONFIG_DIR_VAR}"
        ))
    })?;
    load_calibration(&path)
}

/// Parameter set from the flag if given, else from the config, else an error.
fn params_from(flag: Option<&str>, config: Option<KineticParams>) -> Result<KineticParams> {
    match flag {
        Some(spec) => resolve_params(spec),
        None => {
            let params = config.ok_or_else(|| {
                Error::invalid("no parameter set: pass --params or put \"params\" in --config")
            })?;
            params.validate()?;
            Ok(params)
        }
    }
}

/// Initial vacant sites: explicit value, else the parameter set's site cap.
fn initial_sites(sites0: Option<f64>, params: &KineticParams) -> Result<f64> {
    match sites0 {
        Some(s) => Ok(s),
        None if params.n_laser.is_finite() => Ok(params.n_laser),
        None => Err(Error::invalid(
            "the site cap is unbounded, so the initial site count cannot default to it; \
             pass --sites0",
        )),
    }
}

fn thresholds_from(
    base: Option<RegimeThresholds>,
    onset: Option<f64>,
    etch: Option<f64>,
    rate: Option<f64>,
) -> RegimeThresholds {
    let mut t = base.unwrap_or_default();
    if let Some(v) = onset {
        t.onset_threshold = v;
    }
    if let Some(v) = etch {
        t.etch_noise = v;
    }
    if let Some(v) = rate {
        t.rate_tolerance = v;
    }
    t
}

// ---------------------------------------------------------------------------
// simulate

pub(crate) fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let config: Option<SimConfig> = args.config.as_deref().map(load_sim_config).transpose()?;
    let (cfg_params, cfg_env) = match config {
        Some(c) => (Some(c.params), Some(c.environment)),
        None => (None, None),
    };
    let params = params_from(args.params.as_deref(), cfg_params)?;

    let mut env = match cfg_env {
        Some(e) => e,
        None => Environment::new(args.p_o2.ok_or_else(|| {
            Error::invalid("no oxygen pressure: pass --p-o2 or put \"environment\" in --config")
        })?),
    };
    if let Some(p) = args.p_o2 {
        env.p_o2 = p;
    }
    if let Some(w) = args.laser_power {
        env.laser_power = w;
    }
    env.validate()?;

    let cal = resolve_calibration(&args.calibration)?;
    let initial = LicState::new(args.v0, initial_sites(args.sites0, &params)?)?;
    let traj = integrate(&params, &env, &initial, args.t_end, args.dt)?;
    write_trajectory_csv(out_writer(args.output.as_deref())?, &traj, &cal)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// sweep

/// Log-spaced pressure range; `n = 1` degenerates to the single point `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct LogRange {
    lo: f64,
    hi: f64,
    n: usize,
}

impl LogRange {
    fn points(&self) -> Result<Vec<f64>> {
        if !self.lo.is_finite() || !self.hi.is_finite() || self.lo <= 0.0 || self.hi < self.lo {
            return Err(Error::invalid(format!(
                "log range needs 0 < lo <= hi, got [{}, {}]",
                self.lo, self.hi
            )));
        }
        if self.n == 0 {
            return Err(Error::invalid("log range needs at least 1 point"));
        }
        if self.n == 1 {
            if self.lo != self.hi {
                return Err(Error::invalid(
                    "a single-point log range needs lo = hi",
                ));
            }
            return Ok(vec![self.lo]);
        }
        let (la, lb) = (self.lo.log10(), self.hi.log10());
        Ok((0..self.n)
            .map(|i| 10f64.powf(la + (lb - la) * i as f64 / (self.n - 1) as f64))
            .collect())
    }
}

fn parse_log_range(s: &str) -> Result<LogRange> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::invalid(format!("log range must be LO:HI:N, got {s:?}")));
    }
    let field = |what: &str, v: &str| -> Result<f64> {
        v.parse()
            .map_err(|_| Error::invalid(format!("bad log-range {what} {v:?}")))
    };
    Ok(LogRange {
        lo: field("start", parts[0])?,
        hi: field("end", parts[1])?,
        n: parts[2]
            .parse()
            .map_err(|_| Error::invalid(format!("bad log-range count {:?}", parts[2])))?,
    })
}

/// The default sweep: 25 log-spaced pressures over [1e-8, 10] mbar plus the
/// 4.6e-3 mbar reference point where modeled growth peaks.
fn default_pressures() -> Vec<f64> {
    let mut p: Vec<f64> = (0..25)
        .map(|i| 10f64.powf(-8.0 + 9.0 * i as f64 / 24.0))
        .collect();
    p.push(4.6e-3);
    p.sort_by(f64::total_cmp);
    p.dedup();
    p
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct SweepConfig {
    params: Option<KineticParams>,
    pressures: Option<Vec<f64>>,
    log_range: Option<LogRange>,
    t_ref: Option<f64>,
    dt: Option<f64>,
    v0: Option<f64>,
    sites0: Option<f64>,
    laser_power: Option<f64>,
    thresholds: Option<RegimeThresholds>,
}

/// Sweep classification that also accepts 1- or 2-point "sweeps": each point
/// still gets its own label, with the peak/rate context shrunk to the points
/// given.
fn classify_points(
    points: &[(f64, GrowthMetrics)],
    thresholds: &RegimeThresholds,
) -> Result<SweepClassification> {
    if points.len() >= 3 {
        return classify_sweep(points, thresholds);
    }
    if points.is_empty() {
        return Err(Error::invalid("pressure set is empty"));
    }
    if points.iter().any(|(p, _)| !p.is_finite() || *p < 0.0) {
        return Err(Error::invalid("pressures must be finite and non-negative"));
    }
    let mut sorted: Vec<&(f64, GrowthMetrics)> = points.iter().collect();
    sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    if sorted.windows(2).any(|w| w[0].0 == w[1].0) {
        return Err(Error::invalid("duplicate pressure in sweep"));
    }
    let max_rate = sorted
        .iter()
        .map(|(_, m)| m.post_onset_rate)
        .fold(0.0_f64, f64::max);
    let reports: Vec<RegimeReport> = sorted
        .iter()
        .map(|&&(p, m)| RegimeReport {
            p_o2: p,
            onset_time: m.onset_time,
            post_onset_rate: m.post_onset_rate,
            delta_at_reference: m.delta_at_reference,
            regime: label_point(&m, thresholds),
            no_growth: m.no_growth,
            rate_matches_peak: max_rate > 0.0
                && m.post_onset_rate >= (1.0 - thresholds.rate_tolerance) * max_rate,
        })
        .collect();
    let peak = reports
        .iter()
        .fold(None::<&RegimeReport>, |acc, r| match acc {
            Some(best) if best.delta_at_reference >= r.delta_at_reference => Some(best),
            _ => Some(r),
        })
        .expect("non-empty by the check above");
    Ok(SweepClassification {
        peak_pressure: peak.p_o2,
        reports,
    })
}

pub(crate) fn sweep(args: SweepArgs) -> Result<ExitCode> {
    let cfg: SweepConfig = match args.config.as_deref() {
        Some(p) => load_json(p)?,
        None => SweepConfig::default(),
    };
    if cfg.pressures.is_some() && cfg.log_range.is_some() {
        return Err(Error::invalid(
            "config sets both \"pressures\" and \"log_range\"; keep one",
        ));
    }
    let params = params_from(args.params.as_deref(), cfg.params)?;

    let mut pressures = if let Some(list) = args.pressures {
        list
    } else if let Some(range) = args.log_range.as_deref() {
        parse_log_range(range)?.points()?
    } else if let Some(list) = cfg.pressures {
        list
    } else if let Some(range) = cfg.log_range {
        range.points()?
    } else {
        default_pressures()
    };
    if pressures.is_empty() {
        return Err(Error::invalid("pressure set is empty"));
    }
    pressures.sort_by(f64::total_cmp);
    pressures.dedup();

    let t_ref = args.t_ref.or(cfg.t_ref).unwrap_or(REFERENCE_TIME);
    let dt = args.dt.or(cfg.dt).unwrap_or(DEFAULT_DT);
    let v0 = args.v0.or(cfg.v0).unwrap_or(0.0);
    let sites = initial_sites(args.sites0.or(cfg.sites0), &params)?;
    let laser_power = args
        .laser_power
        .or(cfg.laser_power)
        .unwrap_or(DEFAULT_LASER_POWER);
    let thresholds = thresholds_from(
        cfg.thresholds,
        args.onset_threshold,
        args.etch_noise,
        args.rate_tolerance,
    );
    if !t_ref.is_finite() || t_ref <= 0.0 || !dt.is_finite() || dt <= 0.0 {
        return Err(Error::invalid(format!(
            "t_ref and dt must be positive, got {t_ref} and {dt}"
        )));
    }

    // Integrate past t_ref so the growth delta never extrapolates.
    let t_sim = (t_ref / dt).ceil().max(1.0) * dt;
    let mut points = Vec::with_capacity(pressures.len());
    for (i, &p) in pressures.iter().enumerate() {
        let mut env = Environment::new(p);
        env.laser_power = laser_power;
        env.validate()?;
        let initial = LicState::new(v0, sites)?;
        let traj = integrate(&params, &env, &initial, t_sim, dt)?;
        let curve = traj.volume_curve(&format!("sweep-{i}"))?;
        points.push((p, characterize(&curve, t_ref)?));
    }

    let classification = classify_points(&points, &thresholds)?;
    write_sweep_summary_csv(out_writer(args.output.as_deref())?, &classification, t_ref)?;
    if let Some(path) = &args.json {
        write_sweep_json(create(path)?, &classification)?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// analyze

#[derive(Serialize)]
struct RecordReport {
    pillar_id: String,
    p_o2_mbar: f64,
    #[serde(rename = "laser_power_mW")]
    laser_power_mw: f64,
    onset_time_s: f64,
    post_onset_rate: f64,
    delta_at_reference: f64,
    no_growth: bool,
    regime: Regime,
}

#[derive(Serialize)]
struct AnalyzeReport {
    t_ref_s: f64,
    marker_spacing_s: f64,
    records: Vec<RecordReport>,
    averaged: Vec<AveragedPoint>,
    /// Sweep classification over replicate-averaged metrics; present with
    /// at least 3 distinct pressures.
    sweep: Option<SweepClassification>,
}

/// Pointwise mean of replicate metrics; a group is no-growth only when every
/// replicate is.
fn mean_metrics(group: &[GrowthMetrics]) -> GrowthMetrics {
    let n = group.len() as f64;
    GrowthMetrics {
        onset_time: group.iter().map(|m| m.onset_time).sum::<f64>() / n,
        post_onset_rate: group.iter().map(|m| m.post_onset_rate).sum::<f64>() / n,
        fit_residual: group.iter().map(|m| m.fit_residual).sum::<f64>() / n,
        delta_at_reference: group.iter().map(|m| m.delta_at_reference).sum::<f64>() / n,
        no_growth: group.iter().all(|m| m.no_growth),
    }
}

pub(crate) fn analyze(args: AnalyzeArgs) -> Result<ExitCode> {
    let t_ref = args.t_ref.unwrap_or(REFERENCE_TIME);
    let spacing = args.marker_spacing.unwrap_or(MARKER_SPACING);
    let thresholds = thresholds_from(
        None,
        args.onset_threshold,
        args.etch_noise,
        args.rate_tolerance,
    );

    let mut curves: Vec<ReducedCurve> = Vec::with_capacity(args.records.len());
    for path in &args.records {
        let record = load_raw_record(path)?;
        let reduced = reduce(&record, spacing)?;
        if let Some(dir) = &args.reduced_dir {
            std::fs::create_dir_all(dir).map_err(|e| {
                Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", dir.display())))
            })?;
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "record".into());
            write_reduced_csv(create(&dir.join(format!("{stem}.reduced.csv")))?, &reduced)?;
        }
        curves.push(reduced);
    }

    let mut metrics = Vec::with_capacity(curves.len());
    let mut records = Vec::with_capacity(curves.len());
    for rc in &curves {
        let m = characterize(&rc.as_curve(), t_ref)?;
        records.push(RecordReport {
            pillar_id: rc.meta.pillar_id.clone(),
            p_o2_mbar: rc.meta.p_o2,
            laser_power_mw: rc.meta.laser_power,
            onset_time_s: m.onset_time,
            post_onset_rate: m.post_onset_rate,
            delta_at_reference: m.delta_at_reference,
            no_growth: m.no_growth,
            regime: label_point(&m, &thresholds),
        });
        metrics.push(m);
    }

    // Group replicates by pressure (records sharing an exact sidecar value).
    let mut order: Vec<usize> = (0..curves.len()).collect();
    order.sort_by(|&a, &b| curves[a].meta.p_o2.total_cmp(&curves[b].meta.p_o2));
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for idx in order {
        match groups.last_mut() {
            Some(g) if curves[g[0]].meta.p_o2 == curves[idx].meta.p_o2 => g.push(idx),
            _ => groups.push(vec![idx]),
        }
    }

    let mut averaged = Vec::with_capacity(groups.len());
    let mut sweep_points = Vec::with_capacity(groups.len());
    for g in &groups {
        let members: Vec<ReducedCurve> = g.iter().map(|&i| curves[i].clone()).collect();
        averaged.push(average_at(&members, t_ref)?);
        let ms: Vec<GrowthMetrics> = g.iter().map(|&i| metrics[i]).collect();
        sweep_points.push((curves[g[0]].meta.p_o2, mean_metrics(&ms)));
    }
    let sweep = if groups.len() >= 3 {
        Some(classify_sweep(&sweep_points, &thresholds)?)
    } else {
        None
    };

    if let Some(path) = &args.averaged_csv {
        write_averaged_csv(create(path)?, &averaged)?;
    }
    let report = AnalyzeReport {
        t_ref_s: t_ref,
        marker_spacing_s: spacing,
        records,
        averaged,
        sweep,
    };
    write_json_pretty(out_writer(args.output.as_deref())?, &report)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// fit

pub(crate) fn fit(args: FitArgs) -> Result<ExitCode> {
    let spec = load_fit_spec(&args.spec)?;
    let mut curves = Vec::with_capacity(args.records.len());
    for path in &args.records {
        let record = load_raw_record(path)?;
        curves.push(reduce(&record, spec.marker_spacing)?.as_curve());
    }
    let result = run_fit(&curves, &spec)?;
    write_fit_result_json(out_writer(args.output.as_deref())?, &result)?;
    if let Some(path) = &args.residuals {
        let ids: Vec<String> = curves.iter().map(|c| c.meta.pillar_id.clone()).collect();
        write_fit_residuals_csv(create(path)?, &ids, &result.per_curve)?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// volume

pub(crate) fn volume(args: VolumeArgs) -> Result<ExitCode> {
    let rows = read_dims_csv(BufReader::new(open(&args.dims)?))?;
    let mut table = Vec::with_capacity(rows.len());
    let mut points = Vec::with_capacity(rows.len());
    for row in &rows {
        let est = estimate_volume(&row.dims)?;
        points.push((row.fluorescence, est.mean));
        table.push((row.pillar_id.clone(), est));
    }
    write_volume_table_csv(out_writer(args.output.as_deref())?, &table)?;
    if let Some(path) = &args.calibration_out {
        let cal = fit_calibration(&points, args.power)?;
        write_calibration(create(path)?, &cal)?;
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// gillespie-check

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CheckConfig {
    params: Option<KineticParams>,
    p_o2: Option<f64>,
    laser_power: Option<f64>,
    t_end: Option<f64>,
    dt: Option<f64>,
    v0_units: Option<u64>,
    sites: Option<u64>,
    runs: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    tolerance: Option<f64>,
}

#[derive(Serialize)]
struct CheckSample {
    t_s: f64,
    ensemble_mean: f64,
    deterministic: f64,
    rel_deviation: f64,
}

#[derive(Serialize)]
struct CheckReport {
    runs: usize,
    seed: u64,
    t_end_s: f64,
    dt_s: f64,
    v0_units: u64,
    sites: u64,
    tolerance: f64,
    max_rel_deviation: f64,
    pass: bool,
    samples: Vec<CheckSample>,
}

pub(crate) fn gillespie_check(args: GillespieCheckArgs) -> Result<ExitCode> {
    let cfg: CheckConfig = match args.config.as_deref() {
        Some(p) => load_json(p)?,
        None => CheckConfig::default(),
    };
    let params = params_from(args.params.as_deref(), cfg.params)?;
    let p_o2 = args.p_o2.or(cfg.p_o2).unwrap_or(4.6e-3);
    let laser_power = args
        .laser_power
        .or(cfg.laser_power)
        .unwrap_or(DEFAULT_LASER_POWER);
    let t_end = args.t_end.or(cfg.t_end).unwrap_or(2000.0);
    let dt = args.dt.or(cfg.dt).unwrap_or(DEFAULT_DT);
    let v0_units = args.v0_units.or(cfg.v0_units).unwrap_or(64);
    let sites = args.sites.or(cfg.sites).unwrap_or(100);
    let runs = args.runs.or(cfg.runs).unwrap_or(1000);
    let seed = args.seed.or(cfg.seed).unwrap_or(0);
    let samples = args.samples.or(cfg.samples).unwrap_or(8);
    let tolerance = args.tolerance.or(cfg.tolerance).unwrap_or(0.05);

    if !tolerance.is_finite() || tolerance <= 0.0 {
        return Err(Error::invalid(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    if sites > 10_000 {
        return Err(Error::invalid(format!(
            "the check is meant for small systems: sites must be at most 10000, got {sites}"
        )));
    }
    if samples == 0 {
        return Err(Error::invalid("samples must be at least 1"));
    }
    if !t_end.is_finite() || t_end <= 0.0 {
        return Err(Error::invalid(format!("t_end must be positive, got {t_end}")));
    }

    let mut env = Environment::new(p_o2);
    env.laser_power = laser_power;
    env.validate()?;

    let sample_times: Vec<f64> = (1..=samples)
        .map(|k| t_end * k as f64 / samples as f64)
        .collect();
    let ensemble = gillespie_ensemble(
        &params,
        &env,
        &DiscreteState::new(v0_units, sites, seed),
        t_end,
        runs,
        &sample_times,
    )?;

    // Integrate past t_end so every sample interpolates.
    let t_sim = (t_end / dt).ceil().max(1.0) * dt;
    let initial = LicState::new(v0_units as f64, sites as f64)?;
    let det_curve = integrate(&params, &env, &initial, t_sim, dt)?.volume_curve("det")?;

    let mut rows = Vec::with_capacity(samples);
    let mut max_dev = 0.0_f64;
    for (k, &t) in sample_times.iter().enumerate() {
        let det = det_curve.value_at(t)?;
        let mean = ensemble.mean[k];
        let dev = if mean == det {
            0.0
        } else {
            (mean - det).abs() / det.abs().max(f64::MIN_POSITIVE)
        };
        max_dev = max_dev.max(dev);
        rows.push(CheckSample {
            t_s: t,
            ensemble_mean: mean,
            deterministic: det,
            rel_deviation: dev,
        });
    }
    let pass = max_dev <= tolerance;

    println!("t_s,ensemble_mean,deterministic,rel_deviation");
    for r in &rows {
        println!(
            "{},{},{},{}",
            r.t_s, r.ensemble_mean, r.deterministic, r.rel_deviation
        );
    }
    println!(
        "max relative deviation {max_dev:.6} over {samples} samples ({runs} runs, tolerance {tolerance}): {}",
        if pass { "PASS" } else { "FAIL" }
    );

    if let Some(path) = &args.ensemble_csv {
        write_ensemble_csv(create(path)?, &ensemble)?;
    }
    if let Some(path) = &args.json {
        let report = CheckReport {
            runs,
            seed,
            t_end_s: t_end,
            dt_s: dt,
            v0_units,
            sites,
            tolerance,
            max_rel_deviation: max_dev,
            pass,
            samples: rows,
        };
        write_json_pretty(create(path)?, &report)?;
    }
    Ok(if pass { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
