//! File formats: CSV tables and small JSON documents.
//!
//! All tables are UTF-8 CSV with a header row and `.` as the decimal
//! separator. Floats are written with Rust's shortest round-trip formatting,
//! so identical inputs always produce byte-identical files. Readers reject
//! malformed rows with messages naming the offending line.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::SweepClassification;
use crate::error::{Error, Result};
use crate::fit::{FitResult, FitSpec};
use crate::kinetics::{Environment, KineticParams, Trajectory};
use crate::pipeline::{AveragedPoint, RawRecord, ReducedCurve};
use crate::stochastic::EnsembleSummary;
use crate::volumetry::{Calibration, DepositDims, VolumeEstimate};

/// A simulation setup: model constants plus chamber conditions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimConfig {
    pub params: KineticParams,
    pub environment: Environment,
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.environment.validate()
    }
}

/// Read and validate a simulation config document.
pub fn read_sim_config(reader: impl Read) -> Result<SimConfig> {
    let cfg: SimConfig = serde_json::from_reader(reader)?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_sim_config(path: &Path) -> Result<SimConfig> {
    read_sim_config(BufReader::new(open(path)?))
}

pub fn write_sim_config(writer: impl Write, cfg: &SimConfig) -> Result<()> {
    write_json(writer, cfg)
}

/// Read and validate a fit specification document.
pub fn read_fit_spec(reader: impl Read) -> Result<FitSpec> {
    let spec: FitSpec = serde_json::from_reader(reader)?;
    spec.validate()?;
    Ok(spec)
}

pub fn load_fit_spec(path: &Path) -> Result<FitSpec> {
    read_fit_spec(BufReader::new(open(path)?))
}

pub fn write_fit_result_json(writer: impl Write, result: &FitResult) -> Result<()> {
    write_json(writer, result)
}

/// Per-curve residual table for a fit: `pillar_id,loss`.
pub fn write_fit_residuals_csv(
    mut writer: impl Write,
    ids: &[String],
    per_curve: &[f64],
) -> Result<()> {
    if ids.len() != per_curve.len() {
        return Err(Error::invalid(format!(
            "{} curve ids vs {} residuals",
            ids.len(),
            per_curve.len()
        )));
    }
    writeln!(writer, "pillar_id,loss")?;
    for (id, loss) in ids.iter().zip(per_curve) {
        writeln!(writer, "{},{}", csv_escape(id), loss)?;
    }
    Ok(())
}

pub fn read_calibration(reader: impl Read) -> Result<Calibration> {
    let cal: Calibration = serde_json::from_reader(reader)?;
    Calibration::new(cal.ratio, cal.reference_power)
}

pub fn load_calibration(path: &Path) -> Result<Calibration> {
    read_calibration(BufReader::new(open(path)?))
}

pub fn write_calibration(writer: impl Write, cal: &Calibration) -> Result<()> {
    write_json(writer, cal)
}

/// Trajectory table: `t_s,volume,N_S,fluorescence_Mcts_s`. The fluorescence
/// column converts simulated site-volumes through `cal` at the trajectory's
/// laser power (site-volumes map 1:1 to um^3).
pub fn write_trajectory_csv(
    mut writer: impl Write,
    traj: &Trajectory,
    cal: &Calibration,
) -> Result<()> {
    let fluor = traj.fluorescence(cal)?;
    writeln!(writer, "t_s,volume,N_S,fluorescence_Mcts_s")?;
    for i in 0..traj.times.len() {
        writeln!(
            writer,
            "{},{},{},{}",
            traj.times[i], traj.volume[i], traj.sites[i], fluor[i]
        )?;
    }
    Ok(())
}

/// Ensemble table: `t_s,mean_volume,var_volume`.
pub fn write_ensemble_csv(mut writer: impl Write, summary: &EnsembleSummary) -> Result<()> {
    writeln!(writer, "t_s,mean_volume,var_volume")?;
    for i in 0..summary.sample_times.len() {
        writeln!(
            writer,
            "{},{},{}",
            summary.sample_times[i], summary.mean[i], summary.variance[i]
        )?;
    }
    Ok(())
}

/// Sidecar metadata accompanying one raw fluorescence CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawMetadata {
    pub pillar_id: String,
    pub p_o2_mbar: f64,
    #[serde(rename = "laser_power_mW")]
    pub laser_power_mw: f64,
}

/// Read one raw record from a `t_s,fluorescence_Mcts_s` CSV plus its JSON
/// sidecar.
pub fn read_raw_record(csv: impl Read, sidecar: impl Read) -> Result<RawRecord> {
    let meta: RawMetadata = serde_json::from_reader(sidecar)?;
    let mut reader = csv_reader(csv);
    expect_headers(&mut reader, &["t_s", "fluorescence_Mcts_s"])?;
    let mut samples = Vec::new();
    for row in reader.records() {
        let record = row.map_err(|e| Error::Data(format!("raw csv: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 2 {
            return Err(Error::Data(format!(
                "line {line}: expected 2 fields, got {}",
                record.len()
            )));
        }
        samples.push((
            parse_f64(&record[0], "t_s", line)?,
            parse_f64(&record[1], "fluorescence_Mcts_s", line)?,
        ));
    }
    let record = RawRecord {
        pillar_id: meta.pillar_id,
        p_o2: meta.p_o2_mbar,
        laser_power: meta.laser_power_mw,
        samples,
    };
    record.validate()?;
    Ok(record)
}

/// Load a raw record from `<name>.csv`, taking metadata from the `<name>.json`
/// sidecar next to it.
pub fn load_raw_record(csv_path: &Path) -> Result<RawRecord> {
    let sidecar_path = csv_path.with_extension("json");
    let csv = open(csv_path)?;
    let sidecar = open(&sidecar_path)?;
    read_raw_record(BufReader::new(csv), BufReader::new(sidecar))
        .map_err(|e| e.with_context(&csv_path.display().to_string()))
}

/// Reduced-curve table: `t_s,delta_Mcts_s`.
pub fn write_reduced_csv(mut writer: impl Write, curve: &ReducedCurve) -> Result<()> {
    writeln!(writer, "t_s,delta_Mcts_s")?;
    for (t, v) in curve.marker_times.iter().zip(&curve.values) {
        writeln!(writer, "{t},{v}")?;
    }
    Ok(())
}

/// Replicate-average table: `p_o2_mbar,n,mean_delta_Mcts_s,ci68_halfwidth_Mcts_s`.
/// An undefined half-width (n = 1) is written as an empty field.
pub fn write_averaged_csv(mut writer: impl Write, points: &[AveragedPoint]) -> Result<()> {
    writeln!(
        writer,
        "p_o2_mbar,n,mean_delta_Mcts_s,ci68_halfwidth_Mcts_s"
    )?;
    for p in points {
        match p.ci68_halfwidth {
            Some(hw) => writeln!(writer, "{},{},{},{}", p.p_o2, p.n, p.mean, hw)?,
            None => writeln!(writer, "{},{},{},", p.p_o2, p.n, p.mean)?,
        }
    }
    Ok(())
}

/// Sweep summary table: `p_o2_mbar,onset_min,rate,delta_<m>min,regime`,
/// where `<m>` is the reference time in minutes (200 for the default
/// 12000 s), so the column name states what the delta was measured at.
pub fn write_sweep_summary_csv(
    mut writer: impl Write,
    sweep: &SweepClassification,
    t_ref: f64,
) -> Result<()> {
    writeln!(
        writer,
        "p_o2_mbar,onset_min,rate,delta_{}min,regime",
        minutes_label(t_ref)
    )?;
    for r in &sweep.reports {
        writeln!(
            writer,
            "{},{},{},{},{}",
            r.p_o2,
            r.onset_time / 60.0,
            r.post_onset_rate,
            r.delta_at_reference,
            r.regime
        )?;
    }
    Ok(())
}

/// Full sweep classification (reports plus peak pressure) as JSON.
pub fn write_sweep_json(writer: impl Write, sweep: &SweepClassification) -> Result<()> {
    write_json(writer, sweep)
}

/// One measured pillar: SEM dimensions plus its fluorescence rate.
#[derive(Debug, Clone, PartialEq)]
pub struct DimsRecord {
    pub pillar_id: String,
    pub dims: DepositDims,
    /// Mcts/s.
    pub fluorescence: f64,
}

/// Read a `pillar_id,h_um,w_um,d_um,fluorescence_Mcts_s` dimension table.
pub fn read_dims_csv(reader: impl Read) -> Result<Vec<DimsRecord>> {
    let mut rdr = csv_reader(reader);
    expect_headers(
        &mut rdr,
        &["pillar_id", "h_um", "w_um", "d_um", "fluorescence_Mcts_s"],
    )?;
    let mut rows = Vec::new();
    for row in rdr.records() {
        let record = row.map_err(|e| Error::Data(format!("dims csv: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 5 {
            return Err(Error::Data(format!(
                "line {line}: expected 5 fields, got {}",
                record.len()
            )));
        }
        let dims = DepositDims::new(
            parse_f64(&record[1], "h_um", line)?,
            parse_f64(&record[2], "w_um", line)?,
            parse_f64(&record[3], "d_um", line)?,
        )
        .map_err(|e| Error::Data(format!("line {line}: {e}")))?;
        rows.push(DimsRecord {
            pillar_id: record[0].to_string(),
            dims,
            fluorescence: parse_f64(&record[4], "fluorescence_Mcts_s", line)?,
        });
    }
    Ok(rows)
}

/// Volume-estimate table, one row per pillar.
pub fn write_volume_table_csv(
    mut writer: impl Write,
    rows: &[(String, VolumeEstimate)],
) -> Result<()> {
    writeln!(
        writer,
        "pillar_id,spherical_cap_um3,cylinder_um3,gaussian_um3,mean_um3,spread_um3,dim_uncertainty_um3"
    )?;
    for (id, v) in rows {
        writeln!(
            writer,
            "{},{},{},{},{},{},{}",
            csv_escape(id),
            v.spherical_cap,
            v.cylinder,
            v.gaussian,
            v.mean,
            v.spread,
            v.dim_uncertainty
        )?;
    }
    Ok(())
}

impl Error {
    /// Prefix an error with the file (or source) it came from.
    pub(crate) fn with_context(self, context: &str) -> Error {
        match self {
            Error::Data(msg) => Error::Data(format!("{context}: {msg}")),
            Error::InvalidInput(msg) => Error::InvalidInput(format!("{context}: {msg}")),
            Error::InsufficientData(msg) => Error::InsufficientData(format!("{context}: {msg}")),
            Error::Json(e) => Error::Data(format!("{context}: json error: {e}")),
            other => other,
        }
    }
}

fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(
            e.kind(),
            format!("{}: {e}", path.display()),
        ))
    })
}

fn write_json(mut writer: impl Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    Ok(())
}

fn csv_reader(reader: impl Read) -> csv::Reader<impl Read> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(reader)
}

fn expect_headers<R: Read>(reader: &mut csv::Reader<R>, expected: &[&str]) -> Result<()> {
    let headers = reader
        .headers()
        .map_err(|e| Error::Data(format!("csv header: {e}")))?;
    let got: Vec<&str> = headers.iter().collect();
    if got != expected {
        return Err(Error::Data(format!(
            "csv header mismatch: expected {expected:?}, got {got:?}"
        )));
    }
    Ok(())
}

fn parse_f64(field: &str, what: &str, line: u64) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|_| Error::Data(format!("line {line}: {what} is not a number: {field:?}")))
}

/// Reference time as a minutes label: whole minutes print without a
/// fractional part.
fn minutes_label(t_ref: f64) -> String {
    let m = t_ref / 60.0;
    if m.fract() == 0.0 && m.abs() < 1e15 {
        format!("{}", m as i64)
    } else {
        format!("{m}")
    }
}

/// Quote a field if it contains CSV metacharacters.
fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}
