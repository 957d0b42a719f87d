//! CSV, JSONL and plain-text reports of finished cases.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::sweep::CaseResult;
use crate::dynamics::Mechanism;
use crate::error::{Error, Result};

/// One row of `speeds.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeedRow {
    pub case: String,
    pub noa: usize,
    pub stiffness: String,
    pub hm: String,
    pub speed_m_s: f64,
    pub speed_bl_s: f64,
    pub total_length_m: f64,
    pub frequency_hz: f64,
    pub best_session: usize,
}

/// One row of `sessions.csv`: the best gait found by each training session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionRow {
    pub case: String,
    pub noa: usize,
    pub stiffness: String,
    pub hm: String,
    pub session: usize,
    pub seed: u64,
    pub speed_m_s: f64,
    pub speed_bl_s: f64,
}

/// One row of `wavelengths.csv`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavelengthRow {
    pub case: String,
    pub noa: usize,
    pub stiffness: String,
    pub hm: String,
    pub wavelength_m: f64,
    pub wave_per_segment: f64,
    pub slope_rad_m: f64,
    pub flag: String,
}

/// One row of `thrust_<case>.csv`: window-averaged force along the swimming
/// direction (N).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThrustRow {
    pub segment: String,
    pub added_mass_n: f64,
    pub pressure_n: f64,
    pub drag_n: f64,
    pub friction_n: f64,
    pub total_n: f64,
}

/// One row of `tail_torque_<case>.csv`: RMS generalized torque on the fin
/// joint (N·m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub source: String,
    pub rms_n_m: f64,
}

pub fn speed_row(r: &CaseResult) -> SpeedRow {
    SpeedRow {
        case: r.id.clone(),
        noa: r.spec.noa,
        stiffness: r.spec.stiffness.to_string(),
        hm: r.spec.hm.to_string(),
        speed_m_s: r.speed,
        speed_bl_s: r.body_lengths_per_second,
        total_length_m: r.total_length,
        frequency_hz: r.best_policy.frequency,
        best_session: r.best_session,
    }
}

pub fn session_rows(r: &CaseResult) -> Vec<SessionRow> {
    r.sessions
        .iter()
        .map(|s| SessionRow {
            case: r.id.clone(),
            noa: r.spec.noa,
            stiffness: r.spec.stiffness.to_string(),
            hm: r.spec.hm.to_string(),
            session: s.session,
            seed: s.seed,
            speed_m_s: s.best_reward,
            speed_bl_s: s.best_reward / r.total_length,
        })
        .collect()
}

pub fn wavelength_row(r: &CaseResult) -> WavelengthRow {
    WavelengthRow {
        case: r.id.clone(),
        noa: r.spec.noa,
        stiffness: r.spec.stiffness.to_string(),
        hm: r.spec.hm.to_string(),
        wavelength_m: r.wavelength.wavelength,
        wave_per_segment: r.wavelength.wave_per_segment,
        slope_rad_m: r.wavelength.slope,
        flag: r.wavelength.flag.clone().unwrap_or_default(),
    }
}

pub fn thrust_rows(r: &CaseResult) -> Vec<ThrustRow> {
    let t = &r.thrust;
    let row = |segment: &str, v: &[f64; 4]| ThrustRow {
        segment: segment.to_string(),
        added_mass_n: v[Mechanism::AddedMass as usize],
        pressure_n: v[Mechanism::Pressure as usize],
        drag_n: v[Mechanism::Drag as usize],
        friction_n: v[Mechanism::Friction as usize],
        total_n: v.iter().sum(),
    };
    let mut rows: Vec<ThrustRow> = t.labels.iter().zip(&t.by_segment).map(|(l, v)| row(l, v)).collect();
    rows.push(row("all", &t.totals));
    rows
}

pub fn tail_rows(r: &CaseResult) -> Vec<TailRow> {
    let t = &r.tail;
    [
        ("spring", t.spring),
        ("added_mass", t.added_mass),
        ("pressure", t.pressure),
        ("drag", t.drag),
        ("friction", t.friction),
    ]
    .into_iter()
    .map(|(s, v)| TailRow {
        source: s.to_string(),
        rms_n_m: v,
    })
    .collect()
}

fn write_csv<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

/// Plain-text table of the headline numbers.
pub fn summary_table(results: &[CaseResult]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:>9} {:>7} {:>7} {:>9} {:>8} {:>11} {:>8}",
        "case", "cm/s", "BL/s", "f Hz", "lambda cm", "wave/seg", "main thrust", "Ta/Ts"
    );
    for r in results {
        let main = r.thrust.dominant_thrust().map_or("-", Mechanism::name);
        let ratio = r.tail.added_mass_to_spring();
        let _ = writeln!(
            s,
            "{:<12} {:>9.3} {:>7.3} {:>7.3} {:>9.2} {:>8.3} {:>11} {:>8.3}",
            r.id,
            100.0 * r.speed,
            r.body_lengths_per_second,
            r.best_policy.frequency,
            100.0 * r.wavelength.wavelength,
            r.wavelength.wave_per_segment,
            main,
            ratio
        );
    }
    s
}

/// Write every report file for `results` into `out` and the summary table
/// to `summary`.
pub fn emit_reports(results: &[CaseResult], out: &Path, summary: &mut dyn Write) -> Result<()> {
    if results.is_empty() {
        return Err(Error::Config("no finished cases to report".into()));
    }
    fs::create_dir_all(out)?;
    write_csv(&out.join("speeds.csv"), results.iter().map(speed_row))?;
    write_csv(&out.join("sessions.csv"), results.iter().flat_map(session_rows))?;
    write_csv(&out.join("wavelengths.csv"), results.iter().map(wavelength_row))?;
    for r in results {
        write_csv(&out.join(format!("thrust_{}.csv", r.id)), thrust_rows(r))?;
        write_csv(&out.join(format!("tail_torque_{}.csv", r.id)), tail_rows(r))?;
        let mut w = BufWriter::new(File::create(out.join(format!("learning_{}.jsonl", r.id)))?);
        for rec in &r.learning {
            serde_json::to_writer(&mut w, rec)?;
            w.write_all(b"\n")?;
        }
        w.flush()?;
    }
    summary.write_all(summary_table(results).as_bytes())?;
    Ok(())
}
