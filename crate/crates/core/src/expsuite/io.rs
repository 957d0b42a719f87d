//! Trajectory files: a CSV of sampled states plus a JSON sidecar holding the
//! model, fluid, gait and simulation settings.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{center_of_mass, forward_dynamics, Drive, ForceLog, GeneralizedState};
use crate::error::{Error, Result};
use crate::rollout::{mean_heading, Trajectory, TrajectoryMeta};

/// Column names for a chain with `joints` joints.
pub fn trajectory_header(joints: usize) -> Vec<String> {
    let mut h: Vec<String> = ["t", "x_h", "y_h", "theta_h"].iter().map(|s| s.to_string()).collect();
    h.extend((1..=joints).map(|j| format!("phi_{j}")));
    h.extend(["vx_h", "vy_h", "omega_h"].iter().map(|s| s.to_string()));
    h.extend((1..=joints).map(|j| format!("dphi_{j}")));
    h
}

/// Sidecar path for a trajectory CSV: `run.csv` -> `run.meta.json`.
pub fn meta_path(csv: &Path) -> PathBuf {
    csv.with_extension("meta.json")
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Sidecar {
    meta: TrajectoryMeta,
    aborted: Option<String>,
}

pub fn write_trajectory(traj: &Trajectory, path: &Path) -> Result<()> {
    let joints = traj.meta.model.joint_count();
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path)?));
    w.write_record(trajectory_header(joints))?;
    for s in &traj.samples {
        let mut row = Vec::with_capacity(1 + 2 * s.q.len());
        row.push(s.t.to_string());
        row.extend(s.q.iter().chain(&s.qd).map(|v| v.to_string()));
        w.write_record(&row)?;
    }
    w.flush()?;
    let side = Sidecar {
        meta: traj.meta.clone(),
        aborted: traj.aborted.clone(),
    };
    serde_json::to_writer_pretty(BufWriter::new(File::create(meta_path(path))?), &side)?;
    Ok(())
}

/// Load a trajectory written by [`write_trajectory`]. The force log is
/// rebuilt from the samples and the window endpoints from the stored states.
pub fn read_trajectory(path: &Path) -> Result<Trajectory> {
    let side_path = meta_path(path);
    let side: Sidecar =
        serde_json::from_reader(BufReader::new(File::open(&side_path).map_err(|e| {
            Error::TrajectoryFormat(format!("cannot open sidecar {}: {e}", side_path.display()))
        })?))?;
    let joints = side.meta.model.joint_count();
    let expected = trajectory_header(joints);
    let mut r = csv::Reader::from_reader(BufReader::new(File::open(path)?));
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != expected {
        return Err(Error::TrajectoryFormat(format!(
            "header does not match a {joints}-joint chain: {}",
            header.join(",")
        )));
    }
    let dof = side.meta.model.dof();
    let mut samples = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        let vals = rec
            .iter()
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::TrajectoryFormat(format!("row {}: {e}", line + 1)))?;
        samples.push(GeneralizedState::new(
            vals[1..1 + dof].to_vec(),
            vals[1 + dof..].to_vec(),
            vals[0],
        ));
    }
    if samples.is_empty() {
        return Err(Error::TrajectoryFormat("no samples".into()));
    }
    let mut traj = Trajectory {
        samples,
        forces: None,
        window_com: None,
        window_heading: None,
        aborted: side.aborted,
        meta: side.meta,
    };
    if traj.aborted.is_none() {
        let window = traj.window_samples();
        let model = &traj.meta.model;
        let first = center_of_mass(model, &window[0].q);
        let last = center_of_mass(model, &window[window.len() - 1].q);
        let heading = mean_heading(&window[1..]);
        traj.window_com = Some((first, last));
        traj.window_heading = Some(heading);
    }
    Ok(traj)
}

/// Evaluate the mechanism breakdown at every stored sample.
pub fn recompute_forces(traj: &Trajectory) -> Result<ForceLog> {
    let model = &traj.meta.model;
    let drive = Drive::Gait(&traj.meta.policy);
    let mut tau = vec![0.0; model.joint_count()];
    let mut log = ForceLog::default();
    for s in &traj.samples {
        drive.torques(model, s.t, &s.qd, &mut tau);
        log.entries
            .push(forward_dynamics(model, s, &tau, &traj.meta.hydro)?.log);
    }
    Ok(log)
}
