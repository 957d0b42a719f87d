//! Steady-state analyses of a finished rollout: body wavelength, thrust by
//! mechanism and segment, and the torque balance at the fin joint.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dynamics::{body_poses, ForceLogEntry, JointTorqueSplit, Mechanism};
use crate::rollout::{heading_line, Trajectory};

/// Markers whose fitted amplitude falls below this fraction of the largest
/// one are left out of the phase regression.
pub const AMPLITUDE_FLOOR: f64 = 0.05;

/// Fits with a wavelength longer than this many marker spans count as a
/// standing wave.
pub const STANDING_WAVE_SPANS: f64 = 50.0;

/// Harmonic fit of one marker signal at the drive frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkerFit {
    /// Arc length from the nose (m).
    pub position: f64,
    pub amplitude: f64,
    /// Phase (rad) of `amplitude * sin(2π f t + phase)`, unwrapped along the body.
    pub phase: f64,
    pub used: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WavelengthFit {
    /// Wavelength (m); infinite when flagged as a standing wave.
    pub wavelength: f64,
    /// Segment length over wavelength.
    pub wave_per_segment: f64,
    /// Phase gradient along the body (rad/m); negative for a tailward wave.
    pub slope: f64,
    pub markers: Vec<MarkerFit>,
    /// Reason the fit should not be trusted, if any.
    pub flag: Option<String>,
}

impl WavelengthFit {
    pub fn is_flagged(&self) -> bool {
        self.flag.is_some()
    }
}

/// Least-squares fit of `a sin(ωt) + b cos(ωt) + c`; returns (amplitude, phase).
fn harmonic_fit(times: &[f64], y: &[f64], omega: f64) -> (f64, f64) {
    // normal equations of the three-column design
    let mut ata = [[0.0; 3]; 3];
    let mut aty = [0.0; 3];
    for (t, v) in times.iter().zip(y) {
        let (s, c) = (omega * t).sin_cos();
        let row = [s, c, 1.0];
        for i in 0..3 {
            aty[i] += row[i] * v;
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
        }
    }
    let m = nalgebra::Matrix3::from_fn(|i, j| ata[i][j]);
    let rhs = nalgebra::Vector3::from(aty);
    match m.lu().solve(&rhs) {
        Some(x) => (x[0].hypot(x[1]), x[1].atan2(x[0])),
        None => (0.0, 0.0),
    }
}

/// Phase-regression wavelength of a traveling wave sampled at fixed body
/// positions. `signals[i]` is the lateral displacement of marker `i` at
/// `times`; positions must be increasing.
pub fn wavelength_from_markers(
    positions: &[f64],
    times: &[f64],
    signals: &[Vec<f64>],
    frequency: f64,
    segment_length: f64,
) -> WavelengthFit {
    let omega = 2.0 * PI * frequency;
    let mut markers: Vec<MarkerFit> = positions
        .iter()
        .zip(signals)
        .map(|(&position, y)| {
            let (amplitude, phase) = harmonic_fit(times, y, omega);
            MarkerFit {
                position,
                amplitude,
                phase,
                used: false,
            }
        })
        .collect();
    let peak = markers.iter().map(|m| m.amplitude).fold(0.0, f64::max);
    let floor = (AMPLITUDE_FLOOR * peak).max(1e-12);
    for m in markers.iter_mut() {
        m.used = m.amplitude >= floor;
    }
    let low = markers.iter().filter(|m| !m.used).count();
    let mut flag = None;
    if markers.len() < 2 || 2 * low >= markers.len() {
        flag = Some(format!("{low} of {} markers below the amplitude floor", markers.len()));
    }

    // unwrap along the body
    let mut prev: Option<f64> = None;
    for m in markers.iter_mut().filter(|m| m.used) {
        if let Some(p) = prev {
            let mut d = m.phase - p;
            d -= 2.0 * PI * (d / (2.0 * PI)).round();
            m.phase = p + d;
        }
        prev = Some(m.phase);
    }

    let used: Vec<&MarkerFit> = markers.iter().filter(|m| m.used).collect();
    let slope = if used.len() >= 2 {
        let n = used.len() as f64;
        let ms = used.iter().map(|m| m.position).sum::<f64>() / n;
        let mp = used.iter().map(|m| m.phase).sum::<f64>() / n;
        let sxy: f64 = used.iter().map(|m| (m.position - ms) * (m.phase - mp)).sum();
        let sxx: f64 = used.iter().map(|m| (m.position - ms).powi(2)).sum();
        sxy / sxx
    } else {
        0.0
    };
    let span = positions.last().copied().unwrap_or(0.0) - positions.first().copied().unwrap_or(0.0);
    let mut wavelength = 2.0 * PI / slope.abs();
    if !(wavelength <= STANDING_WAVE_SPANS * span) {
        flag.get_or_insert_with(|| "phase gradient too small: standing wave".into());
        wavelength = f64::INFINITY;
    }
    WavelengthFit {
        wavelength,
        wave_per_segment: segment_length / wavelength,
        slope,
        markers,
        flag,
    }
}

/// Body points used as wavelength markers: every joint and every segment
/// midpoint, as arc length from the nose.
pub fn marker_arclengths(model: &crate::morphology::RobotModel) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * model.body_count());
    let mut s = 0.0;
    for (k, seg) in model.segments.iter().enumerate() {
        let l = seg.geometry.length;
        if k > 0 {
            out.push(s);
        }
        out.push(s + 0.5 * l);
        s += l;
    }
    out
}

/// Wavelength of the body wave over the trajectory's analysis window.
pub fn wavelength(traj: &Trajectory) -> WavelengthFit {
    let model = &traj.meta.model;
    let window = traj.window_samples();
    let (dir, center) = heading_line(traj);
    let normal = [-dir[1], dir[0]];
    let positions = marker_arclengths(model);
    let mut signals = vec![Vec::with_capacity(window.len()); positions.len()];
    let times: Vec<f64> = window.iter().map(|s| s.t).collect();
    for s in window {
        let mut i = 0;
        for (k, pose) in body_poses(model, &s.q).iter().enumerate() {
            let mut pts = Vec::with_capacity(2);
            if k > 0 {
                pts.push(pose.anterior);
            }
            pts.push(pose.midpoint());
            for p in pts {
                signals[i].push(normal[0] * (p[0] - center[0]) + normal[1] * (p[1] - center[1]));
                i += 1;
            }
        }
    }
    wavelength_from_markers(
        &positions,
        &times,
        &signals,
        traj.meta.policy.frequency,
        model.segments[0].geometry.length,
    )
}

/// Window-averaged force (N) along the swimming direction, by segment and
/// mechanism. Positive values push the robot forward.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThrustTable {
    /// Unit swimming direction in the world frame.
    pub direction: [f64; 2],
    /// Segment labels, head first.
    pub labels: Vec<String>,
    /// `by_segment[k][m]` for mechanism `Mechanism::ALL[m]`.
    pub by_segment: Vec<[f64; 4]>,
    /// Averaged total hydrodynamic force of each segment as logged.
    pub segment_totals: Vec<f64>,
    /// Sum over segments per mechanism.
    pub totals: [f64; 4],
    /// Number of log entries averaged.
    pub samples: usize,
    pub flag: Option<String>,
}

impl ThrustTable {
    pub fn total(&self, m: Mechanism) -> f64 {
        self.totals[m as usize]
    }

    pub fn net(&self) -> f64 {
        self.totals.iter().sum()
    }

    /// Mechanism with the largest positive total, if any is positive.
    pub fn dominant_thrust(&self) -> Option<Mechanism> {
        Mechanism::ALL
            .into_iter()
            .filter(|m| self.total(*m) > 0.0)
            .max_by(|a, b| self.total(*a).total_cmp(&self.total(*b)))
    }
}

pub(crate) fn window_entries(traj: &Trajectory) -> &[ForceLogEntry] {
    let Some(log) = &traj.forces else {
        return &[];
    };
    let start = traj.end_time() - traj.meta.options.window - 1e-9;
    let idx = log.entries.partition_point(|e| e.t < start);
    &log.entries[idx..]
}

pub(crate) fn segment_labels(model: &crate::morphology::RobotModel) -> Vec<String> {
    let mut body = 0;
    model
        .segments
        .iter()
        .map(|s| {
            let label = s.geometry.kind.label();
            if label == "B" {
                body += 1;
                format!("B{body}")
            } else {
                label.to_string()
            }
        })
        .collect()
}

pub fn thrust_decomposition(traj: &Trajectory) -> ThrustTable {
    let model = &traj.meta.model;
    let nb = model.body_count();
    let entries = window_entries(traj);
    let (direction, _) = heading_line(traj);
    let mut flag = None;
    if traj.forces.is_none() {
        flag = Some("trajectory has no force log".to_string());
    } else if entries.is_empty() {
        flag = Some("no force samples in the analysis window".to_string());
    }
    match traj.window_displacement() {
        Some(d) if d[0].hypot(d[1]) > 0.0 => {}
        _ => {
            flag.get_or_insert_with(|| "no net displacement over the window".into());
        }
    }
    let mut by_segment = vec![[0.0; 4]; nb];
    let mut segment_totals = vec![0.0; nb];
    for e in entries {
        for k in 0..nb {
            for (m, w) in e.segments[k].iter().enumerate() {
                by_segment[k][m] += w.along(direction);
            }
            segment_totals[k] += e.segment_totals[k].along(direction);
        }
    }
    let n = entries.len().max(1) as f64;
    by_segment.iter_mut().flatten().for_each(|v| *v /= n);
    segment_totals.iter_mut().for_each(|v| *v /= n);
    let mut totals = [0.0; 4];
    for row in &by_segment {
        for (t, v) in totals.iter_mut().zip(row) {
            *t += v;
        }
    }
    ThrustTable {
        direction,
        labels: segment_labels(model),
        by_segment,
        segment_totals,
        totals,
        samples: entries.len(),
        flag,
    }
}

/// RMS of each generalized-torque source on the fin joint over the window.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TailTorque {
    pub spring: f64,
    pub added_mass: f64,
    pub pressure: f64,
    pub drag: f64,
    pub friction: f64,
    pub samples: usize,
}

impl TailTorque {
    pub fn mechanism(&self, m: Mechanism) -> f64 {
        match m {
            Mechanism::AddedMass => self.added_mass,
            Mechanism::Pressure => self.pressure,
            Mechanism::Drag => self.drag,
            Mechanism::Friction => self.friction,
        }
    }

    /// RMS added-mass torque over RMS spring torque.
    pub fn added_mass_to_spring(&self) -> f64 {
        self.added_mass / self.spring
    }
}

pub fn tail_torque_decomposition(traj: &Trajectory) -> TailTorque {
    let entries = window_entries(traj);
    let fin = traj.meta.model.joint_count() - 1;
    let mut acc = JointTorqueSplit::default();
    for e in entries {
        let j = &e.joints[fin];
        acc.spring += j.spring * j.spring;
        acc.added_mass += j.added_mass * j.added_mass;
        acc.pressure += j.pressure * j.pressure;
        acc.drag += j.drag * j.drag;
        acc.friction += j.friction * j.friction;
    }
    let n = entries.len().max(1) as f64;
    let rms = |v: f64| (v / n).sqrt();
    TailTorque {
        spring: rms(acc.spring),
        added_mass: rms(acc.added_mass),
        pressure: rms(acc.pressure),
        drag: rms(acc.drag),
        friction: rms(acc.friction),
        samples: entries.len(),
    }
}
