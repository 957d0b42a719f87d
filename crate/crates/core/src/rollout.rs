//! Single swimming episodes: simulation, reward and gait metrics.

use serde::{Deserialize, Serialize};

use crate::actuation::GaitPolicy;
use crate::dynamics::{center_of_mass, Drive, ForceLog, GeneralizedState, Rk4};
use crate::hydro::HydroParams;
use crate::morphology::RobotModel;

/// Episode settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimOptions {
    /// Episode length (s).
    pub horizon: f64,
    pub dt: f64,
    /// Rate of the stored state samples (Hz).
    pub output_rate: f64,
    /// Trailing window used for the reward and steady-state analyses (s).
    pub window: f64,
    pub record_forces: bool,
    /// Carried into the trajectory metadata only; the simulation itself is
    /// deterministic.
    pub seed: u64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            horizon: 6.0,
            dt: 1e-3,
            output_rate: 100.0,
            window: 2.0,
            record_forces: false,
            seed: 0,
        }
    }
}

impl SimOptions {
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn window_steps(&self) -> usize {
        (self.window / self.dt).round() as usize
    }

    pub fn decimation(&self) -> usize {
        ((1.0 / (self.output_rate * self.dt)).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryMeta {
    pub model: RobotModel,
    pub hydro: HydroParams,
    pub policy: GaitPolicy,
    pub options: SimOptions,
}

/// Output of [`simulate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    /// States at the output rate, starting at t = 0.
    pub samples: Vec<GeneralizedState>,
    /// Mechanism breakdown at every integration step, when recorded.
    pub forces: Option<ForceLog>,
    /// Center of mass at the start and end of the reward window, taken from
    /// the full-rate states.
    pub window_com: Option<([f64; 2], [f64; 2])>,
    /// Mean nose-forward unit vector of the head over the window.
    pub window_heading: Option<[f64; 2]>,
    /// Reason the episode stopped early, if it did.
    pub aborted: Option<String>,
    pub meta: TrajectoryMeta,
}

impl Trajectory {
    pub fn is_aborted(&self) -> bool {
        self.aborted.is_some()
    }

    pub fn end_time(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }

    /// Samples inside the trailing analysis window.
    pub fn window_samples(&self) -> &[GeneralizedState] {
        let start = self.end_time() - self.meta.options.window - 1e-9;
        let idx = self.samples.partition_point(|s| s.t < start);
        &self.samples[idx..]
    }

    /// Net center-of-mass displacement over the window.
    pub fn window_displacement(&self) -> Option<[f64; 2]> {
        self.window_com.map(|(a, b)| [b[0] - a[0], b[1] - a[1]])
    }
}

/// Run one episode from rest under `policy`.
pub fn simulate(model: &RobotModel, hydro: &HydroParams, policy: &GaitPolicy, opts: &SimOptions) -> Trajectory {
    let steps = opts.steps();
    let window_start = steps.saturating_sub(opts.window_steps());
    let decim = opts.decimation();
    let mut state = GeneralizedState::rest(model);
    let mut samples = vec![state.clone()];
    let mut forces = opts.record_forces.then(ForceLog::default);
    let mut integrator = Rk4::new(model, hydro);
    let mut aborted = None;
    let mut com_start = if window_start == 0 {
        Some(center_of_mass(model, &state.q))
    } else {
        None
    };
    let mut heading = [0.0, 0.0];
    for step in 1..=steps {
        // keep the time grid exact
        state.t = (step - 1) as f64 * opts.dt;
        if let Err(e) = integrator.step(&mut state, Drive::Gait(policy), opts.dt, forces.as_mut()) {
            aborted = Some(e.to_string());
            break;
        }
        state.t = step as f64 * opts.dt;
        if step == window_start {
            com_start = Some(center_of_mass(model, &state.q));
        }
        if step > window_start {
            // the body axis points from nose to tail
            heading[0] -= state.q[2].cos();
            heading[1] -= state.q[2].sin();
        }
        if step % decim == 0 {
            samples.push(state.clone());
        }
    }
    let window_com = match (&aborted, com_start) {
        (None, Some(a)) => Some((a, center_of_mass(model, &state.q))),
        _ => None,
    };
    Trajectory {
        samples,
        forces,
        window_com,
        window_heading: window_com.map(|_| unit_or_default(heading)),
        aborted,
        meta: TrajectoryMeta {
            model: model.clone(),
            hydro: *hydro,
            policy: policy.clone(),
            options: opts.clone(),
        },
    }
}

fn unit_or_default(v: [f64; 2]) -> [f64; 2] {
    let norm = v[0].hypot(v[1]);
    if norm > 0.0 {
        [v[0] / norm, v[1] / norm]
    } else {
        [-1.0, 0.0]
    }
}

/// Mean nose-forward direction of the head over a run of states.
pub fn mean_heading<'a>(states: impl IntoIterator<Item = &'a GeneralizedState>) -> [f64; 2] {
    let mut acc = [0.0, 0.0];
    for s in states {
        acc[0] -= s.q[2].cos();
        acc[1] -= s.q[2].sin();
    }
    unit_or_default(acc)
}

/// Mean forward speed over the trailing window: net center-of-mass
/// displacement divided by the window length, or zero when the robot moved
/// tail first (against its mean heading). Aborted episodes score zero.
pub fn reward(traj: &Trajectory) -> f64 {
    match (&traj.aborted, traj.window_displacement(), traj.window_heading) {
        (None, Some(d), Some(h)) if d[0] * h[0] + d[1] * h[1] > 0.0 => d[0].hypot(d[1]) / traj.meta.options.window,
        _ => 0.0,
    }
}

/// Steady-state gait descriptors.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaitMetrics {
    /// Mean speed over the window (m/s).
    pub speed: f64,
    /// Lateral displacement amplitude of each segment midpoint (m).
    pub amplitudes: Vec<f64>,
    /// Mean of `amplitudes`.
    pub mean_amplitude: f64,
    /// U / (l f)
    pub stride_ratio: f64,
    /// Ā / l per segment.
    pub amplitude_ratios: Vec<f64>,
    pub body_lengths_per_second: f64,
}

/// Unit swimming direction over the window and the mean center of mass.
pub(crate) fn heading_line(traj: &Trajectory) -> ([f64; 2], [f64; 2]) {
    let model = &traj.meta.model;
    let window = traj.window_samples();
    let mut center = [0.0, 0.0];
    for s in window {
        let c = center_of_mass(model, &s.q);
        center[0] += c[0];
        center[1] += c[1];
    }
    let n = window.len().max(1) as f64;
    center = [center[0] / n, center[1] / n];
    let dir = match traj.window_displacement() {
        Some(d) if d[0].hypot(d[1]) > 1e-12 => {
            let norm = d[0].hypot(d[1]);
            [d[0] / norm, d[1] / norm]
        }
        _ => mean_heading(window),
    };
    (dir, center)
}

/// Half peak-to-peak of a signal.
pub fn half_range(signal: &[f64]) -> f64 {
    let (lo, hi) = signal.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(*v), hi.max(*v))
    });
    if signal.is_empty() {
        0.0
    } else {
        0.5 * (hi - lo)
    }
}

/// Lateral displacement of every segment midpoint from the mean heading line,
/// one series per segment, over the window.
pub fn lateral_displacements(traj: &Trajectory) -> Vec<Vec<f64>> {
    let model = &traj.meta.model;
    let (dir, center) = heading_line(traj);
    let normal = [-dir[1], dir[0]];
    let mut out = vec![Vec::new(); model.body_count()];
    for s in traj.window_samples() {
        for (k, pose) in crate::dynamics::body_poses(model, &s.q).iter().enumerate() {
            let m = pose.midpoint();
            out[k].push(normal[0] * (m[0] - center[0]) + normal[1] * (m[1] - center[1]));
        }
    }
    out
}

pub fn gait_metrics(traj: &Trajectory) -> GaitMetrics {
    let model = &traj.meta.model;
    let speed = reward(traj);
    let amplitudes: Vec<f64> = lateral_displacements(traj).iter().map(|s| half_range(s)).collect();
    let mean_amplitude = amplitudes.iter().sum::<f64>() / amplitudes.len().max(1) as f64;
    let seg_len = model.segments[0].geometry.length;
    let f = traj.meta.policy.frequency;
    GaitMetrics {
        speed,
        amplitude_ratios: amplitudes
            .iter()
            .zip(&model.segments)
            .map(|(a, s)| a / s.geometry.length)
            .collect(),
        amplitudes,
        mean_amplitude,
        stride_ratio: speed / (seg_len * f),
        body_lengths_per_second: speed / model.total_length(),
    }
}
