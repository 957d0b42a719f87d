//! Planar articulated-chain dynamics with added-mass coupling.
//!
//! Generalized coordinates are `q = (x, y, θ, φ_1 … φ_{N+1})`: the world
//! position of the head's anterior end, the head heading, and the relative
//! joint angles. Body `k` has heading `θ + Σ_{i≤k} φ_i` and its segment axis
//! points from its anterior joint toward the tail.
//!
//! The equations of motion are assembled densely,
//!
//! ```text
//! (M(q) + M_add(q)) q̈ = τ_joints + τ_springs − Σ m J_cᵀ (J̇_c q̇) + Σ J_segᵀ W_seg
//! ```
//!
//! where `W_seg` is each segment's hydrodynamic wrench at zero generalized
//! acceleration and `M_add` collects the acceleration-linear part of the
//! reactive wrench mapped through the anterior-point Jacobians.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::actuation::{actuator_torque, GaitPolicy};
use crate::error::{Error, Result};
use crate::hydro::{self, HydroParams, PlanarWrench, SegmentFrameState};
use crate::morphology::RobotModel;

/// Largest supported number of generalized coordinates.
pub const MAX_DOF: usize = 32;

/// Hydrodynamic force mechanisms tracked in the force log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mechanism {
    AddedMass,
    Pressure,
    Drag,
    Friction,
}

impl Mechanism {
    pub const ALL: [Mechanism; 4] = [
        Mechanism::AddedMass,
        Mechanism::Pressure,
        Mechanism::Drag,
        Mechanism::Friction,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mechanism::AddedMass => "added_mass",
            Mechanism::Pressure => "pressure",
            Mechanism::Drag => "drag",
            Mechanism::Friction => "friction",
        }
    }
}

/// Head pose, joint angles, their rates, and time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralizedState {
    pub q: Vec<f64>,
    pub qd: Vec<f64>,
    pub t: f64,
}

impl GeneralizedState {
    /// Straight body along world +x, nose at the origin, at rest.
    pub fn rest(model: &RobotModel) -> Self {
        GeneralizedState {
            q: vec![0.0; model.dof()],
            qd: vec![0.0; model.dof()],
            t: 0.0,
        }
    }

    pub fn new(q: Vec<f64>, qd: Vec<f64>, t: f64) -> Self {
        GeneralizedState { q, qd, t }
    }

    pub fn joint_angles(&self) -> &[f64] {
        &self.q[3..]
    }

    pub fn joint_rates(&self) -> &[f64] {
        &self.qd[3..]
    }

    pub fn is_finite(&self) -> bool {
        self.q.iter().chain(&self.qd).all(|v| v.is_finite())
    }
}

/// Force in world axes plus torque about the segment's anterior end.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct WorldWrench {
    pub fx: f64,
    pub fy: f64,
    pub torque: f64,
}

impl WorldWrench {
    pub fn along(&self, dir: [f64; 2]) -> f64 {
        self.fx * dir[0] + self.fy * dir[1]
    }
}

/// Generalized force on one joint coordinate, by source.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointTorqueSplit {
    pub actuation: f64,
    pub spring: f64,
    pub added_mass: f64,
    pub pressure: f64,
    pub drag: f64,
    pub friction: f64,
}

impl JointTorqueSplit {
    pub fn mechanism(&self, m: Mechanism) -> f64 {
        match m {
            Mechanism::AddedMass => self.added_mass,
            Mechanism::Pressure => self.pressure,
            Mechanism::Drag => self.drag,
            Mechanism::Friction => self.friction,
        }
    }

    pub fn hydro_total(&self) -> f64 {
        self.added_mass + self.pressure + self.drag + self.friction
    }
}

/// Per-step breakdown of every applied load.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceLogEntry {
    pub t: f64,
    /// `segments[k][m]` is the wrench of mechanism `Mechanism::ALL[m]` on body `k`.
    pub segments: Vec<[WorldWrench; 4]>,
    /// Hydrodynamic wrench on each body as applied in the equations of motion.
    pub segment_totals: Vec<WorldWrench>,
    /// Generalized forces on each joint coordinate.
    pub joints: Vec<JointTorqueSplit>,
}

impl ForceLogEntry {
    pub fn segment_mechanism(&self, k: usize, m: Mechanism) -> WorldWrench {
        self.segments[k][m as usize]
    }
}

/// Time series of [`ForceLogEntry`], one per integration step.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ForceLog {
    pub entries: Vec<ForceLogEntry>,
}

/// Result of one forward-dynamics evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Acceleration {
    pub qdd: Vec<f64>,
    pub log: ForceLogEntry,
}

#[derive(Debug, Clone, Copy, Default)]
struct BodyFrame {
    cos: f64,
    sin: f64,
    rate: f64,
    /// J̇q̇ of the anterior point.
    bias: [f64; 2],
    /// Number of leading generalized coordinates this body depends on.
    width: usize,
}

impl BodyFrame {
    fn ex(&self) -> [f64; 2] {
        [self.cos, self.sin]
    }

    fn ey(&self) -> [f64; 2] {
        [-self.sin, self.cos]
    }
}

/// Reusable buffers for repeated dynamics evaluations on one model.
#[derive(Debug, Clone)]
pub struct ChainDynamics<'m> {
    model: &'m RobotModel,
    hydro: HydroParams,
    n: usize,
    frames: Vec<BodyFrame>,
    /// Anterior-point Jacobians, `2 × n` per body, row-major.
    jp: Vec<f64>,
    /// Lateral-acceleration rows e_yᵀ J_p per body.
    ja: Vec<f64>,
    states: Vec<SegmentFrameState>,
    lhs: DMatrix<f64>,
    rhs: DVector<f64>,
}

impl<'m> ChainDynamics<'m> {
    pub fn new(model: &'m RobotModel, hydro: &HydroParams) -> Self {
        let n = model.dof();
        let nb = model.body_count();
        ChainDynamics {
            model,
            hydro: *hydro,
            n,
            frames: vec![BodyFrame::default(); nb],
            jp: vec![0.0; nb * 2 * n],
            ja: vec![0.0; nb * n],
            states: vec![SegmentFrameState::default(); nb],
            lhs: DMatrix::zeros(n, n),
            rhs: DVector::zeros(n),
        }
    }

    pub fn model(&self) -> &RobotModel {
        self.model
    }

    pub fn hydro(&self) -> &HydroParams {
        &self.hydro
    }

    #[inline]
    fn jp_row(&self, k: usize, axis: usize) -> &[f64] {
        let off = (k * 2 + axis) * self.n;
        &self.jp[off..off + self.n]
    }

    /// Position, velocity and Jacobian recursion along the chain.
    fn kinematics(&mut self, q: &[f64], qd: &[f64]) {
        let n = self.n;
        let mut theta = q[2];
        let mut rate = qd[2];
        let mut p = [q[0], q[1]];
        let mut pd = [qd[0], qd[1]];
        let mut bias = [0.0, 0.0];
        // running anterior-point Jacobian
        let mut jx = [0.0; MAX_DOF];
        let mut jy = [0.0; MAX_DOF];
        jx[0] = 1.0;
        jy[1] = 1.0;
        for k in 0..self.model.body_count() {
            if k > 0 {
                theta += q[2 + k];
                rate += qd[2 + k];
            }
            let (sin, cos) = theta.sin_cos();
            let frame = BodyFrame {
                cos,
                sin,
                rate,
                bias,
                width: 3 + k,
            };
            let off = k * 2 * n;
            self.jp[off..off + n].copy_from_slice(&jx[..n]);
            self.jp[off + n..off + 2 * n].copy_from_slice(&jy[..n]);
            for c in 0..n {
                self.ja[k * n + c] = -sin * jx[c] + cos * jy[c];
            }
            let g = &self.model.segments[k].geometry;
            let l = g.length;
            let u = pd[0] * cos + pd[1] * sin;
            let v0 = -pd[0] * sin + pd[1] * cos;
            // d(v0)/dt at zero generalized acceleration
            let a0 = -bias[0] * sin + bias[1] * cos - rate * u;
            self.states[k] = SegmentFrameState::rigid(u, v0, rate, l, g.depth, g.perimeter).with_accelerations(a0, 0.0);
            self.frames[k] = frame;

            p = [p[0] + l * cos, p[1] + l * sin];
            pd = [pd[0] - l * rate * sin, pd[1] + l * rate * cos];
            bias = [bias[0] - l * rate * rate * cos, bias[1] - l * rate * rate * sin];
            for c in 2..=2 + k {
                jx[c] -= l * sin;
                jy[c] += l * cos;
            }
        }
    }

    /// Segment-frame kinematics of every body (accelerations hold the
    /// velocity-product part only).
    pub fn segment_states(&mut self, q: &[f64], qd: &[f64]) -> Vec<SegmentFrameState> {
        self.kinematics(q, qd);
        self.states.clone()
    }

    /// Assemble the inertia matrix (including added mass when `with_fluid`)
    /// and the right-hand side for the given actuator torques.
    fn assemble(&mut self, q: &[f64], qd: &[f64], actuator: &[f64], with_fluid: bool) {
        self.kinematics(q, qd);
        let n = self.n;
        self.lhs.fill(0.0);
        self.rhs.fill(0.0);
        let reactive = with_fluid && self.hydro.has_reactive();
        for k in 0..self.model.body_count() {
            let seg = &self.model.segments[k];
            let f = self.frames[k];
            let w = f.width;
            let (m, inertia, d) = (seg.mass.mass, seg.mass.inertia, seg.mass.com_offset);
            let (ex, ey) = (f.ex(), f.ey());
            // center-of-mass Jacobian and bias
            let jx = self.jp_row(k, 0);
            let jy = self.jp_row(k, 1);
            let mut cx = [0.0; MAX_DOF];
            let mut cy = [0.0; MAX_DOF];
            cx[..w].copy_from_slice(&jx[..w]);
            cy[..w].copy_from_slice(&jy[..w]);
            for c in 2..w {
                cx[c] += d * ey[0];
                cy[c] += d * ey[1];
            }
            let r2 = f.rate * f.rate;
            let bcx = f.bias[0] - d * r2 * ex[0];
            let bcy = f.bias[1] - d * r2 * ex[1];
            for a in 0..w {
                let (ma_x, ma_y) = (m * cx[a], m * cy[a]);
                self.rhs[a] -= ma_x * bcx + ma_y * bcy;
                for b in a..w {
                    let mut v = ma_x * cx[b] + ma_y * cy[b];
                    if a >= 2 {
                        v += inertia;
                    }
                    self.lhs[(a, b)] += v;
                }
            }

            if !with_fluid {
                continue;
            }
            let s = self.states[k];
            let mut wrench = hydro::resistive_wrench(&s, &self.hydro);
            if reactive {
                let block = hydro::reactive_added_inertia(&s, &self.hydro);
                // s.a0 holds the velocity-product part of the lateral acceleration
                wrench += block.apply(0.0, s.a0, 0.0);
                let ja = &self.ja[k * n..(k + 1) * n];
                let (kaa, kaw, kww) = (block.inertia[1][1], block.inertia[1][2], block.inertia[2][2]);
                for (a, &jaa) in ja[..w].iter().enumerate() {
                    let ta = if a >= 2 { 1.0 } else { 0.0 };
                    let ra = kaa * jaa + kaw * ta;
                    let rw = kaw * jaa + kww * ta;
                    for (b, &jab) in ja.iter().enumerate().take(w).skip(a) {
                        let tb = if b >= 2 { 1.0 } else { 0.0 };
                        self.lhs[(a, b)] += ra * jab + rw * tb;
                    }
                }
            }
            let fx = wrench.f_long * ex[0] + wrench.f_lat * ey[0];
            let fy = wrench.f_long * ex[1] + wrench.f_lat * ey[1];
            let jx = self.jp_row(k, 0);
            let jy = self.jp_row(k, 1);
            let mut gen = [0.0; MAX_DOF];
            for (c, g) in gen[..w].iter_mut().enumerate() {
                *g = jx[c] * fx + jy[c] * fy;
                if c >= 2 {
                    *g += wrench.torque;
                }
            }
            for (r, g) in self.rhs.as_mut_slice()[..w].iter_mut().zip(&gen) {
                *r += g;
            }
        }
        for (j, joint) in self.model.joints.iter().enumerate() {
            let tau = actuator.get(j).copied().unwrap_or(0.0);
            self.rhs[3 + j] += tau - joint.stiffness * q[3 + j];
        }
        // mirror upper triangle
        for a in 0..n {
            for b in 0..a {
                self.lhs[(a, b)] = self.lhs[(b, a)];
            }
        }
    }

    /// Generalized accelerations for the given actuator torques (one per
    /// joint; the passive fin joint entry is ignored if present).
    pub fn accelerations(&mut self, q: &[f64], qd: &[f64], actuator: &[f64], out: &mut [f64]) -> Result<()> {
        self.solve(q, qd, actuator, true, out)
    }

    fn solve(&mut self, q: &[f64], qd: &[f64], actuator: &[f64], with_fluid: bool, out: &mut [f64]) -> Result<()> {
        self.assemble(q, qd, actuator, with_fluid);
        let chol = self
            .lhs
            .clone()
            .cholesky()
            .ok_or(Error::SingularSystem { t: f64::NAN })?;
        let x = chol.solve(&self.rhs);
        out.copy_from_slice(x.as_slice());
        Ok(())
    }

    /// Full inertia matrix `M + M_add` and right-hand side at a state.
    pub fn system(&mut self, q: &[f64], qd: &[f64], actuator: &[f64]) -> (DMatrix<f64>, DVector<f64>) {
        self.assemble(q, qd, actuator, true);
        (self.lhs.clone(), self.rhs.clone())
    }

    /// Rigid-body mass matrix without fluid.
    pub fn mass_matrix(&mut self, q: &[f64]) -> DMatrix<f64> {
        let zeros = vec![0.0; self.n];
        self.assemble(q, &zeros, &[], false);
        self.lhs.clone()
    }

    /// Mechanism-resolved loads at a state with known accelerations.
    pub fn force_log(&mut self, q: &[f64], qd: &[f64], qdd: &[f64], actuator: &[f64], t: f64) -> ForceLogEntry {
        self.kinematics(q, qd);
        let n = self.n;
        let nb = self.model.body_count();
        let nj = self.model.joint_count();
        let mut entry = ForceLogEntry {
            t,
            segments: Vec::with_capacity(nb),
            segment_totals: Vec::with_capacity(nb),
            joints: vec![JointTorqueSplit::default(); nj],
        };
        for (j, joint) in self.model.joints.iter().enumerate() {
            entry.joints[j].actuation = actuator.get(j).copied().unwrap_or(0.0);
            entry.joints[j].spring = -joint.stiffness * q[3 + j];
        }
        for k in 0..nb {
            let f = self.frames[k];
            let (ex, ey) = (f.ex(), f.ey());
            let ja = &self.ja[k * n..(k + 1) * n];
            let omega_dot: f64 = qdd[2..f.width].iter().sum();
            let a0 = self.states[k].a0 + ja.iter().zip(qdd).map(|(a, b)| a * b).sum::<f64>();
            let s = self.states[k].with_accelerations(a0, omega_dot);
            let reactive = hydro::reactive_parts(&s, &self.hydro);
            let resistive = hydro::resistive_parts(&s, &self.hydro);
            let frame_parts = [
                reactive.added_mass,
                reactive.pressure,
                resistive.drag,
                resistive.friction,
            ];
            let to_world = |w: &PlanarWrench| WorldWrench {
                fx: w.f_long * ex[0] + w.f_lat * ey[0],
                fy: w.f_long * ex[1] + w.f_lat * ey[1],
                torque: w.torque,
            };
            let world = frame_parts.map(|w| to_world(&w));
            let total = to_world(&(reactive.total() + resistive.total()));
            let jx = self.jp_row(k, 0);
            let jy = self.jp_row(k, 1);
            for (j, split) in entry.joints.iter_mut().enumerate() {
                let c = 3 + j;
                if c >= f.width {
                    continue;
                }
                let gen = |w: &WorldWrench| jx[c] * w.fx + jy[c] * w.fy + w.torque;
                split.added_mass += gen(&world[0]);
                split.pressure += gen(&world[1]);
                split.drag += gen(&world[2]);
                split.friction += gen(&world[3]);
            }
            entry.segments.push(world);
            entry.segment_totals.push(total);
        }
        entry
    }
}

/// Segment-frame kinematics of every body at a state.
pub fn segment_kinematics(model: &RobotModel, s: &GeneralizedState) -> Vec<SegmentFrameState> {
    ChainDynamics::new(model, &HydroParams::vacuum()).segment_states(&s.q, &s.qd)
}

/// Solve for `q̈` given actuator torques and return it with the mechanism
/// breakdown evaluated at the solution.
pub fn forward_dynamics(
    model: &RobotModel,
    s: &GeneralizedState,
    actuator: &[f64],
    hydro: &HydroParams,
) -> Result<Acceleration> {
    let mut dynamics = ChainDynamics::new(model, hydro);
    let mut qdd = vec![0.0; model.dof()];
    dynamics
        .accelerations(&s.q, &s.qd, actuator, &mut qdd)
        .map_err(|e| with_time(e, s.t))?;
    let log = dynamics.force_log(&s.q, &s.qd, &qdd, actuator, s.t);
    Ok(Acceleration { qdd, log })
}

fn with_time(e: Error, t: f64) -> Error {
    match e {
        Error::SingularSystem { .. } => Error::SingularSystem { t },
        other => other,
    }
}

/// Source of actuator torques.
#[derive(Debug, Clone, Copy)]
pub enum Drive<'a> {
    /// Actuators disconnected: no voltage and no back-EMF damping.
    Off,
    /// Harmonic voltages through the actuator model.
    Gait(&'a GaitPolicy),
}

impl Drive<'_> {
    pub fn torques(&self, model: &RobotModel, t: f64, qd: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        if let Drive::Gait(policy) = self {
            let noa = policy.noa().min(model.noa);
            for (j, tau) in out.iter_mut().enumerate().take(noa) {
                let e = policy.voltage_unchecked(j, t);
                *tau = actuator_torque(e, qd[3 + j], &model.actuator);
            }
        }
    }
}

/// Fixed-step classical RK4 integrator with reusable buffers.
pub struct Rk4<'m> {
    dynamics: ChainDynamics<'m>,
    tau: Vec<f64>,
    k: [Vec<f64>; 4],
    kv: [Vec<f64>; 4],
    q_tmp: Vec<f64>,
    qd_tmp: Vec<f64>,
}

impl<'m> Rk4<'m> {
    pub fn new(model: &'m RobotModel, hydro: &HydroParams) -> Self {
        let n = model.dof();
        let z = || vec![0.0; n];
        Rk4 {
            dynamics: ChainDynamics::new(model, hydro),
            tau: vec![0.0; model.joint_count()],
            k: [z(), z(), z(), z()],
            kv: [z(), z(), z(), z()],
            q_tmp: z(),
            qd_tmp: z(),
        }
    }

    pub fn dynamics(&mut self) -> &mut ChainDynamics<'m> {
        &mut self.dynamics
    }

    fn stage(&mut self, idx: usize, t: f64, drive: Drive<'_>) -> Result<()> {
        let model = self.dynamics.model;
        drive.torques(model, t, &self.qd_tmp, &mut self.tau);
        let mut out = std::mem::take(&mut self.kv[idx]);
        let r = self
            .dynamics
            .accelerations(&self.q_tmp, &self.qd_tmp, &self.tau, &mut out);
        self.kv[idx] = out;
        self.k[idx].copy_from_slice(&self.qd_tmp);
        r.map_err(|e| with_time(e, t))
    }

    /// Advance `s` by `dt`. When `log` is given, the mechanism breakdown at the
    /// start of the step is appended to it.
    pub fn step(
        &mut self,
        s: &mut GeneralizedState,
        drive: Drive<'_>,
        dt: f64,
        log: Option<&mut ForceLog>,
    ) -> Result<()> {
        if !(dt > 0.0) {
            return Err(Error::InvalidParameter(format!("time step must be positive, got {dt}")));
        }
        let n = s.q.len();
        let t = s.t;
        self.q_tmp.copy_from_slice(&s.q);
        self.qd_tmp.copy_from_slice(&s.qd);
        self.stage(0, t, drive)?;
        if let Some(log) = log {
            let model = self.dynamics.model;
            drive.torques(model, t, &s.qd, &mut self.tau);
            let qdd = self.kv[0].clone();
            let tau = self.tau.clone();
            log.entries.push(self.dynamics.force_log(&s.q, &s.qd, &qdd, &tau, t));
        }
        for (idx, frac) in [(1usize, 0.5), (2, 0.5), (3, 1.0)] {
            for i in 0..n {
                self.q_tmp[i] = s.q[i] + frac * dt * self.k[idx - 1][i];
                self.qd_tmp[i] = s.qd[i] + frac * dt * self.kv[idx - 1][i];
            }
            self.stage(idx, t + frac * dt, drive)?;
        }
        for i in 0..n {
            s.q[i] += dt / 6.0 * (self.k[0][i] + 2.0 * self.k[1][i] + 2.0 * self.k[2][i] + self.k[3][i]);
            s.qd[i] += dt / 6.0 * (self.kv[0][i] + 2.0 * self.kv[1][i] + 2.0 * self.kv[2][i] + self.kv[3][i]);
        }
        s.t = t + dt;
        if !s.is_finite() {
            return Err(Error::NonFinite { t: s.t });
        }
        if let Some(j) = s
            .joint_angles()
            .iter()
            .position(|phi| phi.abs() >= std::f64::consts::PI)
        {
            return Err(Error::FoldOver { joint: j + 1, t: s.t });
        }
        Ok(())
    }
}

/// One RK4 step from `s` (allocating convenience wrapper).
pub fn step_rk4(
    model: &RobotModel,
    s: &GeneralizedState,
    drive: Drive<'_>,
    hydro: &HydroParams,
    dt: f64,
) -> Result<GeneralizedState> {
    let mut next = s.clone();
    Rk4::new(model, hydro).step(&mut next, drive, dt, None)?;
    Ok(next)
}

/// World pose of one body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BodyPose {
    /// Anterior end.
    pub anterior: [f64; 2],
    pub heading: f64,
    pub length: f64,
    pub com_offset: f64,
}

impl BodyPose {
    pub fn point(&self, x: f64) -> [f64; 2] {
        let (s, c) = self.heading.sin_cos();
        [self.anterior[0] + x * c, self.anterior[1] + x * s]
    }

    pub fn com(&self) -> [f64; 2] {
        self.point(self.com_offset)
    }

    pub fn midpoint(&self) -> [f64; 2] {
        self.point(0.5 * self.length)
    }
}

pub fn body_poses(model: &RobotModel, q: &[f64]) -> Vec<BodyPose> {
    let mut theta = q[2];
    let mut p = [q[0], q[1]];
    model
        .segments
        .iter()
        .enumerate()
        .map(|(k, seg)| {
            if k > 0 {
                theta += q[2 + k];
            }
            let pose = BodyPose {
                anterior: p,
                heading: theta,
                length: seg.geometry.length,
                com_offset: seg.mass.com_offset,
            };
            p = pose.point(seg.geometry.length);
            pose
        })
        .collect()
}

pub fn center_of_mass(model: &RobotModel, q: &[f64]) -> [f64; 2] {
    let mut acc = [0.0, 0.0];
    for (pose, seg) in body_poses(model, q).iter().zip(&model.segments) {
        let c = pose.com();
        acc[0] += seg.mass.mass * c[0];
        acc[1] += seg.mass.mass * c[1];
    }
    let m = model.total_mass();
    [acc[0] / m, acc[1] / m]
}

/// Per-body center-of-mass velocity and angular rate.
fn body_velocities(model: &RobotModel, s: &GeneralizedState) -> Vec<([f64; 2], f64)> {
    segment_kinematics(model, s)
        .iter()
        .zip(body_poses(model, &s.q))
        .zip(&model.segments)
        .map(|((st, pose), seg)| {
            let (sn, cs) = pose.heading.sin_cos();
            let d = seg.mass.com_offset;
            let lat = st.v0 + st.omega * d;
            ([st.u * cs - lat * sn, st.u * sn + lat * cs], st.omega)
        })
        .collect()
}

pub fn linear_momentum(model: &RobotModel, s: &GeneralizedState) -> [f64; 2] {
    body_velocities(model, s)
        .iter()
        .zip(&model.segments)
        .fold([0.0, 0.0], |acc, ((v, _), seg)| {
            [acc[0] + seg.mass.mass * v[0], acc[1] + seg.mass.mass * v[1]]
        })
}

/// Angular momentum of the chain about a fixed world point.
pub fn angular_momentum(model: &RobotModel, s: &GeneralizedState, about: [f64; 2]) -> f64 {
    body_velocities(model, s)
        .iter()
        .zip(body_poses(model, &s.q))
        .zip(&model.segments)
        .map(|(((v, w), pose), seg)| {
            let c = pose.com();
            let r = [c[0] - about[0], c[1] - about[1]];
            seg.mass.mass * (r[0] * v[1] - r[1] * v[0]) + seg.mass.inertia * w
        })
        .sum()
}

pub fn kinetic_energy(model: &RobotModel, s: &GeneralizedState) -> f64 {
    body_velocities(model, s)
        .iter()
        .zip(&model.segments)
        .map(|((v, w), seg)| 0.5 * seg.mass.mass * (v[0] * v[0] + v[1] * v[1]) + 0.5 * seg.mass.inertia * w * w)
        .sum()
}

pub fn spring_energy(model: &RobotModel, s: &GeneralizedState) -> f64 {
    model
        .joints
        .iter()
        .zip(s.joint_angles())
        .map(|(j, phi)| 0.5 * j.stiffness * phi * phi)
        .sum()
}
