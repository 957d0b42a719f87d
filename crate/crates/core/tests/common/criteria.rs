//! One check per acceptance criterion. Each returns a verdict with the
//! measured figures so that both the dedicated suites and the acceptance
//! runner can report them.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::time::Instant;

use mubot::dynamics::{
    angular_momentum, center_of_mass, forward_dynamics, kinetic_energy, linear_momentum, spring_energy, Drive,
    GeneralizedState, Rk4,
};
use mubot::ephe::{run_session, EpheConfig, EpheHyperParams};
use mubot::expsuite::report::{read_csv, SessionRow, SpeedRow, TailRow, ThrustRow, WavelengthRow};
use mubot::expsuite::{emit_reports, run_sweep, ResultStore, SweepConfig};
use mubot::hydro::{
    dimensionless_wrenches, drag_integrals, normalized_wrenches, reactive_parts, resistive_parts, DimensionlessState,
    HydroModel, HydroParams, PlanarWrench, Scales, SegmentFrameState,
};
use mubot::morphology::{build_robot, MorphologyOverrides, StiffnessLevel};
use nalgebra::{Matrix5, Vector5};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lagrangian::{chain_eom, ChainParams};
use super::{rel_err, simpson_adaptive, simpson_pieces, velocity_zero};

/// Outcome of one criterion.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub pass: bool,
    pub detail: String,
}

impl Verdict {
    fn new(pass: bool, detail: String) -> Self {
        Verdict { pass, detail }
    }
}

// ---------------------------------------------------------------------------
// 1. conservation

pub const CONSERVATION_DT: f64 = 1e-4;
pub const CONSERVATION_HORIZON: f64 = 6.0;
pub const MOMENTUM_TOL: f64 = 1e-9;
pub const ENERGY_TOL: f64 = 1e-6;
pub const ANGULAR_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy)]
pub struct Drift {
    pub momentum: f64,
    pub angular: f64,
    pub energy: f64,
}

/// Integrate an unactuated chain in vacuum and report the worst relative
/// drift of linear momentum, angular momentum about the initial center of
/// mass, and mechanical energy.
pub fn free_chain_drift(with_springs: bool, seed: u64) -> Drift {
    let overrides = MorphologyOverrides {
        k_hat: if with_springs { None } else { Some(0.0) },
        ..Default::default()
    };
    let model = build_robot(4, Some(StiffnessLevel::High), &overrides).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.dof();
    // without springs nothing bounds the joint angles, so keep the rates small
    let rate = if with_springs { 3.0 } else { 0.2 };
    let mut qd = vec![0.0; n];
    qd[0] = rng.gen_range(-0.1..0.1);
    qd[1] = rng.gen_range(-0.1..0.1);
    qd[2] = rng.gen_range(-rate..rate);
    for v in &mut qd[3..] {
        *v = rng.gen_range(-rate..rate);
    }
    let mut s = GeneralizedState::new(vec![0.0; n], qd, 0.0);
    let energy = |s: &GeneralizedState| kinetic_energy(&model, s) + spring_energy(&model, s);
    let pivot = center_of_mass(&model, &s.q);
    let p0 = linear_momentum(&model, &s);
    let l0 = angular_momentum(&model, &s, pivot);
    let e0 = energy(&s);
    let p_scale = p0[0].hypot(p0[1]);
    let mut rk = Rk4::new(&model, &HydroParams::vacuum());
    let steps = (CONSERVATION_HORIZON / CONSERVATION_DT).round() as usize;
    let mut worst = Drift {
        momentum: 0.0,
        angular: 0.0,
        energy: 0.0,
    };
    for i in 0..steps {
        rk.step(&mut s, Drive::Off, CONSERVATION_DT, None).unwrap();
        if i % 100 == 99 || i + 1 == steps {
            let p = linear_momentum(&model, &s);
            worst.momentum = worst.momentum.max((p[0] - p0[0]).hypot(p[1] - p0[1]) / p_scale);
            worst.angular = worst.angular.max(rel_err(angular_momentum(&model, &s, pivot), l0, 0.0));
            worst.energy = worst.energy.max(rel_err(energy(&s), e0, 0.0));
        }
    }
    worst
}

pub fn conservation() -> Verdict {
    let start = Instant::now();
    let sprung = free_chain_drift(true, 1);
    let free = free_chain_drift(false, 2);
    let secs = start.elapsed().as_secs_f64();
    let momentum = sprung.momentum.max(free.momentum);
    let angular = sprung.angular.max(free.angular);
    let energy = sprung.energy.max(free.energy);
    let pass = momentum < MOMENTUM_TOL && energy < ENERGY_TOL && angular < ANGULAR_TOL && secs < 10.0;
    Verdict::new(
        pass,
        format!(
            "momentum {momentum:.1e} (<{MOMENTUM_TOL:.0e}), energy {energy:.1e} (<{ENERGY_TOL:.0e}), angular {angular:.1e} (<{ANGULAR_TOL:.0e}), {secs:.1} s (<10 s)"
        ),
    )
}

// ---------------------------------------------------------------------------
// 2. hydrodynamic oracles

pub const HYDRO_TOL: f64 = 1e-8;
pub const DRAG_INTEGRAL_TOL: f64 = 1e-10;
pub const HYDRO_TRIALS: usize = 1000;

pub fn random_params(rng: &mut ChaCha8Rng) -> HydroParams {
    HydroParams {
        added_mass_coeff: rng.gen_range(0.2..1.5),
        pressure_coeff: rng.gen_range(0.0..1.0),
        friction_coeff: rng.gen_range(0.0..0.2),
        drag_coeff: rng.gen_range(0.0..3.0),
        fluid_density: rng.gen_range(800.0..1200.0),
        preset: None,
    }
}

pub fn random_segment_state(rng: &mut ChaCha8Rng) -> SegmentFrameState {
    let l = rng.gen_range(0.01..0.05);
    let h = rng.gen_range(0.005..0.03);
    let perimeter = rng.gen_range(1.5..3.5) * h;
    // a quarter of the states put the zero of the lateral velocity on the segment
    let omega = rng.gen_range(-15.0..15.0);
    let v0 = if rng.gen_bool(0.25) {
        -omega * l * rng.gen_range(0.0..1.0)
    } else {
        rng.gen_range(-0.3..0.3)
    };
    SegmentFrameState::rigid(rng.gen_range(-0.3..0.3), v0, omega, l, h, perimeter)
        .with_accelerations(rng.gen_range(-20.0..20.0), rng.gen_range(-300.0..300.0))
}

/// Rigid segment motion with constant world-frame accelerations that passes
/// through `s` at t = 0.
struct SegmentMotion {
    p0: [f64; 2],
    v: [f64; 2],
    a: [f64; 2],
    theta0: f64,
    omega: f64,
    omega_dot: f64,
    length: f64,
}

impl SegmentMotion {
    fn through(s: &SegmentFrameState, theta0: f64, p0: [f64; 2], u_dot: f64) -> Self {
        let (e, n) = axes(theta0);
        // d(v·n)/dt = a·n - ω (v·e), so the lateral acceleration carries ω u
        let a_lat = s.a0 + s.omega * s.u;
        SegmentMotion {
            p0,
            v: [s.u * e[0] + s.v0 * n[0], s.u * e[1] + s.v0 * n[1]],
            a: [u_dot * e[0] + a_lat * n[0], u_dot * e[1] + a_lat * n[1]],
            theta0,
            omega: s.omega,
            omega_dot: s.omega_dot,
            length: s.length,
        }
    }

    fn theta(&self, t: f64) -> f64 {
        self.theta0 + self.omega * t + 0.5 * self.omega_dot * t * t
    }

    fn rate(&self, t: f64) -> f64 {
        self.omega + self.omega_dot * t
    }

    fn anterior(&self, t: f64) -> [f64; 2] {
        [
            self.p0[0] + self.v[0] * t + 0.5 * self.a[0] * t * t,
            self.p0[1] + self.v[1] * t + 0.5 * self.a[1] * t * t,
        ]
    }

    fn anterior_velocity(&self, t: f64) -> [f64; 2] {
        [self.v[0] + self.a[0] * t, self.v[1] + self.a[1] * t]
    }

    /// Lateral velocity of the section at distance `x` behind the anterior end.
    fn lateral(&self, x: f64, t: f64) -> f64 {
        let (_, n) = axes(self.theta(t));
        let v = self.anterior_velocity(t);
        v[0] * n[0] + v[1] * n[1] + x * self.rate(t)
    }

    fn longitudinal(&self, t: f64) -> f64 {
        let (e, _) = axes(self.theta(t));
        let v = self.anterior_velocity(t);
        v[0] * e[0] + v[1] * e[1]
    }

    /// World momentum of the attached fluid, `(Px, Py, H_origin)`.
    fn fluid_momentum(&self, m: f64, t: f64) -> [f64; 3] {
        let (e, n) = axes(self.theta(t));
        let p = self.anterior(t);
        let l = self.length;
        let v = self.anterior_velocity(t);
        let tol = 1e-13 * m * l * (v[0].hypot(v[1]) + self.rate(t).abs() * l);
        let lateral = simpson_adaptive(&|x| m * self.lateral(x, t), 0.0, l, tol);
        // r × (w n) with r = p + x e
        let moment = simpson_adaptive(
            &|x| {
                let r = [p[0] + x * e[0], p[1] + x * e[1]];
                m * self.lateral(x, t) * (r[0] * n[1] - r[1] * n[0])
            },
            0.0,
            l,
            tol * (p[0].hypot(p[1]) + l),
        );
        [lateral * n[0], lateral * n[1], moment]
    }
}

fn axes(theta: f64) -> ([f64; 2], [f64; 2]) {
    let (s, c) = theta.sin_cos();
    ([c, s], [-s, c])
}

/// Added-mass wrench from the rate of change of the attached fluid's
/// momentum, in the segment frame about the anterior end.
fn slice_momentum_wrench(motion: &SegmentMotion, m: f64) -> PlanarWrench {
    let h = 2e-4 / (1.0 + motion.omega.abs() + motion.omega_dot.abs().sqrt());
    let rate = derivative3(&|t| motion.fluid_momentum(m, t), 0.0, h);
    let force = [-rate[0], -rate[1]];
    let torque_origin = -rate[2];
    let p = motion.anterior(0.0);
    let torque = torque_origin - (p[0] * force[1] - p[1] * force[0]);
    let (e, n) = axes(motion.theta(0.0));
    PlanarWrench::new(
        force[0] * e[0] + force[1] * e[1],
        force[0] * n[0] + force[1] * n[1],
        torque,
    )
}

/// [`derivative`] for a vector-valued function, sharing the evaluations.
fn derivative3(f: &dyn Fn(f64) -> [f64; 3], t: f64, h: f64) -> [f64; 3] {
    let d = |h: f64| {
        let (a, b) = (f(t + h), f(t - h));
        [0, 1, 2].map(|i| (a[i] - b[i]) / (2.0 * h))
    };
    let (d1, d2) = (d(h), d(0.5 * h));
    [0, 1, 2].map(|i| (4.0 * d2[i] - d1[i]) / 3.0)
}

/// Boundary term: net momentum flux of the attached fluid through the planes
/// at the two ends.
fn boundary_flux(motion: &SegmentMotion, m: f64, cp: f64) -> f64 {
    let w0 = motion.lateral(0.0, 0.0);
    let wl = motion.lateral(motion.length, 0.0);
    cp * 0.5 * m * (w0 * w0 - wl * wl)
}

/// Resistive loads by quadrature of the local velocity profile.
fn resistive_by_quadrature(motion: &SegmentMotion, s: &SegmentFrameState, p: &HydroParams) -> (f64, f64, f64) {
    let l = s.length;
    let u = motion.longitudinal(0.0);
    let half_rho = 0.5 * p.fluid_density;
    let friction =
        -half_rho * p.friction_coeff * s.perimeter * simpson_adaptive(&|_| u.abs() * u, 0.0, l, 1e-15 * u * u * l);
    let w = |x: f64| motion.lateral(x, 0.0);
    let scale = (s.v0.abs() + s.omega.abs() * l).powi(2) * l;
    let zero = velocity_zero(s.v0, s.omega);
    let i0 = simpson_pieces(&|x| w(x).abs() * w(x), 0.0, l, &zero, 1e-14 * scale);
    let i1 = simpson_pieces(&|x| w(x).abs() * w(x) * x, 0.0, l, &zero, 1e-14 * scale * l);
    let k = half_rho * p.drag_coeff * s.depth;
    (friction, -k * i0, -k * i1)
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HydroErrors {
    pub added_mass: f64,
    pub pressure: f64,
    pub resistive: f64,
    pub drag_integrals: f64,
}

pub fn hydro_errors(trials: usize, seed: u64) -> HydroErrors {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = HydroErrors::default();
    for _ in 0..trials {
        let params = random_params(&mut rng);
        let s = random_segment_state(&mut rng);
        let theta0 = rng.gen_range(-PI..PI);
        let p0 = [rng.gen_range(-0.1..0.1), rng.gen_range(-0.1..0.1)];
        let motion = SegmentMotion::through(&s, theta0, p0, rng.gen_range(-5.0..5.0));
        let m = params.added_mass_coeff * PI / 4.0 * s.depth * s.depth * params.fluid_density;
        let l = s.length;

        let reactive = reactive_parts(&s, &params);
        let oracle = slice_momentum_wrench(&motion, m);
        // largest individual term of each component sets the relative scale
        let vel = s.u.abs() + s.v0.abs() + s.omega.abs() * l;
        let f_scale = m * l * (s.a0.abs() + s.omega_dot.abs() * l + s.omega.abs() * vel);
        let t_scale = f_scale * l + m * l * s.u.abs() * vel;
        let am = reactive.added_mass;
        worst.added_mass = worst
            .added_mass
            .max(rel_err(am.f_long, oracle.f_long, f_scale))
            .max(rel_err(am.f_lat, oracle.f_lat, f_scale))
            .max(rel_err(am.torque, oracle.torque, t_scale));
        let flux = boundary_flux(&motion, m, params.pressure_coeff);
        let p_scale = 0.5 * m * vel * vel;
        worst.pressure = worst
            .pressure
            .max(rel_err(reactive.pressure.f_long, flux, p_scale))
            .max(reactive.pressure.f_lat.abs() + reactive.pressure.torque.abs());

        let resistive = resistive_parts(&s, &params);
        let (friction, lat, torque) = resistive_by_quadrature(&motion, &s, &params);
        let r_scale =
            0.5 * params.fluid_density * params.drag_coeff * s.depth * (s.v0.abs() + s.omega.abs() * l).powi(2) * l;
        worst.resistive = worst
            .resistive
            .max(rel_err(resistive.friction.f_long, friction, 0.0))
            .max(rel_err(resistive.drag.f_lat, lat, r_scale))
            .max(rel_err(resistive.drag.torque, torque, r_scale * l));

        let (i0, i1) = drag_integrals(s.v0, s.omega, l);
        let w = |x: f64| s.v0 + s.omega * x;
        let scale = (s.v0.abs() + s.omega.abs() * l).powi(2) * l;
        let zero = velocity_zero(s.v0, s.omega);
        let q0 = simpson_pieces(&|x| w(x).abs() * w(x), 0.0, l, &zero, 1e-14 * scale);
        let q1 = simpson_pieces(&|x| w(x).abs() * w(x) * x, 0.0, l, &zero, 1e-14 * scale * l);
        worst.drag_integrals =
            worst
                .drag_integrals
                .max(rel_err(i0, q0, 1e-3 * scale))
                .max(rel_err(i1, q1, 1e-3 * scale * l));
    }
    worst
}

pub fn hydro_oracles() -> Verdict {
    let start = Instant::now();
    let e = hydro_errors(HYDRO_TRIALS, 2024);
    let secs = start.elapsed().as_secs_f64();
    let pass = e.added_mass < HYDRO_TOL
        && e.pressure < HYDRO_TOL
        && e.resistive < HYDRO_TOL
        && e.drag_integrals < DRAG_INTEGRAL_TOL
        && secs < 5.0;
    Verdict::new(
        pass,
        format!(
            "{HYDRO_TRIALS} states: added mass {:.1e}, pressure {:.1e}, resistive {:.1e} (<{HYDRO_TOL:.0e}), drag integrals {:.1e} (<{DRAG_INTEGRAL_TOL:.0e}), {secs:.2} s (<5 s)",
            e.added_mass, e.pressure, e.resistive, e.drag_integrals
        ),
    )
}

// ---------------------------------------------------------------------------
// 3. scaling

pub const SCALING_TOL: f64 = 1e-10;
pub const SCALING_TRIALS: usize = 1000;

#[derive(Debug, Clone, Copy, Default)]
pub struct ScalingErrors {
    /// Dimensional-then-normalized against the direct dimensionless form.
    pub dual_path: f64,
    /// Normalized reactive wrench before and after rescaling.
    pub reactive_invariance: f64,
    /// Normalized resistive wrench after rescaling against `(α/β)` times before.
    pub resistive_aspect: f64,
    /// Dimensional reactive forces against `α²β²γ²` and torques against `α³β²γ²`.
    pub dimensional: f64,
}

fn wrench_err(a: &PlanarWrench, b: &PlanarWrench) -> f64 {
    let floor = 1e-6 * (b.f_long.abs() + b.f_lat.abs() + b.torque.abs()).max(1e-300);
    rel_err(a.f_long, b.f_long, floor)
        .max(rel_err(a.f_lat, b.f_lat, floor))
        .max(rel_err(a.torque, b.torque, floor))
}

fn scaled(w: PlanarWrench, force: f64, torque: f64) -> PlanarWrench {
    PlanarWrench::new(w.f_long * force, w.f_lat * force, w.torque * torque)
}

pub fn scaling_errors(trials: usize, seed: u64) -> ScalingErrors {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = ScalingErrors::default();
    for _ in 0..trials {
        let params = random_params(&mut rng);
        let base = Scales {
            length: rng.gen_range(0.01..0.05),
            depth: rng.gen_range(0.005..0.03),
            frequency: rng.gen_range(0.5..5.0),
            amplitude: rng.gen_range(0.001..0.01),
            speed: rng.gen_range(0.01..0.3),
            fluid_density: params.fluid_density,
        };
        let d = DimensionlessState {
            u: rng.gen_range(-2.0..2.0),
            v0: rng.gen_range(-3.0..3.0),
            omega: rng.gen_range(-6.0..6.0),
            a0: rng.gen_range(-20.0..20.0),
            omega_dot: rng.gen_range(-40.0..40.0),
            perimeter_ratio: rng.gen_range(1.5..3.5),
        };
        let (alpha, beta, gamma) = (
            rng.gen_range(0.2..5.0),
            rng.gen_range(0.2..5.0),
            rng.gen_range(0.2..5.0),
        );
        let sc = Scales {
            length: alpha * base.length,
            depth: beta * base.depth,
            frequency: gamma * base.frequency,
            amplitude: alpha * base.amplitude,
            speed: alpha * gamma * base.speed,
            fluid_density: base.fluid_density,
        };
        let s0 = d.to_dimensional(&base);
        let s1 = d.to_dimensional(&sc);
        let (r0, q0) = normalized_wrenches(&s0, &params, &base);
        let (r1, q1) = normalized_wrenches(&s1, &params, &sc);
        let (dr, dq) = dimensionless_wrenches(&d, sc.amplitude_ratio(), sc.stride_ratio(), sc.aspect_ratio(), &params);
        worst.dual_path = worst.dual_path.max(wrench_err(&r1, &dr)).max(wrench_err(&q1, &dq));
        worst.reactive_invariance = worst.reactive_invariance.max(wrench_err(&r1, &r0));
        let ar = alpha / beta;
        worst.resistive_aspect = worst.resistive_aspect.max(wrench_err(&q1, &scaled(q0, ar, ar)));
        let force = (alpha * beta * gamma).powi(2);
        let dim0 = mubot::hydro::reactive_wrench(&s0, &params);
        let dim1 = mubot::hydro::reactive_wrench(&s1, &params);
        worst.dimensional = worst
            .dimensional
            .max(wrench_err(&dim1, &scaled(dim0, force, force * alpha)));
    }
    worst
}

pub fn scaling() -> Verdict {
    let e = scaling_errors(SCALING_TRIALS, 99);
    let worst = e
        .dual_path
        .max(e.reactive_invariance)
        .max(e.resistive_aspect)
        .max(e.dimensional);
    Verdict::new(
        worst < SCALING_TOL,
        format!(
            "{SCALING_TRIALS} trials: dual path {:.1e}, reactive invariance {:.1e}, resistive ∝ l/h {:.1e}, dimensional {:.1e} (<{SCALING_TOL:.0e})",
            e.dual_path, e.reactive_invariance, e.resistive_aspect, e.dimensional
        ),
    )
}

// ---------------------------------------------------------------------------
// 4. three-body chain against the closed-form Lagrangian

pub const LAGRANGIAN_TOL: f64 = 1e-9;
pub const LAGRANGIAN_TRIALS: usize = 1000;

pub fn lagrangian_error(trials: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for level in StiffnessLevel::ALL {
        let model = build_robot(1, Some(level), &Default::default()).unwrap();
        let seg = &model.segments;
        let p = ChainParams {
            m: [seg[0].mass.mass, seg[1].mass.mass, seg[2].mass.mass],
            i: [seg[0].mass.inertia, seg[1].mass.inertia, seg[2].mass.inertia],
            l: [seg[0].geometry.length, seg[1].geometry.length, seg[2].geometry.length],
            d: [seg[0].mass.com_offset, seg[1].mass.com_offset, seg[2].mass.com_offset],
        };
        for _ in 0..trials.div_ceil(3) {
            let s = super::random_state(&model, &mut rng);
            let tau = rng.gen_range(-2e-3..2e-3);
            let lib = forward_dynamics(&model, &s, &[tau], &HydroParams::vacuum())
                .unwrap()
                .qdd;
            let q: [f64; 5] = s.q.clone().try_into().unwrap();
            let qd: [f64; 5] = s.qd.clone().try_into().unwrap();
            let (mass, bias) = chain_eom(&p, &q, &qd);
            let generalized = [
                0.0,
                0.0,
                0.0,
                tau - model.joints[0].stiffness * q[3],
                -model.joints[1].stiffness * q[4],
            ];
            let mm = Matrix5::from_fn(|r, c| mass[r][c]);
            let rhs = Vector5::from_fn(|r, _| generalized[r] - bias[r]);
            let oracle = mm.lu().solve(&rhs).unwrap();
            let scale = oracle.amax();
            for (a, b) in lib.iter().zip(oracle.iter()) {
                worst = worst.max((a - b).abs() / scale);
            }
        }
    }
    worst
}

pub fn lagrangian() -> Verdict {
    let e = lagrangian_error(LAGRANGIAN_TRIALS, 5);
    Verdict::new(
        e < LAGRANGIAN_TOL,
        format!("{LAGRANGIAN_TRIALS} states, max |Δq̈|/|q̈|∞ {e:.1e} (<{LAGRANGIAN_TOL:.0e})"),
    )
}

// ---------------------------------------------------------------------------
// 5. optimizer on an analytic objective

pub const EPHE_DIM: usize = 8;
pub const EPHE_TOL: f64 = 0.05;
pub const EPHE_SEEDS: u64 = 10;

/// Final `|η - γ*|∞` of one session on `R(γ) = max(0, 1 - |γ - γ*|²)` over
/// the unit box.
pub fn ephe_distance(seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
    let target: Vec<f64> = (0..EPHE_DIM).map(|_| rng.gen_range(0.1..0.9)).collect();
    let cfg = EpheConfig {
        rollouts: 50,
        elite: 25,
        episodes: 40,
        sessions: 1,
        seed,
        ..Default::default()
    };
    let init = EpheHyperParams::from_bounds(vec![(0.0, 1.0); EPHE_DIM]).unwrap();
    let objective = |g: &[f64]| {
        let d2: f64 = g.iter().zip(&target).map(|(a, b)| (a - b) * (a - b)).sum();
        (1.0 - d2).max(0.0)
    };
    let result = run_session(&cfg, &init, 0, &objective);
    result
        .final_hp
        .eta
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

pub fn ephe_convergence() -> Verdict {
    let start = Instant::now();
    let distances: Vec<f64> = (0..EPHE_SEEDS).map(ephe_distance).collect();
    let secs = start.elapsed().as_secs_f64();
    let ok = distances.iter().filter(|d| **d < EPHE_TOL).count();
    let worst = distances.iter().cloned().fold(0.0, f64::max);
    Verdict::new(
        ok as u64 == EPHE_SEEDS && secs < 5.0,
        format!("{ok}/{EPHE_SEEDS} seeds within {EPHE_TOL}, worst |η-γ*|∞ {worst:.4}, {secs:.2} s (<5 s)"),
    )
}

// ---------------------------------------------------------------------------
// 6-9. sweep results

/// Directory holding the report files of the full sweep.
pub fn results_dir() -> PathBuf {
    std::env::var_os("MUBOT_RESULTS")
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("../../results"))
}

pub struct SweepReports {
    pub speeds: Vec<SpeedRow>,
    pub sessions: Vec<SessionRow>,
    pub wavelengths: Vec<WavelengthRow>,
    pub dir: PathBuf,
}

impl SweepReports {
    pub fn load(dir: &Path) -> Result<Self, String> {
        let read = |name: &str| dir.join(name);
        Ok(SweepReports {
            speeds: read_csv(&read("speeds.csv")).map_err(|e| format!("{}: {e}", read("speeds.csv").display()))?,
            sessions: read_csv(&read("sessions.csv")).map_err(|e| format!("sessions.csv: {e}"))?,
            wavelengths: read_csv(&read("wavelengths.csv")).map_err(|e| format!("wavelengths.csv: {e}"))?,
            dir: dir.to_path_buf(),
        })
    }

    pub fn thrust(&self, case: &str) -> Result<Vec<ThrustRow>, String> {
        read_csv(&self.dir.join(format!("thrust_{case}.csv"))).map_err(|e| format!("thrust_{case}.csv: {e}"))
    }

    pub fn tail(&self, case: &str) -> Result<Vec<TailRow>, String> {
        read_csv(&self.dir.join(format!("tail_torque_{case}.csv"))).map_err(|e| format!("tail_torque_{case}.csv: {e}"))
    }

    fn speed(&self, noa: usize, stiffness: &str, hm: &str) -> Option<&SpeedRow> {
        self.speeds
            .iter()
            .find(|r| r.noa == noa && r.stiffness == stiffness && r.hm == hm)
    }
}

fn with_reports(check: impl FnOnce(&SweepReports) -> Result<Verdict, String>) -> Verdict {
    match SweepReports::load(&results_dir()).and_then(|r| check(&r)) {
        Ok(v) => v,
        Err(e) => Verdict::new(false, format!("sweep results unavailable: {e}")),
    }
}

fn is_reactive(hm: &str) -> bool {
    hm != "HM1"
}

pub fn trend() -> Verdict {
    with_reports(|r| {
        let noas = [2, 4, 6];
        let mut per_session = Vec::new();
        for noa in noas {
            let case = r
                .speed(noa, "high", "HM4")
                .ok_or_else(|| format!("missing noa{noa}-H-HM4"))?
                .case
                .clone();
            let mut rows: Vec<&SessionRow> = r.sessions.iter().filter(|s| s.case == case).collect();
            rows.sort_by_key(|s| s.session);
            per_session.push(rows);
        }
        let n = per_session.iter().map(Vec::len).min().unwrap_or(0);
        let mut good = 0;
        let mut lines = Vec::new();
        for s in 0..n {
            let ms: Vec<f64> = per_session.iter().map(|rows| rows[s].speed_m_s).collect();
            let bl: Vec<f64> = per_session.iter().map(|rows| rows[s].speed_bl_s).collect();
            let ok = ms.windows(2).all(|w| w[1] > w[0]) && bl.windows(2).all(|w| w[1] < w[0]);
            good += ok as usize;
            lines.push(format!(
                "s{s}: {:.1}/{:.1}/{:.1} cm/s, {:.2}/{:.2}/{:.2} BL/s",
                100.0 * ms[0],
                100.0 * ms[1],
                100.0 * ms[2],
                bl[0],
                bl[1],
                bl[2]
            ));
        }
        Ok(Verdict::new(
            n > 0 && 3 * good >= 2 * n,
            format!("{good}/{n} sessions monotone; {}", lines.join("; ")),
        ))
    })
}

pub const SPEED_BAND: (f64, f64) = (0.2, 1.0);
pub const BEST_CASE_FLOOR: f64 = 0.4;

pub fn speed_band() -> Verdict {
    with_reports(|r| {
        let rows: Vec<&SpeedRow> = r.speeds.iter().filter(|s| is_reactive(&s.hm)).collect();
        if rows.is_empty() {
            return Err("no HM2-HM4 cases".into());
        }
        let outside: Vec<String> = rows
            .iter()
            .filter(|s| !(s.speed_bl_s >= SPEED_BAND.0 && s.speed_bl_s <= SPEED_BAND.1))
            .map(|s| format!("{} {:.2}", s.case, s.speed_bl_s))
            .collect();
        let lo = rows.iter().map(|s| s.speed_bl_s).fold(f64::INFINITY, f64::min);
        let hi = rows.iter().map(|s| s.speed_bl_s).fold(0.0, f64::max);
        let best = r.speed(6, "high", "HM4").ok_or("missing noa6-H-HM4")?.speed_bl_s;
        Ok(Verdict::new(
            outside.is_empty() && best >= BEST_CASE_FLOOR,
            format!(
                "{} cases, range {lo:.2}-{hi:.2} BL/s in [{}, {}]: {} outside{}; noa6-H-HM4 {best:.2} BL/s (>={BEST_CASE_FLOOR})",
                rows.len(),
                SPEED_BAND.0,
                SPEED_BAND.1,
                outside.len(),
                if outside.is_empty() { String::new() } else { format!(" ({})", outside.join(", ")) }
            ),
        ))
    })
}

pub const WAVE_BAND: (f64, f64) = (0.15, 0.35);
pub const WAVE_CV: f64 = 0.30;

pub fn wavelength_reproduction() -> Verdict {
    with_reports(|r| {
        let rows: Vec<&WavelengthRow> = r
            .wavelengths
            .iter()
            .filter(|w| is_reactive(&w.hm) && w.wave_per_segment.is_finite())
            .collect();
        if rows.is_empty() {
            return Err("no HM2-HM4 wavelength fits".into());
        }
        let values: Vec<f64> = rows.iter().map(|w| w.wave_per_segment).collect();
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        // variation across NoA: means per NoA
        let mut per_noa = Vec::new();
        for noa in [2, 4, 6] {
            let v: Vec<f64> = rows
                .iter()
                .filter(|w| w.noa == noa)
                .map(|w| w.wave_per_segment)
                .collect();
            if !v.is_empty() {
                per_noa.push(v.iter().sum::<f64>() / v.len() as f64);
            }
        }
        let m = per_noa.iter().sum::<f64>() / per_noa.len() as f64;
        let sd = (per_noa.iter().map(|x| (x - m).powi(2)).sum::<f64>() / per_noa.len() as f64).sqrt();
        let cv = sd / m;
        let flagged = rows.iter().filter(|w| !w.flag.is_empty()).count();
        Ok(Verdict::new(
            mean >= WAVE_BAND.0 && mean <= WAVE_BAND.1 && cv < WAVE_CV,
            format!(
                "{} cases, mean wave/segment {mean:.3} in [{}, {}], per-NoA means {}, CV {:.1}% (<{:.0}%), {flagged} flagged fits",
                rows.len(),
                WAVE_BAND.0,
                WAVE_BAND.1,
                per_noa.iter().map(|v| format!("{v:.3}")).collect::<Vec<_>>().join("/"),
                100.0 * cv,
                100.0 * WAVE_CV
            ),
        ))
    })
}

pub const RESISTIVE_BALANCE: f64 = 0.1;
pub const FIN_PRESSURE_SHARE: f64 = 0.6;
pub const TAIL_RATIO_BAND: (f64, f64) = (0.3, 3.0);

pub fn mechanisms() -> Verdict {
    with_reports(|r| {
        let mut fails = Vec::new();
        let (mut hm1, mut pressure_cases, mut tail_cases) = (0, 0, 0);
        let mut worst_balance: f64 = 0.0;
        let mut min_share = f64::INFINITY;
        let (mut ratio_lo, mut ratio_hi) = (f64::INFINITY, 0.0f64);
        for s in &r.speeds {
            let thrust = r.thrust(&s.case)?;
            let all = thrust.iter().find(|t| t.segment == "all").ok_or("missing totals row")?;
            if s.hm == "HM1" {
                hm1 += 1;
                let balance = (all.drag_n + all.friction_n).abs() / all.friction_n.abs();
                worst_balance = worst_balance.max(balance);
                if !(balance < RESISTIVE_BALANCE) {
                    fails.push(format!("{} drag/friction imbalance {balance:.2}", s.case));
                }
            }
            if s.hm == "HM3" || s.hm == "HM4" {
                pressure_cases += 1;
                let others = [all.added_mass_n, all.drag_n, all.friction_n];
                let largest = all.pressure_n > 0.0 && others.iter().all(|o| all.pressure_n > *o);
                let fin = thrust.iter().find(|t| t.segment == "T").ok_or("missing fin row")?;
                let share = fin.pressure_n / all.pressure_n;
                min_share = min_share.min(share);
                if !largest {
                    fails.push(format!("{} pressure not the largest", s.case));
                }
                if !(share >= FIN_PRESSURE_SHARE) {
                    fails.push(format!("{} fin pressure share {share:.2}", s.case));
                }
            }
            if is_reactive(&s.hm) && (s.stiffness == "high" || s.stiffness == "medium") {
                tail_cases += 1;
                let tail = r.tail(&s.case)?;
                let get = |k: &str| tail.iter().find(|t| t.source == k).map(|t| t.rms_n_m);
                let ratio = get("added_mass").ok_or("missing added_mass")? / get("spring").ok_or("missing spring")?;
                ratio_lo = ratio_lo.min(ratio);
                ratio_hi = ratio_hi.max(ratio);
                if !(ratio >= TAIL_RATIO_BAND.0 && ratio <= TAIL_RATIO_BAND.1) {
                    fails.push(format!("{} Ta/Ts {ratio:.2}", s.case));
                }
            }
        }
        if hm1 == 0 || pressure_cases == 0 || tail_cases == 0 {
            return Err("sweep does not cover HM1, HM3/HM4 and HM2-HM4 high/medium".into());
        }
        Ok(Verdict::new(
            fails.is_empty(),
            format!(
                "HM1 worst |drag+friction|/|friction| {worst_balance:.3} (<{RESISTIVE_BALANCE}); {pressure_cases} HM3/4 cases, min fin pressure share {min_share:.2} (>={FIN_PRESSURE_SHARE}); {tail_cases} cases Ta/Ts {ratio_lo:.2}-{ratio_hi:.2} in [{}, {}]{}",
                TAIL_RATIO_BAND.0,
                TAIL_RATIO_BAND.1,
                if fails.is_empty() { String::new() } else { format!("; failing: {}", fails.join(", ")) }
            ),
        ))
    })
}

// ---------------------------------------------------------------------------
// 10. determinism

/// Retrain one full case of the sweep under `jobs` worker threads and
/// compare its `speeds.csv` row with the stored one byte for byte.
pub fn determinism(noa: usize, stiffness: StiffnessLevel, hm: HydroModel, jobs: usize) -> Verdict {
    let stored = match std::fs::read_to_string(results_dir().join("speeds.csv")) {
        Ok(s) => s,
        Err(e) => return Verdict::new(false, format!("sweep results unavailable: {e}")),
    };
    let spec = SweepConfig::default().case(noa, stiffness, hm);
    let id = spec.id().to_string();
    let Some(expected) = stored.lines().find(|l| l.starts_with(&format!("{id},"))) else {
        return Verdict::new(false, format!("{id} not in stored speeds.csv"));
    };
    let dir = tempfile::tempdir().unwrap();
    let store = ResultStore::open(&dir.path().join("store")).unwrap();
    let start = Instant::now();
    let outcomes = run_sweep(&[spec], jobs, &store).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let Some(result) = outcomes[0].result() else {
        return Verdict::new(false, format!("{id} failed to train"));
    };
    let out = dir.path().join("report");
    emit_reports(std::slice::from_ref(result), &out, &mut std::io::sink()).unwrap();
    let fresh = std::fs::read_to_string(out.join("speeds.csv")).unwrap();
    let got = fresh.lines().nth(1).unwrap_or_default();
    Verdict::new(
        got == expected,
        format!(
            "{id} retrained with {jobs} threads in {secs:.0} s; speeds.csv row {}",
            if got == expected {
                "identical".to_string()
            } else {
                format!("differs: {got} vs {expected}")
            }
        ),
    )
}
