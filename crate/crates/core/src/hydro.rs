//! Segmental hydrodynamic forces.
//!
//! Each rigid segment carries two families of fluid loads:
//!
//! * reactive loads from the potential flow in the added-mass volume bounded
//!   by planes through the segment's anterior and posterior ends: an
//!   added-mass part (rate of change of slice momentum) and a boundary
//!   pressure part scaled by `C_p`;
//! * resistive loads: quadratic lateral drag integrated along the segment and
//!   longitudinal skin friction.
//!
//! All wrenches are expressed in the segment frame (x from the anterior end
//! toward the tail, y lateral) with the torque taken about the anterior end.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Water density (kg/m^3).
pub const WATER_DENSITY: f64 = 1000.0;
pub const DEFAULT_FRICTION_COEFF: f64 = 0.06;
pub const DEFAULT_DRAG_COEFF: f64 = 2.25;

/// Reactive-force presets: which of added mass and boundary pressure are on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HydroModel {
    HM1,
    HM2,
    HM3,
    HM4,
}

impl HydroModel {
    pub const ALL: [HydroModel; 4] = [Self::HM1, Self::HM2, Self::HM3, Self::HM4];

    /// `(C_a, C_p)` for the preset.
    pub fn coefficients(self) -> (f64, f64) {
        match self {
            HydroModel::HM1 => (0.0, 0.0),
            HydroModel::HM2 => (1.0, 0.0),
            HydroModel::HM3 => (1.0, 0.5),
            HydroModel::HM4 => (1.0, 1.0),
        }
    }

    pub fn index(self) -> usize {
        self as usize + 1
    }
}

/// Preset lookup by name (`HM1`, `hm-3`, `4`, ...).
pub fn hm_preset(id: &str) -> Result<(f64, f64)> {
    Ok(id.parse::<HydroModel>()?.coefficients())
}

impl fmt::Display for HydroModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HM{}", self.index())
    }
}

impl FromStr for HydroModel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .collect::<String>()
            .to_ascii_uppercase();
        match norm.trim_start_matches("HM") {
            "1" => Ok(Self::HM1),
            "2" => Ok(Self::HM2),
            "3" => Ok(Self::HM3),
            "4" => Ok(Self::HM4),
            _ => Err(Error::UnknownHydroModel(s.to_string())),
        }
    }
}

/// Fluid coefficients for one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HydroParams {
    pub added_mass_coeff: f64,
    pub pressure_coeff: f64,
    pub friction_coeff: f64,
    pub drag_coeff: f64,
    pub fluid_density: f64,
    /// Preset the reactive coefficients came from, if any.
    pub preset: Option<HydroModel>,
}

impl HydroParams {
    /// Preset reactive coefficients with the default resistive coefficients in water.
    pub fn preset(model: HydroModel) -> Self {
        let (ca, cp) = model.coefficients();
        HydroParams {
            added_mass_coeff: ca,
            pressure_coeff: cp,
            friction_coeff: DEFAULT_FRICTION_COEFF,
            drag_coeff: DEFAULT_DRAG_COEFF,
            fluid_density: WATER_DENSITY,
            preset: Some(model),
        }
    }

    /// No fluid loads at all.
    pub fn vacuum() -> Self {
        HydroParams {
            added_mass_coeff: 0.0,
            pressure_coeff: 0.0,
            friction_coeff: 0.0,
            drag_coeff: 0.0,
            fluid_density: WATER_DENSITY,
            preset: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let coeffs = [
            self.added_mass_coeff,
            self.pressure_coeff,
            self.friction_coeff,
            self.drag_coeff,
        ];
        if coeffs.iter().any(|c| !(*c >= 0.0 && c.is_finite())) {
            return Err(Error::InvalidParameter(format!(
                "hydrodynamic coefficients must be non-negative: {self:?}"
            )));
        }
        if !(self.fluid_density > 0.0 && self.fluid_density.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "fluid density must be positive, got {}",
                self.fluid_density
            )));
        }
        if let Some(p) = self.preset {
            let (ca, cp) = p.coefficients();
            if ca != self.added_mass_coeff || cp != self.pressure_coeff {
                return Err(Error::InvalidParameter(format!(
                    "coefficients (C_a={}, C_p={}) do not match preset {p}",
                    self.added_mass_coeff, self.pressure_coeff
                )));
            }
        }
        Ok(())
    }

    pub fn has_reactive(&self) -> bool {
        self.added_mass_coeff != 0.0
    }
}

/// Segment-frame kinematics feeding the force models.
///
/// `a0` is the rate of change of the lateral velocity at the anterior
/// boundary as seen in the rotating segment frame, `d(v0)/dt`. When produced
/// by the chain kinematics it holds only the velocity-product part (zero
/// generalized accelerations), and `omega_dot` is zero.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SegmentFrameState {
    pub u: f64,
    pub v0: f64,
    pub vl: f64,
    pub omega: f64,
    pub a0: f64,
    pub omega_dot: f64,
    pub length: f64,
    pub depth: f64,
    pub perimeter: f64,
}

impl SegmentFrameState {
    /// State with `vl` filled in from rigid-body kinematics.
    pub fn rigid(u: f64, v0: f64, omega: f64, length: f64, depth: f64, perimeter: f64) -> Self {
        SegmentFrameState {
            u,
            v0,
            vl: v0 + omega * length,
            omega,
            a0: 0.0,
            omega_dot: 0.0,
            length,
            depth,
            perimeter,
        }
    }

    pub fn with_accelerations(mut self, a0: f64, omega_dot: f64) -> Self {
        self.a0 = a0;
        self.omega_dot = omega_dot;
        self
    }
}

/// Planar force/torque pair in the segment frame, torque about the anterior end.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarWrench {
    pub f_long: f64,
    pub f_lat: f64,
    pub torque: f64,
}

impl PlanarWrench {
    pub const ZERO: PlanarWrench = PlanarWrench {
        f_long: 0.0,
        f_lat: 0.0,
        torque: 0.0,
    };

    pub fn new(f_long: f64, f_lat: f64, torque: f64) -> Self {
        PlanarWrench { f_long, f_lat, torque }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.f_long, self.f_lat, self.torque]
    }

    pub fn is_finite(&self) -> bool {
        self.f_long.is_finite() && self.f_lat.is_finite() && self.torque.is_finite()
    }
}

impl Add for PlanarWrench {
    type Output = PlanarWrench;
    fn add(self, o: PlanarWrench) -> PlanarWrench {
        PlanarWrench::new(self.f_long + o.f_long, self.f_lat + o.f_lat, self.torque + o.torque)
    }
}

impl AddAssign for PlanarWrench {
    fn add_assign(&mut self, o: PlanarWrench) {
        *self = *self + o;
    }
}

impl Sub for PlanarWrench {
    type Output = PlanarWrench;
    fn sub(self, o: PlanarWrench) -> PlanarWrench {
        self + (-o)
    }
}

impl Neg for PlanarWrench {
    type Output = PlanarWrench;
    fn neg(self) -> PlanarWrench {
        PlanarWrench::new(-self.f_long, -self.f_lat, -self.torque)
    }
}

impl Mul<f64> for PlanarWrench {
    type Output = PlanarWrench;
    fn mul(self, s: f64) -> PlanarWrench {
        PlanarWrench::new(self.f_long * s, self.f_lat * s, self.torque * s)
    }
}

/// Reactive wrench split into its two mechanisms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ReactiveParts {
    pub added_mass: PlanarWrench,
    pub pressure: PlanarWrench,
}

impl ReactiveParts {
    pub fn total(&self) -> PlanarWrench {
        self.added_mass + self.pressure
    }
}

/// Resistive wrench split into lateral drag and longitudinal friction.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResistiveParts {
    pub drag: PlanarWrench,
    pub friction: PlanarWrench,
}

impl ResistiveParts {
    pub fn total(&self) -> PlanarWrench {
        self.drag + self.friction
    }
}

/// Cross-sectional added mass per unit length, C_a π h² ρ_f / 4.
#[inline]
pub fn added_mass_per_length(depth: f64, params: &HydroParams) -> f64 {
    params.added_mass_coeff * 0.25 * PI * depth * depth * params.fluid_density
}

/// Reactive wrench split by mechanism.
///
/// Added mass:
///   f_long =  m l ω v0 + ½ m l² ω²
///   f_lat  = -m l a0 - ½ m l² ω̇
///   torque = -[½ m l² (a0 - ω u) + ⅓ m l³ ω̇ + m l u vl]
/// Boundary pressure: f_long = C_p ½ m (v0² - vl²).
pub fn reactive_parts(s: &SegmentFrameState, params: &HydroParams) -> ReactiveParts {
    if !params.has_reactive() {
        return ReactiveParts::default();
    }
    let m = added_mass_per_length(s.depth, params);
    let l = s.length;
    let ml = m * l;
    let ml2 = ml * l;
    let added_mass = PlanarWrench {
        f_long: ml * s.omega * s.v0 + 0.5 * ml2 * s.omega * s.omega,
        f_lat: -ml * s.a0 - 0.5 * ml2 * s.omega_dot,
        torque: -(0.5 * ml2 * (s.a0 - s.omega * s.u) + ml2 * l * s.omega_dot / 3.0 + ml * s.u * s.vl),
    };
    let pressure = PlanarWrench {
        f_long: params.pressure_coeff * 0.5 * m * (s.v0 * s.v0 - s.vl * s.vl),
        f_lat: 0.0,
        torque: 0.0,
    };
    ReactiveParts { added_mass, pressure }
}

/// Total reactive (added-mass plus pressure) wrench.
pub fn reactive_wrench(s: &SegmentFrameState, params: &HydroParams) -> PlanarWrench {
    reactive_parts(s, params).total()
}

/// The reactive wrench is affine in the accelerations `(u̇, a0, ω̇)`:
/// `wrench = bias - inertia * acc`, with `inertia` symmetric positive
/// semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AddedInertiaBlock {
    /// Rows (f_long, f_lat, torque), columns (u̇, a0, ω̇).
    pub inertia: [[f64; 3]; 3],
    /// Reactive wrench at zero accelerations.
    pub bias: PlanarWrench,
}

impl AddedInertiaBlock {
    pub fn apply(&self, u_dot: f64, a0: f64, omega_dot: f64) -> PlanarWrench {
        let acc = [u_dot, a0, omega_dot];
        let row = |r: usize| -> f64 { (0..3).map(|c| self.inertia[r][c] * acc[c]).sum() };
        self.bias - PlanarWrench::new(row(0), row(1), row(2))
    }
}

/// Acceleration-linear decomposition of the reactive wrench. The
/// accelerations stored in `s` are ignored.
pub fn reactive_added_inertia(s: &SegmentFrameState, params: &HydroParams) -> AddedInertiaBlock {
    let bias = reactive_wrench(&s.with_accelerations(0.0, 0.0), params);
    let m = added_mass_per_length(s.depth, params);
    let l = s.length;
    AddedInertiaBlock {
        inertia: [
            [0.0, 0.0, 0.0],
            [0.0, m * l, 0.5 * m * l * l],
            [0.0, 0.5 * m * l * l, m * l * l * l / 3.0],
        ],
        bias,
    }
}

/// Exact `(∫₀ˡ |v|v dx, ∫₀ˡ |v|v x dx)` for the linear profile v = v0 + ωx.
///
/// Each integrand is piecewise cubic, so Simpson's rule on each sign-definite
/// piece is exact and free of cancellation.
pub fn drag_integrals(v0: f64, omega: f64, l: f64) -> (f64, f64) {
    let vl = v0 + omega * l;
    if v0 * vl >= 0.0 {
        let sign = if v0 != 0.0 { v0.signum() } else { vl.signum() };
        let vm = 0.5 * (v0 + vl);
        let i0 = sign * l / 6.0 * (v0 * v0 + 4.0 * vm * vm + vl * vl);
        // l/6 (0 + 4 vm² l/2 + vl² l)
        let i1 = sign * l * l / 6.0 * (2.0 * vm * vm + vl * vl);
        return (i0, i1);
    }
    // Sign change at x* inside (0, l).
    let xs = -v0 / omega;
    let s0 = v0.signum();
    let rest = l - xs;
    let i0 = s0 * v0 * v0 * xs / 3.0 - s0 * vl * vl * rest / 3.0;
    let i1 = s0 * v0 * v0 * xs * xs / 12.0 - s0 * vl * vl * rest * (xs + 3.0 * l) / 12.0;
    (i0, i1)
}

/// Resistive wrench split into drag and friction.
pub fn resistive_parts(s: &SegmentFrameState, params: &HydroParams) -> ResistiveParts {
    let half_rho = 0.5 * params.fluid_density;
    let friction = PlanarWrench {
        f_long: -half_rho * params.friction_coeff * s.perimeter * s.length * s.u.abs() * s.u,
        f_lat: 0.0,
        torque: 0.0,
    };
    let drag = if params.drag_coeff == 0.0 {
        PlanarWrench::ZERO
    } else {
        let (i0, i1) = drag_integrals(s.v0, s.omega, s.length);
        let k = half_rho * params.drag_coeff * s.depth;
        PlanarWrench {
            f_long: 0.0,
            f_lat: -k * i0,
            torque: -k * i1,
        }
    };
    ResistiveParts { drag, friction }
}

/// Total resistive (drag plus friction) wrench.
pub fn resistive_wrench(s: &SegmentFrameState, params: &HydroParams) -> PlanarWrench {
    resistive_parts(s, params).total()
}

/// Characteristic scales used to nondimensionalize a segment's loads.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    pub length: f64,
    pub depth: f64,
    pub frequency: f64,
    /// Mean lateral displacement amplitude Ā.
    pub amplitude: f64,
    /// Mean cruising speed U.
    pub speed: f64,
    pub fluid_density: f64,
}

impl Scales {
    pub fn force(&self) -> f64 {
        0.25 * PI * self.fluid_density * (self.length * self.depth * self.frequency).powi(2)
    }

    pub fn torque(&self) -> f64 {
        self.force() * self.length
    }

    /// Ā / l
    pub fn amplitude_ratio(&self) -> f64 {
        self.amplitude / self.length
    }

    /// U / (l f)
    pub fn stride_ratio(&self) -> f64 {
        self.speed / (self.length * self.frequency)
    }

    pub fn aspect_ratio(&self) -> f64 {
        self.length / self.depth
    }
}

/// Dimensionless segment state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DimensionlessState {
    pub u: f64,
    pub v0: f64,
    pub omega: f64,
    pub a0: f64,
    pub omega_dot: f64,
    /// Perimeter over depth, the cross-section shape factor in the friction term.
    pub perimeter_ratio: f64,
}

impl DimensionlessState {
    pub fn from_dimensional(s: &SegmentFrameState, sc: &Scales) -> Self {
        let f = sc.frequency;
        DimensionlessState {
            u: s.u / sc.speed,
            v0: s.v0 / (f * sc.amplitude),
            omega: s.omega / f,
            a0: s.a0 / (f * f * sc.amplitude),
            omega_dot: s.omega_dot / (f * f),
            perimeter_ratio: s.perimeter / s.depth,
        }
    }

    /// Dimensional state for the given scales (inverse of `from_dimensional`).
    pub fn to_dimensional(&self, sc: &Scales) -> SegmentFrameState {
        let f = sc.frequency;
        SegmentFrameState::rigid(
            self.u * sc.speed,
            self.v0 * f * sc.amplitude,
            self.omega * f,
            sc.length,
            sc.depth,
            self.perimeter_ratio * sc.depth,
        )
        .with_accelerations(self.a0 * f * f * sc.amplitude, self.omega_dot * f * f)
    }
}

/// Reactive and resistive wrenches divided by the force scale (π/4)ρ l²h²f²
/// and torque scale (π/4)ρ l³h²f².
pub fn normalized_wrenches(s: &SegmentFrameState, params: &HydroParams, sc: &Scales) -> (PlanarWrench, PlanarWrench) {
    let (fs, ts) = (sc.force(), sc.torque());
    let norm = |w: PlanarWrench| PlanarWrench::new(w.f_long / fs, w.f_lat / fs, w.torque / ts);
    (norm(reactive_wrench(s, params)), norm(resistive_wrench(s, params)))
}

/// The same pair evaluated directly from dimensionless groups: Ā/l, U/(lf),
/// AR = l/h, the perimeter ratio and the coefficients.
pub fn dimensionless_wrenches(
    d: &DimensionlessState,
    amplitude_ratio: f64,
    stride_ratio: f64,
    aspect_ratio: f64,
    params: &HydroParams,
) -> (PlanarWrench, PlanarWrench) {
    let (ca, cp) = (params.added_mass_coeff, params.pressure_coeff);
    let a = amplitude_ratio;
    let st = stride_ratio;
    // dimensionless lateral velocity at the posterior end
    let vl = d.v0 + d.omega / a;
    let reactive = if ca == 0.0 {
        PlanarWrench::ZERO
    } else {
        PlanarWrench {
            f_long: ca * (a * d.omega * d.v0 + 0.5 * d.omega * d.omega + cp * 0.5 * a * a * (d.v0 * d.v0 - vl * vl)),
            f_lat: ca * (-a * d.a0 - 0.5 * d.omega_dot),
            torque: -ca * (0.5 * a * d.a0 - 0.5 * st * d.u * d.omega + d.omega_dot / 3.0 + st * a * d.u * vl),
        }
    };
    let k = 2.0 / PI;
    let (j0, j1) = drag_integrals(d.v0, d.omega / a, 1.0);
    let resistive = PlanarWrench {
        f_long: -k * params.friction_coeff * d.perimeter_ratio * aspect_ratio * st * st * d.u.abs() * d.u,
        f_lat: -k * params.drag_coeff * aspect_ratio * a * a * j0,
        torque: -k * params.drag_coeff * aspect_ratio * a * a * j1,
    };
    (reactive, resistive)
}
