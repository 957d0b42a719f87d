//! Robot template construction: segment geometry, mass properties and the
//! joint spring distribution.
//!
//! A robot with `noa` actuated joints has `noa + 2` rigid bodies: a head,
//! `noa` actuated segments (the last of which is the peduncle) and a caudal
//! fin mounted on the peduncle through a passive torsion spring.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::actuation::ActuatorConstants;
use crate::error::{Error, Result};

/// Nominal body segment length (m).
pub const NOMINAL_LENGTH: f64 = 27.4e-3;
/// Nominal body depth, the vertical ellipse axis (m).
pub const NOMINAL_DEPTH: f64 = 13.7e-3;
/// Nominal body width, the lateral ellipse axis (m).
pub const NOMINAL_WIDTH: f64 = 7.0e-3;
/// Caudal fin plate thickness (m).
pub const FIN_THICKNESS: f64 = 0.97e-3;
/// Body density for a neutrally buoyant robot in water (kg/m^3).
pub const BODY_DENSITY: f64 = 1000.0;
/// Caudal fin joint stiffness relative to the body joints.
pub const FIN_STIFFNESS_RATIO: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Head,
    Body,
    Peduncle,
    Fin,
}

impl SegmentKind {
    pub fn label(self) -> &'static str {
        match self {
            SegmentKind::Head => "H",
            SegmentKind::Body => "B",
            SegmentKind::Peduncle => "P",
            SegmentKind::Fin => "T",
        }
    }
}

/// Geometry of one rigid segment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentGeometry {
    pub length: f64,
    pub depth: f64,
    pub width: f64,
    /// Plate thickness, only meaningful for the fin.
    pub fin_thickness: f64,
    /// Cross-section perimeter used by the friction model.
    pub perimeter: f64,
    pub kind: SegmentKind,
}

impl SegmentGeometry {
    /// Elliptical-prism body segment.
    pub fn body(kind: SegmentKind, length: f64, depth: f64, width: f64) -> Result<Self> {
        let g = SegmentGeometry {
            length,
            depth,
            width,
            fin_thickness: 0.0,
            perimeter: ellipse_perimeter(depth / 2.0, width / 2.0),
            kind,
        };
        g.validate()?;
        Ok(g)
    }

    /// Rectangular fin plate. `width` is the lateral envelope of the mount and
    /// only bounds the plate thickness.
    pub fn fin(length: f64, depth: f64, width: f64, thickness: f64) -> Result<Self> {
        let g = SegmentGeometry {
            length,
            depth,
            width,
            fin_thickness: thickness,
            perimeter: 2.0 * (depth + thickness),
            kind: SegmentKind::Fin,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.length, self.depth, self.width, self.perimeter]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.length <= 0.0 || self.depth <= 0.0 || self.width <= 0.0 {
            return Err(Error::Geometry(format!(
                "segment dimensions must be positive (l={}, h={}, w={})",
                self.length, self.depth, self.width
            )));
        }
        if self.kind == SegmentKind::Fin && !(self.fin_thickness > 0.0 && self.fin_thickness < self.width) {
            return Err(Error::Geometry(format!(
                "fin thickness {} must lie in (0, {})",
                self.fin_thickness, self.width
            )));
        }
        // A convex section of diameter D has perimeter at least 2D.
        let diameter = if self.kind == SegmentKind::Fin {
            self.depth.max(self.fin_thickness)
        } else {
            self.depth.max(self.width)
        };
        if !(self.perimeter >= 2.0 * diameter) {
            return Err(Error::Geometry(format!(
                "perimeter {} below the convex lower bound {}",
                self.perimeter,
                2.0 * diameter
            )));
        }
        Ok(())
    }

    /// Segment aspect ratio l/h.
    pub fn aspect_ratio(&self) -> f64 {
        self.length / self.depth
    }
}

/// Perimeter of an ellipse with semi-axes `a`, `b` (Ramanujan's second
/// approximation; relative error below 1e-6 for any aspect ratio above 1:5).
pub fn ellipse_perimeter(a: f64, b: f64) -> f64 {
    let s = a + b;
    if s == 0.0 {
        return 0.0;
    }
    let h = ((a - b) / s).powi(2);
    PI * s * (1.0 + 3.0 * h / (10.0 + (4.0 - 3.0 * h).sqrt()))
}

/// Mass properties of a segment in its own frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassProps {
    pub mass: f64,
    /// Planar rotational inertia about the center of mass.
    pub inertia: f64,
    /// Distance of the center of mass from the anterior joint along the segment axis.
    pub com_offset: f64,
}

/// Uniform-density mass properties: elliptical prism for body segments, thin
/// rectangular plate for the fin.
pub fn segment_mass_props(g: &SegmentGeometry, density: f64) -> Result<MassProps> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "body density must be positive, got {density}"
        )));
    }
    g.validate()?;
    let l = g.length;
    let props = match g.kind {
        SegmentKind::Fin => {
            let m = density * g.depth * g.fin_thickness * l;
            MassProps {
                mass: m,
                inertia: m * (l * l + g.fin_thickness * g.fin_thickness) / 12.0,
                com_offset: l / 2.0,
            }
        }
        _ => {
            let half_w = g.width / 2.0;
            let m = density * PI * (g.depth / 2.0) * half_w * l;
            MassProps {
                mass: m,
                inertia: m * (l * l / 12.0 + half_w * half_w / 4.0),
                com_offset: l / 2.0,
            }
        }
    };
    Ok(props)
}

/// Normalized body stiffness presets (N·m/rad, already divided by AR^4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StiffnessLevel {
    High,
    Medium,
    Low,
}

impl StiffnessLevel {
    pub const ALL: [StiffnessLevel; 3] = [Self::High, Self::Medium, Self::Low];

    /// Normalized stiffness in N·m/rad.
    pub fn normalized(self) -> f64 {
        let n_mm = match self {
            StiffnessLevel::High => 1.00 / 16.0,
            StiffnessLevel::Medium => 0.75 / 16.0,
            StiffnessLevel::Low => 0.50 / 16.0,
        };
        n_mm * 1e-3
    }

    pub fn short(self) -> &'static str {
        match self {
            StiffnessLevel::High => "H",
            StiffnessLevel::Medium => "M",
            StiffnessLevel::Low => "L",
        }
    }
}

impl fmt::Display for StiffnessLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StiffnessLevel::High => "high",
            StiffnessLevel::Medium => "medium",
            StiffnessLevel::Low => "low",
        })
    }
}

impl FromStr for StiffnessLevel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "high" | "h" => Ok(Self::High),
            "medium" | "m" => Ok(Self::Medium),
            "low" | "l" => Ok(Self::Low),
            _ => Err(Error::UnknownStiffness(s.to_string())),
        }
    }
}

/// Joint stiffness K = K_hat * AR^4 * Gamma(j), with Gamma = 5 on the fin
/// joint (`j = noa + 1`) and 1 elsewhere. Joints are 1-based.
pub fn joint_stiffness(j: usize, k_hat: f64, aspect_ratio: f64, noa: usize) -> Result<f64> {
    if j == 0 || j > noa + 1 {
        return Err(Error::JointOutOfRange { index: j, max: noa + 1 });
    }
    let gamma = if j == noa + 1 { FIN_STIFFNESS_RATIO } else { 1.0 };
    Ok(k_hat * aspect_ratio.powi(4) * gamma)
}

/// Optional replacements for the default template parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MorphologyOverrides {
    pub segment_length: Option<f64>,
    pub depth: Option<f64>,
    pub width: Option<f64>,
    pub fin_length: Option<f64>,
    pub fin_thickness: Option<f64>,
    pub density: Option<f64>,
    /// Normalized stiffness (N·m/rad); required when no preset level is given.
    pub k_hat: Option<f64>,
    pub torque_constant: Option<f64>,
    pub emf_constant: Option<f64>,
    pub resistance: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub geometry: SegmentGeometry,
    pub mass: MassProps,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    /// Torsional spring stiffness (N·m/rad), zero rest angle.
    pub stiffness: f64,
    pub actuated: bool,
}

/// Immutable robot description shared by all rollouts of a case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RobotModel {
    pub segments: Vec<Segment>,
    /// `joints[i]` connects `segments[i]` to `segments[i + 1]`.
    pub joints: Vec<Joint>,
    pub actuator: ActuatorConstants,
    pub noa: usize,
    pub aspect_ratio: f64,
}

impl RobotModel {
    pub fn body_count(&self) -> usize {
        self.segments.len()
    }

    pub fn joint_count(&self) -> usize {
        self.joints.len()
    }

    /// Number of generalized coordinates: head pose plus one angle per joint.
    pub fn dof(&self) -> usize {
        3 + self.joints.len()
    }

    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.geometry.length).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.segments.iter().map(|s| s.mass.mass).sum()
    }

    /// Arc-length position of each segment midpoint, measured from the nose.
    pub fn midpoint_arclengths(&self) -> Vec<f64> {
        let mut s = 0.0;
        self.segments
            .iter()
            .map(|seg| {
                let mid = s + seg.geometry.length / 2.0;
                s += seg.geometry.length;
                mid
            })
            .collect()
    }
}

/// Build the template for `noa` actuated joints. The stiffness level selects
/// the normalized stiffness preset unless `overrides.k_hat` is given.
pub fn build_robot(
    noa: usize,
    stiffness: Option<StiffnessLevel>,
    overrides: &MorphologyOverrides,
) -> Result<RobotModel> {
    if noa == 0 || noa + 4 > crate::dynamics::MAX_DOF {
        return Err(Error::InvalidParameter(format!(
            "actuated joint count must lie in 1..={}, got {noa}",
            crate::dynamics::MAX_DOF - 4
        )));
    }
    let l = overrides.segment_length.unwrap_or(NOMINAL_LENGTH);
    let h = overrides.depth.unwrap_or(NOMINAL_DEPTH);
    let w = overrides.width.unwrap_or(NOMINAL_WIDTH);
    let fin_l = overrides.fin_length.unwrap_or(l);
    let fin_t = overrides.fin_thickness.unwrap_or(FIN_THICKNESS);
    let density = overrides.density.unwrap_or(BODY_DENSITY);
    let k_hat = match (overrides.k_hat, stiffness) {
        (Some(k), _) => k,
        (None, Some(level)) => level.normalized(),
        (None, None) => {
            return Err(Error::InvalidParameter(
                "either a stiffness level or an explicit k_hat is required".into(),
            ))
        }
    };
    if !(k_hat >= 0.0 && k_hat.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "normalized stiffness must be non-negative, got {k_hat}"
        )));
    }

    let mut geoms = Vec::with_capacity(noa + 2);
    geoms.push(SegmentGeometry::body(SegmentKind::Head, l, h, w)?);
    for i in 1..=noa {
        let kind = if i == noa {
            SegmentKind::Peduncle
        } else {
            SegmentKind::Body
        };
        geoms.push(SegmentGeometry::body(kind, l, h, w)?);
    }
    geoms.push(SegmentGeometry::fin(fin_l, h, w, fin_t)?);

    let segments = geoms
        .into_iter()
        .map(|g| {
            Ok(Segment {
                geometry: g,
                mass: segment_mass_props(&g, density)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let aspect_ratio = l / h;
    let joints = (1..=noa + 1)
        .map(|j| {
            Ok(Joint {
                stiffness: joint_stiffness(j, k_hat, aspect_ratio, noa)?,
                actuated: j <= noa,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let defaults = ActuatorConstants::default();
    let actuator = ActuatorConstants {
        torque_constant: overrides.torque_constant.unwrap_or(defaults.torque_constant),
        emf_constant: overrides.emf_constant.unwrap_or(defaults.emf_constant),
        resistance: overrides.resistance.unwrap_or(defaults.resistance),
    };
    actuator.validate()?;

    Ok(RobotModel {
        segments,
        joints,
        actuator,
        noa,
        aspect_ratio,
    })
}
