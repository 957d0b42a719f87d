//! Sweep configuration and case enumeration.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ephe::EpheConfig;
use crate::error::{Error, Result};
use crate::hydro::{HydroModel, HydroParams};
use crate::morphology::{build_robot, MorphologyOverrides, RobotModel, StiffnessLevel};
use crate::rollout::SimOptions;

/// Replacements for the resistive coefficients and fluid density. The
/// reactive coefficients always come from the case's preset.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FluidOverrides {
    pub friction_coeff: Option<f64>,
    pub drag_coeff: Option<f64>,
    pub fluid_density: Option<f64>,
}

impl FluidOverrides {
    pub fn apply(&self, hm: HydroModel) -> HydroParams {
        let mut p = HydroParams::preset(hm);
        if let Some(v) = self.friction_coeff {
            p.friction_coeff = v;
        }
        if let Some(v) = self.drag_coeff {
            p.drag_coeff = v;
        }
        if let Some(v) = self.fluid_density {
            p.fluid_density = v;
        }
        p
    }
}

/// Axes of the case grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridAxes {
    pub noa: Vec<usize>,
    pub stiffness: Vec<StiffnessLevel>,
    pub hm: Vec<HydroModel>,
}

impl Default for GridAxes {
    fn default() -> Self {
        GridAxes {
            noa: vec![2, 4, 6],
            stiffness: vec![StiffnessLevel::High, StiffnessLevel::Medium, StiffnessLevel::Low],
            hm: vec![HydroModel::HM1, HydroModel::HM2, HydroModel::HM3, HydroModel::HM4],
        }
    }
}

impl GridAxes {
    pub fn len(&self) -> usize {
        self.noa.len() * self.stiffness.len() * self.hm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Restrict the axes with a filter such as `noa=2,4;stiffness=high;hm=HM4`.
    /// `full` (or an empty string) keeps everything.
    pub fn filtered(&self, filter: &str) -> Result<GridAxes> {
        let mut out = self.clone();
        let filter = filter.trim();
        if filter.is_empty() || filter == "full" {
            return Ok(out);
        }
        for clause in filter.split(';').map(str::trim).filter(|c| !c.is_empty()) {
            let (key, values) = clause
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("grid filter clause `{clause}` is not key=value")))?;
            let values: Vec<&str> = values.split(',').map(str::trim).collect();
            match key.trim() {
                "noa" => {
                    let keep = values
                        .iter()
                        .map(|v| v.parse::<usize>().map_err(|_| Error::Config(format!("bad noa `{v}`"))))
                        .collect::<Result<Vec<_>>>()?;
                    out.noa.retain(|n| keep.contains(n));
                }
                "stiffness" | "stiff" => {
                    let keep = values
                        .iter()
                        .map(|v| v.parse())
                        .collect::<Result<Vec<StiffnessLevel>>>()?;
                    out.stiffness.retain(|s| keep.contains(s));
                }
                "hm" => {
                    let keep = values.iter().map(|v| v.parse()).collect::<Result<Vec<HydroModel>>>()?;
                    out.hm.retain(|h| keep.contains(h));
                }
                other => return Err(Error::Config(format!("unknown grid axis `{other}`"))),
            }
        }
        if out.is_empty() {
            return Err(Error::Config(format!("grid filter `{filter}` selects no cases")));
        }
        Ok(out)
    }
}

/// Everything needed to run a sweep. All sections are optional in the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub sim: SimOptions,
    pub ephe: EpheConfig,
    pub fluid: FluidOverrides,
    pub morphology: MorphologyOverrides,
    pub grid: GridAxes,
}

impl SweepConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// One case per grid point, in NoA, stiffness, model order.
    pub fn cases(&self, grid: &GridAxes) -> Vec<CaseSpec> {
        let mut out = Vec::with_capacity(grid.len());
        for &noa in &grid.noa {
            for &stiffness in &grid.stiffness {
                for &hm in &grid.hm {
                    out.push(self.case(noa, stiffness, hm));
                }
            }
        }
        out
    }

    pub fn case(&self, noa: usize, stiffness: StiffnessLevel, hm: HydroModel) -> CaseSpec {
        CaseSpec {
            noa,
            stiffness,
            hm,
            hydro: self.fluid.apply(hm),
            morphology: self.morphology.clone(),
            sim: self.sim.clone(),
            ephe: self.ephe.clone(),
        }
    }
}

/// One grid point with the settings it runs under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseSpec {
    pub noa: usize,
    pub stiffness: StiffnessLevel,
    pub hm: HydroModel,
    pub hydro: HydroParams,
    pub morphology: MorphologyOverrides,
    pub sim: SimOptions,
    pub ephe: EpheConfig,
}

impl CaseSpec {
    /// Short identifier such as `noa4-H-HM4`.
    pub fn id(&self) -> CaseId {
        CaseId {
            noa: self.noa,
            stiffness: self.stiffness,
            hm: self.hm,
        }
    }

    /// Hex SHA-256 of the canonical JSON encoding.
    pub fn content_hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("case spec serializes");
        hex::encode(Sha256::digest(&json))
    }

    pub fn model(&self) -> Result<RobotModel> {
        build_robot(self.noa, Some(self.stiffness), &self.morphology)
    }

    pub fn validate(&self) -> Result<()> {
        self.hydro.validate()?;
        self.ephe.validate()?;
        if !(self.sim.dt > 0.0 && self.sim.horizon >= self.sim.window && self.sim.window > 0.0) {
            return Err(Error::Config(format!(
                "need dt > 0 and 0 < window <= horizon, got dt {} window {} horizon {}",
                self.sim.dt, self.sim.window, self.sim.horizon
            )));
        }
        self.model().map(|_| ())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseId {
    pub noa: usize,
    pub stiffness: StiffnessLevel,
    pub hm: HydroModel,
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "noa{}-{}-{}", self.noa, self.stiffness.short(), self.hm)
    }
}

impl FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("case id `{s}` is not of the form noa4-H-HM4"));
        let mut parts = s.split('-');
        let noa = parts
            .next()
            .and_then(|p| p.strip_prefix("noa"))
            .and_then(|p| p.parse().ok())
            .ok_or_else(bad)?;
        let stiffness = parts.next().ok_or_else(bad)?.parse()?;
        let hm = parts.next().ok_or_else(bad)?.parse()?;
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(CaseId { noa, stiffness, hm })
    }
}
