//! Harmonic voltage gaits and the linear magnetic actuator model.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default supply ceiling for the voltage amplitudes (V).
pub const DEFAULT_MAX_VOLTAGE: f64 = 5.0;

/// Calibrated linear motor constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActuatorConstants {
    /// Torque constant k_T (N·m/A).
    pub torque_constant: f64,
    /// Back-EMF constant k_EMF (V·s).
    pub emf_constant: f64,
    /// Coil resistance (Ω).
    pub resistance: f64,
}

impl Default for ActuatorConstants {
    fn default() -> Self {
        ActuatorConstants {
            torque_constant: 1.26e-3,
            emf_constant: 1.26e-3,
            resistance: 10.0,
        }
    }
}

impl ActuatorConstants {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.torque_constant, self.emf_constant, self.resistance]
            .iter()
            .all(|v| *v > 0.0 && v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "actuator constants must be positive: {self:?}"
            )))
        }
    }
}

/// Actuator torque T = (E - k_EMF * omega) / R * k_T.
#[inline]
pub fn actuator_torque(voltage: f64, joint_rate: f64, c: &ActuatorConstants) -> f64 {
    (voltage - c.emf_constant * joint_rate) / c.resistance * c.torque_constant
}

/// Open-loop harmonic gait: one sinusoidal voltage per actuated joint sharing a
/// common frequency. Phases are in cycles; the first actuator has phase zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaitPolicy {
    pub amplitudes: Vec<f64>,
    /// Phases of actuators 2..=noa (cycles).
    pub phases: Vec<f64>,
    pub frequency: f64,
}

impl GaitPolicy {
    pub fn new(amplitudes: Vec<f64>, phases: Vec<f64>, frequency: f64) -> Result<Self> {
        if amplitudes.is_empty() || phases.len() + 1 != amplitudes.len() {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes need {} phases, got {}",
                amplitudes.len(),
                amplitudes.len().saturating_sub(1),
                phases.len()
            )));
        }
        if !(frequency > 0.0 && frequency.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "input frequency must be positive, got {frequency}"
            )));
        }
        Ok(GaitPolicy {
            amplitudes,
            phases,
            frequency,
        })
    }

    /// All-zero voltages at the given frequency.
    pub fn rest(noa: usize, frequency: f64) -> Self {
        GaitPolicy {
            amplitudes: vec![0.0; noa],
            phases: vec![0.0; noa.saturating_sub(1)],
            frequency,
        }
    }

    pub fn noa(&self) -> usize {
        self.amplitudes.len()
    }

    /// Phase of actuator `j` (1-based) in cycles.
    pub fn phase(&self, j: usize) -> f64 {
        if j <= 1 {
            0.0
        } else {
            self.phases[j - 2]
        }
    }

    /// Voltage E_j(t) = e_j sin(2π(f t + Ψ_j)).
    pub fn voltage_at(&self, j: usize, t: f64) -> Result<f64> {
        if j == 0 || j > self.noa() {
            return Err(Error::JointOutOfRange {
                index: j,
                max: self.noa(),
            });
        }
        Ok(self.voltage_unchecked(j - 1, t))
    }

    #[inline]
    pub(crate) fn voltage_unchecked(&self, idx: usize, t: f64) -> f64 {
        let phase = if idx == 0 { 0.0 } else { self.phases[idx - 1] };
        self.amplitudes[idx] * (2.0 * PI * (self.frequency * t + phase)).sin()
    }

    /// Flatten to `[e1, Ψ2, e2, …, Ψn, en, f]`.
    pub fn encode(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.noa());
        v.push(self.amplitudes[0]);
        for (psi, e) in self.phases.iter().zip(&self.amplitudes[1..]) {
            v.push(*psi);
            v.push(*e);
        }
        v.push(self.frequency);
        v
    }

    /// Inverse of [`GaitPolicy::encode`].
    pub fn decode(v: &[f64], noa: usize) -> Result<Self> {
        if noa == 0 || v.len() != 2 * noa {
            return Err(Error::PolicyLength {
                got: v.len(),
                expected: 2 * noa,
            });
        }
        let mut amplitudes = Vec::with_capacity(noa);
        let mut phases = Vec::with_capacity(noa - 1);
        amplitudes.push(v[0]);
        for pair in v[1..v.len() - 1].chunks_exact(2) {
            phases.push(pair[0]);
            amplitudes.push(pair[1]);
        }
        GaitPolicy::new(amplitudes, phases, v[v.len() - 1])
    }

    /// Box bounds for the encoded vector: amplitudes in [0, e_max], phases in
    /// [0, 1] cycles and frequency in `freq`.
    pub fn bounds(noa: usize, e_max: f64, freq: (f64, f64)) -> Vec<(f64, f64)> {
        let mut b = Vec::with_capacity(2 * noa);
        b.push((0.0, e_max));
        for _ in 1..noa {
            b.push((0.0, 1.0));
            b.push((0.0, e_max));
        }
        b.push(freq);
        b
    }
}
