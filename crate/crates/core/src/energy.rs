//! Electro-optic programming energy: phases to voltages to joules.
//!
//! Each phase shifter is a capacitive load charged once per configuration,
//! `E = C V^2 / 2` with `V(phase) = V_pi * |phase| / pi`. The mapping from a
//! crossing's `(theta, phi)` to physical phases depends on where the bar
//! state sits, which is configurable because it moves every absolute number.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::mesh::{Crossing, MeshProgram};

/// Which internal phase realizes the bar (identity) state of an MZI.
///
/// `BarAtPi` matches hardware where an identity-configured MZI sits at
/// `V = V_pi`: the internal phase for splitting angle theta is `pi - 2 theta`.
/// `BarAtZero` uses `2 theta` instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseConvention {
    #[default]
    BarAtPi,
    BarAtZero,
}

/// Wrapping applied to external phases before computing drive voltage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseWrap {
    /// Into [-pi, pi]: minimum-voltage programming.
    #[default]
    Symmetric,
    /// Into [0, 2pi).
    Positive,
}

/// Electro-optic modulator parameters and phase conventions.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EomModel {
    /// Half-wave voltage in volts.
    pub v_pi: f64,
    /// Modulator capacitance in farads.
    pub capacitance: f64,
    pub internal_phase_convention: PhaseConvention,
    pub external_wrap: PhaseWrap,
}

impl Default for EomModel {
    fn default() -> Self {
        Self {
            v_pi: 1.4,
            capacitance: 90e-9,
            internal_phase_convention: PhaseConvention::default(),
            external_wrap: PhaseWrap::default(),
        }
    }
}

impl EomModel {
    pub fn new(v_pi: f64, capacitance: f64) -> Result<Self> {
        if !(v_pi > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "v_pi",
                value: v_pi,
            });
        }
        if !(capacitance > 0.0) {
            return Err(Error::NonPositiveParameter {
                name: "capacitance",
                value: capacitance,
            });
        }
        Ok(Self {
            v_pi,
            capacitance,
            ..Self::default()
        })
    }

    /// Drive voltage for a phase: `V_pi * |phase| / pi`.
    ///
    /// Energy is quadratic in voltage, so the sign of the phase is
    /// immaterial and the magnitude is returned.
    pub fn phase_to_voltage(&self, phase: f64) -> f64 {
        self.v_pi * phase.abs() / PI
    }

    /// Wrap an external phase per the configured convention.
    pub fn wrap_external(&self, phase: f64) -> f64 {
        match self.external_wrap {
            PhaseWrap::Symmetric => {
                let w = phase.rem_euclid(TAU);
                if w > PI {
                    w - TAU
                } else {
                    w
                }
            }
            PhaseWrap::Positive => phase.rem_euclid(TAU),
        }
    }

    /// Physical (internal, external) phases programmed for a crossing.
    pub fn crossing_phases(&self, c: &Crossing) -> (f64, f64) {
        let internal = match self.internal_phase_convention {
            PhaseConvention::BarAtPi => PI - 2.0 * c.theta,
            PhaseConvention::BarAtZero => 2.0 * c.theta,
        };
        (internal, self.wrap_external(c.phi))
    }

    /// Energy to program one crossing: both phase shifters charged.
    pub fn crossing_energy(&self, c: &Crossing) -> f64 {
        let (internal, external) = self.crossing_phases(c);
        let vi = self.phase_to_voltage(internal);
        let ve = self.phase_to_voltage(external);
        self.capacitance / 2.0 * (vi * vi + ve * ve)
    }

    /// Energy for the internal MZI phase of a crossing alone.
    pub fn crossing_internal_energy(&self, c: &Crossing) -> f64 {
        let (internal, _) = self.crossing_phases(c);
        let vi = self.phase_to_voltage(internal);
        self.capacitance / 2.0 * vi * vi
    }

    /// Energy for a bare phase shifter at `phase` (wrapped).
    pub fn shifter_energy(&self, phase: f64) -> f64 {
        let v = self.phase_to_voltage(self.wrap_external(phase));
        self.capacitance / 2.0 * v * v
    }

    /// Total programming energy of a mesh program, itemized per element.
    pub fn mesh_energy(&self, program: &MeshProgram) -> EnergyReport {
        self.mesh_energy_with(program, true)
    }

    /// As `mesh_energy`, optionally skipping the output phase column
    /// (physically optional when preparing a state from a fixed input).
    pub fn mesh_energy_with(&self, program: &MeshProgram, include_output: bool) -> EnergyReport {
        let mut per_element =
            Vec::with_capacity(program.crossings.len() + program.output_phases.len());
        for c in &program.crossings {
            per_element.push(ElementEnergy {
                label: format!("crossing({},{})", c.layer, c.top_mode),
                energy_j: self.crossing_energy(c),
            });
        }
        if include_output {
            for (mode, phase) in program.output_phases.iter().enumerate() {
                per_element.push(ElementEnergy {
                    label: format!("output({mode})"),
                    energy_j: self.shifter_energy(*phase),
                });
            }
        }
        let total = per_element.iter().map(|e| e.energy_j).sum();
        EnergyReport {
            total_j: total,
            element_count: per_element.len(),
            elements: per_element,
        }
    }
}

/// One labeled element of an energy report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElementEnergy {
    pub label: String,
    pub energy_j: f64,
}

/// Itemized programming energy for a mesh program or gate block.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub total_j: f64,
    pub element_count: usize,
    pub elements: Vec<ElementEnergy>,
}

impl EnergyReport {
    /// Re-sum the itemized entries; equals `total_j` to 1e-15 relative.
    pub fn resummed(&self) -> f64 {
        self.elements.iter().map(|e| e.energy_j).sum()
    }

    /// CSV form: one `element,energy_j` row per entry plus a total row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("element,energy_j\n");
        for e in &self.elements {
            out.push_str(&format!("{},{}\n", e.label, e.energy_j));
        }
        out.push_str(&format!("total,{}\n", self.total_j));
        out
    }
}
