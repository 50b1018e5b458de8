use serde::{Deserialize, Serialize};

use super::topology::{build_topology, Topology, TopologySpec};
use crate::error::{Error, Result};

/// Gate durations in microseconds and error probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrationData {
    pub t1_us: f64,
    pub t2_us: f64,
    pub e1: f64,
    pub e2: f64,
    pub em: f64,
}

impl CalibrationData {
    pub fn validate(&self) -> Result<()> {
        for (name, t) in [("t1_us", self.t1_us), ("t2_us", self.t2_us)] {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::Calibration(format!("{name} = {t} must be positive")));
            }
        }
        for (name, e) in [("e1", self.e1), ("e2", self.e2), ("em", self.em)] {
            if !(0.0..1.0).contains(&e) {
                return Err(Error::Calibration(format!("{name} = {e} must lie in [0, 1)")));
            }
        }
        Ok(())
    }
}

pub const IBM_BRISBANE: CalibrationData = CalibrationData {
    t1_us: 0.06,
    t2_us: 0.66,
    e1: 3.3e-4,
    e2: 1.2e-2,
    em: 3.7e-2,
};

/// Shift time plus gate time for each gate class.
pub const QUANTINUUM_H2: CalibrationData = CalibrationData {
    t1_us: 63.0,
    t2_us: 308.0,
    e1: 3.0e-5,
    e2: 1.0e-3,
    em: 1.0e-3,
};

/// A named device: calibration plus coupling graph.
///
/// JSON layout: `{"name", "t1_us", "t2_us", "e1", "e2", "em", "topology": {"kind", ..}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceProfile {
    pub name: String,
    pub t1_us: f64,
    pub t2_us: f64,
    pub e1: f64,
    pub e2: f64,
    pub em: f64,
    pub topology: TopologySpec,
}

impl DeviceProfile {
    pub fn new(name: impl Into<String>, calib: CalibrationData, topology: TopologySpec) -> Self {
        Self {
            name: name.into(),
            t1_us: calib.t1_us,
            t2_us: calib.t2_us,
            e1: calib.e1,
            e2: calib.e2,
            em: calib.em,
            topology,
        }
    }

    pub fn calibration(&self) -> CalibrationData {
        CalibrationData {
            t1_us: self.t1_us,
            t2_us: self.t2_us,
            e1: self.e1,
            e2: self.e2,
            em: self.em,
        }
    }

    pub fn build_topology(&self) -> Result<Topology> {
        build_topology(&self.topology)
    }

    pub fn validate(&self) -> Result<()> {
        self.calibration().validate()?;
        self.build_topology().map(|_| ())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: DeviceProfile = serde_json::from_str(s)?;
        d.validate()?;
        Ok(d)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// The heavy-hex device, two hypothetical reconnections of it, and the
/// trapped-ion machine.
pub fn builtin_device_profiles() -> Vec<DeviceProfile> {
    vec![
        DeviceProfile::new(
            "ibm_brisbane",
            IBM_BRISBANE,
            TopologySpec::HeavyHex { rows: 7, cells: 3 },
        ),
        DeviceProfile::new(
            "ibm_brisbane_square",
            IBM_BRISBANE,
            TopologySpec::SquareLattice { rows: 12, cols: 11 },
        ),
        DeviceProfile::new(
            "ibm_brisbane_all_to_all",
            IBM_BRISBANE,
            TopologySpec::AllToAll { nodes: 127 },
        ),
        DeviceProfile::new(
            "quantinuum_h2",
            QUANTINUUM_H2,
            TopologySpec::AllToAll { nodes: 56 },
        ),
    ]
}

pub fn builtin_device(name: &str) -> Option<DeviceProfile> {
    builtin_device_profiles().into_iter().find(|d| d.name == name)
}
