use serde::{Deserialize, Serialize};

use super::{Algorithm, Ansatz, EvalMode, MixerOperator};
use crate::error::Result;
use crate::problem::{FeatureSelectionInstance, InstanceFile};
use crate::sim::{Circuit, StateVector};

/// Outcome of one layer of an iterative run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub layer: usize,
    pub mixer: MixerOperator,
    /// Starting point of the layer's optimization: the previous optimum
    /// followed by the two fresh random angles.
    pub initial_parameters: Vec<f64>,
    /// Optimized `(gamma_1, beta_1, .., gamma_k, beta_k)`.
    pub parameters: Vec<f64>,
    /// Objective value at the optimum: exact expectation in exact mode,
    /// the shot estimate in shot mode.
    pub cost: f64,
    /// Exact expectation at the optimum.
    pub exact_cost: f64,
    /// `cost / c_exact`.
    pub ratio: f64,
    /// Wall-clock seconds spent on the layer, mixer selection included.
    pub seconds: f64,
    pub selection_seconds: Option<f64>,
    pub gradient: Option<f64>,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

/// Full record of a standard or ADAPT-QAOA run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaoaRunRecord {
    pub algorithm: Algorithm,
    pub instance: InstanceFile,
    pub run_seed: u64,
    pub mode: EvalMode,
    pub c_exact: f64,
    pub exact_minimizer: String,
    /// Expectation on `|+>^n`.
    pub initial_cost: f64,
    pub layers: Vec<LayerRecord>,
    pub final_circuit: Circuit,
}

/// One line of the per-layer CSV summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerCsvRow {
    pub seed: u64,
    pub n: usize,
    pub alpha: f64,
    pub algorithm: Algorithm,
    pub layer: usize,
    pub cost: f64,
    pub ratio: f64,
    pub seconds: f64,
}

impl QaoaRunRecord {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn final_layer(&self) -> Option<&LayerRecord> {
        self.layers.last()
    }

    pub fn final_ratio(&self) -> Option<f64> {
        self.final_layer().map(|l| l.ratio)
    }

    pub fn mixers(&self) -> Vec<MixerOperator> {
        self.layers.iter().map(|l| l.mixer.clone()).collect()
    }

    pub fn total_seconds(&self) -> f64 {
        self.layers.iter().map(|l| l.seconds).sum()
    }

    pub fn csv_rows(&self) -> Vec<LayerCsvRow> {
        self.layers
            .iter()
            .map(|l| LayerCsvRow {
                seed: self.instance.seed,
                n: self.instance.n,
                alpha: self.instance.alpha,
                algorithm: self.algorithm,
                layer: l.layer,
                cost: l.cost,
                ratio: l.ratio,
                seconds: l.seconds,
            })
            .collect()
    }

    pub fn instance(&self) -> Result<FeatureSelectionInstance> {
        self.instance.clone().try_into()
    }

    /// Rebuilds the layered ansatz from the recorded mixers.
    pub fn ansatz(&self) -> Result<Ansatz> {
        let mut a = Ansatz::new(self.instance()?.to_ising());
        for m in self.mixers() {
            a.push_layer(m)?;
        }
        Ok(a)
    }

    /// Exact cost obtained by simulating `final_circuit` gate by gate.
    pub fn replay_final_cost(&self) -> Result<f64> {
        let h = self.instance()?.to_ising();
        let mut s = StateVector::zero(self.instance.n)?;
        s.run(&self.final_circuit)?;
        s.expectation_of_cost(&h)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
