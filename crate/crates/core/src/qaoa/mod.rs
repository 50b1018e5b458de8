//! Standard QAOA: circuits, run configuration and the iterative driver.

mod ansatz;
pub(crate) mod engine;
mod mixer;
mod record;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ansatz::{build_cost_circuit, build_mixer_circuit, standard_qaoa_circuit, Ansatz};
pub use mixer::MixerOperator;
pub use record::{LayerCsvRow, LayerRecord, QaoaRunRecord};

use crate::adapt::DEFAULT_GAMMA0;
use crate::error::{Error, Result};
use crate::optimizer::OptimizerConfig;
use crate::problem::FeatureSelectionInstance;

/// Shots per cost estimate used by default in shot mode.
pub const DEFAULT_SHOTS: u64 = 10_000;

/// How the cost is evaluated for the optimizer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EvalMode {
    /// Exact expectation from the statevector.
    Exact,
    /// Estimate from `shots` samples of the prepared state.
    Shots { shots: u64 },
}

/// How ADAPT-QAOA gradients are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    /// Exact expectation, regardless of [`EvalMode`].
    #[default]
    Exact,
    /// Parameter-shift estimates from shots; only used in shot mode.
    Shots,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Standard,
    Adapt,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Standard => "standard",
            Algorithm::Adapt => "adapt",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: EvalMode,
    pub optimizer: OptimizerConfig,
    pub gamma0: f64,
    pub gradient: GradientMode,
    /// Record wall-clock seconds; when false every duration is `0`.
    pub record_timing: bool,
    /// Known optimum; computed by brute force when absent.
    pub c_exact: Option<f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: EvalMode::Exact,
            optimizer: OptimizerConfig::default(),
            gamma0: DEFAULT_GAMMA0,
            gradient: GradientMode::Exact,
            record_timing: true,
            c_exact: None,
        }
    }
}

/// `c_k / c_exact`.
pub fn approximation_ratio(c_k: f64, c_exact: f64) -> Result<f64> {
    if c_exact.abs() < 1e-12 {
        return Err(Error::NearZeroDenominator(c_exact));
    }
    Ok(c_k / c_exact)
}

/// Standard QAOA with the global X mixer in every layer.
pub fn run_standard_qaoa(
    inst: &FeatureSelectionInstance,
    max_layers: usize,
    cfg: &RunConfig,
    seed: u64,
) -> Result<QaoaRunRecord> {
    engine::run(inst, max_layers, cfg, seed, Algorithm::Standard, None)
}
