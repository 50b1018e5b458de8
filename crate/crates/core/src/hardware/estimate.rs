//! Time-to-solution and total error probability.
//!
//! `T_layer = (d1 t1 + d2 t2) N S` in microseconds, and
//! `E_tot = 1 - (1 - e1)^N1 (1 - e2)^N2 (1 - em)^Nm`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::depth::{compute_depth_profile_with, DepthProfile, DEFAULT_SWAP_TWO_QUBIT_GATES};
use super::device::{CalibrationData, DeviceProfile};
use super::native::to_native;
use super::routing::{route_circuit, RoutedCircuit};
use super::topology::Topology;
use crate::error::{Error, Result};
use crate::problem::FeatureSelectionInstance;
use crate::qaoa::standard_qaoa_circuit;
use crate::rng::{self, Stream};
use crate::sim::Circuit;

/// Microseconds for `iterations * shots` executions of a circuit with
/// depth profile `d`.
pub fn estimate_layer_time(d: &DepthProfile, calib: &CalibrationData, iterations: u64, shots: u64) -> f64 {
    (d.d1 as f64 * calib.t1_us + d.d2 as f64 * calib.t2_us) * iterations as f64 * shots as f64
}

/// Sum of [`estimate_layer_time`] over `profiles`, in microseconds.
pub fn estimate_total_time(
    profiles: &[DepthProfile],
    calib: &CalibrationData,
    iterations: u64,
    shots: u64,
) -> Result<f64> {
    if profiles.is_empty() {
        return Err(Error::EmptyInput("depth profiles"));
    }
    Ok(profiles
        .iter()
        .map(|d| estimate_layer_time(d, calib, iterations, shots))
        .sum())
}

pub fn estimate_error_probability(d: &DepthProfile, calib: &CalibrationData) -> f64 {
    // -expm1(sum n ln(1 - e)) keeps small probabilities accurate.
    let log_success = d.n1 as f64 * (-calib.e1).ln_1p()
        + d.n2 as f64 * (-calib.e2).ln_1p()
        + d.nm as f64 * (-calib.em).ln_1p();
    -log_success.exp_m1()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EstimateOptions {
    /// QAOA depth `p` for the time estimate.
    pub layers: usize,
    /// Optimizer iterations `N`.
    pub iterations: u64,
    /// Shots per iteration `S`.
    pub shots: u64,
    /// QAOA depth of the circuit used for the error estimate.
    pub error_layers: usize,
    pub swap_two_qubit_gates: u64,
}

impl Default for EstimateOptions {
    fn default() -> Self {
        Self {
            layers: 30,
            iterations: 1500,
            shots: 10_000,
            error_layers: 1,
            swap_two_qubit_gates: DEFAULT_SWAP_TWO_QUBIT_GATES,
        }
    }
}

impl EstimateOptions {
    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 || self.error_layers == 0 || self.iterations == 0 || self.shots == 0 {
            return Err(Error::OptimizerConfig(
                "layers, error_layers, iterations and shots must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// One CSV row of an estimate report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub device: String,
    pub topology: String,
    pub seed: u64,
    pub alpha: f64,
    pub n: usize,
    pub layers: usize,
    /// SWAPs, depths and counts of the routed `layers`-deep circuit.
    pub swaps: usize,
    pub d1: u64,
    pub d2: u64,
    pub n1: u64,
    pub n2: u64,
    pub nm: u64,
    pub t_total_s: f64,
    pub e_tot: f64,
}

/// Lowers `c` to native gates, routes it and profiles the result.
pub fn profile_on(c: &Circuit, t: &Topology, swap_cost: u64) -> Result<(RoutedCircuit, DepthProfile)> {
    let routed = route_circuit(&to_native(c)?, t, None)?;
    let profile = compute_depth_profile_with(&routed.circuit, swap_cost);
    Ok((routed, profile))
}

/// Standard QAOA circuit of depth `layers` with measurements, angles drawn
/// from the instance's angle stream. Counts do not depend on the angles.
pub fn estimation_circuit(inst: &FeatureSelectionInstance, layers: usize) -> Result<Circuit> {
    let mut r = rng::stream(inst.seed, Stream::AngleInit);
    let params: Vec<f64> = (0..layers)
        .flat_map(|_| [rng::uniform(&mut r, 0.0, 2.0 * PI), rng::uniform(&mut r, 0.0, PI)])
        .collect();
    standard_qaoa_circuit(&inst.to_ising(), &params, true)
}

/// Total time sums the circuits of depth `1..=layers`, one per step of the
/// layer-by-layer protocol; the error estimate uses one execution of the
/// `error_layers`-deep circuit.
pub fn estimate_resources(
    inst: &FeatureSelectionInstance,
    device: &DeviceProfile,
    opts: &EstimateOptions,
) -> Result<ResourceEstimate> {
    opts.validate()?;
    let calib = device.calibration();
    calib.validate()?;
    let topo = device.build_topology()?;
    let n = inst.n();
    if n > topo.num_nodes() {
        return Err(Error::DeviceTooSmall {
            device: device.name.clone(),
            needed: n,
            available: topo.num_nodes(),
        });
    }
    // Angle draws come from one stream, so the depth-k circuit is a prefix
    // of the depth-(k + 1) one.
    let prefix = |k: usize| estimation_circuit(inst, k);

    let mut profiles = Vec::with_capacity(opts.layers);
    let mut last = None;
    for k in 1..=opts.layers {
        let (routed, p) = profile_on(&prefix(k)?, &topo, opts.swap_two_qubit_gates)?;
        profiles.push(p);
        last = Some((routed.swaps, p));
    }
    let (swaps, p) = last.expect("at least one layer");
    let (_, ep) = profile_on(&prefix(opts.error_layers)?, &topo, opts.swap_two_qubit_gates)?;
    Ok(ResourceEstimate {
        device: device.name.clone(),
        topology: topo.kind().to_string(),
        seed: inst.seed,
        alpha: inst.alpha(),
        n,
        layers: opts.layers,
        swaps,
        d1: p.d1,
        d2: p.d2,
        n1: p.n1,
        n2: p.n2,
        nm: p.nm,
        t_total_s: estimate_total_time(&profiles, &calib, opts.iterations, opts.shots)? * 1e-6,
        e_tot: estimate_error_probability(&ep, &calib),
    })
}
