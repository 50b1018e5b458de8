//! Iterative layer loop shared by standard and ADAPT-QAOA.
//!
//! Layer `k` appends a cost block and a mixer, draws `gamma_k ~ U[0, 2pi)`
//! and `beta_k ~ U[0, pi)` from the run's angle stream, keeps the first
//! `2(k - 1)` parameters at the previous optimum, and re-optimizes all `2k`
//! with Powell's method.

use std::f64::consts::PI;
use std::time::Instant;

use crate::adapt::{self, MixerPool};
use crate::classical;
use crate::error::{Error, Result};
use crate::optimizer::powell_minimize;
use crate::problem::{FeatureSelectionInstance, InstanceFile};
use crate::rng::{self, Stream};
use crate::sim::StateVector;

use super::record::{LayerRecord, QaoaRunRecord};
use super::{approximation_ratio, Algorithm, Ansatz, EvalMode, GradientMode, MixerOperator, RunConfig};

pub(crate) fn run(
    inst: &FeatureSelectionInstance,
    max_layers: usize,
    cfg: &RunConfig,
    seed: u64,
    algorithm: Algorithm,
    pool: Option<&MixerPool>,
) -> Result<QaoaRunRecord> {
    cfg.optimizer.validate()?;
    let (c_exact, minimizer) = match cfg.c_exact {
        Some(v) => (v, String::new()),
        None => {
            let s = classical::brute_force_min(inst)?;
            (s.value, s.minimizer.to_string())
        }
    };
    if c_exact.abs() < 1e-12 {
        return Err(Error::NearZeroDenominator(c_exact));
    }

    let h = inst.to_ising();
    let mut ansatz = Ansatz::new(h.clone());
    let mut angle_rng = rng::stream(seed, Stream::AngleInit);
    let mut shot_rng = rng::stream(seed, Stream::Shots);
    let mut params: Vec<f64> = Vec::new();
    let initial_cost = ansatz.energy(&params)?;
    let mut layers = Vec::with_capacity(max_layers);
    let clock = |t: Instant| if cfg.record_timing { t.elapsed().as_secs_f64() } else { 0.0 };

    for k in 1..=max_layers {
        let start = Instant::now();
        let (mixer, gradient, selection_seconds) = match (algorithm, pool) {
            (Algorithm::Adapt, Some(pool)) => {
                let t = Instant::now();
                let state = ansatz.prepare(&params)?;
                let sel = match (cfg.gradient, cfg.mode) {
                    (GradientMode::Shots, EvalMode::Shots { shots }) => {
                        adapt::select_mixer_sampled(&state, &h, pool, cfg.gamma0, shots, &mut shot_rng)?
                    }
                    _ => adapt::select_mixer(&state, &h, pool, cfg.gamma0)?,
                };
                (sel.mixer, Some(sel.gradient), Some(clock(t)))
            }
            _ => (MixerOperator::GlobalX, None, None),
        };
        ansatz.push_layer(mixer.clone())?;
        let x0: Vec<f64> = params
            .iter()
            .copied()
            .chain([rng::uniform(&mut angle_rng, 0.0, 2.0 * PI), rng::uniform(&mut angle_rng, 0.0, PI)])
            .collect();

        let result = match cfg.mode {
            EvalMode::Exact => powell_minimize(
                |p| ansatz.energy(p).unwrap_or(f64::NAN),
                &x0,
                &cfg.optimizer,
            )?,
            EvalMode::Shots { shots } => {
                let energies = ansatz.energies().to_vec();
                powell_minimize(
                    |p| {
                        sampled_cost(&ansatz, p, &energies, shots, &mut shot_rng).unwrap_or(f64::NAN)
                    },
                    &x0,
                    &cfg.optimizer,
                )?
            }
        };
        params = result.best_parameters;
        let exact_cost = ansatz.energy(&params)?;
        let cost = result.best_value;
        layers.push(LayerRecord {
            layer: k,
            mixer,
            initial_parameters: x0,
            parameters: params.clone(),
            cost,
            exact_cost,
            ratio: approximation_ratio(cost, c_exact)?,
            seconds: clock(start),
            selection_seconds,
            gradient,
            evaluations: result.evaluations,
            iterations: result.iterations,
            converged: result.converged,
        });
    }

    let final_circuit = ansatz.circuit(&params, matches!(cfg.mode, EvalMode::Shots { .. }))?;
    Ok(QaoaRunRecord {
        algorithm,
        instance: InstanceFile::from(inst),
        run_seed: seed,
        mode: cfg.mode,
        c_exact,
        exact_minimizer: minimizer,
        initial_cost,
        layers,
        final_circuit,
    })
}

fn sampled_cost(
    ansatz: &Ansatz,
    params: &[f64],
    energies: &[f64],
    shots: u64,
    rng: &mut rng::Rng,
) -> Result<f64> {
    let state: StateVector = ansatz.prepare(params)?;
    state.sample_shots(shots, rng)?.estimate_diagonal(energies)
}
