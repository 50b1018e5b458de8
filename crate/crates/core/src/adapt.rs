//! ADAPT-QAOA: mixer pool, energy-gradient criterion and adaptive runs.
//!
//! Before layer `k` every pool operator `A` is scored on the state left by
//! layer `k - 1` as
//!
//! ```text
//! g_A = | -i <psi| e^{i H gamma0} [H, A] e^{-i H gamma0} |psi> |
//!     = | 2 Im <phi| H A |phi> |,   |phi> = e^{-i gamma0 H} |psi>
//! ```
//!
//! and the largest score wins, ties going to the lowest pool index.

use num_complex::Complex64;
use rand::RngCore;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{FeatureSelectionInstance, IsingHamiltonian};
use crate::qaoa::{engine, Algorithm, MixerOperator, QaoaRunRecord, RunConfig};
use crate::sim::{Pauli, PauliString, StateVector};

/// Default `gamma0` of the gradient criterion.
pub const DEFAULT_GAMMA0: f64 = 0.01;

/// `2 + 2n + 9 n (n - 1) / 2`.
pub fn pool_size(n: usize) -> usize {
    2 + 2 * n + 9 * n * n.saturating_sub(1) / 2
}

/// Ordered candidate mixers.
///
/// Order: `GlobalX`, `GlobalY`, then `X_q, Y_q` for each qubit `q`, then for
/// each pair `i < j` the nine products `B_i C_j` with `B, C` running over
/// `X, Y, Z` in that order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixerPool {
    pub n: usize,
    pub entries: Vec<MixerOperator>,
}

impl MixerPool {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn build_mixer_pool(n: usize) -> Result<MixerPool> {
    if n == 0 {
        return Err(Error::EmptyProblem);
    }
    let mut entries = vec![MixerOperator::GlobalX, MixerOperator::GlobalY];
    for q in 0..n {
        for p in [Pauli::X, Pauli::Y] {
            entries.push(MixerOperator::Single(PauliString::single(q, p)));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            for a in Pauli::ALL {
                for b in Pauli::ALL {
                    entries.push(MixerOperator::Two(PauliString::pair((i, a), (j, b))?));
                }
            }
        }
    }
    Ok(MixerPool { n, entries })
}

fn check_dims(state: &StateVector, h: &IsingHamiltonian) -> Result<()> {
    if state.n() != h.n {
        return Err(Error::LengthMismatch {
            expected: h.n,
            actual: state.n(),
        });
    }
    Ok(())
}

/// `e^{-i gamma0 H}|psi>` and the basis energies of `H`.
fn evolved(state: &StateVector, h: &IsingHamiltonian, gamma0: f64) -> Result<(StateVector, Vec<f64>)> {
    check_dims(state, h)?;
    let energies = h.diagonal();
    let mut phi = state.clone();
    phi.apply_diagonal_phase(&energies, gamma0)?;
    Ok((phi, energies))
}

fn gradient_of(phi: &StateVector, energies: &[f64], a: &MixerOperator) -> Result<f64> {
    let chi = a.image(phi)?;
    let s: Complex64 = phi
        .amplitudes()
        .iter()
        .zip(chi.amplitudes())
        .zip(energies)
        .map(|((p, c), e)| p.conj() * c * e)
        .sum();
    Ok((2.0 * s.im).abs())
}

/// Energy gradient of mixer `a` on `state`.
pub fn mixer_gradient(state: &StateVector, h: &IsingHamiltonian, a: &MixerOperator, gamma0: f64) -> Result<f64> {
    let (phi, energies) = evolved(state, h, gamma0)?;
    gradient_of(&phi, &energies, a)
}

/// Shot-based estimate of the same gradient.
///
/// Each Pauli term `P` of the mixer contributes `E(pi/4) - E(-pi/4)`, where
/// `E(t)` is the sampled cost of `e^{-i t P}|phi>`; the mixer's derivative is
/// the sum over its commuting terms.
pub fn sampled_mixer_gradient(
    state: &StateVector,
    h: &IsingHamiltonian,
    a: &MixerOperator,
    gamma0: f64,
    shots: u64,
    rng: &mut impl RngCore,
) -> Result<f64> {
    let (phi, energies) = evolved(state, h, gamma0)?;
    sampled_gradient_of(&phi, &energies, a, shots, rng)
}

fn sampled_gradient_of(
    phi: &StateVector,
    energies: &[f64],
    a: &MixerOperator,
    shots: u64,
    rng: &mut impl RngCore,
) -> Result<f64> {
    let shift = std::f64::consts::FRAC_PI_4;
    let mut total = 0.0;
    for p in a.strings(phi.n()) {
        let plus = sampled_energy(phi, &p, shift, energies, shots, rng)?;
        let minus = sampled_energy(phi, &p, -shift, energies, shots, rng)?;
        total += plus - minus;
    }
    Ok(total.abs())
}

fn sampled_energy(
    phi: &StateVector,
    p: &PauliString,
    t: f64,
    energies: &[f64],
    shots: u64,
    rng: &mut impl RngCore,
) -> Result<f64> {
    let mut s = phi.clone();
    s.apply_pauli_rotation(p, t)?;
    s.sample_shots(shots, rng)?.estimate_diagonal(energies)
}

/// Winning pool entry.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub mixer: MixerOperator,
    pub index: usize,
    pub gradient: f64,
}

fn argmax(grads: &[f64]) -> usize {
    let mut best = 0;
    for (i, &g) in grads.iter().enumerate() {
        if g > grads[best] {
            best = i;
        }
    }
    best
}

/// Scores every pool entry (in parallel) and returns the largest gradient.
pub fn select_mixer(state: &StateVector, h: &IsingHamiltonian, pool: &MixerPool, gamma0: f64) -> Result<Selection> {
    if pool.is_empty() {
        return Err(Error::EmptyInput("mixer pool"));
    }
    let (phi, energies) = evolved(state, h, gamma0)?;
    let grads = pool
        .entries
        .par_iter()
        .map(|a| gradient_of(&phi, &energies, a))
        .collect::<Result<Vec<_>>>()?;
    let index = argmax(&grads);
    Ok(Selection {
        mixer: pool.entries[index].clone(),
        index,
        gradient: grads[index],
    })
}

/// Selection with shot-based gradients; entries are scored sequentially so
/// the random stream is consumed in pool order.
pub fn select_mixer_sampled(
    state: &StateVector,
    h: &IsingHamiltonian,
    pool: &MixerPool,
    gamma0: f64,
    shots: u64,
    rng: &mut impl RngCore,
) -> Result<Selection> {
    if pool.is_empty() {
        return Err(Error::EmptyInput("mixer pool"));
    }
    let (phi, energies) = evolved(state, h, gamma0)?;
    let grads = pool
        .entries
        .iter()
        .map(|a| sampled_gradient_of(&phi, &energies, a, shots, rng))
        .collect::<Result<Vec<_>>>()?;
    let index = argmax(&grads);
    Ok(Selection {
        mixer: pool.entries[index].clone(),
        index,
        gradient: grads[index],
    })
}

/// ADAPT-QAOA over the full pool for `inst.n()` qubits.
pub fn run_adapt_qaoa(
    inst: &FeatureSelectionInstance,
    max_layers: usize,
    cfg: &RunConfig,
    seed: u64,
) -> Result<QaoaRunRecord> {
    let pool = build_mixer_pool(inst.n())?;
    run_adapt_with_pool(inst, max_layers, cfg, seed, &pool)
}

/// ADAPT-QAOA restricted to `pool`.
pub fn run_adapt_with_pool(
    inst: &FeatureSelectionInstance,
    max_layers: usize,
    cfg: &RunConfig,
    seed: u64,
    pool: &MixerPool,
) -> Result<QaoaRunRecord> {
    if pool.n != inst.n() {
        return Err(Error::LengthMismatch {
            expected: inst.n(),
            actual: pool.n,
        });
    }
    engine::run(inst, max_layers, cfg, seed, Algorithm::Adapt, Some(pool))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pool_sizes() {
        assert_eq!(build_mixer_pool(1).unwrap().len(), 4);
        assert_eq!(build_mixer_pool(2).unwrap().len(), 15);
        assert_eq!(build_mixer_pool(6).unwrap().len(), 149);
        assert_eq!(pool_size(6), 149);
        assert_eq!(build_mixer_pool(0), Err(Error::EmptyProblem));
    }

    #[test]
    fn pool_order() {
        let pool = build_mixer_pool(2).unwrap();
        let names: Vec<String> = pool.entries.iter().map(|m| m.to_string()).collect();
        assert_eq!(
            names,
            [
                "GlobalX", "GlobalY", "X0", "Y0", "X1", "Y1", "X0X1", "X0Y1", "X0Z1", "Y0X1", "Y0Y1",
                "Y0Z1", "Z0X1", "Z0Y1", "Z0Z1"
            ]
        );
    }

    #[test]
    fn commuting_mixer_has_zero_gradient() {
        let mut h = IsingHamiltonian::constant(2, 0.3);
        h.linear = vec![0.4, -0.9];
        h.couplings.push(crate::problem::Coupling { i: 0, j: 1, value: 0.7 });
        let mut s = StateVector::plus(2).unwrap();
        s.apply(&crate::sim::Gate::Ry(0, 0.8)).unwrap();
        let zz: MixerOperator = "Z0Z1".parse().unwrap();
        assert!(mixer_gradient(&s, &h, &zz, 0.01).unwrap() < 1e-12);
    }

    #[test]
    fn eigenstate_ties_pick_first_entry() {
        let mut h = IsingHamiltonian::constant(3, 0.0);
        h.linear = vec![1.0, 2.0, 3.0];
        let s = StateVector::basis(3, 6).unwrap();
        let pool = build_mixer_pool(3).unwrap();
        let sel = select_mixer(&s, &h, &pool, 0.0).unwrap();
        assert_eq!(sel.index, 0);
        assert_eq!(sel.mixer, MixerOperator::GlobalX);
        assert!(sel.gradient.abs() < 1e-12);
    }

    #[test]
    fn single_entry_pool() {
        let h = IsingHamiltonian::constant(2, 0.0);
        let pool = MixerPool {
            n: 2,
            entries: vec!["Y1".parse().unwrap()],
        };
        let sel = select_mixer(&StateVector::plus(2).unwrap(), &h, &pool, 0.01).unwrap();
        assert_eq!(sel.mixer.to_string(), "Y1");
        let empty = MixerPool { n: 2, entries: vec![] };
        assert!(select_mixer(&StateVector::plus(2).unwrap(), &h, &empty, 0.01).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let h = IsingHamiltonian::constant(3, 0.0);
        let s = StateVector::plus(2).unwrap();
        assert!(mixer_gradient(&s, &h, &MixerOperator::GlobalX, 0.01).is_err());
    }
}
