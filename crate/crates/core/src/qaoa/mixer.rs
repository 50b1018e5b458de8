use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate, Pauli, PauliString, StateVector};

/// Mixer Hamiltonian of one layer.
///
/// Text form: `GlobalX`, `GlobalY`, or a Pauli string such as `X0` / `X0Y3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MixerOperator {
    /// `sum_i X_i`
    GlobalX,
    /// `sum_i Y_i`
    GlobalY,
    /// Weight-one Pauli string.
    Single(PauliString),
    /// Weight-two Pauli string.
    Two(PauliString),
}

impl MixerOperator {
    pub fn from_pauli(p: PauliString) -> Result<Self> {
        match p.weight() {
            1 => Ok(MixerOperator::Single(p)),
            2 => Ok(MixerOperator::Two(p)),
            w => Err(Error::InvalidMixer(format!("weight {w} string {p}"))),
        }
    }

    /// Commuting Pauli strings whose sum is this operator on `n` qubits.
    pub fn strings(&self, n: usize) -> Vec<PauliString> {
        match self {
            MixerOperator::GlobalX => (0..n).map(|q| PauliString::single(q, Pauli::X)).collect(),
            MixerOperator::GlobalY => (0..n).map(|q| PauliString::single(q, Pauli::Y)).collect(),
            MixerOperator::Single(p) | MixerOperator::Two(p) => vec![p.clone()],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            MixerOperator::GlobalX | MixerOperator::GlobalY => Ok(()),
            MixerOperator::Single(p) | MixerOperator::Two(p) => p.validate(n),
        }
    }

    /// Circuit for `exp(-i beta H_M)`.
    pub fn circuit(&self, beta: f64, n: usize) -> Result<Circuit> {
        self.validate(n)?;
        let mut c = Circuit::new(n);
        match self {
            MixerOperator::GlobalX => (0..n).try_for_each(|q| c.push(Gate::Rx(q, 2.0 * beta)))?,
            MixerOperator::GlobalY => (0..n).try_for_each(|q| c.push(Gate::Ry(q, 2.0 * beta)))?,
            MixerOperator::Single(p) | MixerOperator::Two(p) => {
                c.push(Gate::PauliRotation(p.clone(), beta))?
            }
        }
        Ok(c)
    }

    /// Applies `exp(-i beta H_M)` to `state`.
    pub fn evolve(&self, state: &mut StateVector, beta: f64) -> Result<()> {
        for p in self.strings(state.n()) {
            state.apply_pauli_rotation(&p, beta)?;
        }
        Ok(())
    }

    /// `H_M |psi>`.
    pub fn image(&self, state: &StateVector) -> Result<StateVector> {
        self.validate(state.n())?;
        let mut acc = vec![Complex64::new(0.0, 0.0); state.amplitudes().len()];
        for p in self.strings(state.n()) {
            let img = state.pauli_image(&p)?;
            for (a, b) in acc.iter_mut().zip(img.amplitudes()) {
                *a += b;
            }
        }
        StateVector::from_amplitudes(acc)
    }
}

impl fmt::Display for MixerOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MixerOperator::GlobalX => f.write_str("GlobalX"),
            MixerOperator::GlobalY => f.write_str("GlobalY"),
            MixerOperator::Single(p) | MixerOperator::Two(p) => write!(f, "{p}"),
        }
    }
}

impl FromStr for MixerOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "GlobalX" => Ok(MixerOperator::GlobalX),
            "GlobalY" => Ok(MixerOperator::GlobalY),
            _ => MixerOperator::from_pauli(s.parse()?),
        }
    }
}

impl Serialize for MixerOperator {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MixerOperator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
