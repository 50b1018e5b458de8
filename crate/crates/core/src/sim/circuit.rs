use std::fmt;

use serde::{Deserialize, Serialize};

use super::pauli::PauliString;
use crate::error::{Error, Result};

/// Gate set of the simulator.
///
/// Rotation conventions: `Rx(t) = exp(-i t X / 2)` and likewise for `Ry`,
/// `Rz`; `PauliRotation(P, t) = exp(-i t P)` with no factor one half.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Gate {
    H(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cnot { control: usize, target: usize },
    Swap(usize, usize),
    PauliRotation(PauliString, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Swap(a, b) => vec![*a, *b],
            Gate::PauliRotation(p, _) => p.qubits().collect(),
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            Gate::PauliRotation(p, _) => p.weight(),
            Gate::Cnot { .. } | Gate::Swap(..) => 2,
            _ => 1,
        }
    }

    /// Z-axis rotations, which hardware applies as a frame change.
    pub fn is_virtual_z(&self) -> bool {
        match self {
            Gate::Rz(..) => true,
            Gate::PauliRotation(p, _) => p.weight() == 1 && p.is_diagonal(),
            _ => false,
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let qs = self.qubits();
        for (k, &q) in qs.iter().enumerate() {
            if q >= n {
                return Err(Error::QubitIndex { index: q, n });
            }
            if qs[..k].contains(&q) {
                return Err(Error::DuplicateQubit(q));
            }
        }
        Ok(())
    }

    /// Copy with every qubit index passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        match self {
            Gate::H(q) => Gate::H(f(*q)),
            Gate::Rx(q, t) => Gate::Rx(f(*q), *t),
            Gate::Ry(q, t) => Gate::Ry(f(*q), *t),
            Gate::Rz(q, t) => Gate::Rz(f(*q), *t),
            Gate::Cnot { control, target } => Gate::Cnot {
                control: f(*control),
                target: f(*target),
            },
            Gate::Swap(a, b) => Gate::Swap(f(*a), f(*b)),
            Gate::PauliRotation(p, t) => {
                let terms = p.terms().iter().map(|&(q, l)| (f(q), l)).collect();
                Gate::PauliRotation(PauliString::new(terms).expect("remap must be injective"), *t)
            }
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H(q) => write!(f, "h q{q}"),
            Gate::Rx(q, t) => write!(f, "rx({t}) q{q}"),
            Gate::Ry(q, t) => write!(f, "ry({t}) q{q}"),
            Gate::Rz(q, t) => write!(f, "rz({t}) q{q}"),
            Gate::Cnot { control, target } => write!(f, "cx q{control}, q{target}"),
            Gate::Swap(a, b) => write!(f, "swap q{a}, q{b}"),
            Gate::PauliRotation(p, t) => write!(f, "exp(-i {t} {p})"),
        }
    }
}

/// Ordered gate list on `n` qubits, optionally ending in measurements.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Circuit {
    n: usize,
    gates: Vec<Gate>,
    measurements: Vec<usize>,
}

impl Circuit {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            gates: Vec::new(),
            measurements: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Qubits measured at the end of the circuit, in measurement order.
    pub fn measurements(&self) -> &[usize] {
        &self.measurements
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        if other.n > self.n {
            return Err(Error::QubitIndex {
                index: other.n - 1,
                n: self.n,
            });
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn measure(&mut self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::QubitIndex { index: q, n: self.n });
        }
        self.measurements.push(q);
        Ok(())
    }

    pub fn measure_all(&mut self) {
        self.measurements = (0..self.n).collect();
    }

    pub fn count(&self, pred: impl Fn(&Gate) -> bool) -> usize {
        self.gates.iter().filter(|g| pred(g)).count()
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "qubits {}", self.n)?;
        for g in &self.gates {
            writeln!(f, "{g}")?;
        }
        for q in &self.measurements {
            writeln!(f, "measure q{q}")?;
        }
        Ok(())
    }
}
