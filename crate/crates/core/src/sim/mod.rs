//! Ideal statevector simulation.

mod circuit;
mod pauli;
mod state;

pub use circuit::{Circuit, Gate};
pub use pauli::{Pauli, PauliMasks, PauliString};
pub use state::{Histogram, StateVector, MAX_QUBITS};
