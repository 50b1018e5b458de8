use serde::{Deserialize, Serialize};

use crate::sim::Circuit;

/// Two-qubit gates charged per SWAP when counting gates for errors.
pub const DEFAULT_SWAP_TWO_QUBIT_GATES: u64 = 3;

/// Layer and gate counts of a circuit, virtual Z rotations excluded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DepthProfile {
    /// Layers holding only single-qubit gates.
    pub d1: u64,
    /// Layers holding at least one two-qubit gate.
    pub d2: u64,
    pub n1: u64,
    pub n2: u64,
    pub nm: u64,
}

/// As-soon-as-possible layering in gate order. Each SWAP occupies one slot
/// in a layer but counts as `swap_cost` two-qubit gates in `n2`.
pub fn compute_depth_profile_with(c: &Circuit, swap_cost: u64) -> DepthProfile {
    let mut front = vec![0usize; c.n()];
    let mut has_two = Vec::<bool>::new();
    let mut p = DepthProfile {
        nm: c.measurements().len() as u64,
        ..DepthProfile::default()
    };
    for g in c.gates().iter().filter(|g| !g.is_virtual_z()) {
        let qs = g.qubits();
        let layer = qs.iter().map(|&q| front[q]).max().unwrap_or(0);
        for &q in &qs {
            front[q] = layer + 1;
        }
        if layer == has_two.len() {
            has_two.push(false);
        }
        if qs.len() >= 2 {
            has_two[layer] = true;
            p.n2 += if matches!(g, crate::sim::Gate::Swap(..)) { swap_cost } else { 1 };
        } else {
            p.n1 += 1;
        }
    }
    p.d2 = has_two.iter().filter(|&&t| t).count() as u64;
    p.d1 = has_two.len() as u64 - p.d2;
    p
}

pub fn compute_depth_profile(c: &Circuit) -> DepthProfile {
    compute_depth_profile_with(c, DEFAULT_SWAP_TWO_QUBIT_GATES)
}
