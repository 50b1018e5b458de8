use serde::{Deserialize, Serialize};

use super::topology::Topology;
use crate::error::{Error, Result};
use crate::sim::{Circuit, Gate, StateVector, MAX_QUBITS};

/// A circuit on physical qubits whose two-qubit gates all sit on edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoutedCircuit {
    /// Gates on physical qubit indices; width is the topology size.
    pub circuit: Circuit,
    /// `initial_mapping[logical] = physical` before the first gate.
    pub initial_mapping: Vec<usize>,
    /// `final_mapping[logical] = physical` after the last gate.
    pub final_mapping: Vec<usize>,
    pub swaps: usize,
}

/// Logical qubit `i` goes to the `i`-th node of a breadth-first walk
/// from node 0.
pub fn default_mapping(n: usize, t: &Topology) -> Result<Vec<usize>> {
    if n > t.num_nodes() {
        return Err(Error::DeviceTooSmall {
            device: t.kind().to_string(),
            needed: n,
            available: t.num_nodes(),
        });
    }
    Ok(t.bfs_order(0).into_iter().take(n).collect())
}

/// Greedy SWAP insertion.
///
/// For each two-qubit gate whose operands are not adjacent, the first
/// operand is swapped along a shortest path toward the second until the
/// two are neighbours. Gates on three or more qubits must be lowered first.
pub fn route_circuit(c: &Circuit, t: &Topology, initial_mapping: Option<&[usize]>) -> Result<RoutedCircuit> {
    let n = c.n();
    let init = match initial_mapping {
        Some(m) => m.to_vec(),
        None => default_mapping(n, t)?,
    };
    if init.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: init.len(),
        });
    }
    let size = t.num_nodes();
    // phys_of[logical], logical_of[physical]
    let mut phys_of = init.clone();
    let mut logical_of = vec![usize::MAX; size];
    for (l, &p) in init.iter().enumerate() {
        if p >= size {
            return Err(Error::QubitIndex { index: p, n: size });
        }
        if logical_of[p] != usize::MAX {
            return Err(Error::DuplicateQubit(p));
        }
        logical_of[p] = l;
    }

    let mut out = Circuit::new(size);
    let mut swaps = 0;
    for g in c.gates() {
        let qs = g.qubits();
        match qs.len() {
            0 | 1 => {}
            2 => {
                let (a, b) = (phys_of[qs[0]], phys_of[qs[1]]);
                if !t.are_adjacent(a, b) {
                    let path = t.shortest_path(a, b);
                    for w in path[..path.len() - 1].windows(2) {
                        let (p, q) = (w[0], w[1]);
                        out.push(Gate::Swap(p, q))?;
                        swaps += 1;
                        let (lp, lq) = (logical_of[p], logical_of[q]);
                        logical_of.swap(p, q);
                        if lp != usize::MAX {
                            phys_of[lp] = q;
                        }
                        if lq != usize::MAX {
                            phys_of[lq] = p;
                        }
                    }
                }
            }
            k => {
                return Err(Error::Topology(format!(
                    "cannot route a {k}-qubit gate; lower it to native gates first"
                )))
            }
        }
        out.push(g.remap(|q| phys_of[q]))?;
    }
    for &q in c.measurements() {
        out.measure(phys_of[q])?;
    }
    Ok(RoutedCircuit {
        circuit: out,
        initial_mapping: init,
        final_mapping: phys_of,
        swaps,
    })
}

impl RoutedCircuit {
    /// True when every multi-qubit gate acts on a coupled pair.
    pub fn respects(&self, t: &Topology) -> bool {
        self.circuit.gates().iter().all(|g| {
            let qs = g.qubits();
            qs.len() < 2 || (qs.len() == 2 && t.are_adjacent(qs[0], qs[1]))
        })
    }
}

/// Checks that `routed` prepares the same state as `original` from
/// `|0...0>`, once logical qubits are read at their final physical slots.
///
/// Only physical qubits that the routed circuit touches are simulated;
/// the rest stay in `|0>`. Returns the fidelity, or
/// [`Error::RoutingMismatch`] with the first differing amplitude index
/// (in the original circuit's basis) after global-phase alignment.
pub fn verify_routing(original: &Circuit, routed: &RoutedCircuit) -> Result<f64> {
    let n = original.n();
    let mut used: Vec<usize> = routed.initial_mapping.clone();
    for g in routed.circuit.gates() {
        used.extend(g.qubits());
    }
    used.sort_unstable();
    used.dedup();
    if used.len() > MAX_QUBITS {
        return Err(Error::QubitCount {
            n: used.len(),
            max: MAX_QUBITS,
        });
    }
    let compact = |p: usize| used.binary_search(&p).expect("physical qubit recorded");
    let mut small = Circuit::new(used.len());
    for g in routed.circuit.gates() {
        small.push(g.remap(compact))?;
    }

    let mut reference = StateVector::zero(n)?;
    reference.run(original)?;
    let mut prepared = StateVector::zero(used.len())?;
    prepared.run(&small)?;

    let slots: Vec<usize> = routed.final_mapping.iter().map(|&p| compact(p)).collect();
    let mut expected = vec![num_complex::Complex64::new(0.0, 0.0); 1 << used.len()];
    for (x, amp) in reference.amplitudes().iter().enumerate() {
        let y: usize = (0..n).filter(|&i| (x >> i) & 1 == 1).map(|i| 1 << slots[i]).sum();
        expected[y] = *amp;
    }
    let expected = StateVector::from_amplitudes(expected)?;
    let overlap = expected.inner(&prepared)?;
    let fidelity = overlap.norm_sqr();
    if fidelity >= 1.0 - 1e-9 {
        return Ok(fidelity);
    }
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { 1.0.into() };
    let index = expected
        .amplitudes()
        .iter()
        .zip(prepared.amplitudes())
        .position(|(e, p)| (e * phase - p).norm() > 1e-6)
        .unwrap_or(0);
    let logical = (0..n)
        .filter(|&i| (index >> slots[i]) & 1 == 1)
        .map(|i| 1 << i)
        .sum();
    Err(Error::RoutingMismatch {
        index: logical,
        fidelity,
    })
}
