use crate::error::{Error, Result};
use crate::problem::IsingHamiltonian;
use crate::sim::{Circuit, Gate, Pauli, PauliString, StateVector};

use super::mixer::MixerOperator;

/// Circuit for `exp(-i gamma H_C)` up to the global phase of the offset.
///
/// One `exp(-i gamma h_i Z_i)` per nonzero linear term followed by one
/// `exp(-i gamma J_ij Z_i Z_j)` per coupling. The couplings commute; they
/// are emitted in round-robin rounds of disjoint pairs so that a layer
/// scheduler can run each round in parallel.
pub fn build_cost_circuit(h: &IsingHamiltonian, gamma: f64) -> Circuit {
    let mut c = Circuit::new(h.n);
    for (q, &v) in h.linear.iter().enumerate() {
        if v != 0.0 {
            c.push(Gate::PauliRotation(PauliString::single(q, Pauli::Z), gamma * v))
                .expect("linear term index within register");
        }
    }
    let rounds = round_robin_rounds(h.n);
    let mut order: Vec<_> = h.couplings.iter().collect();
    order.sort_by_key(|cp| rounds[cp.i * h.n + cp.j]);
    for cp in order {
        let zz = PauliString::pair((cp.i, Pauli::Z), (cp.j, Pauli::Z)).expect("coupling i < j");
        c.push(Gate::PauliRotation(zz, gamma * cp.value))
            .expect("coupling index within register");
    }
    c
}

/// `rounds[i * n + j]` is `(round, slot)` of pair `i < j` in the circle
/// method: every round is a perfect matching (plus one idle qubit when `n`
/// is odd).
fn round_robin_rounds(n: usize) -> Vec<(usize, usize)> {
    let m = n + n % 2;
    let mut rounds = vec![(0, 0); n * n];
    // Position 0 stays fixed while the others rotate.
    let mut ring: Vec<usize> = (0..m).collect();
    for r in 0..m.saturating_sub(1) {
        for k in 0..m / 2 {
            let (a, b) = (ring[k], ring[m - 1 - k]);
            if a < n && b < n {
                rounds[a.min(b) * n + a.max(b)] = (r, k);
            }
        }
        ring[1..].rotate_right(1);
    }
    rounds
}

/// Circuit for `exp(-i beta H_M)` on `n` qubits.
pub fn build_mixer_circuit(m: &MixerOperator, beta: f64, n: usize) -> Result<Circuit> {
    m.circuit(beta, n)
}

/// Layered QAOA state preparation over a fixed cost operator.
///
/// Parameters are ordered `(gamma_1, beta_1, .., gamma_p, beta_p)`.
#[derive(Debug, Clone)]
pub struct Ansatz {
    pub hamiltonian: IsingHamiltonian,
    pub mixers: Vec<MixerOperator>,
    energies: Vec<f64>,
    phases: Vec<f64>,
}

impl Ansatz {
    pub fn new(hamiltonian: IsingHamiltonian) -> Self {
        let energies = hamiltonian.diagonal();
        let phases = energies.iter().map(|e| e - hamiltonian.offset).collect();
        Self {
            hamiltonian,
            mixers: Vec::new(),
            energies,
            phases,
        }
    }

    pub fn n(&self) -> usize {
        self.hamiltonian.n
    }

    pub fn layers(&self) -> usize {
        self.mixers.len()
    }

    /// Basis-state energies including the offset.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn push_layer(&mut self, m: MixerOperator) -> Result<()> {
        m.validate(self.n())?;
        self.mixers.push(m);
        Ok(())
    }

    fn check_params(&self, params: &[f64]) -> Result<()> {
        if params.len() != 2 * self.layers() {
            return Err(Error::LengthMismatch {
                expected: 2 * self.layers(),
                actual: params.len(),
            });
        }
        Ok(())
    }

    /// Prepares the variational state by diagonal phase evolution. Agrees
    /// with [`Self::circuit`] up to a global phase.
    pub fn prepare(&self, params: &[f64]) -> Result<StateVector> {
        self.check_params(params)?;
        let mut s = StateVector::plus(self.n())?;
        for (m, gb) in self.mixers.iter().zip(params.chunks_exact(2)) {
            s.apply_diagonal_phase(&self.phases, gb[0])?;
            m.evolve(&mut s, gb[1])?;
        }
        Ok(s)
    }

    /// Exact `<psi(params)|H_C|psi(params)>`.
    pub fn energy(&self, params: &[f64]) -> Result<f64> {
        self.prepare(params)?.expectation_diagonal(&self.energies)
    }

    /// Gate-level circuit: Hadamard wall, then cost and mixer blocks per
    /// layer, optionally terminated by measuring every qubit.
    pub fn circuit(&self, params: &[f64], measure: bool) -> Result<Circuit> {
        self.check_params(params)?;
        let n = self.n();
        let mut c = Circuit::new(n);
        for q in 0..n {
            c.push(Gate::H(q))?;
        }
        for (m, gb) in self.mixers.iter().zip(params.chunks_exact(2)) {
            c.extend(&build_cost_circuit(&self.hamiltonian, gb[0]))?;
            c.extend(&build_mixer_circuit(m, gb[1], n)?)?;
        }
        if measure {
            c.measure_all();
        }
        Ok(c)
    }
}

/// Standard QAOA circuit with `params.len() / 2` global-X layers.
pub fn standard_qaoa_circuit(h: &IsingHamiltonian, params: &[f64], measure: bool) -> Result<Circuit> {
    let mut a = Ansatz::new(h.clone());
    for _ in 0..params.len() / 2 {
        a.push_layer(MixerOperator::GlobalX)?;
    }
    a.circuit(params, measure)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::{EntryDistribution, FeatureSelectionInstance};

    fn ham(n: usize, seed: u64) -> IsingHamiltonian {
        FeatureSelectionInstance::generate(n, 0.4, seed, EntryDistribution::default())
            .unwrap()
            .to_ising()
    }

    #[test]
    fn round_robin_covers_pairs_in_matchings() {
        for n in 2..=9 {
            let rounds = round_robin_rounds(n);
            let mut seen = std::collections::HashSet::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    assert!(seen.insert(rounds[i * n + j]), "n = {n}: slot reused");
                }
            }
            for r in 0..n {
                let mut busy = vec![false; n];
                for i in 0..n {
                    for j in (i + 1)..n {
                        if rounds[i * n + j].0 == r {
                            assert!(!busy[i] && !busy[j], "n = {n}: round {r} not disjoint");
                            busy[i] = true;
                            busy[j] = true;
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn zero_hamiltonian_or_angle_is_identity() {
        let zero = IsingHamiltonian::constant(3, 2.0);
        assert!(build_cost_circuit(&zero, 0.8).is_empty());
        let mut s = StateVector::plus(3).unwrap();
        s.apply(&Gate::Ry(0, 0.3)).unwrap();
        let mut t = s.clone();
        t.run(&build_cost_circuit(&ham(3, 1), 0.0)).unwrap();
        assert!((s.fidelity(&t).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn phase_path_matches_gate_path() {
        let h = ham(4, 5);
        let mut a = Ansatz::new(h.clone());
        for m in ["GlobalX", "Y1Z3", "GlobalY"] {
            a.push_layer(m.parse().unwrap()).unwrap();
        }
        let params = [0.3, 1.1, -0.7, 0.2, 2.5, 0.9];
        let fast = a.prepare(&params).unwrap();
        let mut slow = StateVector::zero(4).unwrap();
        slow.run(&a.circuit(&params, false).unwrap()).unwrap();
        assert!(fast.fidelity(&slow).unwrap() > 1.0 - 1e-12);
        let e = slow.expectation_of_cost(&h).unwrap();
        assert!((a.energy(&params).unwrap() - e).abs() < 1e-12);
    }

    #[test]
    fn layer_structure() {
        let h = ham(5, 2);
        let c = standard_qaoa_circuit(&h, &[0.1, 0.2, 0.3, 0.4], true).unwrap();
        assert_eq!(c.count(|g| matches!(g, Gate::H(_))), 5);
        assert_eq!(c.count(|g| matches!(g, Gate::Rx(..))), 10);
        assert_eq!(c.count(|g| matches!(g, Gate::PauliRotation(..))), 2 * (5 + 10));
        assert_eq!(c.measurements().len(), 5);
        assert!(Ansatz::new(h).prepare(&[0.1]).is_err());
    }
}
