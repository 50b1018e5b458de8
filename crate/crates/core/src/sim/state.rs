use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::RngCore;
use serde::{Deserialize, Serialize};

use super::circuit::{Circuit, Gate};
use super::pauli::{PauliMasks, PauliString};
use crate::error::{Error, Result};
use crate::problem::IsingHamiltonian;
use crate::rng;

/// Largest register the simulator accepts.
pub const MAX_QUBITS: usize = 20;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Dense statevector; amplitude index bit `q` is qubit `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::QubitCount { n, max: MAX_QUBITS });
    }
    Ok(())
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        Self::basis(n, 0)
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_n(n)?;
        if index >> n != 0 {
            return Err(Error::QubitIndex { index, n });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    /// Uniform superposition `|+>^n`.
    pub fn plus(n: usize) -> Result<Self> {
        check_n(n)?;
        let a = (0.5f64).powf(n as f64 / 2.0);
        Ok(Self {
            n,
            amps: vec![Complex64::new(a, 0.0); 1 << n],
        })
    }

    /// Wraps raw amplitudes. The length must be a power of two; no
    /// normalization is applied.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(Error::LengthMismatch {
                expected: len.next_power_of_two(),
                actual: len,
            });
        }
        let n = len.trailing_zeros() as usize;
        check_n(n)?;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        self.same_size(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    fn same_size(&self, n: usize) -> Result<()> {
        if n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: n,
            });
        }
        Ok(())
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n)?;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        match gate {
            Gate::H(q) => self.apply_1q(*q, [[h.into(), h.into()], [h.into(), (-h).into()]]),
            Gate::Rx(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                self.apply_1q(*q, [[c.into(), -I * s], [-I * s, c.into()]])
            }
            Gate::Ry(q, t) => {
                let (c, s) = ((t / 2.0).cos(), (t / 2.0).sin());
                self.apply_1q(*q, [[c.into(), (-s).into()], [s.into(), c.into()]])
            }
            Gate::Rz(q, t) => {
                let m = Complex64::from_polar(1.0, -t / 2.0);
                self.apply_1q(*q, [[m, 0.0.into()], [0.0.into(), m.conj()]])
            }
            Gate::Cnot { control, target } => {
                let (c, t) = (1usize << control, 1usize << target);
                for x in 0..self.amps.len() {
                    if x & c != 0 && x & t == 0 {
                        self.amps.swap(x, x | t);
                    }
                }
            }
            Gate::Swap(a, b) => {
                let (a, b) = (1usize << a, 1usize << b);
                for x in 0..self.amps.len() {
                    if x & a != 0 && x & b == 0 {
                        self.amps.swap(x, (x ^ a) | b);
                    }
                }
            }
            Gate::PauliRotation(p, t) => self.rotate_masks(p.masks(), *t),
        }
        Ok(())
    }

    pub fn run(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.n() > self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: circuit.n(),
            });
        }
        circuit.gates().iter().try_for_each(|g| self.apply(g))
    }

    fn apply_1q(&mut self, q: usize, m: [[Complex64; 2]; 2]) {
        let bit = 1usize << q;
        for x in 0..self.amps.len() {
            if x & bit == 0 {
                let (a0, a1) = (self.amps[x], self.amps[x | bit]);
                self.amps[x] = m[0][0] * a0 + m[0][1] * a1;
                self.amps[x | bit] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
    }

    /// Applies `exp(-i theta P)`.
    pub fn apply_pauli_rotation(&mut self, p: &PauliString, theta: f64) -> Result<()> {
        p.validate(self.n)?;
        self.rotate_masks(p.masks(), theta);
        Ok(())
    }

    fn rotate_masks(&mut self, m: PauliMasks, theta: f64) {
        let (c, s) = (theta.cos(), theta.sin());
        let y_phase = I.powu(m.y_count);
        let phase = |x: usize| {
            if (x & m.sign).count_ones() % 2 == 1 {
                -y_phase
            } else {
                y_phase
            }
        };
        if m.flip == 0 {
            // exp(-i t P) is diagonal with P|x> = +-|x>.
            let plus = Complex64::from_polar(1.0, -theta);
            for (x, a) in self.amps.iter_mut().enumerate() {
                *a *= if phase(x).re > 0.0 { plus } else { plus.conj() };
            }
            return;
        }
        let low = 1usize << m.flip.trailing_zeros();
        for x in 0..self.amps.len() {
            if x & low != 0 {
                continue;
            }
            let y = x ^ m.flip;
            let (ax, ay) = (self.amps[x], self.amps[y]);
            // P|x> = phase(x)|y>, P|y> = phase(y)|x>
            self.amps[x] = c * ax - I * s * phase(y) * ay;
            self.amps[y] = c * ay - I * s * phase(x) * ax;
        }
    }

    /// `P|psi>` for a single Pauli string.
    pub fn pauli_image(&self, p: &PauliString) -> Result<StateVector> {
        p.validate(self.n)?;
        let m = p.masks();
        let y_phase = I.powu(m.y_count);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amps.len()];
        for (x, &a) in self.amps.iter().enumerate() {
            let sign = if (x & m.sign).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            out[x ^ m.flip] = y_phase * sign * a;
        }
        Ok(StateVector { n: self.n, amps: out })
    }

    /// Multiplies amplitude `x` by `exp(-i t d_x)`.
    pub fn apply_diagonal_phase(&mut self, diag: &[f64], t: f64) -> Result<()> {
        self.same_size_dim(diag.len())?;
        for (a, &d) in self.amps.iter_mut().zip(diag) {
            *a *= Complex64::from_polar(1.0, -t * d);
        }
        Ok(())
    }

    fn same_size_dim(&self, len: usize) -> Result<()> {
        if len != self.amps.len() {
            return Err(Error::LengthMismatch {
                expected: self.amps.len(),
                actual: len,
            });
        }
        Ok(())
    }

    /// `sum_x |a_x|^2 d_x`.
    pub fn expectation_diagonal(&self, diag: &[f64]) -> Result<f64> {
        self.same_size_dim(diag.len())?;
        Ok(self.amps.iter().zip(diag).map(|(a, d)| a.norm_sqr() * d).sum())
    }

    /// Exact `<psi|H|psi>` for a diagonal cost operator.
    pub fn expectation_of_cost(&self, h: &IsingHamiltonian) -> Result<f64> {
        self.same_size(h.n)?;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .map(|(x, a)| a.norm_sqr() * h.energy_of_index(x))
            .sum())
    }

    /// Draws `shots` computational-basis outcomes from `|a_x|^2`.
    pub fn sample_shots(&self, shots: u64, rng: &mut impl RngCore) -> Result<Histogram> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let mut cdf = Vec::with_capacity(self.amps.len());
        let mut acc = 0.0;
        for a in &self.amps {
            acc += a.norm_sqr();
            cdf.push(acc);
        }
        let total = acc;
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng::unit(rng) * total;
            let idx = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1);
            *counts.entry(idx as u64).or_insert(0) += 1;
        }
        Ok(Histogram {
            n: self.n,
            shots,
            counts,
        })
    }
}

/// Counts of measured basis states.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub n: usize,
    pub shots: u64,
    pub counts: BTreeMap<u64, u64>,
}

impl Histogram {
    pub fn from_counts(n: usize, counts: BTreeMap<u64, u64>) -> Self {
        let shots = counts.values().sum();
        Self { n, shots, counts }
    }

    /// `sum_x (count_x / shots) E(x)`.
    pub fn estimate_cost(&self, h: &IsingHamiltonian) -> Result<f64> {
        if self.shots == 0 {
            return Err(Error::EmptyHistogram);
        }
        if h.n != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                actual: h.n,
            });
        }
        let s = self.shots as f64;
        Ok(self
            .counts
            .iter()
            .map(|(&x, &c)| c as f64 / s * h.energy_of_index(x as usize))
            .sum())
    }

    /// Same as [`Self::estimate_cost`] with precomputed basis energies.
    pub fn estimate_diagonal(&self, diag: &[f64]) -> Result<f64> {
        if self.shots == 0 {
            return Err(Error::EmptyHistogram);
        }
        let s = self.shots as f64;
        Ok(self
            .counts
            .iter()
            .map(|(&x, &c)| c as f64 / s * diag[x as usize])
            .sum())
    }
}
