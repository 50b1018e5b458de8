//! Dense-matrix reference implementations, independent of the simulator.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use qaoa_core::problem::FeatureSelectionInstance;
use qaoa_core::qaoa::MixerOperator;
use qaoa_core::rng::{unit, Rng};
use qaoa_core::sim::{Pauli, PauliString, StateVector};

pub type Mat = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn single(p: Option<Pauli>) -> Mat {
    let (o, one, i) = (c(0.0, 0.0), c(1.0, 0.0), c(0.0, 1.0));
    match p {
        None => Mat::identity(2, 2),
        Some(Pauli::X) => Mat::from_row_slice(2, 2, &[o, one, one, o]),
        Some(Pauli::Y) => Mat::from_row_slice(2, 2, &[o, -i, i, o]),
        Some(Pauli::Z) => Mat::from_row_slice(2, 2, &[one, o, o, -one]),
    }
}

/// Kronecker product with qubit 0 as the least significant index.
pub fn pauli_matrix(p: &PauliString, n: usize) -> Mat {
    let mut m = Mat::identity(1, 1);
    for q in (0..n).rev() {
        let f = p.terms().iter().find(|t| t.0 == q).map(|t| t.1);
        m = m.kronecker(&single(f));
    }
    m
}

/// Feature-selection objective evaluated from the matrix entries directly.
pub fn objective(inst: &FeatureSelectionInstance, x: usize) -> f64 {
    let n = inst.n();
    let a = inst.alpha();
    let bit = |i: usize| ((x >> i) & 1) as f64;
    let mut lin = 0.0;
    let mut quad = 0.0;
    for i in 0..n {
        lin += inst.q.get(i, i) * bit(i);
        for j in (i + 1)..n {
            quad += inst.q.get(i, j) * bit(i) * bit(j);
        }
    }
    -(1.0 - a) * lin + a * quad
}

pub fn cost_matrix(inst: &FeatureSelectionInstance) -> Mat {
    let dim = 1 << inst.n();
    Mat::from_diagonal(&Vector::from_iterator(dim, (0..dim).map(|x| c(objective(inst, x), 0.0))))
}

pub fn mixer_matrix(m: &MixerOperator, n: usize) -> Mat {
    let dim = 1 << n;
    m.strings(n)
        .iter()
        .fold(Mat::zeros(dim, dim), |acc, p| acc + pauli_matrix(p, n))
}

/// `exp(-i t M) v`.
pub fn evolve(m: &Mat, t: f64, v: &Vector) -> Vector {
    (m * c(0.0, -t)).exp() * v
}

pub fn to_vector(s: &StateVector) -> Vector {
    Vector::from_column_slice(s.amplitudes())
}

pub fn from_vector(v: &Vector) -> StateVector {
    StateVector::from_amplitudes(v.iter().copied().collect()).unwrap()
}

pub fn fidelity(a: &Vector, b: &Vector) -> f64 {
    a.dotc(b).norm_sqr()
}

pub fn expectation(m: &Mat, v: &Vector) -> f64 {
    v.dotc(&(m * v)).re
}

pub fn random_state(n: usize, rng: &mut Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..1 << n).map(|_| c(unit(rng) - 0.5, unit(rng) - 0.5)).collect();
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    StateVector::from_amplitudes(amps.into_iter().map(|a| a / norm).collect()).unwrap()
}
