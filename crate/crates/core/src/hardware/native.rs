//! Lowering to the `{Rz, Rx, CNOT, SWAP}` gate set.
//!
//! | gate              | native sequence (time order)              |
//! |-------------------|-------------------------------------------|
//! | `H`               | `Rz(pi/2) Rx(pi/2) Rz(pi/2)`              |
//! | `Ry(t)`           | `Rz(-pi/2) Rx(t) Rz(pi/2)`                |
//! | `exp(-i t Z)`     | `Rz(2t)`                                  |
//! | `exp(-i t X)`     | `Rx(2t)`                                  |
//! | `exp(-i t P)`     | basis change, CNOT ladder, `Rz(2t)`, undo |
//!
//! Basis change per factor: `X` uses `H` on both sides, `Y` uses
//! `Rx(pi/2)` before and `Rx(-pi/2)` after. Equalities hold up to a global
//! phase.

use std::f64::consts::FRAC_PI_2;

use crate::error::Result;
use crate::sim::{Circuit, Gate, Pauli, PauliString};

pub fn is_native(g: &Gate) -> bool {
    matches!(g, Gate::Rz(..) | Gate::Rx(..) | Gate::Cnot { .. } | Gate::Swap(..))
}

fn hadamard(q: usize, out: &mut Vec<Gate>) {
    out.extend([Gate::Rz(q, FRAC_PI_2), Gate::Rx(q, FRAC_PI_2), Gate::Rz(q, FRAC_PI_2)]);
}

fn pauli_rotation(p: &PauliString, theta: f64, out: &mut Vec<Gate>) {
    let terms = p.terms();
    if let [(q, l)] = terms {
        match l {
            Pauli::Z => out.push(Gate::Rz(*q, 2.0 * theta)),
            Pauli::X => out.push(Gate::Rx(*q, 2.0 * theta)),
            Pauli::Y => lower(&Gate::Ry(*q, 2.0 * theta), out),
        }
        return;
    }
    let into_z = |out: &mut Vec<Gate>| {
        for &(q, l) in terms {
            match l {
                Pauli::X => hadamard(q, out),
                Pauli::Y => out.push(Gate::Rx(q, FRAC_PI_2)),
                Pauli::Z => {}
            }
        }
    };
    let out_of_z = |out: &mut Vec<Gate>| {
        for &(q, l) in terms {
            match l {
                Pauli::X => hadamard(q, out),
                Pauli::Y => out.push(Gate::Rx(q, -FRAC_PI_2)),
                Pauli::Z => {}
            }
        }
    };
    let ladder: Vec<Gate> = terms
        .windows(2)
        .map(|w| Gate::Cnot {
            control: w[0].0,
            target: w[1].0,
        })
        .collect();
    let last = terms[terms.len() - 1].0;
    into_z(out);
    out.extend(ladder.iter().cloned());
    out.push(Gate::Rz(last, 2.0 * theta));
    out.extend(ladder.into_iter().rev());
    out_of_z(out);
}

fn lower(g: &Gate, out: &mut Vec<Gate>) {
    match g {
        Gate::H(q) => hadamard(*q, out),
        Gate::Ry(q, t) => out.extend([
            Gate::Rz(*q, -FRAC_PI_2),
            Gate::Rx(*q, *t),
            Gate::Rz(*q, FRAC_PI_2),
        ]),
        Gate::PauliRotation(p, t) => pauli_rotation(p, *t, out),
        native => out.push(native.clone()),
    }
}

/// Native-gate equivalent of `c`; measurements are kept.
pub fn to_native(c: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(c.len() * 2);
    for g in c.gates() {
        lower(g, &mut gates);
    }
    let mut out = Circuit::new(c.n());
    for g in gates {
        out.push(g)?;
    }
    for &q in c.measurements() {
        out.measure(q)?;
    }
    Ok(out)
}
