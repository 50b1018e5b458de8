use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// Tensor product of single-qubit Paulis, identity on unlisted qubits.
///
/// Terms are kept sorted by qubit index; each qubit appears at most once.
/// The text form lists `letter index` pairs, e.g. `X0Y3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    terms: Vec<(usize, Pauli)>,
}

/// Bit masks describing the action of a Pauli string on basis states.
///
/// `P|x> = i^{y_count} (-1)^{popcount(x & sign)} |x ^ flip>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PauliMasks {
    pub flip: usize,
    pub sign: usize,
    pub y_count: u32,
}

impl PauliString {
    pub fn new(mut terms: Vec<(usize, Pauli)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidPauli("empty string".into()));
        }
        terms.sort_by_key(|&(q, _)| q);
        if let Some(w) = terms.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPauli(format!("qubit {} repeated", w[0].0)));
        }
        Ok(Self { terms })
    }

    pub fn single(qubit: usize, p: Pauli) -> Self {
        Self {
            terms: vec![(qubit, p)],
        }
    }

    pub fn pair(a: (usize, Pauli), b: (usize, Pauli)) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn terms(&self) -> &[(usize, Pauli)] {
        &self.terms
    }

    pub fn weight(&self) -> usize {
        self.terms.len()
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.terms.iter().map(|&(q, _)| q)
    }

    pub fn max_qubit(&self) -> usize {
        self.terms.last().map(|&(q, _)| q).unwrap_or(0)
    }

    /// True when every term is `Z`, so the string is diagonal.
    pub fn is_diagonal(&self) -> bool {
        self.terms.iter().all(|&(_, p)| p == Pauli::Z)
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self.terms.iter().find(|&&(q, _)| q >= n) {
            Some(&(q, _)) => Err(Error::QubitIndex { index: q, n }),
            None => Ok(()),
        }
    }

    pub fn masks(&self) -> PauliMasks {
        let mut m = PauliMasks {
            flip: 0,
            sign: 0,
            y_count: 0,
        };
        for &(q, p) in &self.terms {
            let bit = 1usize << q;
            match p {
                Pauli::X => m.flip |= bit,
                Pauli::Y => {
                    m.flip |= bit;
                    m.sign |= bit;
                    m.y_count += 1;
                }
                Pauli::Z => m.sign |= bit,
            }
        }
        m
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &(q, p) in &self.terms {
            write!(f, "{}{}", p.letter(), q)?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPauli(s.to_string());
        let mut terms = Vec::new();
        let mut chars = s.chars().peekable();
        while let Some(c) = chars.next() {
            let p = match c {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(bad()),
            };
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let q = digits.parse().map_err(|_| bad())?;
            terms.push((q, p));
        }
        Self::new(terms)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p: PauliString = "Y3X0".parse().unwrap();
        assert_eq!(p.to_string(), "X0Y3");
        assert_eq!(p.weight(), 2);
        assert!("X0X0".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!("Q1".parse::<PauliString>().is_err());
        assert!("X".parse::<PauliString>().is_err());
    }

    #[test]
    fn masks() {
        let p: PauliString = "X0Y1Z2".parse().unwrap();
        let m = p.masks();
        assert_eq!(m.flip, 0b011);
        assert_eq!(m.sign, 0b110);
        assert_eq!(m.y_count, 1);
        assert!(p.validate(3).is_ok());
        assert!(p.validate(2).is_err());
    }
}
