//! QUBO and feature-selection instances and their Ising form.
//!
//! A feature-selection instance pairs an upper-triangular matrix `Q` with a
//! trade-off `alpha` and is scored as
//!
//! ```text
//! f(x) = -(1 - alpha) * sum_i Q_ii x_i + alpha * sum_{i<j} Q_ij x_i x_j
//! ```
//!
//! Substituting `x_i -> (1 - Z_i) / 2` gives a diagonal Ising operator with
//! linear, coupling and constant terms. Bit `i` of a basis-state index is
//! variable `x_i` (qubit 0 is the least significant bit).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// Upper-triangular QUBO matrix, stored densely in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct QuboMatrix {
    n: usize,
    data: Vec<f64>,
}

impl QuboMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyProblem);
        }
        Ok(Self {
            n,
            data: vec![0.0; n * n],
        })
    }

    /// Builds a matrix from its diagonal and a list of `(i, j, value)`
    /// off-diagonal entries with `i < j`.
    pub fn from_parts(diag: &[f64], offdiag: &[(usize, usize, f64)]) -> Result<Self> {
        let mut q = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            q.set(i, i, d)?;
        }
        for &(i, j, v) in offdiag {
            if i == j {
                return Err(Error::Serde(format!(
                    "off-diagonal entry ({i}, {j}) lies on the diagonal"
                )));
            }
            q.set(i, j, v)?;
        }
        Ok(q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coefficient `Q_ij` for `i <= j`.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i <= j && j < self.n);
        self.data[i * self.n + j]
    }

    /// Sets `Q_ij`. Indices are accepted in either order and stored in the
    /// upper triangle.
    pub fn set(&mut self, i: usize, j: usize, value: f64) -> Result<()> {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        if j >= self.n {
            return Err(Error::QubitIndex { index: j, n: self.n });
        }
        if !value.is_finite() {
            return Err(Error::Serde(format!("entry ({i}, {j}) is not finite")));
        }
        self.data[i * self.n + j] = value;
        Ok(())
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    /// Off-diagonal entries `(i, j, Q_ij)` in row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| ((i + 1)..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// `sum_i Q_ii x_i + sum_{i<j} Q_ij x_i x_j`.
    pub fn evaluate(&self, x: &DecisionVector) -> Result<f64> {
        check_len(self.n, x)?;
        let (lin, quad) = self.split_sums(|i| x.get(i));
        Ok(lin + quad)
    }

    /// Linear and quadratic parts of the objective for the selection `sel`.
    fn split_sums(&self, sel: impl Fn(usize) -> bool) -> (f64, f64) {
        let mut lin = 0.0;
        let mut quad = 0.0;
        for i in 0..self.n {
            if !sel(i) {
                continue;
            }
            lin += self.get(i, i);
            for j in (i + 1)..self.n {
                if sel(j) {
                    quad += self.get(i, j);
                }
            }
        }
        (lin, quad)
    }
}

fn check_len(n: usize, x: &DecisionVector) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            actual: x.len(),
        });
    }
    Ok(())
}

/// Binary decision vector `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DecisionVector(Vec<bool>);

impl DecisionVector {
    pub fn new(bits: Vec<bool>) -> Self {
        Self(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![false; n])
    }

    /// Bit `i` of `index` becomes `x_i`.
    pub fn from_index(index: u64, n: usize) -> Self {
        Self((0..n).map(|i| (index >> i) & 1 == 1).collect())
    }

    pub fn to_index(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Selected indices.
    pub fn selected(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.0[i]).collect()
    }
}

impl std::fmt::Display for DecisionVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Distribution of randomly generated `Q` entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EntryDistribution {
    Uniform { low: f64, high: f64 },
}

impl Default for EntryDistribution {
    fn default() -> Self {
        EntryDistribution::Uniform {
            low: 0.0,
            high: 1.0,
        }
    }
}

impl EntryDistribution {
    pub fn support(&self) -> (f64, f64) {
        match *self {
            EntryDistribution::Uniform { low, high } => (low, high),
        }
    }

    fn sample(&self, rng: &mut rng::Rng) -> f64 {
        match *self {
            EntryDistribution::Uniform { low, high } => rng::uniform(rng, low, high),
        }
    }
}

/// Feature-selection instance: matrix, trade-off and generating seed.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSelectionInstance {
    pub q: QuboMatrix,
    alpha: f64,
    pub seed: u64,
}

impl FeatureSelectionInstance {
    pub fn new(q: QuboMatrix, alpha: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self { q, alpha, seed })
    }

    /// Random instance. Entries are drawn in row-major order over the upper
    /// triangle (`Q_00, Q_01, .., Q_0n, Q_11, ..`) from the instance stream of
    /// `seed`.
    pub fn generate(n: usize, alpha: f64, seed: u64, dist: EntryDistribution) -> Result<Self> {
        let mut q = QuboMatrix::zeros(n)?;
        let mut rng = rng::stream(seed, Stream::Instance);
        for i in 0..n {
            for j in i..n {
                q.set(i, j, dist.sample(&mut rng))?;
            }
        }
        Self::new(q, alpha, seed)
    }

    pub fn n(&self) -> usize {
        self.q.n()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Same matrix and seed, different trade-off.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        Self::new(self.q.clone(), alpha, self.seed)
    }

    pub fn evaluate(&self, x: &DecisionVector) -> Result<f64> {
        check_len(self.n(), x)?;
        Ok(self.evaluate_with(|i| x.get(i)))
    }

    /// Objective for the basis-state index `bits` (bit `i` is `x_i`).
    ///
    /// Performs the same floating-point operations as [`Self::evaluate`].
    pub fn evaluate_index(&self, bits: u64) -> f64 {
        self.evaluate_with(|i| (bits >> i) & 1 == 1)
    }

    fn evaluate_with(&self, sel: impl Fn(usize) -> bool) -> f64 {
        let (lin, quad) = self.q.split_sums(sel);
        -(1.0 - self.alpha) * lin + self.alpha * quad
    }

    /// Ising form of the objective.
    pub fn to_ising(&self) -> IsingHamiltonian {
        let n = self.n();
        let mut linear = vec![0.0; n];
        let mut offset = 0.0;
        let mut pair = vec![0.0; n * n];
        for i in 0..n {
            // c x  ->  c/2 - (c/2) Z
            let c = -(1.0 - self.alpha) * self.q.get(i, i);
            offset += c / 2.0;
            linear[i] -= c / 2.0;
        }
        for (i, j, v) in self.q.off_diagonal() {
            // c x_i x_j  ->  (c/4)(1 - Z_i - Z_j + Z_i Z_j)
            let c = self.alpha * v;
            offset += c / 4.0;
            linear[i] -= c / 4.0;
            linear[j] -= c / 4.0;
            pair[i * n + j] += c / 4.0;
        }
        let couplings = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .filter(|&(i, j)| pair[i * n + j] != 0.0)
            .map(|(i, j)| Coupling {
                i,
                j,
                value: pair[i * n + j],
            })
            .collect();
        IsingHamiltonian {
            n,
            linear,
            couplings,
            offset,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&InstanceFile::from(self))?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(s)?;
        file.try_into()
    }
}

/// On-disk layout: `{n, alpha, seed, diag, offdiag: [{i, j, value}]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub diag: Vec<f64>,
    pub offdiag: Vec<OffDiagEntry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffDiagEntry {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

impl From<&FeatureSelectionInstance> for InstanceFile {
    fn from(inst: &FeatureSelectionInstance) -> Self {
        InstanceFile {
            n: inst.n(),
            alpha: inst.alpha,
            seed: inst.seed,
            diag: inst.q.diagonal(),
            offdiag: inst
                .q
                .off_diagonal()
                .map(|(i, j, value)| OffDiagEntry { i, j, value })
                .collect(),
        }
    }
}

impl TryFrom<InstanceFile> for FeatureSelectionInstance {
    type Error = Error;

    fn try_from(file: InstanceFile) -> Result<Self> {
        if file.diag.len() != file.n {
            return Err(Error::LengthMismatch {
                expected: file.n,
                actual: file.diag.len(),
            });
        }
        let off: Vec<_> = file.offdiag.iter().map(|e| (e.i, e.j, e.value)).collect();
        let q = QuboMatrix::from_parts(&file.diag, &off)?;
        FeatureSelectionInstance::new(q, file.alpha, file.seed)
    }
}

/// `J_ij Z_i Z_j` with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub value: f64,
}

/// Diagonal cost operator `offset + sum_i h_i Z_i + sum_{i<j} J_ij Z_i Z_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsingHamiltonian {
    pub n: usize,
    pub linear: Vec<f64>,
    pub couplings: Vec<Coupling>,
    pub offset: f64,
}

impl IsingHamiltonian {
    /// Operator with no terms besides the constant.
    pub fn constant(n: usize, offset: f64) -> Self {
        Self {
            n,
            linear: vec![0.0; n],
            couplings: Vec::new(),
            offset,
        }
    }

    pub fn basis_energy(&self, x: &DecisionVector) -> Result<f64> {
        check_len(self.n, x)?;
        Ok(self.energy_of_index(x.to_index() as usize))
    }

    /// Energy of basis state `index`, with `z_i = (-1)^{bit i}`.
    pub fn energy_of_index(&self, index: usize) -> f64 {
        let z = |q: usize| if (index >> q) & 1 == 1 { -1.0 } else { 1.0 };
        let mut e = self.offset;
        for (q, &h) in self.linear.iter().enumerate() {
            e += h * z(q);
        }
        for c in &self.couplings {
            e += c.value * z(c.i) * z(c.j);
        }
        e
    }

    /// Energies of all `2^n` basis states, offset included.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.n).map(|x| self.energy_of_index(x)).collect()
    }
}
