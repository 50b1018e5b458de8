//! Exact classical minimization of feature-selection objectives.
//!
//! Brute force enumerates all `2^n` selections. Branch-and-bound fixes
//! variables in index order, depth first, and bounds each node by
//!
//! ```text
//! (value of terms whose variables are all fixed)
//!   + sum over terms touching a free variable of min(0, coefficient)
//! ```
//!
//! where a quadratic term with one end fixed to 0 contributes nothing. The
//! search stops once `|z_bound - z_best| / |z_best|` drops to the gap
//! tolerance, `z_bound` being the smallest bound among open nodes.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::problem::{DecisionVector, FeatureSelectionInstance};

pub const BRUTE_FORCE_MAX_N: usize = 24;
pub const BRANCH_AND_BOUND_MAX_N: usize = 30;
/// Gap tolerance used by default for branch-and-bound.
pub const DEFAULT_GAP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveMethod {
    BruteForce,
    BranchAndBound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactSolution {
    pub minimizer: DecisionVector,
    pub value: f64,
    pub method: SolveMethod,
    pub gap_at_termination: f64,
    /// Selections evaluated (brute force) or search nodes visited.
    pub nodes: u64,
}

/// Global minimum over all selections; ties go to the smallest index.
pub fn brute_force_min(inst: &FeatureSelectionInstance) -> Result<ExactSolution> {
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRUTE_FORCE_MAX_N,
            what: "brute-force enumeration",
        });
    }
    let better = |a: (f64, u64), b: (f64, u64)| {
        if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
            b
        } else {
            a
        }
    };
    let (value, index) = (0..1u64 << n)
        .into_par_iter()
        .map(|x| (inst.evaluate_index(x), x))
        .reduce(|| (f64::INFINITY, u64::MAX), better);
    Ok(ExactSolution {
        minimizer: DecisionVector::from_index(index, n),
        value,
        method: SolveMethod::BruteForce,
        gap_at_termination: 0.0,
        nodes: 1 << n,
    })
}

/// `|z_bound - z_best| / |z_best|`.
pub fn compute_gap(z_best: f64, z_bound: f64) -> Result<f64> {
    if z_best.abs() < 1e-12 {
        return Err(Error::NearZeroDenominator(z_best));
    }
    Ok((z_bound - z_best).abs() / z_best.abs())
}

#[derive(Debug, Clone, Copy)]
struct Node {
    depth: usize,
    assign: u64,
    bound: f64,
}

struct Bounder {
    n: usize,
    lin: Vec<f64>,
    quad: Vec<f64>,
    /// `sum_{i >= d} min(0, lin_i) + sum_{d <= i < j} min(0, quad_ij)`
    free_tail: Vec<f64>,
}

impl Bounder {
    fn new(inst: &FeatureSelectionInstance) -> Self {
        let n = inst.n();
        let a = inst.alpha();
        let lin: Vec<f64> = (0..n).map(|i| -(1.0 - a) * inst.q.get(i, i)).collect();
        let mut quad = vec![0.0; n * n];
        for (i, j, v) in inst.q.off_diagonal() {
            quad[i * n + j] = a * v;
        }
        let mut free_tail = vec![0.0; n + 1];
        for d in (0..n).rev() {
            let pairs: f64 = ((d + 1)..n).map(|j| quad[d * n + j].min(0.0)).sum();
            free_tail[d] = free_tail[d + 1] + lin[d].min(0.0) + pairs;
        }
        Self {
            n,
            lin,
            quad,
            free_tail,
        }
    }

    fn bound(&self, depth: usize, assign: u64) -> f64 {
        let n = self.n;
        let on = |i: usize| (assign >> i) & 1 == 1;
        let mut fixed = 0.0;
        let mut cross = 0.0;
        for i in (0..depth).filter(|&i| on(i)) {
            fixed += self.lin[i];
            for j in (i + 1)..depth {
                if on(j) {
                    fixed += self.quad[i * n + j];
                }
            }
            for j in depth..n {
                cross += self.quad[i * n + j].min(0.0);
            }
        }
        fixed + cross + self.free_tail[depth]
    }
}

/// One-flip local search from the empty selection.
fn greedy_incumbent(inst: &FeatureSelectionInstance) -> (u64, f64) {
    let mut x = 0u64;
    let mut fx = inst.evaluate_index(0);
    loop {
        let best = (0..inst.n())
            .map(|i| (x ^ (1 << i), inst.evaluate_index(x ^ (1 << i))))
            .fold(None, |acc: Option<(u64, f64)>, c| match acc {
                Some(a) if a.1 <= c.1 => Some(a),
                _ => Some(c),
            });
        match best {
            Some((y, fy)) if fy < fx => {
                x = y;
                fx = fy;
            }
            _ => return (x, fx),
        }
    }
}

/// Depth-first branch-and-bound with the relative-gap stopping rule.
///
/// With `gap_tol = 0` the search runs to exhaustion, pruning only nodes
/// whose bound exceeds the incumbent, so the result is the global minimum
/// with the same tie-break as [`brute_force_min`]. A positive tolerance
/// also prunes nodes that can at best tie.
pub fn branch_and_bound_min(inst: &FeatureSelectionInstance, gap_tol: f64) -> Result<ExactSolution> {
    let n = inst.n();
    if n > BRANCH_AND_BOUND_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: BRANCH_AND_BOUND_MAX_N,
            what: "branch-and-bound",
        });
    }
    if !(gap_tol >= 0.0) {
        return Err(Error::OptimizerConfig(format!("gap tolerance {gap_tol} is negative")));
    }
    let b = Bounder::new(inst);
    let (mut best_x, mut best) = greedy_incumbent(inst);
    let mut stack = vec![Node {
        depth: 0,
        assign: 0,
        bound: b.bound(0, 0),
    }];
    let mut nodes = 0u64;
    let mut gap = 0.0;
    let exhaustive = gap_tol == 0.0;

    while let Some(node) = stack.pop() {
        nodes += 1;
        let open = if exhaustive { node.bound <= best } else { node.bound < best };
        if open {
            if node.depth == n {
                let v = inst.evaluate_index(node.assign);
                if v < best || (v == best && node.assign < best_x) {
                    best = v;
                    best_x = node.assign;
                }
            } else {
                let zero = Node {
                    depth: node.depth + 1,
                    assign: node.assign,
                    bound: b.bound(node.depth + 1, node.assign),
                };
                let one_assign = node.assign | (1 << node.depth);
                let one = Node {
                    depth: node.depth + 1,
                    assign: one_assign,
                    bound: b.bound(node.depth + 1, one_assign),
                };
                // Explore the child with the lower bound first.
                if one.bound < zero.bound {
                    stack.extend([zero, one]);
                } else {
                    stack.extend([one, zero]);
                }
            }
        }
        if stack.is_empty() {
            gap = 0.0;
            break;
        }
        if exhaustive {
            continue;
        }
        let z_bound = stack.iter().map(|s| s.bound).fold(best, f64::min);
        if let Ok(g) = compute_gap(best, z_bound) {
            gap = g;
            if g <= gap_tol {
                break;
            }
        }
    }

    Ok(ExactSolution {
        minimizer: DecisionVector::from_index(best_x, n),
        value: best,
        method: SolveMethod::BranchAndBound,
        gap_at_termination: gap,
        nodes,
    })
}
