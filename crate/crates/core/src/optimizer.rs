//! Powell's conjugate-direction minimizer.
//!
//! Each outer iteration line-minimizes along every direction of the current
//! set (bracketing followed by Brent's method), then tries the net
//! displacement of the sweep as a new direction, replacing the direction that
//! gave the largest single decrease. The loop stops when one sweep lowers the
//! objective by less than the relative `f_tolerance`, after `max_iterations`
//! sweeps, or once `max_evaluations` objective calls have been spent.
//!
//! Non-finite objective values met during the search count as `+inf`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const GOLDEN: f64 = 1.618_033_988_749_895;
const CGOLD: f64 = 0.381_966_011_250_105;
const TINY: f64 = 1e-21;
const ZEPS: f64 = 1e-10;
const BRENT_MAX_ITER: usize = 100;
const BRACKET_MAX_ITER: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    /// Cap on outer sweeps.
    pub max_iterations: usize,
    /// Cap on objective calls; `None` means `20 * max_iterations`.
    pub max_evaluations: Option<usize>,
    /// Relative tolerance of each line minimization.
    pub x_tolerance: f64,
    /// Relative decrease per sweep below which the search stops.
    pub f_tolerance: f64,
    /// Largest parabolic extrapolation, in units of the current bracket,
    /// allowed while bracketing a line minimum.
    pub bracket_limit: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            max_iterations: 1500,
            max_evaluations: None,
            x_tolerance: 1e-4,
            f_tolerance: 1e-6,
            bracket_limit: 100.0,
        }
    }
}

impl OptimizerConfig {
    pub fn evaluation_cap(&self) -> usize {
        self.max_evaluations
            .unwrap_or_else(|| self.max_iterations.saturating_mul(20))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::OptimizerConfig(m.to_string()));
        if self.max_iterations == 0 {
            return bad("max_iterations must be at least 1");
        }
        if self.evaluation_cap() == 0 {
            return bad("max_evaluations must be at least 1");
        }
        if !(self.x_tolerance > 0.0) || !(self.f_tolerance > 0.0) {
            return bad("tolerances must be positive");
        }
        if !(self.bracket_limit > 1.0) {
            return bad("bracket_limit must exceed 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub best_parameters: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub converged: bool,
}

struct Exhausted;

/// Objective wrapper that counts calls and remembers the best point seen.
struct Tracker<F> {
    f: F,
    evaluations: usize,
    cap: usize,
    best_x: Vec<f64>,
    best_f: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> std::result::Result<f64, Exhausted> {
        if self.evaluations >= self.cap {
            return Err(Exhausted);
        }
        self.evaluations += 1;
        let v = (self.f)(x);
        let v = if v.is_finite() { v } else { f64::INFINITY };
        if v < self.best_f {
            self.best_f = v;
            self.best_x.clear();
            self.best_x.extend_from_slice(x);
        }
        Ok(v)
    }

    fn along(&mut self, x: &[f64], dir: &[f64], t: f64, buf: &mut [f64]) -> std::result::Result<f64, Exhausted> {
        for ((b, xi), di) in buf.iter_mut().zip(x).zip(dir) {
            *b = xi + t * di;
        }
        self.eval(buf)
    }
}

/// Minimizes `objective` starting from `x0`.
pub fn powell_minimize<F>(objective: F, x0: &[f64], cfg: &OptimizerConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    cfg.validate()?;
    if x0.is_empty() {
        return Err(Error::OptimizerConfig("empty parameter vector".into()));
    }
    let mut tr = Tracker {
        f: objective,
        evaluations: 0,
        cap: cfg.evaluation_cap(),
        best_x: x0.to_vec(),
        best_f: f64::INFINITY,
    };
    let f0 = (tr.f)(x0);
    tr.evaluations = 1;
    if !f0.is_finite() {
        return Err(Error::NonFiniteStart);
    }
    tr.best_f = f0;

    let dim = x0.len();
    let mut x = x0.to_vec();
    let mut fx = f0;
    let mut dirs: Vec<Vec<f64>> = (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let mut iterations = 0;
    let mut converged = false;

    let outcome: std::result::Result<(), Exhausted> = (|| {
        while iterations < cfg.max_iterations {
            iterations += 1;
            let x_start = x.clone();
            let f_start = fx;
            let mut biggest = 0.0;
            let mut biggest_idx = 0;
            for (i, d) in dirs.iter_mut().enumerate() {
                let before = fx;
                line_minimize(&mut tr, &mut x, &mut fx, d, cfg)?;
                if before - fx > biggest {
                    biggest = before - fx;
                    biggest_idx = i;
                }
            }
            if 2.0 * (f_start - fx) <= cfg.f_tolerance * (f_start.abs() + fx.abs()) + 1e-20 {
                converged = true;
                return Ok(());
            }
            let mut net: Vec<f64> = x.iter().zip(&x_start).map(|(a, b)| a - b).collect();
            let extrapolated: Vec<f64> = x.iter().zip(&net).map(|(a, d)| a + d).collect();
            let f_ext = tr.eval(&extrapolated)?;
            if f_ext < f_start {
                let t = 2.0 * (f_start - 2.0 * fx + f_ext) * (f_start - fx - biggest).powi(2)
                    - biggest * (f_start - f_ext).powi(2);
                if t < 0.0 {
                    line_minimize(&mut tr, &mut x, &mut fx, &mut net, cfg)?;
                    if net.iter().any(|&v| v != 0.0) {
                        dirs.swap(biggest_idx, dim - 1);
                        dirs[dim - 1] = net;
                    }
                }
            }
        }
        Ok(())
    })();
    let _ = outcome;

    Ok(OptimizationResult {
        best_parameters: tr.best_x,
        best_value: tr.best_f,
        evaluations: tr.evaluations,
        iterations,
        converged,
    })
}

/// Minimizes along `dir` from `x`, moving `x` to the line minimum when it
/// improves on `fx`. On return `dir` is scaled by the accepted step.
fn line_minimize<F: FnMut(&[f64]) -> f64>(
    tr: &mut Tracker<F>,
    x: &mut [f64],
    fx: &mut f64,
    dir: &mut [f64],
    cfg: &OptimizerConfig,
) -> std::result::Result<(), Exhausted> {
    let mut buf = vec![0.0; x.len()];
    let origin = x.to_vec();
    let mut g = |t: f64| -> std::result::Result<f64, Exhausted> {
        if t == 0.0 {
            return Ok(*fx);
        }
        tr.along(&origin, dir, t, &mut buf)
    };
    let (a, b, c, fb) = bracket(&mut g, *fx, cfg.bracket_limit)?;
    let (t, ft) = brent(&mut g, a, b, c, fb, cfg.x_tolerance)?;
    if ft < *fx {
        for ((xi, o), d) in x.iter_mut().zip(&origin).zip(dir.iter_mut()) {
            *d *= t;
            *xi = o + *d;
        }
        *fx = ft;
    }
    Ok(())
}

/// Finds `a, b, c` with `g(b) <= g(a), g(c)` starting from `[0, 1]`.
fn bracket<G>(g: &mut G, f0: f64, limit: f64) -> std::result::Result<(f64, f64, f64, f64), Exhausted>
where
    G: FnMut(f64) -> std::result::Result<f64, Exhausted>,
{
    let (mut a, mut fa) = (0.0, f0);
    let (mut b, mut fb) = (1.0, g(1.0)?);
    if fb > fa {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = b + GOLDEN * (b - a);
    let mut fc = g(c)?;
    let mut steps = 0;
    while fb > fc && steps < BRACKET_MAX_ITER {
        steps += 1;
        let r = (b - a) * (fb - fc);
        let q = (b - c) * (fb - fa);
        let denom = 2.0 * (q - r).abs().max(TINY).copysign(q - r);
        let mut u = b - ((b - c) * q - (b - a) * r) / denom;
        let ulim = b + limit * (c - b);
        let mut fu;
        if (b - u) * (u - c) > 0.0 {
            fu = g(u)?;
            if fu < fc {
                return Ok((b, u, c, fu));
            } else if fu > fb {
                return Ok((a, b, u, fb));
            }
            u = c + GOLDEN * (c - b);
            fu = g(u)?;
        } else if (c - u) * (u - ulim) > 0.0 {
            fu = g(u)?;
            if fu < fc {
                b = c;
                c = u;
                u = c + GOLDEN * (c - b);
                fb = fc;
                fc = fu;
                fu = g(u)?;
            }
        } else if (u - ulim) * (ulim - c) >= 0.0 {
            u = ulim;
            fu = g(u)?;
        } else {
            u = c + GOLDEN * (c - b);
            fu = g(u)?;
        }
        a = b;
        b = c;
        c = u;
        fa = fb;
        fb = fc;
        fc = fu;
    }
    let _ = fa;
    Ok((a, b, c, fb))
}

/// Brent's method on the bracket `(a, b, c)`; returns the best abscissa seen.
fn brent<G>(g: &mut G, ax: f64, bx: f64, cx: f64, fbx: f64, tol: f64) -> std::result::Result<(f64, f64), Exhausted>
where
    G: FnMut(f64) -> std::result::Result<f64, Exhausted>,
{
    let (mut a, mut b) = if ax < cx { (ax, cx) } else { (cx, ax) };
    let (mut x, mut w, mut v) = (bx, bx, bx);
    let (mut fx, mut fw, mut fv) = (fbx, fbx, fbx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;
    for _ in 0..BRENT_MAX_ITER {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs() + ZEPS;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let etemp = e;
            e = d;
            if p.abs() >= (0.5 * q * etemp).abs() || p <= q * (a - x) || p >= q * (b - x) {
                e = if x >= xm { a - x } else { b - x };
                d = CGOLD * e;
            } else {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
            }
        } else {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            w = x;
            x = u;
            fv = fw;
            fw = fx;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                w = u;
                fv = fw;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Ok((x, fx))
}
