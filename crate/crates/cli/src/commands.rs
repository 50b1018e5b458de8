use std::cmp::Ordering;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use qaoa_core::adapt::run_adapt_qaoa;
use qaoa_core::classical::{
    branch_and_bound_min, brute_force_min, ExactSolution, SolveMethod, BRUTE_FORCE_MAX_N,
};
use qaoa_core::hardware::{estimate_resources, ResourceEstimate};
use qaoa_core::problem::FeatureSelectionInstance;
use qaoa_core::qaoa::{run_standard_qaoa, Algorithm, LayerCsvRow, QaoaRunRecord};
use qaoa_core::sim::MAX_QUBITS;

use crate::config::{Config, Source};
use crate::failure::Failure;
use crate::output::{stats, write_atomic, write_csv};

pub const LAYERS_CSV: &str = "layers.csv";
pub const SUMMARY_CSV: &str = "summary.csv";
pub const ESTIMATES_CSV: &str = "estimates.csv";
pub const ESTIMATE_SUMMARY_CSV: &str = "estimate_summary.csv";

#[derive(Debug, Clone, Copy)]
struct Cell {
    n: usize,
    alpha: f64,
    seed: u64,
}

impl Cell {
    fn cmp(&self, o: &Cell) -> Ordering {
        self.n
            .cmp(&o.n)
            .then(self.alpha.total_cmp(&o.alpha))
            .then(self.seed.cmp(&o.seed))
    }

    fn instance(&self, cfg: &Config) -> Result<FeatureSelectionInstance, Failure> {
        Ok(FeatureSelectionInstance::generate(
            self.n,
            self.alpha,
            self.seed,
            cfg.instance.distribution,
        )?)
    }

    fn key(&self) -> String {
        format!("n{}-a{}-s{}", self.n, self.alpha, self.seed)
    }
}

fn cells(cfg: &Config) -> Vec<Cell> {
    let e = &cfg.experiment;
    let mut out = Vec::new();
    for &n in &e.sizes {
        for &alpha in &e.alphas {
            for &seed in &e.seeds {
                out.push(Cell { n, alpha, seed });
            }
        }
    }
    out.sort_by(Cell::cmp);
    out.dedup_by(|a, b| a.cmp(b) == Ordering::Equal);
    out
}

/// Surfaces the first failure in cell order, so errors do not depend on
/// thread scheduling.
fn first_failure<T>(results: Vec<Result<T, Failure>>) -> Result<Vec<T>, Failure> {
    results.into_iter().collect()
}

#[derive(Debug, Serialize)]
struct LayerSummary {
    n: usize,
    alpha: f64,
    algorithm: Algorithm,
    layer: usize,
    runs: usize,
    ratio_mean: f64,
    ratio_min: f64,
    ratio_max: f64,
    cost_mean: f64,
    seconds_mean: f64,
}

fn summarize_layers(rows: &[LayerCsvRow]) -> Vec<LayerSummary> {
    let mut sorted: Vec<&LayerCsvRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        a.n.cmp(&b.n)
            .then(a.alpha.total_cmp(&b.alpha))
            .then(a.algorithm.cmp(&b.algorithm))
            .then(a.layer.cmp(&b.layer))
    });
    sorted
        .chunk_by(|a, b| a.n == b.n && a.alpha == b.alpha && a.algorithm == b.algorithm && a.layer == b.layer)
        .map(|g| {
            let (ratio_mean, ratio_min, ratio_max) = stats(g.iter().map(|r| r.ratio));
            LayerSummary {
                n: g[0].n,
                alpha: g[0].alpha,
                algorithm: g[0].algorithm,
                layer: g[0].layer,
                runs: g.len(),
                ratio_mean,
                ratio_min,
                ratio_max,
                cost_mean: stats(g.iter().map(|r| r.cost)).0,
                seconds_mean: stats(g.iter().map(|r| r.seconds)).0,
            }
        })
        .collect()
}

/// Runs every (size, alpha, seed, algorithm) cell and writes per-run JSON
/// plus the layer and summary CSVs. Returns the written CSV paths.
pub fn solve(cfg: &Config, src: &Source, out_dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    if let Some(&n) = cfg.experiment.sizes.iter().find(|&&n| n > MAX_QUBITS) {
        return Err(src.error(
            "experiment",
            "sizes",
            format!("size {n} exceeds the simulator limit of {MAX_QUBITS} qubits"),
        ));
    }
    let run_cfg = cfg.run_config();
    let layers = cfg.experiment.layers;
    let algorithms = cfg.experiment.algorithm.algorithms();
    let jobs: Vec<(Cell, Algorithm)> = cells(cfg)
        .into_iter()
        .flat_map(|c| algorithms.iter().map(move |&a| (c, a)))
        .collect();
    let runs_dir = out_dir.join("runs");

    let results: Vec<Result<QaoaRunRecord, Failure>> = jobs
        .par_iter()
        .map(|&(cell, algorithm)| {
            let key = format!("{algorithm}-{}", cell.key());
            let inst = cell.instance(cfg)?;
            let rec = match algorithm {
                Algorithm::Standard => run_standard_qaoa(&inst, layers, &run_cfg, cell.seed),
                Algorithm::Adapt => run_adapt_qaoa(&inst, layers, &run_cfg, cell.seed),
            }
            .map_err(|e| Failure::from(e).context(&key))?;
            write_atomic(&runs_dir.join(format!("{key}.json")), rec.to_json()?.as_bytes())?;
            eprintln!("{key}: ratio {:.6} after {} layers", rec.final_ratio().unwrap_or(f64::NAN), rec.depth());
            Ok(rec)
        })
        .collect();
    let records = first_failure(results)?;

    let rows: Vec<LayerCsvRow> = records.iter().flat_map(QaoaRunRecord::csv_rows).collect();
    let layers_path = out_dir.join(LAYERS_CSV);
    let summary_path = out_dir.join(SUMMARY_CSV);
    write_csv(&layers_path, &rows)?;
    write_csv(&summary_path, &summarize_layers(&rows))?;
    Ok(vec![layers_path, summary_path])
}

#[derive(Debug, Serialize)]
struct EstimateSummary {
    device: String,
    topology: String,
    n: usize,
    alpha: f64,
    runs: usize,
    swaps_mean: f64,
    t_total_s_mean: f64,
    t_total_s_min: f64,
    t_total_s_max: f64,
    e_tot_mean: f64,
    e_tot_min: f64,
    e_tot_max: f64,
}

fn summarize_estimates(rows: &[ResourceEstimate]) -> Vec<EstimateSummary> {
    rows.chunk_by(|a, b| a.device == b.device && a.n == b.n && a.alpha == b.alpha)
        .map(|g| {
            let t = stats(g.iter().map(|r| r.t_total_s));
            let e = stats(g.iter().map(|r| r.e_tot));
            EstimateSummary {
                device: g[0].device.clone(),
                topology: g[0].topology.clone(),
                n: g[0].n,
                alpha: g[0].alpha,
                runs: g.len(),
                swaps_mean: stats(g.iter().map(|r| r.swaps as f64)).0,
                t_total_s_mean: t.0,
                t_total_s_min: t.1,
                t_total_s_max: t.2,
                e_tot_mean: e.0,
                e_tot_min: e.1,
                e_tot_max: e.2,
            }
        })
        .collect()
}

/// Hardware estimates for every (device, size, alpha, seed) cell, rows
/// grouped by device in configured order.
pub fn estimate(cfg: &Config, src: &Source, out_dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let devices = cfg.devices(src)?;
    let opts = cfg.estimate.options();
    let jobs: Vec<(usize, Cell)> = (0..devices.len())
        .flat_map(|d| cells(cfg).into_iter().map(move |c| (d, c)))
        .collect();
    let results: Vec<Result<ResourceEstimate, Failure>> = jobs
        .par_iter()
        .map(|&(d, cell)| {
            let inst = cell.instance(cfg)?;
            estimate_resources(&inst, &devices[d], &opts)
                .map_err(|e| Failure::from(e).context(format!("{} {}", devices[d].name, cell.key())))
        })
        .collect();
    let rows = first_failure(results)?;
    let est_path = out_dir.join(ESTIMATES_CSV);
    let summary_path = out_dir.join(ESTIMATE_SUMMARY_CSV);
    write_csv(&est_path, &rows)?;
    write_csv(&summary_path, &summarize_estimates(&rows))?;
    Ok(vec![est_path, summary_path])
}

#[derive(Debug, Serialize)]
pub struct MethodReport {
    pub value: f64,
    pub minimizer: String,
    pub nodes: u64,
    pub gap: f64,
}

impl From<&ExactSolution> for MethodReport {
    fn from(s: &ExactSolution) -> Self {
        Self {
            value: s.value,
            minimizer: s.minimizer.to_string(),
            nodes: s.nodes,
            gap: s.gap_at_termination,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct OracleReport {
    pub n: usize,
    pub alpha: f64,
    pub seed: u64,
    pub c_exact: f64,
    pub minimizer: String,
    pub selected: Vec<usize>,
    pub method: SolveMethod,
    pub brute_force: MethodReport,
    pub branch_and_bound: MethodReport,
}

/// Classical optimum of an instance file by every applicable method.
pub fn oracle(instance: &Path, gap: f64) -> Result<OracleReport, Failure> {
    if !(gap.is_finite() && gap >= 0.0) {
        return Err(Failure::validation(format!("gap {gap} must be a nonnegative number")));
    }
    let text = std::fs::read_to_string(instance).map_err(|e| Failure::from(e).context(instance.display()))?;
    let inst = FeatureSelectionInstance::from_json(&text).map_err(|e| Failure::from(e).context(instance.display()))?;
    let n = inst.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Failure::validation(format!(
            "{}: size {n} exceeds the oracle limit of {BRUTE_FORCE_MAX_N}",
            instance.display()
        )));
    }
    let bf = brute_force_min(&inst)?;
    let bb = branch_and_bound_min(&inst, gap)?;
    Ok(OracleReport {
        n,
        alpha: inst.alpha(),
        seed: inst.seed,
        c_exact: bf.value,
        minimizer: bf.minimizer.to_string(),
        selected: bf.minimizer.selected(),
        method: bf.method,
        brute_force: MethodReport::from(&bf),
        branch_and_bound: MethodReport::from(&bb),
    })
}

/// Writes one instance file per sweep cell into `dir/instances`.
pub fn generate_sweep(cfg: &Config, dir: &Path) -> Result<Vec<PathBuf>, Failure> {
    let inst_dir = dir.join("instances");
    cells(cfg)
        .iter()
        .map(|c| {
            let path = inst_dir.join(format!("{}.json", c.key()));
            write_atomic(&path, c.instance(cfg)?.to_json()?.as_bytes())?;
            Ok(path)
        })
        .collect()
}
