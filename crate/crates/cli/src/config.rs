//! TOML experiment configuration.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use qaoa_core::adapt::DEFAULT_GAMMA0;
use qaoa_core::hardware::{builtin_device, DeviceProfile, EstimateOptions};
use qaoa_core::optimizer::OptimizerConfig;
use qaoa_core::problem::EntryDistribution;
use qaoa_core::qaoa::{Algorithm, EvalMode, GradientMode, RunConfig, DEFAULT_SHOTS};

use crate::failure::Failure;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub experiment: Experiment,
    pub optimizer: OptimizerConfig,
    pub adapt: Adapt,
    pub instance: InstanceSection,
    pub estimate: Estimate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmChoice {
    Standard,
    Adapt,
    Both,
}

impl AlgorithmChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgorithmChoice::Standard => vec![Algorithm::Standard],
            AlgorithmChoice::Adapt => vec![Algorithm::Adapt],
            AlgorithmChoice::Both => vec![Algorithm::Standard, Algorithm::Adapt],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeChoice {
    Exact,
    Shots,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Experiment {
    pub sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub algorithm: AlgorithmChoice,
    pub layers: usize,
    pub mode: ModeChoice,
    pub shots: u64,
    /// Wall-clock columns; switch off for byte-identical reruns.
    pub timing: bool,
}

impl Default for Experiment {
    fn default() -> Self {
        Self {
            sizes: vec![6, 10, 14],
            alphas: vec![0.2, 0.6],
            seeds: (1..=10).collect(),
            algorithm: AlgorithmChoice::Both,
            layers: 30,
            mode: ModeChoice::Shots,
            shots: DEFAULT_SHOTS,
            timing: true,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Adapt {
    pub gamma0: f64,
    pub gradient: GradientMode,
}

impl Default for Adapt {
    fn default() -> Self {
        Self {
            gamma0: DEFAULT_GAMMA0,
            gradient: GradientMode::Exact,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InstanceSection {
    pub distribution: EntryDistribution,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Estimate {
    /// Built-in device names.
    pub devices: Vec<String>,
    /// JSON device profiles, relative to the config file.
    pub device_files: Vec<PathBuf>,
    pub layers: usize,
    pub iterations: u64,
    pub shots: u64,
    pub error_layers: usize,
    pub swap_two_qubit_gates: u64,
}

impl Default for Estimate {
    fn default() -> Self {
        let o = EstimateOptions::default();
        Self {
            devices: qaoa_core::hardware::builtin_device_profiles()
                .into_iter()
                .map(|d| d.name)
                .collect(),
            device_files: Vec::new(),
            layers: o.layers,
            iterations: o.iterations,
            shots: o.shots,
            error_layers: o.error_layers,
            swap_two_qubit_gates: o.swap_two_qubit_gates,
        }
    }
}

impl Estimate {
    pub fn options(&self) -> EstimateOptions {
        EstimateOptions {
            layers: self.layers,
            iterations: self.iterations,
            shots: self.shots,
            error_layers: self.error_layers,
            swap_two_qubit_gates: self.swap_two_qubit_gates,
        }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seeds: Option<Vec<u64>>,
    pub mode: Option<(ModeChoice, Option<u64>)>,
    pub layers: Option<usize>,
    pub devices: Vec<String>,
}

impl Config {
    /// Reads and validates `path`; `None` gives the defaults.
    pub fn load(path: Option<&Path>) -> Result<(Self, Source), Failure> {
        let Some(path) = path else {
            return Ok((Self::default(), Source::default()));
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::validation(format!("cannot read {}: {e}", path.display())))?;
        let source = Source {
            path: Some(path.to_path_buf()),
            text,
        };
        let cfg = Self::parse(&source)?;
        Ok((cfg, source))
    }

    pub fn parse(source: &Source) -> Result<Self, Failure> {
        let cfg: Config = toml::from_str(&source.text)
            .map_err(|e| Failure::validation(format!("{}: {e}", source.name())))?;
        cfg.validate(source)?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(seeds) = &o.seeds {
            self.experiment.seeds = seeds.clone();
        }
        if let Some((mode, shots)) = o.mode {
            self.experiment.mode = mode;
            if let Some(s) = shots {
                self.experiment.shots = s;
            }
        }
        if let Some(l) = o.layers {
            self.experiment.layers = l;
            self.estimate.layers = l;
        }
        if !o.devices.is_empty() {
            self.estimate.devices.clear();
            self.estimate.device_files.clear();
            for d in &o.devices {
                if builtin_device(d).is_some() {
                    self.estimate.devices.push(d.clone());
                } else {
                    self.estimate.device_files.push(PathBuf::from(d));
                }
            }
        }
    }

    pub fn validate(&self, src: &Source) -> Result<(), Failure> {
        let e = &self.experiment;
        let fail = |section: &str, key: &str, msg: String| Err(src.error(section, key, msg));
        if e.sizes.is_empty() {
            return fail("experiment", "sizes", "must list at least one size".into());
        }
        if e.sizes.contains(&0) {
            return fail("experiment", "sizes", "sizes must be at least 1".into());
        }
        if e.alphas.is_empty() {
            return fail("experiment", "alphas", "must list at least one value".into());
        }
        if let Some(a) = e.alphas.iter().find(|a| !(0.0..=1.0).contains(*a)) {
            return fail("experiment", "alphas", format!("alpha {a} outside [0, 1]"));
        }
        if e.seeds.is_empty() {
            return fail("experiment", "seeds", "must list at least one seed".into());
        }
        if e.layers == 0 {
            return fail("experiment", "layers", "must be at least 1".into());
        }
        if e.shots == 0 {
            return fail("experiment", "shots", "must be at least 1".into());
        }
        if let Err(err) = self.optimizer.validate() {
            return fail("optimizer", "", err.to_string());
        }
        if !(self.adapt.gamma0.is_finite() && self.adapt.gamma0 > 0.0) {
            return fail("adapt", "gamma0", format!("{} must be positive", self.adapt.gamma0));
        }
        let (low, high) = self.instance.distribution.support();
        if !(low.is_finite() && high.is_finite() && low < high) {
            return fail("instance", "distribution", format!("empty support [{low}, {high})"));
        }
        if let Some(d) = self.estimate.devices.iter().find(|d| builtin_device(d).is_none()) {
            return fail("estimate", "devices", format!("unknown device {d:?}"));
        }
        if let Err(err) = self.estimate.options().validate() {
            return fail("estimate", "", err.to_string());
        }
        Ok(())
    }

    pub fn run_config(&self) -> RunConfig {
        let e = &self.experiment;
        RunConfig {
            mode: match e.mode {
                ModeChoice::Exact => EvalMode::Exact,
                ModeChoice::Shots => EvalMode::Shots { shots: e.shots },
            },
            optimizer: self.optimizer.clone(),
            gamma0: self.adapt.gamma0,
            gradient: self.adapt.gradient,
            record_timing: e.timing,
            c_exact: None,
        }
    }

    /// Built-in devices followed by file devices, in listed order.
    pub fn devices(&self, src: &Source) -> Result<Vec<DeviceProfile>, Failure> {
        let mut out: Vec<DeviceProfile> = self
            .estimate
            .devices
            .iter()
            .map(|d| builtin_device(d).ok_or_else(|| src.error("estimate", "devices", format!("unknown device {d:?}"))))
            .collect::<Result<_, _>>()?;
        for f in &self.estimate.device_files {
            let path = src.resolve(f);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::validation(format!("cannot read device {}: {e}", path.display())))?;
            let dev = DeviceProfile::from_json(&text)
                .map_err(|e| Failure::validation(format!("{}: {e}", path.display())))?;
            out.push(dev);
        }
        if out.is_empty() {
            return Err(src.error("estimate", "devices", "no devices selected".into()));
        }
        Ok(out)
    }
}

/// Raw config text, kept to point validation errors at lines.
#[derive(Debug, Clone, Default)]
pub struct Source {
    pub path: Option<PathBuf>,
    pub text: String,
}

impl Source {
    fn name(&self) -> String {
        self.path
            .as_ref()
            .map_or_else(|| "config".to_string(), |p| p.display().to_string())
    }

    fn resolve(&self, p: &Path) -> PathBuf {
        match self.path.as_ref().and_then(|c| c.parent()) {
            Some(dir) if p.is_relative() && !p.exists() => dir.join(p),
            _ => p.to_path_buf(),
        }
    }

    /// 1-based line of `key` inside `[section]`, or of the header itself.
    fn line_of(&self, section: &str, key: &str) -> Option<usize> {
        let header = format!("[{section}]");
        let mut inside = false;
        let mut header_line = None;
        for (i, raw) in self.text.lines().enumerate() {
            let line = raw.trim();
            if line.starts_with('[') {
                inside = line == header;
                if inside {
                    header_line = Some(i + 1);
                }
                continue;
            }
            let matches_key = line
                .strip_prefix(key)
                .is_some_and(|rest| rest.trim_start().starts_with('='));
            if inside && !key.is_empty() && matches_key {
                return Some(i + 1);
            }
        }
        header_line
    }

    pub fn error(&self, section: &str, key: &str, msg: String) -> Failure {
        let field = if key.is_empty() {
            section.to_string()
        } else {
            format!("{section}.{key}")
        };
        match self.line_of(section, key) {
            Some(line) => Failure::validation(format!("{}:{line}: {field}: {msg}", self.name())),
            None => Failure::validation(format!("{}: {field}: {msg}", self.name())),
        }
    }
}

/// `1-10`, `3`, or comma-separated mixes such as `1,4-6`.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (u64, u64) = (
                    a.trim().parse().map_err(|_| format!("bad seed range {part:?}"))?,
                    b.trim().parse().map_err(|_| format!("bad seed range {part:?}"))?,
                );
                if a > b {
                    return Err(format!("empty seed range {part:?}"));
                }
                out.extend(a..=b);
            }
            None => out.push(part.parse().map_err(|_| format!("bad seed {part:?}"))?),
        }
    }
    if out.is_empty() {
        return Err("no seeds given".into());
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// `exact`, `shots` or `shots:N`.
pub fn parse_mode(s: &str) -> Result<(ModeChoice, Option<u64>), String> {
    match s.split_once(':') {
        None if s == "exact" => Ok((ModeChoice::Exact, None)),
        None if s == "shots" => Ok((ModeChoice::Shots, None)),
        Some(("shots", n)) => match n.parse::<u64>() {
            Ok(k) if k > 0 => Ok((ModeChoice::Shots, Some(k))),
            _ => Err(format!("bad shot count {n:?}")),
        },
        _ => Err(format!("unknown mode {s:?}; expected exact, shots or shots:N")),
    }
}
