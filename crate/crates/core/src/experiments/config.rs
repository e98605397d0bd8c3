use std::collections::BTreeMap;
use std::path::PathBuf;

use crate::coefficients::{
    gen_filtered_random, gen_periodic, gen_sparse_annulus, CoefficientField, DEFAULT_WATER_LEVEL,
};
use crate::error::{HomogError, Result};
use crate::grid::GridSpec;
use crate::homogenize2d::DEFAULT_QQ_CAP;
use crate::solvers::{CompareMode, DEFAULT_FD_TOLERANCE};

/// Seed of the reference random coefficients.
pub const REFERENCE_SEED: u64 = 42;

/// Largest admissible retained bandwidth, in percent of Nyquist: `|k| <= n/3`.
pub const MAX_BANDWIDTH_PCT: f64 = 200.0 / 3.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExperimentKind {
    Sweep1d,
    Sweep2d,
    Kernel,
    Panels2d,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::Sweep1d => "sweep1d",
            ExperimentKind::Sweep2d => "sweep2d",
            ExperimentKind::Kernel => "kernel",
            ExperimentKind::Panels2d => "panels2d",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sweep1d" => Ok(ExperimentKind::Sweep1d),
            "sweep2d" => Ok(ExperimentKind::Sweep2d),
            "kernel" => Ok(ExperimentKind::Kernel),
            "panels2d" => Ok(ExperimentKind::Panels2d),
            _ => Err(HomogError::Config(format!("unknown experiment kind {s:?}"))),
        }
    }

    pub fn is_2d(&self) -> bool {
        matches!(self, ExperimentKind::Sweep2d | ExperimentKind::Panels2d)
    }
}

/// Coefficient family and its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum GeneratorSpec {
    Constant { value: f64 },
    Periodic { low: f64, high: f64, period: usize },
    FilteredRandom { seed: u64, water_level: f64 },
    SparseAnnulus { seed: u64, k_min: usize, k_max: usize, amplitude: f64, water_level: f64 },
}

impl GeneratorSpec {
    pub fn reference() -> Self {
        GeneratorSpec::FilteredRandom {
            seed: REFERENCE_SEED,
            water_level: DEFAULT_WATER_LEVEL,
        }
    }

    /// The annulus used for the sparse-spectrum sweep.
    pub fn reference_annulus() -> Self {
        GeneratorSpec::SparseAnnulus {
            seed: REFERENCE_SEED,
            k_min: 8,
            k_max: 12,
            amplitude: 0.05,
            water_level: 0.5,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GeneratorSpec::Constant { .. } => "constant",
            GeneratorSpec::Periodic { .. } => "periodic",
            GeneratorSpec::FilteredRandom { .. } => "filtered_random",
            GeneratorSpec::SparseAnnulus { .. } => "sparse_annulus",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            GeneratorSpec::FilteredRandom { seed, .. } | GeneratorSpec::SparseAnnulus { seed, .. } => {
                Some(*seed)
            }
            _ => None,
        }
    }

    pub fn set_seed(&mut self, s: u64) -> Result<()> {
        match self {
            GeneratorSpec::FilteredRandom { seed, .. } | GeneratorSpec::SparseAnnulus { seed, .. } => {
                *seed = s;
                Ok(())
            }
            _ => Err(HomogError::Config(format!("generator {} takes no seed", self.name()))),
        }
    }

    pub fn generate(&self, grid: GridSpec) -> Result<CoefficientField> {
        match *self {
            GeneratorSpec::Constant { value } => CoefficientField::constant(grid, value),
            GeneratorSpec::Periodic { low, high, period } => gen_periodic(grid, low, high, period),
            GeneratorSpec::FilteredRandom { seed, water_level } => {
                gen_filtered_random(grid, seed, water_level)
            }
            GeneratorSpec::SparseAnnulus { seed, k_min, k_max, amplitude, water_level } => {
                gen_sparse_annulus(grid, seed, k_min, k_max, amplitude, water_level)
            }
        }
    }

    fn keys(name: &str) -> Option<&'static [&'static str]> {
        Some(match name {
            "constant" => &["value"],
            "periodic" => &["low", "high", "period"],
            "filtered_random" => &["seed", "water_level"],
            "sparse_annulus" => &["seed", "k_min", "k_max", "amplitude", "water_level"],
            _ => return None,
        })
    }

    fn from_entries(name: &str, kv: &mut BTreeMap<String, String>) -> Result<Self> {
        let allowed = Self::keys(name)
            .ok_or_else(|| HomogError::Config(format!("unknown generator {name:?}")))?;
        for key in GENERATOR_KEYS {
            if kv.contains_key(*key) && !allowed.contains(key) {
                return Err(HomogError::Config(format!(
                    "key {key:?} does not apply to generator {name}"
                )));
            }
        }
        Ok(match name {
            "constant" => GeneratorSpec::Constant { value: take(kv, "value")?.unwrap_or(1.0) },
            "periodic" => GeneratorSpec::Periodic {
                low: take(kv, "low")?.unwrap_or(1.0),
                high: take(kv, "high")?.unwrap_or(4.0),
                period: take(kv, "period")?.unwrap_or(8),
            },
            "filtered_random" => GeneratorSpec::FilteredRandom {
                seed: take(kv, "seed")?.unwrap_or(REFERENCE_SEED),
                water_level: take(kv, "water_level")?.unwrap_or(DEFAULT_WATER_LEVEL),
            },
            _ => {
                let GeneratorSpec::SparseAnnulus { k_min, k_max, amplitude, water_level, .. } =
                    Self::reference_annulus()
                else {
                    unreachable!()
                };
                GeneratorSpec::SparseAnnulus {
                    seed: take(kv, "seed")?.unwrap_or(REFERENCE_SEED),
                    k_min: take(kv, "k_min")?.unwrap_or(k_min),
                    k_max: take(kv, "k_max")?.unwrap_or(k_max),
                    amplitude: take(kv, "amplitude")?.unwrap_or(amplitude),
                    water_level: take(kv, "water_level")?.unwrap_or(water_level),
                }
            }
        })
    }
}

const GENERATOR_KEYS: &[&str] =
    &["value", "low", "high", "period", "seed", "water_level", "k_min", "k_max", "amplitude"];

const RUN_KEYS: &[&str] = &[
    "kind", "nx", "ny", "generator", "schedule", "bandwidth", "tol", "compare", "qq_cap",
    "full_band", "out",
];

/// Everything needed to reproduce one experiment run.
///
/// The file format is flat `key = value` text, one entry per line, `#` starts
/// a comment. Keys:
///
/// | key | meaning |
/// |---|---|
/// | `kind` | `sweep1d`, `sweep2d`, `kernel` or `panels2d`; must match the subcommand |
/// | `nx`, `ny` | grid size; `ny` only for 2D kinds |
/// | `generator` | `constant`, `periodic`, `filtered_random`, `sparse_annulus` |
/// | `value` | constant level |
/// | `low`, `high`, `period` | two-phase levels and period in cells |
/// | `seed`, `water_level` | random generators |
/// | `k_min`, `k_max`, `amplitude` | annulus radii and per-mode amplitude |
/// | `schedule` | comma-separated retained bandwidths, percent of Nyquist |
/// | `bandwidth` | single bandwidth for `panels2d` |
/// | `tol` | finite-difference residual tolerance |
/// | `compare` | `full` or `coarse` (1D sweeps) |
/// | `qq_cap` | largest dense fine block in 2D |
/// | `full_band` | `kernel` only: also export the full-retention kernel |
/// | `out` | output directory |
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub nx: usize,
    pub ny: usize,
    pub generator: GeneratorSpec,
    pub schedule: Vec<f64>,
    pub bandwidth: f64,
    pub tol: f64,
    pub compare: CompareMode,
    pub qq_cap: usize,
    pub full_band: bool,
    pub out: Option<PathBuf>,
}

fn percent_range(step: usize) -> Vec<f64> {
    (0..=60).step_by(step).map(|p| p as f64).collect()
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        let (nx, ny, schedule) = match kind {
            ExperimentKind::Sweep1d => (256, 1, percent_range(5)),
            ExperimentKind::Kernel => (128, 1, percent_range(5)),
            ExperimentKind::Sweep2d | ExperimentKind::Panels2d => (64, 64, percent_range(10)),
        };
        Self {
            kind,
            nx,
            ny,
            generator: GeneratorSpec::reference(),
            schedule,
            bandwidth: 20.0,
            tol: DEFAULT_FD_TOLERANCE,
            compare: CompareMode::Full,
            qq_cap: DEFAULT_QQ_CAP,
            full_band: kind == ExperimentKind::Kernel,
            out: None,
        }
    }

    /// Parses a config file on top of the defaults for `kind`.
    pub fn parse(kind: ExperimentKind, text: &str) -> Result<Self> {
        let mut kv = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                HomogError::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if !RUN_KEYS.contains(&k.as_str()) && !GENERATOR_KEYS.contains(&k.as_str()) {
                return Err(HomogError::Config(format!("line {}: unknown key {k:?}", lineno + 1)));
            }
            if kv.insert(k.clone(), v).is_some() {
                return Err(HomogError::Config(format!("line {}: duplicate key {k:?}", lineno + 1)));
            }
        }

        let mut cfg = Self::defaults(kind);
        if let Some(k) = kv.remove("kind") {
            if ExperimentKind::parse(&k)? != kind {
                return Err(HomogError::Config(format!(
                    "config is for {k}, not {}",
                    kind.name()
                )));
            }
        }
        if let Some(nx) = take(&mut kv, "nx")? {
            cfg.nx = nx;
            if !kind.is_2d() {
                cfg.ny = 1;
            }
        }
        if let Some(ny) = take::<usize>(&mut kv, "ny")? {
            if !kind.is_2d() && ny != 1 {
                return Err(HomogError::Config(format!("{} is one-dimensional", kind.name())));
            }
            cfg.ny = ny;
        }
        let name = kv.remove("generator").unwrap_or_else(|| cfg.generator.name().to_string());
        cfg.generator = GeneratorSpec::from_entries(&name, &mut kv)?;
        if let Some(s) = kv.remove("schedule") {
            cfg.schedule = parse_schedule(&s)?;
        }
        if let Some(b) = take(&mut kv, "bandwidth")? {
            cfg.bandwidth = b;
        }
        if let Some(t) = take(&mut kv, "tol")? {
            cfg.tol = t;
        }
        if let Some(c) = kv.remove("compare") {
            cfg.compare = CompareMode::parse(&c).map_err(|e| HomogError::Config(e.to_string()))?;
        }
        if let Some(c) = take(&mut kv, "qq_cap")? {
            cfg.qq_cap = c;
        }
        if let Some(f) = take(&mut kv, "full_band")? {
            cfg.full_band = f;
        }
        if let Some(o) = kv.remove("out") {
            cfg.out = Some(PathBuf::from(o));
        }
        debug_assert!(kv.is_empty(), "unconsumed keys {kv:?}");
        cfg.validate()?;
        Ok(cfg)
    }

    /// Serializes to the config file format; `parse` reads it back.
    pub fn to_text(&self) -> String {
        let mut lines = vec![
            format!("kind = {}", self.kind.name()),
            format!("nx = {}", self.nx),
        ];
        if self.kind.is_2d() {
            lines.push(format!("ny = {}", self.ny));
        }
        lines.push(format!("generator = {}", self.generator.name()));
        match &self.generator {
            GeneratorSpec::Constant { value } => lines.push(format!("value = {value}")),
            GeneratorSpec::Periodic { low, high, period } => {
                lines.push(format!("low = {low}"));
                lines.push(format!("high = {high}"));
                lines.push(format!("period = {period}"));
            }
            GeneratorSpec::FilteredRandom { seed, water_level } => {
                lines.push(format!("seed = {seed}"));
                lines.push(format!("water_level = {water_level}"));
            }
            GeneratorSpec::SparseAnnulus { seed, k_min, k_max, amplitude, water_level } => {
                lines.push(format!("seed = {seed}"));
                lines.push(format!("k_min = {k_min}"));
                lines.push(format!("k_max = {k_max}"));
                lines.push(format!("amplitude = {amplitude}"));
                lines.push(format!("water_level = {water_level}"));
            }
        }
        let sched: Vec<String> = self.schedule.iter().map(|p| p.to_string()).collect();
        lines.push(format!("schedule = {}", sched.join(", ")));
        lines.push(format!("bandwidth = {}", self.bandwidth));
        lines.push(format!("tol = {:e}", self.tol));
        lines.push(format!("compare = {}", self.compare.name()));
        lines.push(format!("qq_cap = {}", self.qq_cap));
        lines.push(format!("full_band = {}", self.full_band));
        if let Some(o) = &self.out {
            lines.push(format!("out = {}", o.display()));
        }
        lines.join("\n") + "\n"
    }

    pub fn grid(&self) -> Result<GridSpec> {
        if self.kind.is_2d() {
            GridSpec::new_2d(self.nx, self.ny)
        } else {
            GridSpec::new_1d(self.nx)
        }
    }

    /// Checks grid, schedule legality and solver settings.
    pub fn validate(&self) -> Result<()> {
        let as_config = |e: HomogError| HomogError::Config(e.to_string());
        self.grid().map_err(as_config)?;
        if self.schedule.is_empty() && self.kind != ExperimentKind::Panels2d {
            return Err(HomogError::Config("empty bandwidth schedule".into()));
        }
        let points: Vec<f64> = if self.kind == ExperimentKind::Panels2d {
            vec![self.bandwidth]
        } else {
            self.schedule.clone()
        };
        for p in points {
            check_bandwidth(p)?;
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(HomogError::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.compare == CompareMode::Coarse && self.kind != ExperimentKind::Sweep1d {
            return Err(HomogError::Config("compare = coarse is only available for sweep1d".into()));
        }
        Ok(())
    }

    /// Per-axis cutoffs for a retained bandwidth percentage.
    pub fn cutoffs(&self, pct: f64) -> Result<(usize, usize)> {
        check_bandwidth(pct)?;
        Ok((cutoff_for(pct, self.nx), cutoff_for(pct, self.ny)))
    }
}

fn check_bandwidth(p: f64) -> Result<()> {
    if !p.is_finite() || p < 0.0 || p > MAX_BANDWIDTH_PCT {
        return Err(HomogError::Config(format!(
            "bandwidth {p}% outside [0, {MAX_BANDWIDTH_PCT:.4}]% (two-thirds rule)"
        )));
    }
    Ok(())
}

/// `floor(pct / 100 * n / 2)`.
pub fn cutoff_for(pct: f64, n: usize) -> usize {
    (pct / 100.0 * (n / 2) as f64 + 1e-9).floor() as usize
}

pub fn parse_schedule(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| HomogError::Config(format!("bad schedule entry {t:?}")))
        })
        .collect()
}

fn take<T: std::str::FromStr>(kv: &mut BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
    match kv.remove(key) {
        None => Ok(None),
        Some(v) => v
            .parse()
            .map(Some)
            .map_err(|_| HomogError::Config(format!("bad value {v:?} for key {key:?}"))),
    }
}
