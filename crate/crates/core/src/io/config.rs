//! Run configuration: flat `key = value` files with `#` comments, overridden
//! by command-line flags of the same names.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::Error;
use crate::flow::{resolve_density, FlowParams, RadialTable};
use crate::transforms::Epsilon;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Compare,
    Oracle,
    Validate,
    Conformality,
}

impl Mode {
    pub const ALL: [Mode; 5] = [Mode::Simulate, Mode::Compare, Mode::Oracle, Mode::Validate, Mode::Conformality];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Compare => "compare",
            Mode::Oracle => "oracle",
            Mode::Validate => "validate",
            Mode::Conformality => "conformality",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Mode::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode '{s}' (expected simulate, compare, oracle, validate or conformality)"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    /// Shape file path or generator spec.
    pub shape: Option<String>,
    pub out: PathBuf,
    pub seed: u64,
    pub auto_orient: bool,
    pub flow: String,
    pub density: String,
    pub density_table: Option<PathBuf>,
    pub epsilon: Epsilon,
    pub mu: f64,
    pub cfl: f64,
    pub max_dt: f64,
    pub max_time: f64,
    pub max_steps: usize,
    pub resample_every: usize,
    pub guard: f64,
    pub shrink_diameter_tol: f64,
    pub roundness_tol: f64,
    pub fixed_point_tol: f64,
    pub fixed_point_steps: usize,
    pub snapshot_every: usize,
    pub diagnostics_every: usize,
    /// Validation case (`a`, `a1`, `a2`, `bi`, `bii`, `biii`).
    pub case: Option<String>,
    pub p0: Option<Vec<f64>>,
    pub tol: f64,
    /// Checkpoints: rescaled times for `compare`, flow times for `validate`.
    pub checkpoints: Vec<f64>,
    /// Number of cfl halvings in `compare`.
    pub refinements: usize,
    /// Oracle sphere radius and dimension.
    pub rho0: f64,
    pub n: usize,
    /// Rows in `oracle` and `conformality` tables.
    pub samples: usize,
    pub r_max: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Simulate,
            shape: None,
            out: PathBuf::from("out"),
            seed: 0,
            auto_orient: false,
            flow: "density".into(),
            density: "gaussian".into(),
            density_table: None,
            epsilon: Epsilon::Plus,
            mu: 1.0,
            cfl: 0.25,
            max_dt: 1e-2,
            max_time: 10.0,
            max_steps: 10_000_000,
            resample_every: 0,
            guard: 1e-3,
            shrink_diameter_tol: 1e-2,
            roundness_tol: 0.05,
            fixed_point_tol: 1e-9,
            fixed_point_steps: 10,
            snapshot_every: 100,
            diagnostics_every: 20,
            case: None,
            p0: None,
            tol: 0.02,
            checkpoints: Vec::new(),
            refinements: 1,
            rho0: 1.0,
            n: 1,
            samples: 20,
            r_max: 2.0,
        }
    }
}

fn positive(v: &str) -> Result<f64, String> {
    match v.parse::<f64>() {
        Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("expected a positive number, got '{v}'")),
    }
}

fn count(v: &str) -> Result<usize, String> {
    v.parse::<usize>().map_err(|_| format!("expected a non-negative integer, got '{v}'"))
}

fn list(v: &str) -> Result<Vec<f64>, String> {
    v.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| format!("expected a comma-separated list of numbers, got '{v}'"))
        })
        .collect()
}

impl RunConfig {
    pub const KEYS: &'static [&'static str] = &[
        "mode",
        "shape",
        "out",
        "seed",
        "auto_orient",
        "flow",
        "density",
        "density_table",
        "epsilon",
        "mu",
        "cfl",
        "max_dt",
        "max_time",
        "max_steps",
        "resample_every",
        "guard",
        "shrink_diameter_tol",
        "roundness_tol",
        "fixed_point_tol",
        "fixed_point_steps",
        "snapshot_every",
        "diagnostics_every",
        "case",
        "p0",
        "tol",
        "checkpoints",
        "refinements",
        "rho0",
        "n",
        "samples",
        "r_max",
    ];

    /// Sets one key; hyphens in the key are read as underscores.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        let value = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "mode" => self.mode = value.parse()?,
            "shape" => self.shape = Some(value.to_string()),
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = value.parse().map_err(|_| format!("seed must be an unsigned integer, got '{value}'"))?,
            "auto_orient" => {
                self.auto_orient = value.parse().map_err(|_| format!("expected true or false, got '{value}'"))?
            }
            "flow" => self.flow = value.to_string(),
            "density" => self.density = value.to_string(),
            "density_table" => self.density_table = Some(PathBuf::from(value)),
            "epsilon" => {
                self.epsilon = value
                    .parse::<f64>()
                    .ok()
                    .and_then(Epsilon::from_value)
                    .ok_or_else(|| format!("epsilon must be +1 or -1, got '{value}'"))?
            }
            "mu" => self.mu = positive(value)?,
            "cfl" => {
                self.cfl = positive(value)?;
                if self.cfl > 1.0 {
                    return Err(format!("cfl must lie in (0, 1], got {value}"));
                }
            }
            "max_dt" => self.max_dt = positive(value)?,
            "max_time" => self.max_time = positive(value)?,
            "max_steps" => self.max_steps = count(value)?,
            "resample_every" => self.resample_every = count(value)?,
            "guard" => {
                self.guard = positive(value)?;
                if self.guard >= 1.0 {
                    return Err(format!("guard must lie in (0, 1), got {value}"));
                }
            }
            "shrink_diameter_tol" => self.shrink_diameter_tol = positive(value)?,
            "roundness_tol" => self.roundness_tol = positive(value)?,
            "fixed_point_tol" => self.fixed_point_tol = positive(value)?,
            "fixed_point_steps" => self.fixed_point_steps = count(value)?,
            "snapshot_every" => self.snapshot_every = count(value)?.max(1),
            "diagnostics_every" => self.diagnostics_every = count(value)?.max(1),
            "case" => self.case = Some(value.to_string()),
            "p0" => self.p0 = Some(list(value)?),
            "tol" => self.tol = positive(value)?,
            "checkpoints" => self.checkpoints = list(value)?,
            "refinements" => self.refinements = count(value)?,
            "rho0" => self.rho0 = positive(value)?,
            "n" => {
                self.n = count(value)?;
                if !(1..=2).contains(&self.n) {
                    return Err(format!("n must be 1 or 2, got {value}"));
                }
            }
            "samples" => self.samples = count(value)?.max(2),
            "r_max" => self.r_max = positive(value)?,
            other => return Err(format!("unknown key '{other}'")),
        }
        Ok(())
    }

    /// Applies a config file's lines in order.
    pub fn apply_text(&mut self, text: &str, path: &str) -> Result<(), Error> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse = |message: String| Error::Parse {
                path: path.to_string(),
                line: i + 1,
                message,
            };
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| parse(format!("expected 'key = value', got '{line}'")))?;
            self.set(k, v).map_err(parse)?;
        }
        Ok(())
    }

    pub fn from_file(path: &Path) -> Result<Self, Error> {
        let mut cfg = Self::default();
        cfg.apply_text(&std::fs::read_to_string(path)?, &path.display().to_string())?;
        Ok(cfg)
    }

    /// Flow parameters, including the density (loading its table if any).
    pub fn flow_params(&self) -> Result<FlowParams, Error> {
        let table = match &self.density_table {
            Some(p) => Some(load_radial_table(p)?),
            None => None,
        };
        let mut p = FlowParams::new(self.epsilon, self.mu);
        p.density = resolve_density(&self.density, table)?;
        p.cfl = self.cfl;
        p.max_dt = self.max_dt;
        p.max_time = self.max_time;
        p.max_steps = self.max_steps;
        p.resample_every = self.resample_every;
        p.guard = self.guard;
        p.shrink_diameter_tol = self.shrink_diameter_tol;
        p.roundness_tol = self.roundness_tol;
        p.fixed_point_tol = self.fixed_point_tol;
        p.fixed_point_steps = self.fixed_point_steps;
        p.snapshot_every = self.snapshot_every;
        p.diagnostics_every = self.diagnostics_every;
        p.validate()?;
        Ok(p)
    }
}

/// `r,dphi` CSV rows, radii starting at 0 and increasing.
pub fn load_radial_table(path: &Path) -> Result<RadialTable, Error> {
    let name = path.display().to_string();
    let text = std::fs::read_to_string(path)?;
    let mut rows = Vec::new();
    let mut last = 1;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        last = i + 1;
        let err = |m: String| Error::Parse {
            path: name.clone(),
            line: i + 1,
            message: m,
        };
        let v = list(line).map_err(&err)?;
        if v.len() != 2 {
            return Err(err(format!("expected 'r,dphi', got {} fields", v.len())));
        }
        rows.push((v[0], v[1]));
    }
    RadialTable::new(&rows).map_err(|m| Error::Parse {
        path: name,
        line: last,
        message: m,
    })
}
