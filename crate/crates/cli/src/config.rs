//! Run configuration: built-in defaults, then a flat `key = value` file, then flags.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use quasiphase::error::{Error, Result};
use quasiphase::fock::LadderConvention;
use quasiphase::quasi::PhaseGrid;
use quasiphase::verify::Tolerances;

/// Environment variable naming the default config file.
pub const CONFIG_ENV: &str = "QUASIPHASE_CONFIG";

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 4096;
/// Keeps the truncated Mehta kernel of states with `<n>` up to about 1 decaying past `1e-6`.
pub const DEFAULT_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Csv => "csv",
            Format::Json => "json",
        })
    }
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::Parse(format!("unknown format `{other}`; expected csv or json"))),
        }
    }
}

/// One configuration layer; unset fields fall through to the layer below.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Layer {
    pub dim: Option<usize>,
    pub grid: Option<String>,
    pub grid_points: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub hbar: Option<f64>,
    pub lambda: Option<f64>,
    pub seed: Option<u64>,
    pub tolerances: Vec<(String, f64)>,
}

impl Layer {
    /// Parses the config file format: one `key = value` per line, `#` comments, blank lines
    /// ignored. Tolerances are written `tol.<name> = <value>`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut layer = Layer::default();
        for (no, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("config line {}: expected key = value", no + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Parse(format!("config line {}: `{value}` is not {what}", no + 1));
            match key {
                "dim" => layer.dim = Some(value.parse().map_err(|_| bad("an integer"))?),
                "grid" => layer.grid = Some(value.to_string()),
                "grid_points" => layer.grid_points = Some(value.parse().map_err(|_| bad("an integer"))?),
                "format" => layer.format = Some(value.parse()?),
                "out" => layer.out = Some(PathBuf::from(value)),
                "hbar" => layer.hbar = Some(value.parse().map_err(|_| bad("a number"))?),
                "lambda" => layer.lambda = Some(value.parse().map_err(|_| bad("a number"))?),
                "seed" => layer.seed = Some(value.parse().map_err(|_| bad("an integer"))?),
                _ => match key.strip_prefix("tol.") {
                    Some(name) => layer.tolerances.push((name.to_string(), value.parse().map_err(|_| bad("a number"))?)),
                    None => return Err(Error::Parse(format!("config line {}: unknown key `{key}`", no + 1))),
                },
            }
        }
        Ok(layer)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }
}

/// Parses `--tol=name=value`.
pub fn parse_tolerance(text: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = text.split_once('=').ok_or_else(|| format!("`{text}` is not name=value"))?;
    let value: f64 = value.parse().map_err(|_| format!("`{value}` is not a number"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub dim: usize,
    pub convention: LadderConvention,
    /// Explicit grid; commands pick a state-adapted grid when absent.
    pub grid: Option<PhaseGrid>,
    pub grid_points: usize,
    pub tolerances: Tolerances,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl RunConfig {
    /// Merges `file` under `flags` on top of the defaults.
    pub fn resolve(file: &Layer, flags: &Layer) -> Result<Self> {
        let pick = |f: &Layer, g: &Layer| -> Layer {
            Layer {
                dim: g.dim.or(f.dim),
                grid: g.grid.clone().or_else(|| f.grid.clone()),
                grid_points: g.grid_points.or(f.grid_points),
                format: g.format.or(f.format),
                out: g.out.clone().or_else(|| f.out.clone()),
                hbar: g.hbar.or(f.hbar),
                lambda: g.lambda.or(f.lambda),
                seed: g.seed.or(f.seed),
                tolerances: f.tolerances.iter().chain(&g.tolerances).cloned().collect(),
            }
        };
        let merged = pick(file, flags);
        let dim = merged.dim.unwrap_or(DEFAULT_DIM);
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::Invariant {
                invariant: "2 <= dim <= 4096",
                detail: format!("dim = {dim}"),
            });
        }
        let defaults = LadderConvention::default();
        let convention = LadderConvention::new(merged.hbar.unwrap_or(defaults.hbar), merged.lambda.unwrap_or(defaults.lambda))?;
        let grid = match &merged.grid {
            Some(text) => {
                let g: PhaseGrid = text.parse()?;
                Some(PhaseGrid::new((g.q_min, g.q_max, g.nq), (g.p_min, g.p_max, g.np), convention)?)
            }
            None => None,
        };
        let grid_points = merged.grid_points.unwrap_or(128);
        if grid_points < 8 {
            return Err(Error::Invariant {
                invariant: "grid_points >= 8",
                detail: format!("grid_points = {grid_points}"),
            });
        }
        let mut tolerances = Tolerances::default();
        for (name, value) in &merged.tolerances {
            tolerances.set(name, *value)?;
        }
        Ok(RunConfig {
            dim,
            convention,
            grid,
            grid_points,
            tolerances,
            out: merged.out,
            format: merged.format.unwrap_or(Format::Csv),
            seed: merged.seed.unwrap_or(7),
        })
    }

    /// Explicit grid, or the default grid for `nbar` photons with `grid_points` per axis.
    pub fn grid_for(&self, nbar: f64) -> Result<PhaseGrid> {
        if let Some(g) = self.grid {
            return Ok(g);
        }
        let g = PhaseGrid::for_mean_photons(nbar, self.convention)?;
        PhaseGrid::new((g.q_min, g.q_max, self.grid_points), (g.p_min, g.p_max, self.grid_points), self.convention)
    }
}
