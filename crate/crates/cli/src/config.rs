//! Numeric settings: defaults, an optional TOML file, then command-line
//! overrides.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use differential_core::{Config, ScanSettings};
use serde::{Deserialize, Serialize};

use crate::exit::UsageError;

/// Environment variable naming a config file when `--config` is absent.
pub const CONFIG_ENV: &str = "SADDLESCOPE_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    pub delta_saddle: f64,
    pub hysteresis: f64,
    pub chart_radius: f64,
    pub step_factor: f64,
    pub max_steps: usize,
    /// Integrator position tolerance.
    pub position_tol: f64,
    pub trap_factor: f64,
    pub closure_tol: f64,
    /// Phase grid of wall scans.
    pub grid: usize,
    /// Walls closer than this are not separated.
    pub refine_tol: f64,
    pub probe_delta: f64,
    pub max_walls: usize,
    /// Offset of the probes on either side of a wall.
    pub wall_offset: f64,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        let c = Config::default();
        let s = ScanSettings::<f64>::default();
        Settings {
            delta_saddle: c.delta_saddle,
            hysteresis: c.hysteresis,
            chart_radius: c.chart_radius,
            step_factor: c.step_factor,
            max_steps: c.max_steps,
            position_tol: c.position_tol,
            trap_factor: c.trap_factor,
            closure_tol: c.closure_tol,
            grid: s.grid,
            refine_tol: s.tol,
            probe_delta: s.probe_delta,
            max_walls: s.max_walls,
            wall_offset: 1e-7,
            seed: 20_140_101,
        }
    }
}

/// Command-line values that override the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub config: Option<PathBuf>,
    pub tol: Option<f64>,
    pub grid: Option<usize>,
    pub seed: Option<u64>,
}

impl Settings {
    pub fn from_toml(text: &str) -> Result<Self> {
        let s: Settings = toml::from_str(text).map_err(|e| UsageError(format!("config: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("serializable")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_toml(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Defaults, then `--config` or the environment fallback, then flags.
    pub fn resolve(o: &Overrides) -> Result<Self> {
        let path = o.config.clone().or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
        let mut s = match path {
            Some(p) => Self::load(&p)?,
            None => Settings::default(),
        };
        if let Some(t) = o.tol {
            s.position_tol = t;
        }
        if let Some(g) = o.grid {
            s.grid = g;
        }
        if let Some(seed) = o.seed {
            s.seed = seed;
        }
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("delta_saddle", self.delta_saddle),
            ("hysteresis", self.hysteresis),
            ("chart_radius", self.chart_radius),
            ("step_factor", self.step_factor),
            ("position_tol", self.position_tol),
            ("trap_factor", self.trap_factor),
            ("closure_tol", self.closure_tol),
            ("refine_tol", self.refine_tol),
            ("probe_delta", self.probe_delta),
            ("wall_offset", self.wall_offset),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(UsageError(format!("{name} must be positive, got {v}")).into());
            }
        }
        if self.grid == 0 || self.max_steps == 0 || self.max_walls == 0 {
            return Err(UsageError("grid, max_steps and max_walls must be positive".into()).into());
        }
        Ok(())
    }

    pub fn trace(&self) -> Config {
        Config {
            delta_saddle: self.delta_saddle,
            hysteresis: self.hysteresis,
            chart_radius: self.chart_radius,
            step_factor: self.step_factor,
            max_steps: self.max_steps,
            position_tol: self.position_tol,
            trap_factor: self.trap_factor,
            closure_tol: self.closure_tol,
        }
    }

    pub fn scan(&self) -> ScanSettings<f64> {
        ScanSettings { grid: self.grid, tol: self.refine_tol, probe_delta: self.probe_delta, max_walls: self.max_walls }
    }
}
