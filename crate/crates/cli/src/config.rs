use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};

/// Settings shared by every subcommand. Loaded from defaults, then an
/// optional `key = value` file, then command-line flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub start_cols: usize,
    pub resolution: usize,
    pub seed: u64,
    pub eps_start: f64,
    pub eps_floor: f64,
    pub tilt_start: f64,
    pub tilt_attempts: u32,
    pub planar_eps_start: f64,
    pub planar_eps_floor: f64,
    pub t_start: f64,
    pub t_floor: f64,
    pub delta1: f64,
    pub delta2: f64,
    pub radius: f64,
    pub budget: usize,
    pub out: PathBuf,
    pub format: Format,
    pub svg: bool,
    pub quick: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            _ => bail!("format must be json or csv, got {s:?}"),
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            start_cols: 128,
            resolution: 2048,
            seed: 2024,
            eps_start: 1e-2,
            eps_floor: 1e-8,
            tilt_start: 1e-3,
            tilt_attempts: 5,
            planar_eps_start: 0.1,
            planar_eps_floor: 1e-6,
            t_start: 0.2,
            t_floor: 1e-3,
            delta1: 0.5,
            delta2: 0.25,
            radius: 15.0,
            budget: 10_000,
            out: PathBuf::from("nodal-out"),
            format: Format::Json,
            svg: true,
            quick: false,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| anyhow::anyhow!("bad value {value:?} for {key}: {e}"))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => bail!("bad value {value:?} for {key}: expected true or false"),
    }
}

impl RunConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "start_cols" => self.start_cols = parse(key, value)?,
            "resolution" => self.resolution = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "eps_start" => self.eps_start = parse(key, value)?,
            "eps_floor" => self.eps_floor = parse(key, value)?,
            "tilt_start" => self.tilt_start = parse(key, value)?,
            "tilt_attempts" => self.tilt_attempts = parse(key, value)?,
            "planar_eps_start" => self.planar_eps_start = parse(key, value)?,
            "planar_eps_floor" => self.planar_eps_floor = parse(key, value)?,
            "t_start" => self.t_start = parse(key, value)?,
            "t_floor" => self.t_floor = parse(key, value)?,
            "delta1" => self.delta1 = parse(key, value)?,
            "delta2" => self.delta2 = parse(key, value)?,
            "radius" => self.radius = parse(key, value)?,
            "budget" => self.budget = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "format" => self.format = value.parse()?,
            "svg" => self.svg = parse_bool(key, value)?,
            "quick" => self.quick = parse_bool(key, value)?,
            _ => bail!("unknown config key {key:?}"),
        }
        Ok(())
    }

    /// Apply a flat `key = value` text; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').with_context(|| format!("line {}: expected key = value", i + 1))?;
            self.set(k.trim(), v.trim()).with_context(|| format!("line {}", i + 1))?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("eps_start", self.eps_start),
            ("eps_floor", self.eps_floor),
            ("tilt_start", self.tilt_start),
            ("planar_eps_start", self.planar_eps_start),
            ("planar_eps_floor", self.planar_eps_floor),
            ("t_start", self.t_start),
            ("t_floor", self.t_floor),
            ("radius", self.radius),
        ] {
            if !(v.is_finite() && v > 0.0) {
                bail!("{name} must be positive, got {v}");
            }
        }
        if self.eps_floor > self.eps_start || self.planar_eps_floor > self.planar_eps_start {
            bail!("epsilon floor above its start");
        }
        if self.t_floor > self.t_start || self.t_start >= 1.0 {
            bail!("need 0 < t_floor <= t_start < 1");
        }
        if !(0.0 < self.delta2 && self.delta2 < self.delta1 && self.delta1 < nodal_core::harmonics::J1_GAP_BOUND / 2.0) {
            bail!("need 0 < delta2 < delta1 < {}, got delta1 = {}, delta2 = {}", nodal_core::harmonics::J1_GAP_BOUND / 2.0, self.delta1, self.delta2);
        }
        nodal_core::nodal::check_cols(self.start_cols)?;
        nodal_core::nodal::check_cols(self.resolution)?;
        if self.start_cols > self.resolution {
            bail!("start_cols {} exceeds resolution {}", self.start_cols, self.resolution);
        }
        if self.budget == 0 {
            bail!("budget must be positive");
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| writeln!(s, "{k} = {v}").expect("write to string");
        kv("start_cols", self.start_cols.to_string());
        kv("resolution", self.resolution.to_string());
        kv("seed", self.seed.to_string());
        kv("eps_start", format!("{:e}", self.eps_start));
        kv("eps_floor", format!("{:e}", self.eps_floor));
        kv("tilt_start", format!("{:e}", self.tilt_start));
        kv("tilt_attempts", self.tilt_attempts.to_string());
        kv("planar_eps_start", format!("{:e}", self.planar_eps_start));
        kv("planar_eps_floor", format!("{:e}", self.planar_eps_floor));
        kv("t_start", format!("{:e}", self.t_start));
        kv("t_floor", format!("{:e}", self.t_floor));
        kv("delta1", self.delta1.to_string());
        kv("delta2", self.delta2.to_string());
        kv("radius", self.radius.to_string());
        kv("budget", self.budget.to_string());
        kv("out", self.out.display().to_string());
        kv("format", self.format.name().to_string());
        kv("svg", self.svg.to_string());
        kv("quick", self.quick.to_string());
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_round_trips() {
        let mut c = RunConfig { seed: 9, delta2: 0.125, format: Format::Csv, ..RunConfig::default() };
        c.svg = false;
        let mut back = RunConfig::default();
        back.apply_text(&c.render()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_bad_input() {
        let mut c = RunConfig::default();
        assert!(c.apply_text("nope = 1").is_err());
        assert!(c.apply_text("seed 1").is_err());
        c.apply_text("delta2 = 1.2 # larger than delta1").unwrap();
        assert!(c.validate().is_err());
    }
}
