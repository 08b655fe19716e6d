//! `key=value` run configuration.
//!
//! One entry per line, `#` starts a comment. Keys match the CLI flag names
//! (`n`, `delta`, `x0max`, `dx0`, `rmax`, `dr`, `arc-step`, `epsilon`, `pad`,
//! `type`, `output`). Every numeric parameter except `n`, `pad` and
//! `arc-step` accepts a comma-separated list for sweeps. `x0max` and `rmax`
//! may be written relative to the image side, e.g. `3N`.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{ScanGeometry, DEFAULT_ARC_STEP};
use crate::phantom::{PhantomSpec, MIN_SIZE};
use crate::recon::ReconConfig;

pub const KEYS: [&str; 11] = [
    "n", "delta", "x0max", "dx0", "rmax", "dr", "arc-step", "epsilon", "pad", "type", "output",
];

/// Ordered `key → value` pairs with the line they came from (0 for overrides).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct KeyValues {
    entries: BTreeMap<String, (String, usize)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = KeyValues::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!(
                    "line {}: expected key=value, got {line:?}",
                    idx + 1
                ))
            })?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(Error::config(format!(
                    "line {}: unknown key {key:?}",
                    idx + 1
                )));
            }
            if kv.entries.contains_key(key) {
                return Err(Error::config(format!(
                    "line {}: duplicate key {key:?}",
                    idx + 1
                )));
            }
            kv.entries
                .insert(key.to_string(), (value.trim().to_string(), idx + 1));
        }
        Ok(kv)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Set or replace `key`; later values win.
    pub fn set(&mut self, key: &str, value: impl Into<String>) -> Result<()> {
        if !KEYS.contains(&key) {
            return Err(Error::config(format!("unknown key {key:?}")));
        }
        self.entries.insert(key.to_string(), (value.into(), 0));
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|(v, _)| v.as_str())
    }

    fn parse_value<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|(v, line)| v.parse::<T>().map_err(|e| bad_value(key, v, *line, e)))
            .transpose()
    }

    fn parse_list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: fmt::Display,
    {
        self.entries
            .get(key)
            .map(|(v, line)| {
                v.split(',')
                    .map(|item| {
                        item.trim()
                            .parse::<T>()
                            .map_err(|e| bad_value(key, v, *line, e))
                    })
                    .collect()
            })
            .transpose()
    }
}

fn bad_value(key: &str, value: &str, line: usize, e: impl fmt::Display) -> Error {
    let at = if line > 0 {
        format!("line {line}: ")
    } else {
        String::new()
    };
    Error::config(format!("{at}bad value {value:?} for {key}: {e}"))
}

/// A length in pixels, optionally proportional to the image side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Length {
    pub value: f64,
    pub per_side: bool,
}

impl Length {
    pub fn pixels(value: f64) -> Self {
        Length {
            value,
            per_side: false,
        }
    }

    pub fn times_side(value: f64) -> Self {
        Length {
            value,
            per_side: true,
        }
    }

    pub fn resolve(self, n: usize) -> f64 {
        if self.per_side {
            self.value * n as f64
        } else {
            self.value
        }
    }
}

impl FromStr for Length {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let (num, per_side) = match s.strip_suffix(['N', 'n']) {
            Some("") => ("1", true),
            Some(head) => (head.trim(), true),
            None => (s, false),
        };
        let value: f64 = num.parse().map_err(|_| format!("not a length: {s:?}"))?;
        Ok(Length { value, per_side })
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.per_side {
            write!(f, "{}N", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Parameters of one run or of a Cartesian sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub phantom: String,
    pub n: usize,
    pub delta: Vec<f64>,
    pub x0_max: Vec<Length>,
    pub delta_x0: Vec<f64>,
    pub r_max: Vec<Length>,
    pub delta_r: Vec<f64>,
    pub epsilon: Vec<f64>,
    pub arc_step: f64,
    pub pad_factor: usize,
    pub output: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        let recon = ReconConfig::default();
        SweepConfig {
            phantom: "derenzo".into(),
            n: 128,
            delta: vec![51.0],
            x0_max: vec![Length::times_side(3.0)],
            delta_x0: vec![1.0],
            r_max: vec![Length::times_side(3.0)],
            delta_r: vec![1.0],
            epsilon: vec![recon.epsilon],
            arc_step: DEFAULT_ARC_STEP,
            pad_factor: recon.pad_factor,
            output: None,
        }
    }
}

/// A single fully resolved run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunParams {
    pub phantom: String,
    pub n: usize,
    pub delta: f64,
    pub geom: ScanGeometry,
    pub recon: ReconConfig,
}

impl RunParams {
    pub fn phantom_spec(&self) -> Result<PhantomSpec> {
        PhantomSpec::named(&self.phantom, self.n, self.delta)
    }
}

impl SweepConfig {
    /// Defaults overridden by whatever `kv` holds.
    pub fn from_key_values(kv: &KeyValues) -> Result<Self> {
        let mut c = SweepConfig::default();
        if let Some(v) = kv.get("type") {
            c.phantom = v.to_string();
        }
        if let Some(v) = kv.parse_value("n")? {
            c.n = v;
        }
        if let Some(v) = kv.parse_list("delta")? {
            c.delta = v;
        }
        if let Some(v) = kv.parse_list("x0max")? {
            c.x0_max = v;
        }
        if let Some(v) = kv.parse_list("dx0")? {
            c.delta_x0 = v;
        }
        if let Some(v) = kv.parse_list("rmax")? {
            c.r_max = v;
        }
        if let Some(v) = kv.parse_list("dr")? {
            c.delta_r = v;
        }
        if let Some(v) = kv.parse_list("epsilon")? {
            c.epsilon = v;
        }
        if let Some(v) = kv.parse_value("arc-step")? {
            c.arc_step = v;
        }
        if let Some(v) = kv.parse_value("pad")? {
            c.pad_factor = v;
        }
        if let Some(v) = kv.get("output") {
            c.output = Some(PathBuf::from(v));
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_SIZE {
            return Err(Error::config(format!("n = {} below {MIN_SIZE}", self.n)));
        }
        PhantomSpec::named(&self.phantom, self.n, 0.0)?;
        let lists = [
            ("delta", self.delta.len()),
            ("x0max", self.x0_max.len()),
            ("dx0", self.delta_x0.len()),
            ("rmax", self.r_max.len()),
            ("dr", self.delta_r.len()),
            ("epsilon", self.epsilon.len()),
        ];
        if let Some((name, _)) = lists.iter().find(|(_, len)| *len == 0) {
            return Err(Error::config(format!("{name} list is empty")));
        }
        if let Some(d) = self.delta.iter().find(|d| !(**d >= 0.0) || !d.is_finite()) {
            return Err(Error::config(format!("delta must be >= 0, got {d}")));
        }
        for geom in self.geometries() {
            geom.validate()?;
        }
        for &epsilon in &self.epsilon {
            ReconConfig {
                epsilon,
                pad_factor: self.pad_factor,
                ..ReconConfig::default()
            }
            .validate()?;
        }
        Ok(())
    }

    /// Scan geometries in sweep order (x0max, dx0, rmax, dr).
    pub fn geometries(&self) -> Vec<ScanGeometry> {
        let mut out = Vec::new();
        for x0 in &self.x0_max {
            for &dx0 in &self.delta_x0 {
                for r in &self.r_max {
                    for &dr in &self.delta_r {
                        out.push(
                            ScanGeometry::new(x0.resolve(self.n), dx0, r.resolve(self.n), dr)
                                .with_arc_step(self.arc_step),
                        );
                    }
                }
            }
        }
        out
    }

    /// The only run of a configuration whose lists are all singletons.
    pub fn single(&self) -> Result<RunParams> {
        let lists = [
            ("delta", self.delta.len()),
            ("x0max", self.x0_max.len()),
            ("dx0", self.delta_x0.len()),
            ("rmax", self.r_max.len()),
            ("dr", self.delta_r.len()),
            ("epsilon", self.epsilon.len()),
        ];
        if let Some((name, len)) = lists.iter().find(|(_, len)| *len != 1) {
            return Err(Error::config(format!(
                "{name} has {len} values; only sweep accepts lists"
            )));
        }
        self.validate()?;
        Ok(RunParams {
            phantom: self.phantom.clone(),
            n: self.n,
            delta: self.delta[0],
            geom: self.geometries()[0],
            recon: ReconConfig {
                epsilon: self.epsilon[0],
                pad_factor: self.pad_factor,
                ..ReconConfig::default()
            },
        })
    }

    pub fn run_count(&self) -> usize {
        self.delta.len() * self.geometries().len() * self.epsilon.len()
    }
}
