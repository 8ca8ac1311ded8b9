//! Flat `key = value` job files.
//!
//! Blank lines and lines starting with `#` are ignored. Lists are
//! comma-separated. Tolerances are set with `tol.<name> = <value>`.

use std::f64::consts::TAU;
use std::path::PathBuf;

use helicoid::{Sheet, Tolerances};
use serde::Serialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobConfig {
    pub a: f64,
    pub b: f64,
    #[serde(rename = "H")]
    pub h: f64,
    pub k_list: Vec<i64>,
    pub t_range: (f64, f64),
    pub grid: (usize, usize),
    pub lambda_t: f64,
    /// Sample count of `scan-L`, and samples per quarter circle for `solve`.
    pub samples: usize,
    pub max_solutions: usize,
    /// Mesh over the closing period of the solution with this `l`.
    pub mesh_closing_l: Option<i64>,
    /// Domain side lengths of `mesh`, overriding the defaults.
    pub mesh_x: Option<f64>,
    pub mesh_y: Option<f64>,
    #[serde(skip)]
    pub sheet: Sheet,
    pub tol: Tolerances,
    pub out: Option<PathBuf>,
}

impl Default for JobConfig {
    fn default() -> Self {
        Self {
            a: 0.4,
            b: 0.6,
            h: 1.0,
            k_list: vec![1],
            t_range: (0.05, 1.52),
            grid: (64, 64),
            lambda_t: 0.7,
            samples: 2000,
            max_solutions: 1000,
            mesh_closing_l: None,
            mesh_x: None,
            mesh_y: None,
            sheet: Sheet::Minus,
            tol: Tolerances::default(),
            out: None,
        }
    }
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("line {line}: {msg}"))
}

fn parse_num<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<T, CliError> {
    s.trim().parse().map_err(|_| bad(line, format_args!("cannot parse {key} = {s:?}")))
}

fn parse_list<T: std::str::FromStr>(line: usize, key: &str, s: &str) -> Result<Vec<T>, CliError> {
    s.split(',').map(|x| parse_num(line, key, x)).collect()
}

fn parse_pair<T: std::str::FromStr + Copy>(line: usize, key: &str, s: &str) -> Result<(T, T), CliError> {
    match parse_list(line, key, s)?.as_slice() {
        [x, y] => Ok((*x, *y)),
        _ => Err(bad(line, format_args!("{key} needs two comma-separated values"))),
    }
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') {
                continue;
            }
            let (key, val) = s.split_once('=').ok_or_else(|| bad(line, "expected key = value"))?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "a" => c.a = parse_num(line, key, val)?,
                "b" => c.b = parse_num(line, key, val)?,
                "H" => c.h = parse_num(line, key, val)?,
                "k_list" => c.k_list = parse_list(line, key, val)?,
                "t_range" => c.t_range = parse_pair(line, key, val)?,
                "grid" => c.grid = parse_pair(line, key, val)?,
                "lambda_t" => c.lambda_t = parse_num(line, key, val)?,
                "samples" => c.samples = parse_num(line, key, val)?,
                "max_solutions" => c.max_solutions = parse_num(line, key, val)?,
                "mesh_closing_l" => c.mesh_closing_l = Some(parse_num(line, key, val)?),
                "mesh_x" => c.mesh_x = Some(parse_num(line, key, val)?),
                "mesh_y" => c.mesh_y = Some(parse_num(line, key, val)?),
                "sheet" => {
                    c.sheet = match val {
                        "minus" => Sheet::Minus,
                        "plus" => Sheet::Plus,
                        _ => return Err(bad(line, format_args!("sheet must be minus or plus, got {val:?}"))),
                    }
                }
                "out" => c.out = Some(PathBuf::from(val)),
                _ => match key.strip_prefix("tol.") {
                    Some(name) => c.set_tolerance(name, parse_num(line, key, val)?)?,
                    None => return Err(bad(line, format_args!("unknown key {key:?}"))),
                },
            }
        }
        Ok(c)
    }

    pub fn set_tolerance(&mut self, name: &str, value: f64) -> Result<(), CliError> {
        self.tol.set(name, value).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Applies a `name=value` override from the command line.
    pub fn apply_override(&mut self, spec: &str) -> Result<(), CliError> {
        let (name, val) = spec.split_once('=').ok_or_else(|| CliError::Config(format!("--tol expects name=value, got {spec:?}")))?;
        let v = val.trim().parse().map_err(|_| CliError::Config(format!("cannot parse tolerance value {val:?}")))?;
        self.set_tolerance(name.trim(), v)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let err = |m: String| Err(CliError::Config(m));
        for (name, v) in [("a", self.a), ("b", self.b), ("H", self.h), ("lambda_t", self.lambda_t)] {
            if !v.is_finite() {
                return err(format!("{name} must be finite"));
            }
        }
        if self.h == 0.0 {
            return err("H must be nonzero".into());
        }
        if self.grid.0 < 2 || self.grid.1 < 2 {
            return err(format!("grid must be at least 2 x 2, got {} x {}", self.grid.0, self.grid.1));
        }
        let (t0, t1) = self.t_range;
        if !(t0 > 0.0 && t1 < TAU && t0 <= t1) {
            return err(format!("t_range must satisfy 0 < t0 <= t1 < 2 pi, got ({t0}, {t1})"));
        }
        if self.k_list.is_empty() || self.k_list.iter().any(|&k| k <= 0) {
            return err("k_list must hold positive integers".into());
        }
        if self.samples < 2 {
            return err("samples must be at least 2".into());
        }
        for (name, v) in [("mesh_x", self.mesh_x), ("mesh_y", self.mesh_y)] {
            if v.is_some_and(|v| !(v.is_finite() && v != 0.0)) {
                return err(format!("{name} must be finite and nonzero"));
            }
        }
        Ok(())
    }
}
