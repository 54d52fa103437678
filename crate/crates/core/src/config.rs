//! Run configuration with defaults and `key = value` file overrides.

use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::correction::{HessianMode, DEFAULT_MAX_ITER, DEFAULT_MU, DEFAULT_TOL_GRAD};
use crate::error::{Result, SymmetryError};
use crate::functional_map::{DEFAULT_EPS_SIGN, DEFAULT_MIN_ACTIVE};
use crate::pairing::{DEFAULT_MAX_PAIRS, DEFAULT_Q_MULTIPLIER};
use crate::signatures::{DEFAULT_BOUNDARY_MARGIN, DEFAULT_D_MAX, DEFAULT_TIME_STEPS};
use crate::spectral::{DEFAULT_K, DEFAULT_TAU_GAP};

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Number of eigenpairs.
    pub k: usize,
    /// Maximum number of HKS feature points.
    pub d_max: usize,
    /// Number of symmetric pairs; `None` means `min(max_pairs, ⌊d/2⌋)`.
    pub pairs: Option<usize>,
    pub max_pairs: usize,
    /// Sign-penalty `q` as a multiple of the largest HKS distance.
    pub q_multiplier: f64,
    /// Number of HKS time samples.
    pub time_steps: usize,
    /// Drop HKS maxima within this many edge hops of a boundary; `None` keeps them.
    pub boundary_margin: Option<usize>,
    pub mu: f64,
    pub tau_gap: f64,
    pub eps_sign: f64,
    pub min_active: usize,
    pub correction: bool,
    pub max_iter: usize,
    pub tol_grad: f64,
    pub hessian: HessianMode,
    /// Vertex count up to which the dense eigensolver is used.
    pub dense_threshold: usize,
    /// Seeds the eigensolver's start block; `None` uses a fixed default.
    pub seed: Option<u64>,
    /// Compute per-vertex involution errors after matching.
    pub diagnostics: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            d_max: DEFAULT_D_MAX,
            pairs: None,
            max_pairs: DEFAULT_MAX_PAIRS,
            q_multiplier: DEFAULT_Q_MULTIPLIER,
            time_steps: DEFAULT_TIME_STEPS,
            boundary_margin: Some(DEFAULT_BOUNDARY_MARGIN),
            mu: DEFAULT_MU,
            tau_gap: DEFAULT_TAU_GAP,
            eps_sign: DEFAULT_EPS_SIGN,
            min_active: DEFAULT_MIN_ACTIVE,
            correction: true,
            max_iter: DEFAULT_MAX_ITER,
            tol_grad: DEFAULT_TOL_GRAD,
            hessian: HessianMode::FiniteDifference,
            dense_threshold: 1000,
            seed: None,
            diagnostics: true,
        }
    }
}

fn bad(key: &str, value: &str) -> SymmetryError {
    SymmetryError::Config(format!("invalid value `{value}` for `{key}`"))
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| bad(key, value))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(bad(key, value)),
    }
}

impl RunConfig {
    /// Applies one `key = value` setting. Keys accept `-` or `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let norm = key.trim().replace('-', "_");
        let value = value.trim();
        match norm.as_str() {
            "k" => self.k = parse(key, value)?,
            "d_max" => self.d_max = parse(key, value)?,
            "pairs" | "c" => {
                self.pairs = if value.eq_ignore_ascii_case("auto") {
                    None
                } else {
                    Some(parse(key, value)?)
                }
            }
            "max_pairs" => self.max_pairs = parse(key, value)?,
            "q_multiplier" => self.q_multiplier = parse(key, value)?,
            "time_steps" | "h" => self.time_steps = parse(key, value)?,
            "boundary_margin" => {
                self.boundary_margin = if value.eq_ignore_ascii_case("none") {
                    None
                } else {
                    Some(parse(key, value)?)
                }
            }
            "mu" => self.mu = parse(key, value)?,
            "tau_gap" => self.tau_gap = parse(key, value)?,
            "eps_sign" => self.eps_sign = parse(key, value)?,
            "min_active" => self.min_active = parse(key, value)?,
            "correction" => self.correction = parse_bool(key, value)?,
            "max_iter" => self.max_iter = parse(key, value)?,
            "tol_grad" => self.tol_grad = parse(key, value)?,
            "hessian" => {
                self.hessian = match value.to_ascii_lowercase().as_str() {
                    "fd" | "finite_difference" | "finite-difference" | "numerical" => {
                        HessianMode::FiniteDifference
                    }
                    "analytic" | "exact" => HessianMode::Analytic,
                    _ => return Err(bad(key, value)),
                }
            }
            "dense_threshold" => self.dense_threshold = parse(key, value)?,
            "seed" => self.seed = Some(parse(key, value)?),
            "diagnostics" => self.diagnostics = parse_bool(key, value)?,
            _ => return Err(SymmetryError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| SymmetryError::Parse {
                line: i + 1,
                message: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key, value)?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| SymmetryError::io(path, e))?;
        self.apply_text(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(SymmetryError::Config(m.to_string()));
        if self.k < 3 {
            return err("k must be at least 3");
        }
        if self.d_max < 2 {
            return err("d_max must be at least 2");
        }
        if self.pairs == Some(0) || self.max_pairs == 0 {
            return err("pair count must be positive");
        }
        if self.time_steps == 0 {
            return err("time_steps must be positive");
        }
        for (name, v) in [
            ("q_multiplier", self.q_multiplier),
            ("tau_gap", self.tau_gap),
            ("eps_sign", self.eps_sign),
            ("tol_grad", self.tol_grad),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(SymmetryError::Config(format!("{name} must be positive")));
            }
        }
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return err("mu must be non-negative");
        }
        Ok(())
    }
}
