//! Experiment configuration: JSON schema, validation, and construction of
//! core objects from declarative function specs.
//!
//! The accepted document is a single object with keys
//! `{experiment, f, g, s, lambda, N, M, trials, alpha_grid, seed, out}`;
//! unknown keys are rejected so typos fail loudly instead of silently
//! running a default. `g`, `N`, `M`, `trials`, `alpha_grid`, `seed`, and
//! `out` are optional:
//!
//! - `g` defaults to `f` (self-combination),
//! - `N`/`M` default to `n + 2`, the smallest count giving the sample
//!   hull full dimension almost surely,
//! - `trials` defaults to 1000,
//! - `alpha_grid` defaults to 20 points spanning
//!   `[0.1, 1.1] * max(int f, int g)` (resolved by the runner once the
//!   integrals are known),
//! - `seed` defaults to 0,
//! - `out` defaults to stdout.

use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;

use sconcave::prelude::*;

/// Which runner a config drives; must match the CLI subcommand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Theorem1,
    Bbl,
    Converge,
    Shadow,
    Brunn,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Theorem1 => "theorem1",
            ExperimentKind::Bbl => "bbl",
            ExperimentKind::Converge => "converge",
            ExperimentKind::Shadow => "shadow",
            ExperimentKind::Brunn => "brunn",
        }
    }
}

/// Declarative description of one s-concave family member. The concavity
/// parameter comes from the top-level `s`, so one spec can be reused
/// across experiments; families with a fixed natural parameter (the
/// log-concave ones) still require a compatible `s`.
#[derive(Clone, Debug, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum FnSpec {
    /// `h * (1 - |x|/r)_+^(1/s)`, s > 0.
    Cap {
        height: f64,
        radius: f64,
        center: Vec<f64>,
    },
    /// `h * (1 + |x|/r)^(1/s)` truncated at `cutoff`, s < 0.
    NegCap {
        height: f64,
        radius: f64,
        cutoff: f64,
        center: Vec<f64>,
    },
    /// `h * exp(-|x|^2/sigma^2)` truncated at `cutoff`, s = 0.
    LogGauss {
        height: f64,
        sigma: f64,
        cutoff: f64,
        center: Vec<f64>,
    },
    /// `h * exp(-|x|_1/sigma)` truncated at l1-radius `cutoff`, s = 0.
    LogTent {
        height: f64,
        sigma: f64,
        cutoff: f64,
        center: Vec<f64>,
    },
    /// `h` on the hull of `vertices`, zero outside.
    Indicator { height: f64, vertices: Vec<Vec<f64>> },
    /// `h` on the ball of radius `radius`.
    IndicatorBall {
        height: f64,
        radius: f64,
        center: Vec<f64>,
    },
}

fn point_from(coords: &[f64]) -> Result<Point> {
    match coords.len() {
        1 | 2 => Ok(Point::new(coords)),
        d => bail!("points must have 1 or 2 coordinates, got {d}"),
    }
}

impl FnSpec {
    /// Ambient dimension implied by the center or vertex coordinates.
    pub fn dim(&self) -> Result<usize> {
        let coords = match self {
            FnSpec::Cap { center, .. }
            | FnSpec::NegCap { center, .. }
            | FnSpec::LogGauss { center, .. }
            | FnSpec::LogTent { center, .. }
            | FnSpec::IndicatorBall { center, .. } => center.len(),
            FnSpec::Indicator { vertices, .. } => {
                vertices.first().map(|v| v.len()).unwrap_or(0)
            }
        };
        if !(1..=2).contains(&coords) {
            bail!("function specs must live in dimension 1 or 2, got {coords}");
        }
        Ok(coords)
    }

    /// Builds the family member for the given concavity parameter.
    pub fn build(&self, s: SParam) -> Result<SConcaveFn> {
        let made = match self {
            FnSpec::Cap {
                height,
                radius,
                center,
            } => SConcaveFn::cap(s, *height, *radius, point_from(center)?),
            FnSpec::NegCap {
                height,
                radius,
                cutoff,
                center,
            } => SConcaveFn::neg_cap(s, *height, *radius, *cutoff, point_from(center)?),
            FnSpec::LogGauss {
                height,
                sigma,
                cutoff,
                center,
            } => SConcaveFn::log_gauss(s, *height, *sigma, *cutoff, point_from(center)?),
            FnSpec::LogTent {
                height,
                sigma,
                cutoff,
                center,
            } => SConcaveFn::log_tent(s, *height, *sigma, *cutoff, point_from(center)?),
            FnSpec::Indicator { height, vertices } => {
                let pts = vertices
                    .iter()
                    .map(|v| point_from(v))
                    .collect::<Result<Vec<_>>>()?;
                let set = VPolytope::hull(&pts).map_err(|e| anyhow!("indicator hull: {e}"))?;
                SConcaveFn::indicator(s, *height, set)
            }
            FnSpec::IndicatorBall {
                height,
                radius,
                center,
            } => SConcaveFn::indicator_ball(s, *height, *radius, point_from(center)?),
        };
        made.map_err(|e| anyhow!("invalid function spec: {e}"))
    }
}

/// Explicit alpha grid; when absent the runner derives one from the
/// input integrals.
#[derive(Clone, Copy, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaGridSpec {
    pub count: usize,
    pub min: f64,
    pub max: f64,
}

impl AlphaGridSpec {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        (0..self.count)
            .map(|k| self.min + (self.max - self.min) * k as f64 / (self.count - 1) as f64)
            .collect()
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub f: FnSpec,
    #[serde(default)]
    pub g: Option<FnSpec>,
    pub s: f64,
    #[serde(default = "default_lambda")]
    pub lambda: f64,
    #[serde(rename = "N", default)]
    pub n_samples: Option<usize>,
    #[serde(rename = "M", default)]
    pub m_samples: Option<usize>,
    #[serde(default)]
    pub trials: Option<usize>,
    #[serde(default)]
    pub alpha_grid: Option<AlphaGridSpec>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub out: Option<String>,
}

fn default_lambda() -> f64 {
    0.5
}

impl ExperimentConfig {
    /// Parses and validates a JSON config document.
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        let cfg: ExperimentConfig =
            serde_json::from_str(text).context("config does not match the schema")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<ExperimentConfig> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        ExperimentConfig::from_json(&text)
    }

    fn validate(&self) -> Result<()> {
        let dim = self.f.dim()?;
        if let Some(g) = &self.g {
            let gdim = g.dim()?;
            if gdim != dim {
                bail!("f lives in dimension {dim} but g in {gdim}");
            }
        }
        SParam::new(self.s, dim).map_err(|e| anyhow!("invalid s: {e}"))?;
        if !(self.lambda.is_finite() && (0.0..=1.0).contains(&self.lambda)) {
            bail!("lambda must lie in [0, 1], got {}", self.lambda);
        }
        let floor = dim + 2;
        for (name, v) in [("N", self.n_samples), ("M", self.m_samples)] {
            if let Some(v) = v {
                if v < floor {
                    bail!("{name} must be at least n + 2 = {floor}, got {v}");
                }
            }
        }
        if let Some(t) = self.trials {
            if t == 0 {
                bail!("trials must be at least 1");
            }
        }
        if let Some(grid) = &self.alpha_grid {
            if grid.count == 0 {
                bail!("alpha_grid.count must be at least 1");
            }
            if !grid.min.is_finite() || !grid.max.is_finite() {
                bail!("alpha_grid bounds must be finite");
            }
            if grid.count > 1 && grid.min >= grid.max {
                bail!("alpha_grid must be strictly increasing (min < max)");
            }
        }
        Ok(())
    }

    /// The concavity parameter tied to the ambient dimension of `f`.
    pub fn s_param(&self) -> SParam {
        let dim = self.f.dim().expect("validated");
        SParam::new(self.s, dim).expect("validated")
    }

    pub fn build_f(&self) -> Result<SConcaveFn> {
        self.f.build(self.s_param())
    }

    /// `g` falls back to `f` when absent.
    pub fn build_g(&self) -> Result<SConcaveFn> {
        match &self.g {
            Some(g) => g.build(self.s_param()),
            None => self.build_f(),
        }
    }

    pub fn n_samples(&self) -> usize {
        self.n_samples
            .unwrap_or_else(|| self.f.dim().expect("validated") + 2)
    }

    pub fn m_samples(&self) -> usize {
        self.m_samples.unwrap_or_else(|| self.n_samples())
    }

    pub fn trials(&self) -> usize {
        self.trials.unwrap_or(1000)
    }

    pub fn master_seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    /// The alpha grid, derived from the input integrals when not pinned
    /// in the config: 20 points spanning `[0.1, 1.1] * max(int f, int g)`.
    pub fn alpha_points(&self, int_f: f64, int_g: f64) -> Vec<f64> {
        match &self.alpha_grid {
            Some(grid) => grid.points(),
            None => {
                let top = int_f.max(int_g);
                AlphaGridSpec {
                    count: 20,
                    min: 0.1 * top,
                    max: 1.1 * top,
                }
                .points()
            }
        }
    }
}
