//! Run configuration files: one flat TOML section per subcommand; unknown keys are rejected.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::CliError;

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub linear: Option<LinearConfig>,
    pub nonlinear: Option<NonlinearConfig>,
    pub oracle: Option<OracleConfig>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Input(format!("config: {e}")))
    }
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum SourceKind {
    Gaussian,
    Bump,
}

fn one() -> f64 {
    1.0
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub kind: SourceKind,
    #[serde(default = "one")]
    pub amplitude: f64,
    /// Gaussian width or bump radius.
    #[serde(default = "one")]
    pub width: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum LinearMethod {
    Radial,
    Spectral,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct LinearConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: f64,
    pub method: LinearMethod,
    pub source: SourceConfig,
    /// Output radii `0, …, rmax` (`points` of them; grid radii for the spectral method).
    pub rmax: f64,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub halfwidth: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum CoefficientKind {
    Constant,
    GaussianWell,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct CoefficientConfig {
    pub kind: CoefficientKind,
    /// `constant`: `[value]` (empty means `k²`); `gaussian-well`: `[depth, width]`.
    #[serde(default)]
    pub params: Vec<f64>,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum NonlinearityKind {
    Power,
    Manufactured,
    ForcedPower,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    pub kind: NonlinearityKind,
    /// Exact rationals, e.g. `"1"` or `"1/2"`.
    pub sigma: String,
    pub delta: String,
    #[serde(default)]
    pub eps: f64,
    #[serde(default = "one")]
    pub b1: f64,
    #[serde(default = "one")]
    pub b2: f64,
}

#[derive(Clone, Copy, Debug, Deserialize, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Radial,
    Spectral,
    /// Finite differences for the radial equation.
    Fd,
}

fn half() -> f64 {
    0.5
}

fn default_tol() -> f64 {
    1e-8
}

fn default_rmax() -> f64 {
    10.0
}

fn default_max_iter() -> usize {
    500
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct NonlinearConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: f64,
    pub solver: Solver,
    #[serde(default = "half")]
    pub omega: f64,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// Output radii `0, …, rmax`.
    #[serde(default = "default_rmax")]
    pub rmax: f64,
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub halfwidth: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    pub a: CoefficientConfig,
    pub g: NonlinearityConfig,
}

#[derive(Clone, Debug, Deserialize, Serialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: f64,
    pub source: SourceConfig,
    pub halfwidth: f64,
    pub grid_points: usize,
    /// Compare on `|x| ≤ radius`.
    pub radius: f64,
    /// Largest accepted relative discrepancy.
    pub bound: f64,
}
