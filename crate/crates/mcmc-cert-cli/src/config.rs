//! Versioned, strict JSON run configurations.

use mcmc_cert::finite_chain::ToySpec;
use mcmc_cert::mcmc_estimator::NamedIntegrand;
use mcmc_cert::planner::{ConvexBodyProblem, LogConcaveProblem};
use mcmc_cert::sampler_core::{BuiltinKind, Initial};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Config {
    Toy(ToyConfig),
    Matrix(MatrixConfig),
    Bound(BoundConfig),
    BurninTable(BurninTableConfig),
    NormalsTable(NormalsTableConfig),
    Plan(PlanConfig),
    Estimate(EstimateConfig),
    Figure(FigureConfig),
}

impl Config {
    pub fn kind(&self) -> &'static str {
        match self {
            Config::Toy(_) => "toy",
            Config::Matrix(_) => "matrix",
            Config::Bound(_) => "bound",
            Config::BurninTable(_) => "burnin_table",
            Config::NormalsTable(_) => "normals_table",
            Config::Plan(_) => "plan",
            Config::Estimate(_) => "estimate",
            Config::Figure(_) => "figure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Circle,
    Hypercube,
    Star,
}

/// One of the analytic example families plus an optional `n` grid and burn-in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToyConfig {
    pub family: Family,
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
}

fn need<T: Copy>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Schema(format!("missing key `{key}`")))
}

fn forbid<T>(v: &Option<T>, key: &str, family: &str) -> Result<(), CliError> {
    match v {
        Some(_) => Err(CliError::Schema(format!("key `{key}` does not apply to family `{family}`"))),
        None => Ok(()),
    }
}

impl ToyConfig {
    pub fn spec(&self) -> Result<ToySpec, CliError> {
        let spec = match self.family {
            Family::Circle => {
                forbid(&self.d, "d", "circle")?;
                forbid(&self.theta, "theta", "circle")?;
                ToySpec::Circle { t: need(self.t, "T")? }
            }
            Family::Hypercube => {
                forbid(&self.t, "T", "hypercube")?;
                forbid(&self.theta, "theta", "hypercube")?;
                ToySpec::Hypercube { d: need(self.d, "d")? }
            }
            Family::Star => {
                forbid(&self.d, "d", "star")?;
                ToySpec::Star { t: need(self.t, "T")?, theta: need(self.theta, "theta")? }
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A general finite chain given by its rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub rows: Vec<Vec<f64>>,
    pub f: Vec<f64>,
    /// Initial law; defaults to the point mass at `start`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<Vec<f64>>,
    #[serde(default)]
    pub start: usize,
    #[serde(default)]
    pub lazy: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundConfig {
    pub beta: f64,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(default = "two")]
    pub p: f64,
    pub n: Vec<u64>,
    /// Defaults to the suggested burn-in.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
}

fn two() -> f64 {
    2.0
}

fn table_p() -> f64 {
    2.1
}

fn table_c() -> f64 {
    1e30
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BurninTableConfig {
    #[serde(rename = "N", default = "BurninTableConfig::default_totals")]
    pub totals: Vec<u64>,
    #[serde(default = "BurninTableConfig::default_betas")]
    pub beta: Vec<f64>,
    #[serde(rename = "C", default = "table_c")]
    pub c: f64,
    #[serde(default = "table_p")]
    pub p: f64,
}

impl BurninTableConfig {
    fn default_totals() -> Vec<u64> {
        vec![100_000, 1_000_000]
    }

    fn default_betas() -> Vec<f64> {
        vec![0.9, 0.99, 0.999]
    }
}

impl Default for BurninTableConfig {
    fn default() -> Self {
        BurninTableConfig { totals: Self::default_totals(), beta: Self::default_betas(), c: table_c(), p: table_p() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalsTableConfig {
    #[serde(default = "NormalsTableConfig::default_thetas")]
    pub theta: Vec<f64>,
    #[serde(default)]
    pub x0: f64,
    #[serde(default = "NormalsTableConfig::default_delta")]
    pub delta: f64,
    #[serde(default = "table_p")]
    pub p: f64,
    #[serde(default = "NormalsTableConfig::default_eps")]
    pub eps: f64,
}

impl NormalsTableConfig {
    fn default_thetas() -> Vec<f64> {
        vec![0.91, 0.92, 0.93, 0.94, 0.95, 0.96]
    }

    fn default_delta() -> f64 {
        0.1
    }

    fn default_eps() -> f64 {
        0.01
    }
}

impl Default for NormalsTableConfig {
    fn default() -> Self {
        NormalsTableConfig {
            theta: Self::default_thetas(),
            x0: 0.0,
            delta: Self::default_delta(),
            p: table_p(),
            eps: Self::default_eps(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanConfig {
    pub problem: Problem,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Problem {
    Logconcave(LogConcaveProblem),
    ConvexBody(ConvexBodyProblem),
    ContractingNormals(ContractingNormalsProblem),
    Example1(IntervalStart),
    Example2(IntervalStart),
    IndependenceNormal(IndependenceProblem),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractingNormalsProblem {
    pub theta: f64,
    pub x0: f64,
    pub delta: f64,
    pub p: f64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalStart {
    pub delta: f64,
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IndependenceProblem {
    pub xi: f64,
    pub x0: f64,
    pub delta: f64,
    pub eps: Option<f64>,
}

/// An empirical MSE run, on a built-in kernel or on one of the toy chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<BuiltinKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub toy: Option<ToySpec>,
    #[serde(default)]
    pub lazy: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<Initial>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<NamedIntegrand>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub true_value: Option<f64>,
    pub n: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(default = "EstimateConfig::default_replications")]
    pub replications: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Root-MSE bracket to certify against.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lower: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub upper: Option<f64>,
}

impl EstimateConfig {
    fn default_replications() -> u64 {
        1000
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Figure {
    Fig2Circle,
    Fig3Hypercube,
    Fig4Star,
    Fig5Example2,
    FigEstCurves,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FigureConfig {
    pub which: Figure,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub totals: Option<Vec<u64>>,
    /// Burn-ins of the `fig_est_curves` family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n0: Option<Vec<u64>>,
}

/// Parses a configuration document: syntax errors carry line and column, schema errors
/// name the offending key.
pub fn parse_config(text: &str) -> Result<Config, CliError> {
    let value: Value = serde_json::from_str(text).map_err(|e| CliError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(mut map) = value else {
        return Err(CliError::Schema("configuration must be a JSON object".into()));
    };
    match map.remove("version") {
        None => return Err(CliError::Schema("missing key `version`".into())),
        Some(v) if v.as_u64() == Some(VERSION) => {}
        Some(v) => return Err(CliError::Schema(format!("key `version`: unsupported value {v}, expected {VERSION}"))),
    }
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Schema(e.to_string()))
}

/// Canonical serialization (sorted keys, `version` included).
pub fn to_json(cfg: &Config) -> String {
    let mut value = serde_json::to_value(cfg).expect("configurations serialize");
    if let Value::Object(map) = &mut value {
        map.insert("version".into(), Value::from(VERSION));
    }
    serde_json::to_string_pretty(&value).expect("values serialize")
}
