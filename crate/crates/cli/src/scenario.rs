//! Scenario files: two hypotheses, a sample size, error costs and an
//! optional test size, stored as JSON.
//!
//! ```json
//! {
//!   "p0": { "family": "gaussian", "mean": 0.0, "variance": 36.0 },
//!   "p1": { "family": "gaussian", "mean": 1.2, "variance": 36.0 },
//!   "sample_size": 100,
//!   "costs": { "c0": "e^2", "c1": 1.0 },
//!   "np_size": 0.05
//! }
//! ```
//!
//! Costs are numbers or the strings `e` and `e^k`.

use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hypotest::{CostModel, DensityModel, Error as CoreError, HypothesisPair};
use serde::{Deserialize, Serialize};

pub const DEFAULT_NP_SIZE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilySpec {
    Gaussian { mean: f64, variance: f64 },
    Poisson { rate: f64 },
    Bernoulli { p: f64 },
    Binomial { trials: u64, p: f64 },
    Exponential { rate: f64 },
    Tabulated { support: Vec<i64>, masses: Vec<f64> },
}

impl FamilySpec {
    pub fn build(&self) -> hypotest::Result<DensityModel> {
        match self {
            FamilySpec::Gaussian { mean, variance } => DensityModel::gaussian(*mean, *variance),
            FamilySpec::Poisson { rate } => DensityModel::poisson(*rate),
            FamilySpec::Bernoulli { p } => DensityModel::bernoulli(*p),
            FamilySpec::Binomial { trials, p } => DensityModel::binomial(*trials, *p),
            FamilySpec::Exponential { rate } => DensityModel::exponential(*rate),
            FamilySpec::Tabulated { support, masses } => DensityModel::tabulated(support.clone(), masses.clone()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            FamilySpec::Gaussian { mean, variance } => format!("gaussian(mean={mean}, variance={variance})"),
            FamilySpec::Poisson { rate } => format!("poisson(rate={rate})"),
            FamilySpec::Bernoulli { p } => format!("bernoulli(p={p})"),
            FamilySpec::Binomial { trials, p } => format!("binomial(trials={trials}, p={p})"),
            FamilySpec::Exponential { rate } => format!("exponential(rate={rate})"),
            FamilySpec::Tabulated { support, masses } => format!("tabulated(support={support:?}, masses={masses:?})"),
        }
    }
}

/// A cost as written: a number or an `e^k` expression.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CostValue {
    Number(f64),
    Expr(String),
}

impl CostValue {
    pub fn resolve(&self, field: &str) -> Result<f64> {
        match self {
            CostValue::Number(x) => Ok(*x),
            CostValue::Expr(s) => parse_cost(s).with_context(|| format!("field `{field}`")),
        }
    }
}

impl std::fmt::Display for CostValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CostValue::Number(x) => write!(f, "{x}"),
            CostValue::Expr(s) => f.write_str(s),
        }
    }
}

/// Parses `2.5`, `e`, `e^3` or `e^-0.5`.
pub fn parse_cost(text: &str) -> Result<f64> {
    let s = text.trim();
    if s == "e" {
        return Ok(std::f64::consts::E);
    }
    if let Some(k) = s.strip_prefix("e^") {
        let k: f64 = k.trim().parse().map_err(|_| anyhow!("bad exponent in `{s}`"))?;
        return Ok(k.exp());
    }
    s.parse()
        .map_err(|_| anyhow!("`{s}` is not a number, `e`, or `e^k`"))
}

impl std::str::FromStr for CostValue {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_cost(s)?;
        Ok(match s.trim().parse::<f64>() {
            Ok(x) => CostValue::Number(x),
            Err(_) => CostValue::Expr(s.trim().to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Costs {
    pub c0: CostValue,
    pub c1: CostValue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub p0: FamilySpec,
    pub p1: FamilySpec,
    pub sample_size: usize,
    pub costs: Costs,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub np_size: Option<f64>,
}

/// A scenario checked against the model constraints.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub scenario: Scenario,
    pub pair: HypothesisPair,
    pub cost: CostModel,
    pub np_size: f64,
}

impl Scenario {
    /// N(0, 36) against N(1.2, 36) with 100 observations, unit costs and
    /// size 0.05.
    pub fn builtin() -> Self {
        Self {
            p0: FamilySpec::Gaussian { mean: 0.0, variance: 36.0 },
            p1: FamilySpec::Gaussian { mean: 1.2, variance: 36.0 },
            sample_size: 100,
            costs: Costs {
                c0: CostValue::Number(1.0),
                c1: CostValue::Number(1.0),
            },
            np_size: Some(DEFAULT_NP_SIZE),
        }
    }

    /// Parses JSON text; syntax and schema errors carry `path:line:column`.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| anyhow!("{origin}:{}:{}: {}", e.line(), e.column(), strip_position(&e)))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read scenario {}", path.display()))?;
        Self::parse(&text, &path.display().to_string())
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    pub fn resolve(self) -> Result<Resolved> {
        let model = |name: &str, spec: &FamilySpec| {
            spec.build().map_err(|e| match e {
                CoreError::InvalidParameter { field, reason } => anyhow!("invalid scenario field `{name}.{field}`: {reason}"),
                other => anyhow!("invalid scenario field `{name}`: {other}"),
            })
        };
        let p0 = model("p0", &self.p0)?;
        let p1 = model("p1", &self.p1)?;
        let pair = HypothesisPair::new(p0, p1, self.sample_size).map_err(|e| match e {
            CoreError::InvalidParameter { field, reason } => anyhow!("invalid scenario field `{field}`: {reason}"),
            other => anyhow!("invalid scenario field `p1`: {other}"),
        })?;
        let c0 = self.costs.c0.resolve("costs.c0")?;
        let c1 = self.costs.c1.resolve("costs.c1")?;
        let cost = CostModel::new(c0, c1).map_err(|e| match e {
            CoreError::InvalidParameter { field, reason } => anyhow!("invalid scenario field `costs.{field}`: {reason}"),
            other => anyhow!(other),
        })?;
        let np_size = self.np_size.unwrap_or(DEFAULT_NP_SIZE);
        if !(np_size > 0.0 && np_size < 1.0) {
            bail!("invalid scenario field `np_size`: must lie in (0, 1), got {np_size}");
        }
        Ok(Resolved {
            scenario: self,
            pair,
            cost,
            np_size,
        })
    }
}

// serde_json appends " at line L column C"; the position already leads.
fn strip_position(e: &serde_json::Error) -> String {
    let msg = e.to_string();
    match msg.rfind(" at line ") {
        Some(i) => msg[..i].to_string(),
        None => msg,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_round_trips() {
        let s = Scenario::builtin();
        assert_eq!(Scenario::parse(&s.to_json(), "x").unwrap(), s);
    }

    #[test]
    fn cost_expressions() {
        assert_eq!(parse_cost("e").unwrap(), std::f64::consts::E);
        assert_eq!(parse_cost("e^3").unwrap(), 3f64.exp());
        assert_eq!(parse_cost(" 2.5 ").unwrap(), 2.5);
        assert!(parse_cost("pi").is_err());
        assert_eq!("e^2".parse::<CostValue>().unwrap(), CostValue::Expr("e^2".into()));
        assert_eq!("4".parse::<CostValue>().unwrap(), CostValue::Number(4.0));
    }

    #[test]
    fn parse_errors_are_line_anchored() {
        let text = "{\n  \"p0\": {\"family\": \"gaussian\", \"mean\": 0, \"variance\": 1},\n  \"p1\": {\"family\": \"cauchy\"}\n}";
        let err = Scenario::parse(text, "s.json").unwrap_err().to_string();
        assert!(err.starts_with("s.json:3:"), "{err}");
        assert!(err.contains("cauchy"), "{err}");
    }

    #[test]
    fn validation_names_the_field() {
        let mut s = Scenario::builtin();
        s.p1 = FamilySpec::Gaussian { mean: 1.0, variance: -2.0 };
        let err = s.resolve().unwrap_err().to_string();
        assert!(err.contains("`p1.variance`"), "{err}");

        let mut s = Scenario::builtin();
        s.costs.c0 = CostValue::Number(0.0);
        let err = s.resolve().unwrap_err().to_string();
        assert!(err.contains("`costs.c0`"), "{err}");

        let mut s = Scenario::builtin();
        s.p1 = FamilySpec::Poisson { rate: 1.0 };
        assert!(s.resolve().unwrap_err().to_string().contains("base measures"));
    }
}
